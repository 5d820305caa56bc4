#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "fdisc/setsystem.hpp"

namespace fdisc {

/// Instance files are JSON objects
///
///   {"m": 2, "n": 5, "p": 0.5, "seed": 7, "generator": "bernoulli",
///    "rows": ["a8", "30"]}
///
/// Each row is ceil(n/4) lowercase hex digits. Column 0 is the most
/// significant bit of the first digit, column 1 the next bit, and so on;
/// trailing pad bits are zero. `p` is null for instances without a
/// generation probability. Loading then storing is bit-exact.
std::string encode_row_hex(const IncidenceMatrix& a, int row);
std::string instance_to_json(const IncidenceMatrix& a);
IncidenceMatrix instance_from_json(std::string_view text);

void save_instance(const IncidenceMatrix& a, const std::filesystem::path& path);
IncidenceMatrix load_instance(const std::filesystem::path& path);

}  // namespace fdisc
