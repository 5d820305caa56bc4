#include "fdisc/instance_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "fdisc/errors.hpp"

namespace fdisc {
namespace {

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  throw std::invalid_argument(std::string("invalid hex digit '") + c + "' in instance row");
}

}  // namespace

std::string encode_row_hex(const IncidenceMatrix& a, int row) {
  static constexpr char kDigits[] = "0123456789abcdef";
  const int digits = (a.cols() + 3) / 4;
  std::string out(digits, '0');
  for (int d = 0; d < digits; ++d) {
    int nibble = 0;
    for (int b = 0; b < 4; ++b) {
      const int j = 4 * d + b;
      if (j < a.cols() && a.get(row, j)) nibble |= 8 >> b;
    }
    out[d] = kDigits[nibble];
  }
  return out;
}

std::string instance_to_json(const IncidenceMatrix& a) {
  nlohmann::ordered_json doc;
  doc["m"] = a.rows();
  doc["n"] = a.cols();
  const auto& meta = a.meta();
  if (meta && meta->p) doc["p"] = *meta->p;
  else doc["p"] = nullptr;
  doc["seed"] = meta ? meta->seed : 0;
  doc["generator"] = meta ? meta->generator : "manual";
  auto rows = nlohmann::ordered_json::array();
  for (int i = 0; i < a.rows(); ++i) rows.push_back(encode_row_hex(a, i));
  doc["rows"] = std::move(rows);
  return doc.dump(2) + "\n";
}

IncidenceMatrix instance_from_json(std::string_view text) {
  const auto doc = nlohmann::json::parse(text);
  const int m = doc.at("m").get<int>();
  const int n = doc.at("n").get<int>();
  if (m <= 0 || n <= 0) throw std::invalid_argument("instance needs m, n >= 1");
  const auto& rows = doc.at("rows");
  if (!rows.is_array() || static_cast<int>(rows.size()) != m) {
    throw DimensionMismatch("instance 'rows' must hold exactly m strings");
  }
  const int digits = (n + 3) / 4;
  const int stride = IncidenceMatrix::words_per_row(n);
  std::vector<std::uint64_t> words(static_cast<std::size_t>(m) * stride, 0);
  for (int i = 0; i < m; ++i) {
    const auto hex = rows[i].get<std::string>();
    if (static_cast<int>(hex.size()) != digits) {
      throw DimensionMismatch("instance row " + std::to_string(i) + " must have ceil(n/4) hex digits");
    }
    for (int d = 0; d < digits; ++d) {
      const int nibble = hex_value(hex[d]);
      for (int b = 0; b < 4; ++b) {
        if (!(nibble & (8 >> b))) continue;
        const int j = 4 * d + b;
        if (j >= n) throw std::invalid_argument("instance row has nonzero padding bits");
        words[static_cast<std::size_t>(i) * stride + j / 64] |= std::uint64_t{1} << (j % 64);
      }
    }
  }
  GenerationRecord meta;
  if (doc.contains("p") && !doc["p"].is_null()) meta.p = doc["p"].get<double>();
  if (doc.contains("seed")) meta.seed = doc["seed"].get<std::uint64_t>();
  if (doc.contains("generator")) meta.generator = doc["generator"].get<std::string>();
  return IncidenceMatrix(m, n, std::move(words), std::move(meta));
}

void save_instance(const IncidenceMatrix& a, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << instance_to_json(a);
}

IncidenceMatrix load_instance(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return instance_from_json(buffer.str());
}

}  // namespace fdisc
