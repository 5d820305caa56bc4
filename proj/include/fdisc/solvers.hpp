#pragma once

#include <cstdint>
#include <optional>

#include "fdisc/setsystem.hpp"

namespace fdisc {

/// Outcome of a coloring search. When nothing within the target was
/// found, `coloring` and `disc` describe where the search ended (for local
/// search, the restart that ended lowest).
struct SolverResult {
  bool found = false;
  int disc = 0;
  Coloring coloring = Coloring::all_plus(0);
  std::int64_t flips_used = 0;
};

struct ExhaustiveResult {
  int disc = 0;
  Coloring witness = Coloring::all_plus(0);
};

/// Minimum of ||A x||_inf over all colorings with x_0 = +1 (n <= 30).
ExhaustiveResult exhaustive_min_disc(const IncidenceMatrix& a);

/// Number of colorings (out of all 2^n) with ||A x||_inf <= target (n <= 30).
std::uint64_t count_colorings_within(const IncidenceMatrix& a, int target);

/// Random walk over colorings: the start is uniform and each later trial
/// flips one uniformly chosen element, so every trial is marginally a
/// uniform coloring. Stops at the first trial with disc <= target.
/// Trials counts colorings examined; flips_used counts sign flips.
SolverResult random_search(const IncidenceMatrix& a, int target, std::int64_t budget, std::uint64_t seed);

/// Steepest descent on sum_i (A_i x)^2 from uniform random starts. Each
/// restart r draws from RngStream(seed, r) and runs until disc <= target,
/// no flip lowers the potential, or max_flips flips. Among improving flips
/// the largest decrease wins, ties going to the lowest column index. The
/// lowest-numbered successful restart is returned.
SolverResult local_search(const IncidenceMatrix& a, int target, int restarts, std::int64_t max_flips,
                          std::uint64_t seed);

/// 2^n (kappa delta / sqrt n)^m, and its natural logarithm.
double counting_bound(int m, int n, int delta, double kappa);
double log_counting_bound(int m, int n, int delta, double kappa);

}  // namespace fdisc
