#include "fdisc/solvers.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

#include "fdisc/errors.hpp"
#include "fdisc/parallel.hpp"

namespace fdisc {
namespace {

void require_exhaustive(const IncidenceMatrix& a) {
  if (a.cols() > 30) throw SizeLimitExceeded("exhaustive search needs n <= 30");
}

int lower_bound_from_parity(const IncidenceMatrix& a) { return odd_rows(a).empty() ? 0 : 1; }

// Gray-code walk over colorings with x_0 = +1. visit() returns false to stop.
template <typename Visit>
void half_gray_walk(const IncidenceMatrix& a, std::vector<int>& d, std::vector<std::int8_t>& x, Visit&& visit,
                    const std::function<void(int i, int before)>& on_row) {
  const int n = a.cols();
  x.assign(n, -1);
  x[0] = 1;
  const Eigen::VectorXi start = signed_discrepancy(a, Coloring(x));
  d.assign(start.data(), start.data() + start.size());
  const std::uint64_t total = std::uint64_t{1} << (n - 1);
  for (std::uint64_t k = 0;; ++k) {
    if (!visit()) return;
    if (k + 1 == total) return;
    const int j = 1 + std::countr_zero(k + 1);
    x[j] = static_cast<std::int8_t>(-x[j]);
    const int step = 2 * x[j];
    a.for_each_row_in_column(j, [&](int i) {
      const int before = d[i];
      d[i] += step;
      on_row(i, before);
    });
  }
}

}  // namespace

ExhaustiveResult exhaustive_min_disc(const IncidenceMatrix& a) {
  require_exhaustive(a);
  const int m = a.rows();
  const int floor = lower_bound_from_parity(a);
  std::vector<int> d;
  std::vector<std::int8_t> x;
  int best = -1;
  int threshold = 0;
  int above = 0;
  ExhaustiveResult result;
  auto recount = [&] {
    above = 0;
    for (int i = 0; i < m; ++i) above += std::abs(d[i]) > threshold;
  };
  half_gray_walk(
      a, d, x,
      [&] {
        if (best < 0) {
          best = 0;
          for (int i = 0; i < m; ++i) best = std::max(best, std::abs(d[i]));
          result = {best, Coloring(x)};
          threshold = best - 1;
          recount();
        } else if (above == 0) {
          best = 0;
          for (int i = 0; i < m; ++i) best = std::max(best, std::abs(d[i]));
          result = {best, Coloring(x)};
          threshold = best - 1;
          recount();
        }
        return best > floor;
      },
      [&](int i, int before) { above += (std::abs(d[i]) > threshold) - (std::abs(before) > threshold); });
  return result;
}

std::uint64_t count_colorings_within(const IncidenceMatrix& a, int target) {
  require_exhaustive(a);
  const int m = a.rows();
  std::vector<int> d;
  std::vector<std::int8_t> x;
  int above = -1;
  std::uint64_t count = 0;
  half_gray_walk(
      a, d, x,
      [&] {
        if (above < 0) {
          above = 0;
          for (int i = 0; i < m; ++i) above += std::abs(d[i]) > target;
        }
        count += above == 0;
        return true;
      },
      [&](int i, int before) {
        if (above >= 0) above += (std::abs(d[i]) > target) - (std::abs(before) > target);
      });
  return 2 * count;  // x and -x have the same discrepancy
}

SolverResult random_search(const IncidenceMatrix& a, int target, std::int64_t budget, std::uint64_t seed) {
  const int m = a.rows();
  const int n = a.cols();
  RngStream rng(seed, 0);
  Coloring start = Coloring::uniform(n, rng);
  std::vector<std::int8_t> x(start.signs().begin(), start.signs().end());
  const Eigen::VectorXi d0 = signed_discrepancy(a, start);
  std::vector<int> d(d0.data(), d0.data() + m);
  int above = 0;
  for (int i = 0; i < m; ++i) above += std::abs(d[i]) > target;

  SolverResult result;
  std::int64_t flips = 0;
  for (std::int64_t trial = 0; trial < budget; ++trial) {
    if (trial > 0) {
      const int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
      x[j] = static_cast<std::int8_t>(-x[j]);
      const int step = 2 * x[j];
      a.for_each_row_in_column(j, [&](int i) {
        const bool before = std::abs(d[i]) > target;
        d[i] += step;
        above += static_cast<int>(std::abs(d[i]) > target) - static_cast<int>(before);
      });
      ++flips;
    }
    if (above == 0) {
      result.found = true;
      break;
    }
  }
  result.coloring = Coloring(x);
  result.disc = disc_of_coloring(a, result.coloring);
  result.flips_used = flips;
  if (result.found && result.disc > target) throw std::logic_error("random search returned an invalid witness");
  return result;
}

namespace {

struct PatternClass {
  std::vector<int> rows;
  std::vector<std::uint64_t> mask;
};

struct Restart {
  bool found = false;
  int disc = 0;
  std::vector<std::int8_t> x;
  std::int64_t flips = 0;
};

Restart descend(const IncidenceMatrix& a, const std::vector<PatternClass>& classes,
                const std::vector<int>& class_of, int target, std::int64_t max_flips, RngStream rng) {
  const int m = a.rows();
  const int n = a.cols();
  const int k = static_cast<int>(classes.size());
  Restart out;
  const Coloring start = Coloring::uniform(n, rng);
  out.x.assign(start.signs().begin(), start.signs().end());
  const Eigen::VectorXi d0 = signed_discrepancy(a, start);
  std::vector<int> d(d0.data(), d0.data() + m);
  int above = 0;
  for (int i = 0; i < m; ++i) above += std::abs(d[i]) > target;

  // members[2c] holds +1 columns of class c, members[2c+1] the -1 columns.
  std::vector<std::set<int>> members(2 * static_cast<std::size_t>(k));
  for (int j = 0; j < n; ++j) members[2 * class_of[j] + (out.x[j] < 0)].insert(j);
  std::vector<long long> sums(k, 0);
  for (int c = 0; c < k; ++c) {
    for (const int i : classes[c].rows) sums[c] += d[i];
  }

  while (above > 0 && out.flips < max_flips) {
    // Delta potential of flipping sign x in class c: 4 |c| - 4 x S_c.
    long long best_gain = 0;
    int best_col = -1;
    int best_group = -1;
    for (int c = 0; c < k; ++c) {
      const long long size = static_cast<long long>(classes[c].rows.size());
      for (int side = 0; side < 2; ++side) {
        const auto& group = members[2 * c + side];
        if (group.empty()) continue;
        const long long sign = side == 0 ? 1 : -1;
        const long long gain = 4 * size - 4 * sign * sums[c];
        const int col = *group.begin();
        if (gain < best_gain || (gain == best_gain && best_col >= 0 && gain < 0 && col < best_col)) {
          best_gain = gain;
          best_col = col;
          best_group = 2 * c + side;
        }
      }
    }
    if (best_col < 0) break;

    const int j = best_col;
    const int c_star = best_group / 2;
    members[best_group].erase(j);
    out.x[j] = static_cast<std::int8_t>(-out.x[j]);
    members[2 * c_star + (out.x[j] < 0)].insert(j);
    const int step = 2 * out.x[j];
    for (const int i : classes[c_star].rows) {
      const bool before = std::abs(d[i]) > target;
      d[i] += step;
      above += static_cast<int>(std::abs(d[i]) > target) - static_cast<int>(before);
    }
    const auto& star = classes[c_star].mask;
    for (int c = 0; c < k; ++c) {
      int shared = 0;
      for (std::size_t w = 0; w < star.size(); ++w) shared += std::popcount(star[w] & classes[c].mask[w]);
      sums[c] += static_cast<long long>(step) * shared;
    }
    ++out.flips;
  }
  out.found = above == 0;
  out.disc = 0;
  for (int i = 0; i < m; ++i) out.disc = std::max(out.disc, std::abs(d[i]));
  return out;
}

}  // namespace

SolverResult local_search(const IncidenceMatrix& a, int target, int restarts, std::int64_t max_flips,
                          std::uint64_t seed) {
  if (restarts < 1) throw std::invalid_argument("local search needs at least one restart");
  const int n = a.cols();
  std::vector<PatternClass> classes;
  std::vector<int> class_of(n);
  std::map<std::vector<std::uint64_t>, int> index;
  for (int j = 0; j < n; ++j) {
    const auto words = a.column_words(j);
    std::vector<std::uint64_t> key(words.begin(), words.end());
    auto [it, fresh] = index.try_emplace(key, static_cast<int>(classes.size()));
    if (fresh) {
      PatternClass pc;
      pc.mask = key;
      a.for_each_row_in_column(j, [&](int i) { pc.rows.push_back(i); });
      classes.push_back(std::move(pc));
    }
    class_of[j] = it->second;
  }

  const int wave = static_cast<int>(std::max(1u, thread_count()));
  std::vector<Restart> done;
  int winner = -1;
  for (int first = 0; first < restarts && winner < 0; first += wave) {
    const int count = std::min(wave, restarts - first);
    std::vector<Restart> batch(count);
    parallel_for(count, [&](std::size_t r) {
      batch[r] = descend(a, classes, class_of, target, max_flips,
                         RngStream(seed, static_cast<std::uint64_t>(first) + r));
    });
    for (auto& r : batch) {
      done.push_back(std::move(r));
      if (winner < 0 && done.back().found) winner = static_cast<int>(done.size()) - 1;
    }
  }

  int pick = winner;
  if (pick < 0) {
    pick = 0;
    for (int r = 1; r < static_cast<int>(done.size()); ++r) {
      if (done[r].disc < done[pick].disc) pick = r;
    }
  }
  const int last = winner >= 0 ? winner : static_cast<int>(done.size()) - 1;
  SolverResult result;
  for (int r = 0; r <= last; ++r) result.flips_used += done[r].flips;
  result.found = done[pick].found;
  result.coloring = Coloring(done[pick].x);
  result.disc = disc_of_coloring(a, result.coloring);
  if (result.found && result.disc > target) throw std::logic_error("local search returned an invalid witness");
  return result;
}

double log_counting_bound(int m, int n, int delta, double kappa) {
  if (m < 1 || n < 1 || delta < 0 || !(kappa > 0.0)) throw std::invalid_argument("invalid counting bound arguments");
  return n * std::log(2.0) + m * std::log(kappa * delta / std::sqrt(static_cast<double>(n)));
}

double counting_bound(int m, int n, int delta, double kappa) {
  return std::exp(log_counting_bound(m, n, delta, kappa));
}

}  // namespace fdisc
