#include "fdisc/setsystem.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "fdisc/errors.hpp"

namespace fdisc {

IncidenceMatrix::IncidenceMatrix(int m, int n, std::vector<std::uint64_t> words,
                                 std::optional<GenerationRecord> meta)
    : m_(m),
      n_(n),
      row_stride_(words_per_row(n)),
      col_stride_(words_per_row(m)),
      row_bits_(std::move(words)),
      meta_(std::move(meta)) {
  if (m <= 0 || n <= 0) throw std::invalid_argument("incidence matrix needs m, n >= 1");
  if (row_bits_.size() != static_cast<std::size_t>(m) * row_stride_) {
    throw DimensionMismatch("packed row data has the wrong number of words");
  }
  if (n % 64 != 0) {
    const std::uint64_t pad_mask = ~((std::uint64_t{1} << (n % 64)) - 1);
    for (int i = 0; i < m; ++i) {
      if (row_bits_[static_cast<std::size_t>(i) * row_stride_ + row_stride_ - 1] & pad_mask) {
        throw std::invalid_argument("padding bits beyond column n-1 must be zero");
      }
    }
  }

  col_bits_.assign(static_cast<std::size_t>(n) * col_stride_, 0);
  column_sums_.assign(n, 0);
  for (int i = 0; i < m; ++i) {
    const auto row = row_words(i);
    for (int w = 0; w < row_stride_; ++w) {
      std::uint64_t bits = row[w];
      while (bits != 0) {
        const int j = w * 64 + std::countr_zero(bits);
        col_bits_[static_cast<std::size_t>(j) * col_stride_ + i / 64] |= std::uint64_t{1} << (i % 64);
        ++column_sums_[j];
        bits &= bits - 1;
      }
    }
  }

  // Group identical columns.
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  auto col_less = [&](int a, int b) {
    const auto wa = column_words(a);
    const auto wb = column_words(b);
    if (std::lexicographical_compare(wa.begin(), wa.end(), wb.begin(), wb.end())) return true;
    if (std::lexicographical_compare(wb.begin(), wb.end(), wa.begin(), wa.end())) return false;
    return a < b;
  };
  std::sort(order.begin(), order.end(), col_less);
  for (std::size_t k = 0; k < order.size();) {
    std::size_t end = k + 1;
    const auto wk = column_words(order[k]);
    while (end < order.size() && std::ranges::equal(column_words(order[end]), wk)) ++end;
    classes_.push_back({order[k], static_cast<int>(end - k)});
    k = end;
  }
  std::ranges::sort(classes_, {}, &ColumnClass::representative);
}

IncidenceMatrix IncidenceMatrix::zeros(int m, int n) {
  return IncidenceMatrix(m, n, std::vector<std::uint64_t>(static_cast<std::size_t>(m) * words_per_row(n), 0));
}

IncidenceMatrix IncidenceMatrix::from_dense(const Eigen::MatrixXi& dense,
                                            std::optional<GenerationRecord> meta) {
  const int m = static_cast<int>(dense.rows());
  const int n = static_cast<int>(dense.cols());
  if (m <= 0 || n <= 0) throw std::invalid_argument("incidence matrix needs m, n >= 1");
  const int stride = words_per_row(n);
  std::vector<std::uint64_t> words(static_cast<std::size_t>(m) * stride, 0);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      const int v = dense(i, j);
      if (v != 0 && v != 1) throw std::invalid_argument("incidence entries must be 0 or 1");
      if (v) words[static_cast<std::size_t>(i) * stride + j / 64] |= std::uint64_t{1} << (j % 64);
    }
  }
  return IncidenceMatrix(m, n, std::move(words), std::move(meta));
}

IncidenceMatrix IncidenceMatrix::from_rows(const std::vector<std::vector<int>>& rows) {
  if (rows.empty() || rows.front().empty()) throw std::invalid_argument("incidence matrix needs m, n >= 1");
  Eigen::MatrixXi dense(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.front().size()) throw DimensionMismatch("ragged incidence rows");
    for (std::size_t j = 0; j < rows[i].size(); ++j) dense(i, j) = rows[i][j];
  }
  return from_dense(dense);
}

int IncidenceMatrix::row_sum(int i) const {
  int total = 0;
  for (const auto w : row_words(i)) total += std::popcount(w);
  return total;
}

std::size_t IncidenceMatrix::popcount() const {
  std::size_t total = 0;
  for (const auto w : row_bits_) total += std::popcount(w);
  return total;
}

double IncidenceMatrix::expected_frequency() const {
  if (meta_ && meta_->p) return *meta_->p * m_;
  return static_cast<double>(popcount()) / n_;
}

Eigen::MatrixXi IncidenceMatrix::to_dense() const {
  Eigen::MatrixXi dense(m_, n_);
  for (int i = 0; i < m_; ++i)
    for (int j = 0; j < n_; ++j) dense(i, j) = get(i, j) ? 1 : 0;
  return dense;
}

Coloring::Coloring(std::vector<std::int8_t> signs) : signs_(std::move(signs)) {
  for (const auto s : signs_) {
    if (s != 1 && s != -1) throw std::invalid_argument("coloring entries must be -1 or +1");
  }
}

Coloring Coloring::parse(std::string_view text) {
  std::vector<std::int8_t> signs;
  signs.reserve(text.size());
  for (const char c : text) {
    if (c == '+') signs.push_back(1);
    else if (c == '-') signs.push_back(-1);
    else throw std::invalid_argument("coloring strings use only '+' and '-'");
  }
  return Coloring(std::move(signs));
}

Coloring Coloring::uniform(int n, RngStream& rng) {
  std::vector<std::int8_t> signs(n);
  for (auto& s : signs) s = rng.coin() ? 1 : -1;
  return Coloring(std::move(signs));
}

Coloring Coloring::negated() const {
  std::vector<std::int8_t> signs(signs_);
  for (auto& s : signs) s = static_cast<std::int8_t>(-s);
  return Coloring(std::move(signs));
}

std::string Coloring::to_string() const {
  std::string out;
  out.reserve(signs_.size());
  for (const auto s : signs_) out.push_back(s > 0 ? '+' : '-');
  return out;
}

DistributionMatrix::DistributionMatrix(Eigen::MatrixXd probs, double delta_cap, double column_budget)
    : probs_(std::move(probs)), delta_cap_(delta_cap), column_budget_(column_budget) {
  if (probs_.rows() == 0 || probs_.cols() == 0) throw std::invalid_argument("empty distribution matrix");
  if (!(delta_cap_ > 0.0 && delta_cap_ <= 1.0)) throw std::invalid_argument("delta_cap must lie in (0, 1]");
  if ((probs_.array() < 0.0).any() || (probs_.array() > delta_cap_).any()) {
    throw std::invalid_argument("distribution entries must lie in [0, delta_cap]");
  }
  if ((probs_.colwise().sum().array() > column_budget_).any()) {
    throw std::invalid_argument("a column of the distribution matrix exceeds the budget t");
  }
}

IncidenceMatrix sample_bernoulli(int m, int n, double p, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p must lie in [0, 1]");
  if (m <= 0 || n <= 0) throw std::invalid_argument("m and n must be positive");
  const int stride = IncidenceMatrix::words_per_row(n);
  std::vector<std::uint64_t> words(static_cast<std::size_t>(m) * stride, 0);
  for (int i = 0; i < m; ++i) {
    RngStream rng(seed, static_cast<std::uint64_t>(i));
    for (int j = 0; j < n; ++j) {
      if (rng.uniform() < p) words[static_cast<std::size_t>(i) * stride + j / 64] |= std::uint64_t{1} << (j % 64);
    }
  }
  return IncidenceMatrix(m, n, std::move(words), GenerationRecord{p, seed, "bernoulli"});
}

IncidenceMatrix sample_semirandom(const DistributionMatrix& dist, std::uint64_t seed) {
  const auto& probs = dist.probs();
  const int m = static_cast<int>(probs.rows());
  const int n = static_cast<int>(probs.cols());
  const int stride = IncidenceMatrix::words_per_row(n);
  std::vector<std::uint64_t> words(static_cast<std::size_t>(m) * stride, 0);
  for (int i = 0; i < m; ++i) {
    RngStream rng(seed, static_cast<std::uint64_t>(i));
    for (int j = 0; j < n; ++j) {
      if (rng.uniform() < probs(i, j)) words[static_cast<std::size_t>(i) * stride + j / 64] |= std::uint64_t{1} << (j % 64);
    }
  }
  return IncidenceMatrix(m, n, std::move(words), GenerationRecord{std::nullopt, seed, "semirandom"});
}

Eigen::VectorXi signed_discrepancy(const IncidenceMatrix& a, const Coloring& x) {
  if (x.size() != a.cols()) throw DimensionMismatch("coloring length differs from n");
  const int stride = IncidenceMatrix::words_per_row(a.cols());
  std::vector<std::uint64_t> plus(stride, 0);
  for (int j = 0; j < a.cols(); ++j) {
    if (x[j] > 0) plus[j / 64] |= std::uint64_t{1} << (j % 64);
  }
  Eigen::VectorXi d(a.rows());
  for (int i = 0; i < a.rows(); ++i) {
    const auto row = a.row_words(i);
    int pos = 0;
    int total = 0;
    for (int w = 0; w < stride; ++w) {
      pos += std::popcount(row[w] & plus[w]);
      total += std::popcount(row[w]);
    }
    d(i) = 2 * pos - total;
  }
  return d;
}

int disc_of_coloring(const IncidenceMatrix& a, const Coloring& x) {
  return signed_discrepancy(a, x).cwiseAbs().maxCoeff();
}

Eigen::MatrixXi covariance_empirical(const IncidenceMatrix& a) {
  const int m = a.rows();
  Eigen::MatrixXi cov(m, m);
  for (int i = 0; i < m; ++i) {
    for (int k = i; k < m; ++k) {
      const auto ri = a.row_words(i);
      const auto rk = a.row_words(k);
      int common = 0;
      for (std::size_t w = 0; w < ri.size(); ++w) common += std::popcount(ri[w] & rk[w]);
      cov(i, k) = common;
      cov(k, i) = common;
    }
  }
  return cov;
}

int max_column_frequency(const IncidenceMatrix& a) {
  int best = 0;
  for (int j = 0; j < a.cols(); ++j) best = std::max(best, a.column_sum(j));
  return best;
}

std::vector<int> odd_rows(const IncidenceMatrix& a) {
  std::vector<int> out;
  for (int i = 0; i < a.rows(); ++i) {
    if (a.row_sum(i) % 2 != 0) out.push_back(i);
  }
  return out;
}

}  // namespace fdisc
