#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "fdisc/rng.hpp"

namespace fdisc {

/// How an instance was produced. `p` is absent for hand-built matrices.
struct GenerationRecord {
  std::optional<double> p;
  std::uint64_t seed = 0;
  std::string generator = "manual";
};

/// A distinct column of an incidence matrix together with its multiplicity.
struct ColumnClass {
  int representative;  // lowest column index carrying this pattern
  int count;
};

/// 0/1 incidence matrix of a set system with m sets (rows) and n elements
/// (columns). Bits are stored twice, packed row-major and column-major, in
/// 64-bit words; within a word, column j of a row sits at bit j % 64.
/// Immutable after construction.
class IncidenceMatrix {
 public:
  /// Builds from packed rows: `words` holds m blocks of words_per_row(n) words.
  /// Padding bits past column n-1 must be zero.
  IncidenceMatrix(int m, int n, std::vector<std::uint64_t> words,
                  std::optional<GenerationRecord> meta = std::nullopt);

  static IncidenceMatrix zeros(int m, int n);
  static IncidenceMatrix from_dense(const Eigen::MatrixXi& dense,
                                    std::optional<GenerationRecord> meta = std::nullopt);
  static IncidenceMatrix from_rows(const std::vector<std::vector<int>>& rows);

  static int words_per_row(int n) { return (n + 63) / 64; }

  int rows() const { return m_; }
  int cols() const { return n_; }

  bool get(int i, int j) const {
    return (row_bits_[static_cast<std::size_t>(i) * row_stride_ + j / 64] >> (j % 64)) & 1u;
  }
  std::span<const std::uint64_t> row_words(int i) const {
    return {row_bits_.data() + static_cast<std::size_t>(i) * row_stride_,
            static_cast<std::size_t>(row_stride_)};
  }
  std::span<const std::uint64_t> column_words(int j) const {
    return {col_bits_.data() + static_cast<std::size_t>(j) * col_stride_,
            static_cast<std::size_t>(col_stride_)};
  }

  /// Calls f(i) for every row i with A[i][j] = 1, in increasing i.
  template <typename F>
  void for_each_row_in_column(int j, F&& f) const {
    const auto words = column_words(j);
    for (std::size_t w = 0; w < words.size(); ++w) {
      std::uint64_t bits = words[w];
      while (bits != 0) {
        f(static_cast<int>(w * 64 + std::countr_zero(bits)));
        bits &= bits - 1;
      }
    }
  }

  int row_sum(int i) const;
  int column_sum(int j) const { return column_sums_[static_cast<std::size_t>(j)]; }
  std::size_t popcount() const;

  /// Distinct columns with multiplicities, ordered by representative index.
  const std::vector<ColumnClass>& column_classes() const { return classes_; }

  /// t = p m when the generation probability is known, otherwise the
  /// empirical mean column sum. Kept as a real number, never rounded.
  double expected_frequency() const;

  const std::optional<GenerationRecord>& meta() const { return meta_; }

  Eigen::MatrixXi to_dense() const;

  bool operator==(const IncidenceMatrix& other) const {
    return m_ == other.m_ && n_ == other.n_ && row_bits_ == other.row_bits_;
  }

 private:
  int m_;
  int n_;
  int row_stride_;
  int col_stride_;
  std::vector<std::uint64_t> row_bits_;
  std::vector<std::uint64_t> col_bits_;
  std::vector<int> column_sums_;
  std::vector<ColumnClass> classes_;
  std::optional<GenerationRecord> meta_;
};

/// A +-1 vector of length n.
class Coloring {
 public:
  explicit Coloring(std::vector<std::int8_t> signs);
  /// Parses a string of '+' and '-' characters.
  static Coloring parse(std::string_view text);
  static Coloring all_plus(int n) { return Coloring(std::vector<std::int8_t>(n, 1)); }
  static Coloring uniform(int n, RngStream& rng);

  int size() const { return static_cast<int>(signs_.size()); }
  int operator[](int j) const { return signs_[static_cast<std::size_t>(j)]; }
  std::span<const std::int8_t> signs() const { return signs_; }
  Coloring negated() const;
  std::string to_string() const;

  bool operator==(const Coloring&) const = default;

 private:
  std::vector<std::int8_t> signs_;
};

/// Entrywise success probabilities of a semi-random instance.
class DistributionMatrix {
 public:
  DistributionMatrix(Eigen::MatrixXd probs, double delta_cap, double column_budget);

  const Eigen::MatrixXd& probs() const { return probs_; }
  double delta_cap() const { return delta_cap_; }
  double column_budget() const { return column_budget_; }

 private:
  Eigen::MatrixXd probs_;
  double delta_cap_;
  double column_budget_;
};

/// Each entry independently 1 with probability p. Row i draws from
/// RngStream(seed, i), so the output does not depend on scheduling.
IncidenceMatrix sample_bernoulli(int m, int n, double p, std::uint64_t seed);

/// Entry (i, j) independently 1 with probability P[i][j].
IncidenceMatrix sample_semirandom(const DistributionMatrix& dist, std::uint64_t seed);

/// D = A x, exactly.
Eigen::VectorXi signed_discrepancy(const IncidenceMatrix& a, const Coloring& x);

/// ||A x||_inf.
int disc_of_coloring(const IncidenceMatrix& a, const Coloring& x);

/// A A^T; entry (i, k) is |S_i intersect S_k|.
Eigen::MatrixXi covariance_empirical(const IncidenceMatrix& a);

/// E[A A^T] = (1 - p) p n I + p^2 n 11^T.
template <typename Scalar = double>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> covariance_expected(int m, int n, Scalar p) {
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Scalar nn = static_cast<Scalar>(n);
  return (Scalar(1) - p) * p * nn * Mat::Identity(m, m) + p * p * nn * Mat::Ones(m, m);
}

/// max_j ||A^j||_1.
int max_column_frequency(const IncidenceMatrix& a);

/// Rows whose set size ||A_i||_1 is odd.
std::vector<int> odd_rows(const IncidenceMatrix& a);

}  // namespace fdisc
