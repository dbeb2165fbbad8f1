#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace extenso {

/// Absolute tolerance on the sum of a probability vector.
inline constexpr double kSimplexTolerance = 1e-12;
/// Column marginals below this are treated as zero and rejected.
inline constexpr double kMinMarginal = 1e-9;

/// A point of the probability simplex: nonnegative entries summing to one.
class SimplexVector {
 public:
  explicit SimplexVector(std::vector<double> entries);

  static SimplexVector uniform(std::size_t n);

  std::size_t size() const noexcept { return entries_.size(); }
  double operator[](std::size_t j) const { return entries_[j]; }
  std::span<const double> entries() const noexcept { return entries_; }

  /// The same distribution on n + 1 states with the extra state unused.
  SimplexVector expanded_with_zero() const;

 private:
  std::vector<double> entries_;
};

/// Distribution of the row variable given that the column variable takes a
/// fixed value, i.e. one column of a joint matrix divided by its marginal.
class ConditionalColumn {
 public:
  explicit ConditionalColumn(SimplexVector distribution)
      : distribution_(std::move(distribution)) {}

  const SimplexVector& distribution() const noexcept { return distribution_; }
  std::size_t size() const noexcept { return distribution_.size(); }
  double operator[](std::size_t i) const { return distribution_[i]; }

 private:
  SimplexVector distribution_;
};

/// Joint law P = (p^i_j) of a pair of finite random variables, stored
/// row-major with m rows (index i) and n columns (index j). Every column
/// marginal p_j = sum_i p^i_j is at least kMinMarginal.
class JointMatrix {
 public:
  JointMatrix(std::size_t rows, std::size_t cols, std::vector<double> row_major);

  static JointMatrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }
  std::span<const double> entries() const noexcept { return entries_; }

  std::vector<double> column(std::size_t j) const;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> entries_;
};

/// Column marginal (p_1, ..., p_n).
SimplexVector marginal(const JointMatrix& joint);

/// Conditional column j (zero-based): (p^1_j / p_j, ..., p^m_j / p_j).
ConditionalColumn conditional(const JointMatrix& joint, std::size_t j);

/// Rebuilds p^i_j = cols[j][i] * p_j.
JointMatrix joint_from_marginal_and_conditionals(const SimplexVector& column_marginal,
                                                 std::span<const ConditionalColumn> cols);

/// Independent product: p^i_j = row_law_i * column_law_j.
JointMatrix product_joint(const SimplexVector& column_law, const SimplexVector& row_law);

/// Dirichlet(concentration, ..., concentration) draw on n states.
SimplexVector random_simplex(std::size_t n, std::mt19937_64& rng, double concentration = 1.0);

/// Dirichlet draw on m x n states, redrawn while any column marginal is below
/// kMinMarginal. Throws Errc::retry_exhausted after max_retries attempts.
JointMatrix random_joint(std::size_t m, std::size_t n, std::mt19937_64& rng,
                         double concentration = 1.0, int max_retries = 100);
JointMatrix random_joint(std::size_t m, std::size_t n, std::uint64_t seed,
                         double concentration = 1.0);

/// Generator for instance `index` of a batch seeded with `seed`; independent
/// of how instances are scheduled across threads.
std::mt19937_64 instance_rng(std::uint64_t seed, std::uint64_t index, std::uint64_t stream = 0);

// Serialization. CSV: first line "m,n", then m rows of n values.
// JSON: {"m":..,"n":..,"entries":[[..],..]}. Values use 17 significant digits.
std::string to_csv(const JointMatrix& joint);
JointMatrix joint_from_csv(std::string_view text);
std::string to_json(const JointMatrix& joint);
JointMatrix joint_from_json(std::string_view text);

}  // namespace extenso
