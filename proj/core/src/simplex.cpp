#include "extenso/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "extenso/error.hpp"

namespace extenso {
namespace {

double neumaier_sum(std::span<const double> xs) {
  double sum = 0.0;
  double carry = 0.0;
  for (double x : xs) {
    const double t = sum + x;
    carry += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  return sum + carry;
}

void require_probabilities(std::span<const double> entries, const char* what) {
  if (entries.empty()) throw Error(Errc::invalid_simplex, std::string(what) + " is empty");
  for (double v : entries) {
    if (!std::isfinite(v) || v < 0.0) {
      std::ostringstream msg;
      msg << what << " has entry " << v << " outside [0, 1]";
      throw Error(Errc::invalid_simplex, msg.str());
    }
  }
  const double total = neumaier_sum(entries);
  if (std::abs(total - 1.0) > kSimplexTolerance) {
    std::ostringstream msg;
    msg.precision(17);
    msg << what << " sums to " << total;
    throw Error(Errc::invalid_simplex, msg.str());
  }
}

}  // namespace

SimplexVector::SimplexVector(std::vector<double> entries) : entries_(std::move(entries)) {
  require_probabilities(entries_, "probability vector");
}

SimplexVector SimplexVector::uniform(std::size_t n) {
  if (n == 0) throw Error(Errc::invalid_parameter, "uniform vector needs n >= 1");
  return SimplexVector(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

SimplexVector SimplexVector::expanded_with_zero() const {
  std::vector<double> out(entries_);
  out.push_back(0.0);
  return SimplexVector(std::move(out));
}

JointMatrix::JointMatrix(std::size_t rows, std::size_t cols, std::vector<double> row_major)
    : rows_(rows), cols_(cols), entries_(std::move(row_major)) {
  if (rows_ == 0 || cols_ == 0) throw Error(Errc::dimension_mismatch, "joint matrix needs m, n >= 1");
  if (entries_.size() != rows_ * cols_) {
    throw Error(Errc::dimension_mismatch, "joint matrix entry count does not match m*n");
  }
  require_probabilities(entries_, "joint matrix");
  for (std::size_t j = 0; j < cols_; ++j) {
    double pj = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) pj += entries_[i * cols_ + j];
    if (pj < kMinMarginal) {
      std::ostringstream msg;
      msg << "column " << j << " has marginal " << pj;
      throw Error(Errc::zero_marginal, msg.str());
    }
  }
}

JointMatrix JointMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw Error(Errc::dimension_mismatch, "no rows");
  const std::size_t n = rows.front().size();
  std::vector<double> flat;
  flat.reserve(rows.size() * n);
  for (const auto& row : rows) {
    if (row.size() != n) throw Error(Errc::dimension_mismatch, "ragged rows");
    flat.insert(flat.end(), row.begin(), row.end());
  }
  return JointMatrix(rows.size(), n, std::move(flat));
}

std::vector<double> JointMatrix::column(std::size_t j) const {
  if (j >= cols_) throw Error(Errc::index_out_of_range, "column index " + std::to_string(j));
  std::vector<double> out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out[i] = entries_[i * cols_ + j];
  return out;
}

SimplexVector marginal(const JointMatrix& joint) {
  std::vector<double> p(joint.cols());
  for (std::size_t j = 0; j < joint.cols(); ++j) p[j] = neumaier_sum(joint.column(j));
  return SimplexVector(std::move(p));
}

ConditionalColumn conditional(const JointMatrix& joint, std::size_t j) {
  std::vector<double> col = joint.column(j);
  const double pj = neumaier_sum(col);
  for (double& v : col) v /= pj;
  return ConditionalColumn(SimplexVector(std::move(col)));
}

JointMatrix joint_from_marginal_and_conditionals(const SimplexVector& column_marginal,
                                                 std::span<const ConditionalColumn> cols) {
  const std::size_t n = column_marginal.size();
  if (cols.size() != n) {
    throw Error(Errc::dimension_mismatch, "need one conditional column per marginal entry");
  }
  const std::size_t m = cols.front().size();
  std::vector<double> flat(m * n);
  for (std::size_t j = 0; j < n; ++j) {
    if (column_marginal[j] <= 0.0) {
      throw Error(Errc::invalid_parameter, "marginal entry " + std::to_string(j) + " is not positive");
    }
    if (cols[j].size() != m) throw Error(Errc::dimension_mismatch, "conditional columns differ in length");
    for (std::size_t i = 0; i < m; ++i) flat[i * n + j] = cols[j][i] * column_marginal[j];
  }
  return JointMatrix(m, n, std::move(flat));
}

JointMatrix product_joint(const SimplexVector& column_law, const SimplexVector& row_law) {
  const std::size_t m = row_law.size();
  const std::size_t n = column_law.size();
  std::vector<double> flat(m * n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) flat[i * n + j] = row_law[i] * column_law[j];
  return JointMatrix(m, n, std::move(flat));
}

namespace {

std::vector<double> dirichlet_draw(std::size_t k, std::mt19937_64& rng, double concentration) {
  std::gamma_distribution<double> gamma(concentration, 1.0);
  std::vector<double> w(k);
  for (double& v : w) v = gamma(rng);
  const double total = neumaier_sum(w);
  if (!(total > 0.0)) return {};
  for (double& v : w) v /= total;
  // Fold the residual rounding error into the largest entry.
  const double drift = 1.0 - neumaier_sum(w);
  auto largest = std::max_element(w.begin(), w.end());
  *largest += drift;
  return w;
}

}  // namespace

SimplexVector random_simplex(std::size_t n, std::mt19937_64& rng, double concentration) {
  if (n == 0) throw Error(Errc::invalid_parameter, "n must be >= 1");
  if (!(concentration > 0.0)) throw Error(Errc::invalid_parameter, "concentration must be > 0");
  for (int attempt = 0; attempt < 100; ++attempt) {
    auto w = dirichlet_draw(n, rng, concentration);
    if (!w.empty()) return SimplexVector(std::move(w));
  }
  throw Error(Errc::retry_exhausted, "gamma draws underflowed");
}

JointMatrix random_joint(std::size_t m, std::size_t n, std::mt19937_64& rng, double concentration,
                         int max_retries) {
  if (m == 0 || n == 0) throw Error(Errc::invalid_parameter, "m and n must be >= 1");
  if (!(concentration > 0.0)) throw Error(Errc::invalid_parameter, "concentration must be > 0");
  for (int attempt = 0; attempt < max_retries; ++attempt) {
    auto w = dirichlet_draw(m * n, rng, concentration);
    if (w.empty()) continue;
    bool ok = true;
    for (std::size_t j = 0; j < n && ok; ++j) {
      double pj = 0.0;
      for (std::size_t i = 0; i < m; ++i) pj += w[i * n + j];
      ok = pj >= kMinMarginal;
    }
    if (ok) return JointMatrix(m, n, std::move(w));
  }
  throw Error(Errc::retry_exhausted,
              "no draw with all column marginals >= 1e-9 after " + std::to_string(max_retries) + " attempts");
}

JointMatrix random_joint(std::size_t m, std::size_t n, std::uint64_t seed, double concentration) {
  std::mt19937_64 rng(seed);
  return random_joint(m, n, rng, concentration);
}

std::mt19937_64 instance_rng(std::uint64_t seed, std::uint64_t index, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                    static_cast<std::uint32_t>(stream)};
  return std::mt19937_64(seq);
}

}  // namespace extenso
