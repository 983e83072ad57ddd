#include "cbundle/standardize.hpp"

#include <stdexcept>

namespace cbundle {

const IntVector& StandardTorusData::row(const Weight& mu) const {
  auto it = exponent_table.find(mu);
  if (it == exponent_table.end())
    throw std::domain_error("weight " + mu.str() + " is not in Lambda(omega)");
  return it->second;
}

StandardnessReport check_exponent_matrix(const ExponentMatrix& a) {
  const auto& m = a.entries;
  if (m.rows() < 1 || m.cols() < 1) throw std::domain_error("empty exponent matrix");

  StandardnessReport rep;
  std::int64_t first = m.row(0).sum();
  rep.row_sums_constant = true;
  for (Eigen::Index i = 1; i < m.rows(); ++i)
    if (m.row(i).sum() != first) {
      rep.row_sums_constant = false;
      break;
    }
  if (rep.row_sums_constant) rep.common_row_sum = first;
  rep.entries_nonneg = (m.array() >= 0).all();

  RationalMatrix rm(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) rm(i, j) = Rational(m(i, j));
  rep.rank_full = rational_rank(rm) == std::min(m.rows(), m.cols());

  rep.is_d_standard = rep.row_sums_constant && rep.common_row_sum > 0 && rep.entries_nonneg;
  return rep;
}

StandardTorusData extend_to_standard(const RootSystem& rs, const Weight& omega) {
  if (!omega.dominant() || omega.is_zero())
    throw std::domain_error("extend_to_standard requires a dominant nonzero weight");

  StandardTorusData out;
  out.rank = rs.rank;
  out.weights = weight_system(rs, omega);

  std::int64_t dp = 1;
  for (const auto& [mu, m] : out.weights.entries)
    for (int j = 0; j < rs.rank; ++j) dp += std::abs(static_cast<std::int64_t>(mu.coeffs[j]));
  out.d_prime = dp;
  out.d = dp * (rs.rank + 1);

  for (const auto& [mu, m] : out.weights.entries) {
    IntVector row(rs.rank + 1);
    std::int64_t s = 0;
    for (int j = 0; j < rs.rank; ++j) {
      row[j] = dp + mu.coeffs[j];
      s += mu.coeffs[j];
    }
    row[rs.rank] = dp - s;
    for (int j = 0; j <= rs.rank; ++j)
      if (row[j] <= 0) throw std::logic_error("non-positive exponent in standard extension");
    out.exponent_table[mu] = row;
  }
  return out;
}

ExponentMatrix exponent_matrix_of(const StandardTorusData& std_data) {
  std::int64_t rows = 0;
  for (const auto& [mu, m] : std_data.weights.entries) rows += m;
  ExponentMatrix em;
  em.entries.resize(rows, std_data.rank + 1);
  Eigen::Index r = 0;
  for (const auto& [mu, m] : std_data.weights.entries) {
    const IntVector& row = std_data.exponent_table.at(mu);
    for (std::int64_t k = 0; k < m; ++k) em.entries.row(r++) = row.transpose();
  }
  return em;
}

}  // namespace cbundle
