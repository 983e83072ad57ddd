#pragma once

#include <cstdint>
#include <map>

#include "cbundle/rootdata.hpp"

namespace cbundle {

struct ExponentMatrix {
  IntMatrix entries;  // n x n1
};

struct StandardnessReport {
  bool row_sums_constant = false;
  std::int64_t common_row_sum = 0;  // d; meaningful when row_sums_constant
  bool entries_nonneg = false;
  bool rank_full = false;
  bool is_d_standard = false;
};

// Exponent table of the extended torus T x C* acting on V(omega), one row of
// length l+1 per weight of Lambda(omega).
struct StandardTorusData {
  int rank = 0;               // l
  std::int64_t d_prime = 0;   // d'
  std::int64_t d = 0;         // d'(l+1)
  WeightSystem weights;
  std::map<Weight, IntVector> exponent_table;  // mu -> (d_{mu,1}, ..., d_{mu,l+1})

  const IntVector& row(const Weight& mu) const;
};

StandardnessReport check_exponent_matrix(const ExponentMatrix& a);
StandardTorusData extend_to_standard(const RootSystem& rs, const Weight& omega);
// Rows repeated per multiplicity, ordered by the weight map order.
ExponentMatrix exponent_matrix_of(const StandardTorusData& std_data);

}  // namespace cbundle
