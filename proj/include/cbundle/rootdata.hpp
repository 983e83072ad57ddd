#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cbundle/rational.hpp"

namespace cbundle {

using IntVector = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;
using IntMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

enum class Series : char { A = 'A', B = 'B', C = 'C', D = 'D' };

Series series_from_char(char c);

// Coordinates in the fundamental-weight basis.
struct Weight {
  Eigen::VectorXi coeffs;

  Weight() = default;
  explicit Weight(Eigen::VectorXi c) : coeffs(std::move(c)) {}
  Weight(std::initializer_list<int> c);

  int rank() const { return static_cast<int>(coeffs.size()); }
  bool is_zero() const { return coeffs.isZero(); }
  bool dominant() const { return (coeffs.array() >= 0).all(); }
  std::string str() const;

  friend bool operator==(const Weight& a, const Weight& b) { return a.coeffs == b.coeffs; }
  friend bool operator!=(const Weight& a, const Weight& b) { return !(a == b); }
  friend bool operator<(const Weight& a, const Weight& b) {
    return std::lexicographical_compare(a.coeffs.begin(), a.coeffs.end(), b.coeffs.begin(),
                                        b.coeffs.end());
  }
};

// A root is stored by its coefficients over the simple roots.
using Root = Eigen::VectorXi;

std::string root_str(const Root& beta);
int root_height(const Root& beta);

struct RootSystem {
  Series series;
  int rank = 0;
  Eigen::MatrixXi cartan;            // cartan(i,j) = <alpha_j, alpha_i^vee>
  std::vector<Root> positive_roots;  // fixed lexicographic order
  int fundamental_weight_count = 0;

  std::vector<Rational> symmetrizer;  // d_j = (alpha_j, alpha_j)/2
  RationalMatrix inverse_cartan;

  // fundamental-weight coordinates of a root-lattice element
  Eigen::VectorXi root_to_weight_coords(const Root& beta) const;
  // <mu, alpha_i^vee> for mu given in fundamental coordinates is just mu[i];
  // this is the pairing of a weight with an arbitrary root's coroot scaled out:
  // (mu, beta) under the W-invariant form.
  Rational form(const Weight& mu, const Root& beta) const;
  Rational form_root_root(const Root& a, const Root& b) const;
  bool is_positive_root(const Root& beta) const;
  int positive_root_index(const Root& beta) const;  // -1 if absent

  Weight add_root(const Weight& mu, const Root& beta, int sign) const;
  Weight reflect(const Weight& mu, int i) const;       // simple reflection s_i
  Weight dominant_conjugate(const Weight& mu) const;
  // root coordinates of omega - mu; throws std::domain_error when the
  // difference is not in the root lattice
  Eigen::VectorXi root_coords_of_difference(const Weight& omega, const Weight& mu) const;
};

struct WeightSystem {
  Weight highest;
  std::map<Weight, std::int64_t> entries;  // weight -> multiplicity

  std::int64_t dimension() const;
  bool contains(const Weight& mu) const { return entries.count(mu) != 0; }
  std::int64_t multiplicity(const Weight& mu) const;
};

struct ParabolicData {
  std::vector<int> levi_simples;      // 1-based indices j with omega_j == 0
  std::vector<Root> complement_roots; // R_P, in the root system's order
  int dim_x = 0;
};

RootSystem build_root_system(Series series, int rank);
WeightSystem weight_system(const RootSystem& rs, const Weight& omega);
std::int64_t weyl_dimension(const RootSystem& rs, const Weight& omega);
ParabolicData parabolic_from_weight(const RootSystem& rs, const Weight& omega);
std::int64_t pair_with_coroot(const RootSystem& rs, const Weight& omega, const Root& beta);

}  // namespace cbundle
