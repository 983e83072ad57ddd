#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <vector>

#include "cbundle/rootdata.hpp"

namespace cbundle {

// Weight-graded matrix model of an irreducible V(omega) with integer Chevalley
// operators for every positive root.  Basis vectors are ordered so that every
// raising operator is strictly upper triangular.
struct Realization {
  RootSystem rs;
  Weight omega;
  int dim = 0;
  std::vector<Weight> basis_weights;   // length dim, with multiplicity
  std::vector<IntMatrix> op_x;         // indexed like rs.positive_roots
  std::vector<IntMatrix> op_y;
  int highest_index = 0;               // position of the highest weight vector

  const IntMatrix& op_X(const Root& beta) const;
  const IntMatrix& op_Y(const Root& beta) const;
  IntMatrix op_H(const Root& beta) const;  // [X_beta, Y_beta]
};

Realization sl2_irrep(int k);
Realization sln_wedge(int n, int k);

// exp(m), exact finite sum when m is nilpotent, scaling-and-squaring otherwise
Eigen::MatrixXcd matrix_exponential(const Eigen::MatrixXcd& m);

struct ConePoint {
  Eigen::VectorXcd coords;
  // construction recipe: coefficients of Y_beta per positive root, plus the
  // scalar multiplying the highest weight vector
  std::vector<std::complex<double>> y_coeffs;
  std::complex<double> scale{1.0, 0.0};
};

ConePoint sample_cone_point(const Realization& real, double scale, std::uint64_t seed);

struct BigCellChart {
  ParabolicData parab;
  int f_index = 0;                        // F = dual of the highest weight basis vector
  std::vector<Root> cell_roots;           // R_P, fixed order
  std::vector<Eigen::RowVectorXd> f_beta; // F_beta = F o op_X(beta), one per cell root
  std::vector<std::int64_t> omega_h;      // omega(H_beta) per cell root

  std::complex<double> F(const Eigen::VectorXcd& v) const { return v[f_index]; }
  std::complex<double> F_beta(std::size_t k, const Eigen::VectorXcd& v) const;
};

BigCellChart big_cell_chart(const Realization& real, const ParabolicData& parab);

// theta(y, z) = prod_beta exp(y_beta Y_beta) . (z v_0), product in cell order
Eigen::VectorXcd chart_point(const Realization& real, const BigCellChart& chart,
                             const Eigen::VectorXcd& y, std::complex<double> z);

// Max deviation of the centered finite difference d(F_gamma/F)/dy_beta from
// omega(H_beta) delta_{beta,gamma} at chart coordinates (y, z).
double jacobian_check(const Realization& real, const BigCellChart& chart,
                      const Eigen::VectorXcd& y, std::complex<double> z, double h);

}  // namespace cbundle
