#pragma once

#include <string>
#include <vector>

#include "cbundle/hyperbolicity.hpp"
#include "cbundle/lattice.hpp"
#include "cbundle/rootdata.hpp"
#include "cbundle/standardize.hpp"

namespace cbundle {

// Free abelian group on the big-cell coordinates F_1, F_{1,beta}, F_2,
// F_{2,gamma} together with the weight each generator pairs against.
struct MonomialLattice {
  std::vector<std::string> generator_names;
  std::vector<int> generator_block;     // 1 or 2 per generator
  std::vector<Weight> generator_weights;
  int rank = 0;                         // = dim X1 + dim X2 + 2 = dim L
  int dim_x1 = 0, dim_x2 = 0;
};

MonomialLattice build_monomial_lattice(const ParabolicData& parab1, const ParabolicData& parab2,
                                       const WeightSystem& ws1, const WeightSystem& ws2,
                                       const RootSystem& rs1, const RootSystem& rs2);

// D[k][j] = d_{mu_k, j} on the generator's block columns, zero elsewhere.
struct WeightHom {
  IntMatrix d;   // rank(M) x N
  int n1 = 0, n2 = 0;  // block column counts l_i + 1
};

WeightHom weight_matrix(const MonomialLattice& lattice, const StandardTorusData& std1,
                        const StandardTorusData& std2);

struct KernelBasis {
  IntMatrix basis;  // rows are Laurent-monomial exponent vectors, HNF-reduced
  int rank = 0;
};

// kernel of m -> m^T D with lambda_1..lambda_N treated as independent symbols
KernelBasis kernel_generic(const WeightHom& hom);
// kernel of m -> sum_k m_k wt(generator_k) for a concrete weakly hyperbolic lambda
//
// Background on why the kernel carries the whole function field: sections of
// the twisted bundle E_z correspond to functions h on L with gamma(h) =
// -2*pi*i*z*h, and every weight monomial in the big-cell coordinates is such
// an eigenfunction with eigenvalue its lambda-weight.  A quotient of two
// sections is therefore a weight-zero Laurent monomial combination, so the
// meromorphic function field is generated by the kernel lattice; no separate
// section-eigenvalue operation is needed.
KernelBasis kernel_specific(const WeightHom& hom, const std::vector<GaussianRational>& lambda);

// exact generator weights wt_lambda(F...) for a concrete lambda
std::vector<GaussianRational> generator_lambda_weights(const MonomialLattice& lattice,
                                                       const StandardTorusData& std1,
                                                       const StandardTorusData& std2,
                                                       const std::vector<GaussianRational>& lambda);

struct TrdegHypotheses {
  bool maximal_parabolics = false;
  bool generator_bundles = false;
  bool unipotent_zero = false;
  bool weakly_hyperbolic = false;
};

struct TrdegResult {
  int degree = 0;
  bool scalar_type_identity = false;   // degree == dim S_lambda(L) - 1
  bool purely_transcendental = false;  // asserted only under the hypotheses
  std::vector<std::string> notes;
};

TrdegResult transcendence_degree(const KernelBasis& kernel, int dim_x1, int dim_x2,
                                 const TrdegHypotheses& hyp);

}  // namespace cbundle
