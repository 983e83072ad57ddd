#pragma once

#include <string>
#include <vector>

#include "cbundle/rational.hpp"
#include "cbundle/rootdata.hpp"
#include "cbundle/standardize.hpp"

namespace cbundle {

struct HyperbolicityReport {
  bool holds = false;
  // on failure: the offending pair (1-based), or witness_j = -1 when a single
  // entry is zero / outside the admissible half-plane
  int witness_i = -1;
  int witness_j = -1;
  std::string reason;
};

// Exact comparison arg(a) < arg(b) for args in [0, pi), decided by the sign of
// im(conj(a) b).  Throws std::domain_error on zero input or arg outside [0, pi).
bool arg_less(const GaussianRational& a, const GaussianRational& b);

HyperbolicityReport is_weakly_hyperbolic(const std::vector<GaussianRational>& lambda, int n1,
                                         int n2);

// lambda_mu = sum_j lambda_j d_{mu,j}, pairing one torus block against a weight's
// exponent row.
GaussianRational lambda_mu(const StandardTorusData& std_data,
                           const std::vector<GaussianRational>& block, const Weight& mu);

struct InducedSpectrum {
  // one entry per weight, with its multiplicity, block 1 first
  std::vector<std::pair<GaussianRational, std::int64_t>> values;
  int r1 = 0, r2 = 0;  // dim V(omega_1), dim V(omega_2)
  HyperbolicityReport report;

  std::vector<GaussianRational> expanded() const;  // multiplicities unrolled
};

InducedSpectrum induced_spectrum(const StandardTorusData& std1, const StandardTorusData& std2,
                                 const std::vector<GaussianRational>& lambda);

struct UnipotentTerm {
  int block = 1;  // 1 or 2
  Root beta;      // positive root of the block's G
  GaussianRational coeff;
};

struct LambdaParam {
  int n1 = 0, n2 = 0;  // block sizes l_i + 1
  std::vector<GaussianRational> semisimple;
  std::vector<UnipotentTerm> unipotent;
};

// beta evaluated on a point of Lie(T~) in the coordinates of the (l+1)-fold
// cover: beta(lambda) = sum_{j<=l} a_{beta,j} lambda_j - (sum_j a_{beta,j}) lambda_{l+1}.
GaussianRational root_on_torus(const RootSystem& rs, const Root& beta,
                               const std::vector<GaussianRational>& block);

// Validates block sizes, root membership and the Jordan commuting condition
// beta(lambda_s|block) = 0 for every term with a nonzero coefficient.
LambdaParam make_lambda_param(const RootSystem& rs1, const RootSystem& rs2,
                              const std::vector<GaussianRational>& semisimple,
                              const std::vector<UnipotentTerm>& unipotent);

struct ScaledUnipotent {
  std::vector<UnipotentTerm> terms;
  bool degenerate = false;  // eps == 0
};

// c_beta -> eps^{|beta|} c_beta with |beta| the coefficient sum over simple roots.
ScaledUnipotent scale_unipotent(const std::vector<UnipotentTerm>& terms,
                                const GaussianRational& eps);

}  // namespace cbundle
