#include "cbundle/merofield.hpp"

#include <stdexcept>

namespace cbundle {

MonomialLattice build_monomial_lattice(const ParabolicData& parab1, const ParabolicData& parab2,
                                       const WeightSystem& ws1, const WeightSystem& ws2,
                                       const RootSystem& rs1, const RootSystem& rs2) {
  MonomialLattice lat;
  lat.dim_x1 = parab1.dim_x;
  lat.dim_x2 = parab2.dim_x;
  auto add_block = [&](int block, const ParabolicData& parab, const WeightSystem& ws,
                       const RootSystem& rs) {
    std::string f = "F" + std::to_string(block);
    lat.generator_names.push_back(f);
    lat.generator_block.push_back(block);
    lat.generator_weights.push_back(ws.highest);
    for (const Root& beta : parab.complement_roots) {
      Weight w = rs.add_root(ws.highest, beta, -1);
      if (!ws.contains(w))
        throw std::logic_error("generator weight " + w.str() + " = omega - " + root_str(beta) +
                               " is not a weight of V(omega)");
      lat.generator_names.push_back(f + "_b(" + root_str(beta) + ")");
      lat.generator_block.push_back(block);
      lat.generator_weights.push_back(w);
    }
  };
  add_block(1, parab1, ws1, rs1);
  add_block(2, parab2, ws2, rs2);
  lat.rank = static_cast<int>(lat.generator_names.size());
  if (lat.rank != lat.dim_x1 + lat.dim_x2 + 2)
    throw std::logic_error("monomial lattice rank differs from dim X1 + dim X2 + 2");
  return lat;
}

WeightHom weight_matrix(const MonomialLattice& lattice, const StandardTorusData& std1,
                        const StandardTorusData& std2) {
  WeightHom hom;
  hom.n1 = std1.rank + 1;
  hom.n2 = std2.rank + 1;
  hom.d = IntMatrix::Zero(lattice.rank, hom.n1 + hom.n2);
  for (int k = 0; k < lattice.rank; ++k) {
    const bool first = lattice.generator_block[static_cast<std::size_t>(k)] == 1;
    const StandardTorusData& sd = first ? std1 : std2;
    const int off = first ? 0 : hom.n1;
    const IntVector& row = sd.row(lattice.generator_weights[static_cast<std::size_t>(k)]);
    for (int j = 0; j < sd.rank + 1; ++j) hom.d(k, off + j) = row[j];
  }
  return hom;
}

KernelBasis kernel_generic(const WeightHom& hom) {
  KernelBasis kb;
  kb.basis = left_kernel(hom.d);
  kb.rank = static_cast<int>(kb.basis.rows());
  return kb;
}

KernelBasis kernel_specific(const WeightHom& hom, const std::vector<GaussianRational>& lambda) {
  HyperbolicityReport rep = is_weakly_hyperbolic(lambda, hom.n1, hom.n2);
  if (!rep.holds)
    throw std::domain_error("kernel_specific requires weakly hyperbolic lambda: " + rep.reason);

  // weight of generator k is sum_j D(k,j) lambda_j; the kernel is cut out by
  // the two rational conditions Re = 0 and Im = 0, scaled to integers
  const int rank = static_cast<int>(hom.d.rows());
  RationalMatrix cond(rank, 2);
  for (int k = 0; k < rank; ++k) {
    GaussianRational w;
    for (Eigen::Index j = 0; j < hom.d.cols(); ++j)
      w += lambda[static_cast<std::size_t>(j)] * GaussianRational(Rational(hom.d(k, j)));
    cond(k, 0) = w.real();
    cond(k, 1) = w.imag();
  }
  IntMatrix scaled(rank, 2);
  for (int c = 0; c < 2; ++c) {
    std::int64_t lcm = 1;
    for (int k = 0; k < rank; ++k) {
      std::int64_t den = cond(k, c).den();
      lcm = lattice_detail::checked_mul(lcm / std::gcd(lcm, den), den);
    }
    for (int k = 0; k < rank; ++k)
      scaled(k, c) = lattice_detail::checked_mul(cond(k, c).num(), lcm / cond(k, c).den());
  }
  KernelBasis kb;
  kb.basis = left_kernel(scaled);
  kb.rank = static_cast<int>(kb.basis.rows());
  return kb;
}

std::vector<GaussianRational> generator_lambda_weights(
    const MonomialLattice& lattice, const StandardTorusData& std1, const StandardTorusData& std2,
    const std::vector<GaussianRational>& lambda) {
  const int n1 = std1.rank + 1;
  std::vector<GaussianRational> block1(lambda.begin(), lambda.begin() + n1);
  std::vector<GaussianRational> block2(lambda.begin() + n1, lambda.end());
  std::vector<GaussianRational> out;
  for (int k = 0; k < lattice.rank; ++k) {
    const bool first = lattice.generator_block[static_cast<std::size_t>(k)] == 1;
    out.push_back(lambda_mu(first ? std1 : std2, first ? block1 : block2,
                            lattice.generator_weights[static_cast<std::size_t>(k)]));
  }
  return out;
}

TrdegResult transcendence_degree(const KernelBasis& kernel, int dim_x1, int dim_x2,
                                 const TrdegHypotheses& hyp) {
  const int dim_l = dim_x1 + dim_x2 + 2;
  TrdegResult res;
  res.degree = kernel.rank;
  if (res.degree > dim_l - 2)
    throw std::logic_error("transcendence degree exceeds dim L - 2; rank Z(lambda) >= 2 violated");
  res.scalar_type_identity = res.degree == dim_l - 2;  // dim S - 1 = dim L - 2
  if (res.scalar_type_identity)
    res.notes.push_back("tr.deg = dim S_lambda(L) - 1 (scalar-type value)");
  res.purely_transcendental = hyp.maximal_parabolics && hyp.generator_bundles &&
                              hyp.unipotent_zero && hyp.weakly_hyperbolic;
  if (res.purely_transcendental) {
    res.notes.push_back("meromorphic function field is purely transcendental of this degree");
  } else {
    res.notes.push_back(
        "rank computed; the purely-transcendental verdict needs maximal parabolics, "
        "generator bundles and vanishing unipotent part (conjectural otherwise)");
  }
  return res;
}

}  // namespace cbundle
