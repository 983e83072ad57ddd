#include "cbundle/hyperbolicity.hpp"

#include <stdexcept>

namespace cbundle {

namespace {

// arg in [0, pi): upper half-plane, with the positive real axis included.
bool in_admissible_halfplane(const GaussianRational& v) {
  if (v.imag().sign() > 0) return true;
  return v.imag().is_zero() && v.real().sign() > 0;
}

}  // namespace

bool arg_less(const GaussianRational& a, const GaussianRational& b) {
  if (a.is_zero() || b.is_zero()) throw std::domain_error("arg_less: zero input");
  if (!in_admissible_halfplane(a) || !in_admissible_halfplane(b))
    throw std::domain_error("arg_less: argument outside [0, pi)");
  // sign of im(conj(a) b) = re(a) im(b) - im(a) re(b)
  Rational cross = a.real() * b.imag() - a.imag() * b.real();
  return cross.sign() > 0;
}

HyperbolicityReport is_weakly_hyperbolic(const std::vector<GaussianRational>& lambda, int n1,
                                         int n2) {
  if (static_cast<int>(lambda.size()) != n1 + n2)
    throw std::domain_error("lambda length does not match type (n1, n2)");
  HyperbolicityReport rep;
  for (int k = 0; k < n1 + n2; ++k) {
    if (lambda[k].is_zero()) {
      rep.witness_i = k + 1;
      rep.reason = "lambda_" + std::to_string(k + 1) + " is zero";
      return rep;
    }
  }
  for (int k = 0; k < n1 + n2; ++k) {
    if (!in_admissible_halfplane(lambda[k])) {
      rep.witness_i = k + 1;
      rep.reason = "arg(lambda_" + std::to_string(k + 1) + ") outside [0, pi)";
      return rep;
    }
  }
  for (int i = 0; i < n1; ++i) {
    for (int j = n1; j < n1 + n2; ++j) {
      if (!arg_less(lambda[i], lambda[j])) {
        rep.witness_i = i + 1;
        rep.witness_j = j + 1;
        rep.reason = "arg(lambda_" + std::to_string(i + 1) + ") >= arg(lambda_" +
                     std::to_string(j + 1) + ")";
        return rep;
      }
    }
  }
  rep.holds = true;
  return rep;
}

GaussianRational lambda_mu(const StandardTorusData& std_data,
                           const std::vector<GaussianRational>& block, const Weight& mu) {
  if (static_cast<int>(block.size()) != std_data.rank + 1)
    throw std::domain_error("lambda block size does not match rank + 1");
  const IntVector& row = std_data.row(mu);  // throws if mu not in Lambda(omega)
  GaussianRational acc;
  for (int j = 0; j <= std_data.rank; ++j)
    acc += block[static_cast<std::size_t>(j)] * GaussianRational(Rational(row[j]));
  return acc;
}

std::vector<GaussianRational> InducedSpectrum::expanded() const {
  std::vector<GaussianRational> out;
  for (const auto& [v, m] : values)
    for (std::int64_t k = 0; k < m; ++k) out.push_back(v);
  return out;
}

InducedSpectrum induced_spectrum(const StandardTorusData& std1, const StandardTorusData& std2,
                                 const std::vector<GaussianRational>& lambda) {
  const int b1 = std1.rank + 1, b2 = std2.rank + 1;
  if (static_cast<int>(lambda.size()) != b1 + b2)
    throw std::domain_error("lambda length does not match the two torus blocks");
  std::vector<GaussianRational> block1(lambda.begin(), lambda.begin() + b1);
  std::vector<GaussianRational> block2(lambda.begin() + b1, lambda.end());

  InducedSpectrum spec;
  for (const auto& [mu, m] : std1.weights.entries) {
    spec.values.emplace_back(lambda_mu(std1, block1, mu), m);
    spec.r1 += static_cast<int>(m);
  }
  for (const auto& [mu, m] : std2.weights.entries) {
    spec.values.emplace_back(lambda_mu(std2, block2, mu), m);
    spec.r2 += static_cast<int>(m);
  }
  spec.report = is_weakly_hyperbolic(spec.expanded(), spec.r1, spec.r2);
  return spec;
}

GaussianRational root_on_torus(const RootSystem& rs, const Root& beta,
                               const std::vector<GaussianRational>& block) {
  if (static_cast<int>(block.size()) != rs.rank + 1)
    throw std::domain_error("torus block size does not match rank + 1");
  Eigen::VectorXi a = rs.root_to_weight_coords(beta);
  GaussianRational acc;
  std::int64_t total = 0;
  for (int j = 0; j < rs.rank; ++j) {
    acc += block[static_cast<std::size_t>(j)] * GaussianRational(Rational(a[j]));
    total += a[j];
  }
  acc -= block[static_cast<std::size_t>(rs.rank)] * GaussianRational(Rational(total));
  return acc;
}

LambdaParam make_lambda_param(const RootSystem& rs1, const RootSystem& rs2,
                              const std::vector<GaussianRational>& semisimple,
                              const std::vector<UnipotentTerm>& unipotent) {
  LambdaParam lp;
  lp.n1 = rs1.rank + 1;
  lp.n2 = rs2.rank + 1;
  if (static_cast<int>(semisimple.size()) != lp.n1 + lp.n2)
    throw std::invalid_argument("semisimple part must have length (l1+1)+(l2+1)");
  lp.semisimple = semisimple;
  std::vector<GaussianRational> block1(semisimple.begin(), semisimple.begin() + lp.n1);
  std::vector<GaussianRational> block2(semisimple.begin() + lp.n1, semisimple.end());
  for (const UnipotentTerm& t : unipotent) {
    if (t.block != 1 && t.block != 2) throw std::invalid_argument("unipotent block must be 1 or 2");
    const RootSystem& rs = t.block == 1 ? rs1 : rs2;
    if (!rs.is_positive_root(t.beta))
      throw std::invalid_argument("unipotent root " + root_str(t.beta) +
                                  " is not a positive root of block " + std::to_string(t.block));
    if (!t.coeff.is_zero()) {
      GaussianRational val = root_on_torus(rs, t.beta, t.block == 1 ? block1 : block2);
      if (!val.is_zero())
        throw std::invalid_argument("Jordan condition violated: " + root_str(t.beta) +
                                    "(lambda_s) = " + val.str() + " != 0");
    }
    lp.unipotent.push_back(t);
  }
  return lp;
}

ScaledUnipotent scale_unipotent(const std::vector<UnipotentTerm>& terms,
                                const GaussianRational& eps) {
  ScaledUnipotent out;
  out.degenerate = eps.is_zero();
  for (const UnipotentTerm& t : terms) {
    UnipotentTerm s = t;
    s.coeff = out.degenerate ? GaussianRational() : t.coeff * pow(eps, root_height(t.beta));
    out.terms.push_back(s);
  }
  return out;
}

}  // namespace cbundle
