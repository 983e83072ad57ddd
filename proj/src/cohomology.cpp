#include "cbundle/cohomology.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace cbundle {

VanishingReport vanishing_sets(int dim_x1, int dim_x2) {
  if (dim_x1 < 1 || dim_x2 < 1) throw std::domain_error("vanishing_sets: dims must be >= 1");
  VanishingReport rep;
  rep.dim_x1 = dim_x1;
  rep.dim_x2 = dim_x2;
  std::set<int> ql{0, dim_x1, dim_x2, dim_x1 + dim_x2};
  std::set<int> qs{0, 1};
  for (int d : {dim_x1, dim_x2, dim_x1 + dim_x2}) {
    qs.insert(d);
    qs.insert(d + 1);
  }
  rep.allowed_q_L.assign(ql.begin(), ql.end());
  rep.allowed_q_S.assign(qs.begin(), qs.end());
  rep.pic0 = "C is contained in H^1(S_lambda(L); O) (constant functions)";
  return rep;
}

PicardReport picard_report(bool maximal1, bool maximal2, bool generator1, bool generator2,
                           int dim_x1, int dim_x2) {
  PicardReport rep;
  bool p1_ok = true;
  if (dim_x1 == 1 && !generator1) {
    p1_ok = false;
    rep.violations.push_back("factor 1 is P^1 but its bundle does not generate Pic(P^1)");
  }
  if (dim_x2 == 1 && !generator2) {
    p1_ok = false;
    rep.violations.push_back("factor 2 is P^1 but its bundle does not generate Pic(P^1)");
  }
  if (!p1_ok) {
    rep.pic0 = "C^l for some l >= 1 (l not determined)";
    rep.asserted = false;
    return rep;
  }
  rep.verified.push_back("flag-variety factors are simply connected");
  rep.verified.push_back("P^1 factors carry the generator bundle");
  rep.pic0 = "C";
  rep.asserted = true;
  if (maximal1 && maximal2 && generator1 && generator2) {
    rep.verified.push_back("both parabolic subgroups are maximal");
    rep.verified.push_back("both bundles generate Pic(X_i)");
    rep.pic = "C";
  } else {
    rep.pic = "not asserted (needs maximal parabolics and generator bundles)";
  }
  return rep;
}

KahlerVerdict kahler_obstruction(bool h1_zero, bool c1_nonzero) {
  KahlerVerdict v;
  if (h1_zero) v.hypotheses.push_back("H^1(X_1; R) = 0");
  if (c1_nonzero) v.hypotheses.push_back("c_1(L_1) != 0 in H^2(X_1; R)");
  if (h1_zero && c1_nonzero) {
    v.obstructed = true;
    v.verdict = "S(L) admits no symplectic structure; non-Kahler for any complex structure";
  } else {
    v.verdict = "no verdict (hypotheses not established)";
  }
  return v;
}

LaurentPoly::Mode LaurentPoly::mode() const {
  for (const auto& [m, c] : terms_)
    if (m[0] < 0) return Mode::h1;
  return Mode::holomorphic;
}

void LaurentPoly::add_term(const std::vector<int>& m, const GaussianRational& c) {
  if (static_cast<int>(m.size()) != nvars_)
    throw std::domain_error("laurent term has wrong number of exponents");
  bool h1_shape = nvars_ >= 2 && m[0] < 0 && m[1] < 0;
  for (std::size_t j = h1_shape ? 2 : 0; j < m.size(); ++j)
    if (m[j] < 0)
      throw std::domain_error(
          "laurent exponents must be non-negative, or carry m1 < 0 and m2 < 0 in H^1 mode");
  if (!terms_.empty()) {
    bool have_h1 = mode() == Mode::h1;
    if (have_h1 != h1_shape)
      throw std::domain_error("laurent polynomial mixes holomorphic and H^1-mode terms");
  }
  auto it = terms_.find(m);
  GaussianRational sum = (it == terms_.end() ? GaussianRational() : it->second) + c;
  if (sum.is_zero()) {
    if (it != terms_.end()) terms_.erase(it);
  } else {
    terms_[m] = sum;
  }
}

namespace {

std::string monomial_str(const std::vector<int>& m) {
  std::string s = "(";
  for (std::size_t j = 0; j < m.size(); ++j) {
    if (j) s += ",";
    s += std::to_string(m[j]);
  }
  return s + ")";
}

}  // namespace

LaurentPoly solve_cohomological_equation(const LaurentPoly& f,
                                         const std::vector<GaussianRational>& b) {
  if (static_cast<int>(b.size()) != f.nvars())
    throw std::invalid_argument("coefficient vector length does not match variable count");
  LaurentPoly phi(f.nvars());
  for (const auto& [m, a] : f.terms()) {
    bool constant = std::all_of(m.begin(), m.end(), [](int v) { return v == 0; });
    if (constant) throw std::domain_error("equation has no solution for a constant term");
    GaussianRational bm;
    for (std::size_t j = 0; j < m.size(); ++j)
      bm += b[j] * GaussianRational(Rational(m[j]));
    if (bm.is_zero())
      throw std::domain_error("resonance: b.m = 0 at m = " + monomial_str(m));
    phi.add_term(m, a / bm);
  }
  return phi;
}

LaurentPoly apply_euler_operator(const LaurentPoly& phi, const std::vector<GaussianRational>& b) {
  if (static_cast<int>(b.size()) != phi.nvars())
    throw std::invalid_argument("coefficient vector length does not match variable count");
  LaurentPoly out(phi.nvars());
  for (const auto& [m, c] : phi.terms()) {
    GaussianRational bm;
    for (std::size_t j = 0; j < m.size(); ++j)
      bm += b[j] * GaussianRational(Rational(m[j]));
    if (!bm.is_zero()) out.add_term(m, c * bm);
  }
  return out;
}

std::vector<std::int64_t> hilbert_series_cone(const RootSystem& rs, const Weight& omega,
                                              int k_max) {
  if (!omega.dominant() || omega.is_zero())
    throw std::domain_error("hilbert_series_cone requires a dominant nonzero weight");
  std::vector<std::int64_t> dims;
  for (int k = 0; k <= k_max; ++k) {
    Weight kw(Eigen::VectorXi(k * omega.coeffs));
    dims.push_back(weyl_dimension(rs, kw));
  }
  return dims;
}

}  // namespace cbundle
