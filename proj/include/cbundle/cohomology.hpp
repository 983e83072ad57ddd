#pragma once

#include <map>
#include <string>
#include <vector>

#include "cbundle/rational.hpp"
#include "cbundle/rootdata.hpp"

namespace cbundle {

struct VanishingReport {
  int dim_x1 = 0, dim_x2 = 0;
  std::vector<int> allowed_q_L;  // possibly nonzero H^q(L; O)
  std::vector<int> allowed_q_S;  // possibly nonzero H^q(S_lambda(L); O)
  std::string pic0;              // guaranteed lower bound on H^1
  bool nonkahler = false;
  std::string nonkahler_trace = "kahler obstruction not evaluated";
};

VanishingReport vanishing_sets(int dim_x1, int dim_x2);

struct PicardReport {
  std::string pic0;  // e.g. "C" or "C^l, l >= 1"
  std::string pic;   // full Picard group when asserted
  bool asserted = false;
  std::vector<std::string> verified;
  std::vector<std::string> violations;
};

PicardReport picard_report(bool maximal1, bool maximal2, bool generator1, bool generator2,
                           int dim_x1, int dim_x2);

struct KahlerVerdict {
  bool obstructed = false;
  std::string verdict;
  std::vector<std::string> hypotheses;
};

KahlerVerdict kahler_obstruction(bool h1_zero, bool c1_nonzero);

// Finitely supported Laurent polynomial over Gaussian rationals.  Exponents
// are all non-negative, or -- in H^1 mode -- the first two are both negative
// with the rest non-negative.
class LaurentPoly {
public:
  enum class Mode { holomorphic, h1 };

  explicit LaurentPoly(int nvars) : nvars_(nvars) {}

  int nvars() const { return nvars_; }
  const std::map<std::vector<int>, GaussianRational>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  Mode mode() const;  // holomorphic when no negative exponent occurs

  void add_term(const std::vector<int>& m, const GaussianRational& c);

  friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) {
    return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
  }

private:
  int nvars_;
  std::map<std::vector<int>, GaussianRational> terms_;
};

// Exact solve of sum_j b_j z_j d(phi)/dz_j = f; throws std::domain_error
// naming the offending monomial when some b.m vanishes (resonance).
LaurentPoly solve_cohomological_equation(const LaurentPoly& f,
                                         const std::vector<GaussianRational>& b);

// sum_j b_j z_j d/dz_j applied term by term; used to re-verify solutions
LaurentPoly apply_euler_operator(const LaurentPoly& phi, const std::vector<GaussianRational>& b);

// graded dimensions of the cone coordinate ring: dim V(k omega), k = 0..k_max
std::vector<std::int64_t> hilbert_series_cone(const RootSystem& rs, const Weight& omega,
                                              int k_max);

}  // namespace cbundle
