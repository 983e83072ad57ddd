#include "cbundle/workbench.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <set>
#include <stdexcept>

#include "cbundle/rng.hpp"

namespace cbundle {

using ordered_json = nlohmann::ordered_json;

namespace {

const std::set<std::string> kCommands = {"check-standard", "check-hyperbolic", "spectrum",
                                         "vanishing",      "picard",          "kahler",
                                         "solve-eq9",      "trdeg",           "simulate-orbits",
                                         "hilbert"};

void check_keys(const nlohmann::json& obj, const std::set<std::string>& allowed,
                const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key()))
      throw std::invalid_argument("unknown key \"" + it.key() + "\" in " + where);
}

FactorConfig parse_factor(const nlohmann::json& j, const std::string& where) {
  FactorConfig f;
  if (j.contains("exponent_matrix")) {
    check_keys(j, {"exponent_matrix"}, where);
    f.is_matrix = true;
    for (const auto& row : j.at("exponent_matrix"))
      f.matrix.push_back(row.get<std::vector<std::int64_t>>());
    if (f.matrix.empty() || f.matrix.front().empty())
      throw std::invalid_argument(where + ": exponent_matrix must be non-empty");
    for (const auto& row : f.matrix)
      if (row.size() != f.matrix.front().size())
        throw std::invalid_argument(where + ": ragged exponent_matrix");
    return f;
  }
  check_keys(j, {"series", "rank", "omega"}, where);
  std::string s = j.at("series").get<std::string>();
  if (s.size() != 1) throw std::invalid_argument(where + ": series must be one of A, B, C, D");
  f.series = s[0];
  series_from_char(f.series);  // validates
  f.rank = j.at("rank").get<int>();
  f.omega = j.at("omega").get<std::vector<int>>();
  if (static_cast<int>(f.omega.size()) != f.rank)
    throw std::invalid_argument(where + ": omega length must equal rank");
  return f;
}

GaussianRational parse_gr_field(const nlohmann::json& j, const std::string& where) {
  if (!j.is_string())
    throw std::invalid_argument(where +
                                ": gaussian rationals are written as strings, e.g. \"3/2+1/2i\"");
  return parse_gaussian_rational(j.get<std::string>());
}

Weight weight_of(const std::vector<int>& v) {
  Eigen::VectorXi c(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) c[static_cast<Eigen::Index>(i)] = v[i];
  return Weight(c);
}

Root root_of(const std::vector<int>& v) {
  Root r(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) r[static_cast<Eigen::Index>(i)] = v[i];
  return r;
}

ordered_json json_int_vector(const Eigen::VectorXi& v) {
  ordered_json a = ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

ordered_json json_int_vector(const IntVector& v) {
  ordered_json a = ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

ordered_json json_int_matrix(const IntMatrix& m) {
  ordered_json rows = ordered_json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

ordered_json json_eigen_int_matrix(const Eigen::MatrixXi& m) {
  ordered_json rows = ordered_json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

struct Hypotheses {
  std::vector<std::string> verified, assumed, violated;
  ordered_json to_json() const {
    return ordered_json{{"verified", verified}, {"assumed", assumed}, {"violated", violated}};
  }
};

struct FactorContext {
  bool is_matrix = false;
  RootSystem rs;
  Weight omega;
  ParabolicData parab;
  StandardTorusData std_data;
  ExponentMatrix matrix;
  int n_torus = 0;  // columns of this factor's lambda block
  int dim_x = 0;

  bool maximal_parabolic() const {
    int nonzero = 0;
    for (int i = 0; i < omega.rank(); ++i)
      if (omega.coeffs[i] != 0) ++nonzero;
    return nonzero == 1;
  }
  bool generator_bundle() const { return maximal_parabolic() && omega.coeffs.maxCoeff() == 1; }
};

FactorContext build_factor(const FactorConfig& cfg) {
  FactorContext ctx;
  ctx.is_matrix = cfg.is_matrix;
  if (cfg.is_matrix) {
    ctx.matrix.entries.resize(static_cast<Eigen::Index>(cfg.matrix.size()),
                              static_cast<Eigen::Index>(cfg.matrix.front().size()));
    for (std::size_t i = 0; i < cfg.matrix.size(); ++i)
      for (std::size_t j = 0; j < cfg.matrix[i].size(); ++j)
        ctx.matrix.entries(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            cfg.matrix[i][j];
    ctx.n_torus = static_cast<int>(ctx.matrix.entries.cols());
    ctx.dim_x = static_cast<int>(ctx.matrix.entries.rows()) - 1;  // P^{n-1} base
    return ctx;
  }
  ctx.rs = build_root_system(series_from_char(cfg.series), cfg.rank);
  ctx.omega = weight_of(cfg.omega);
  if (!ctx.omega.dominant() || ctx.omega.is_zero())
    throw std::invalid_argument("factor weight must be dominant and nonzero");
  ctx.std_data = extend_to_standard(ctx.rs, ctx.omega);
  ctx.parab = parabolic_from_weight(ctx.rs, ctx.omega);
  ctx.n_torus = cfg.rank + 1;
  ctx.dim_x = ctx.parab.dim_x;
  return ctx;
}

Realization realization_for(const FactorContext& f) {
  if (f.is_matrix)
    throw std::invalid_argument("matrix realizations exist only for flag factors");
  if (f.rs.series != Series::A)
    throw std::invalid_argument("matrix realizations are limited to type A factors");
  if (f.rs.rank == 1) return sl2_irrep(f.omega.coeffs[0]);
  int nonzero = -1;
  for (int i = 0; i < f.rs.rank; ++i) {
    if (f.omega.coeffs[i] == 0) continue;
    if (nonzero >= 0 || f.omega.coeffs[i] != 1)
      throw std::invalid_argument(
          "matrix realizations cover A_1 weights and fundamental weights of A_n only");
    nonzero = i;
  }
  return sln_wedge(f.rs.rank + 1, nonzero + 1);
}

std::vector<GaussianRational> lambda_block(const std::vector<GaussianRational>& lam, int offset,
                                           int count) {
  return {lam.begin() + offset, lam.begin() + offset + count};
}

// exact induced eigenvalues per coordinate, weight-map order for flag factors
std::vector<GaussianRational> exact_block_eigenvalues(const FactorContext& f,
                                                      const std::vector<GaussianRational>& block) {
  std::vector<GaussianRational> out;
  if (f.is_matrix) {
    for (Eigen::Index i = 0; i < f.matrix.entries.rows(); ++i) {
      GaussianRational acc;
      for (Eigen::Index j = 0; j < f.matrix.entries.cols(); ++j)
        acc += block[static_cast<std::size_t>(j)] *
               GaussianRational(Rational(f.matrix.entries(i, j)));
      out.push_back(acc);
    }
    return out;
  }
  for (const auto& [mu, m] : f.std_data.weights.entries) {
    GaussianRational v = lambda_mu(f.std_data, block, mu);
    for (std::int64_t k = 0; k < m; ++k) out.push_back(v);
  }
  return out;
}

struct WorkbenchState {
  const RunConfig* cfg = nullptr;
  FactorContext f1, f2;
  std::optional<HyperbolicityReport> hyperbolic;

  const HyperbolicityReport& hyperbolicity() {
    if (!hyperbolic) hyperbolic = is_weakly_hyperbolic(cfg->semisimple, f1.n_torus, f2.n_torus);
    return *hyperbolic;
  }
  void require_flag_factors(const std::string& cmd) const {
    if (f1.is_matrix || f2.is_matrix)
      throw std::invalid_argument(cmd + " requires flag-variety factors");
  }
  std::vector<UnipotentTerm> unipotent_terms() const {
    std::vector<UnipotentTerm> terms;
    for (const auto& u : cfg->unipotent)
      terms.push_back(UnipotentTerm{u.block, root_of(u.root), u.coeff});
    return terms;
  }
};

ordered_json standardness_json(const StandardnessReport& rep) {
  return ordered_json{{"row_sums_constant", rep.row_sums_constant},
                      {"common_row_sum", rep.common_row_sum},
                      {"entries_nonneg", rep.entries_nonneg},
                      {"rank_full", rep.rank_full},
                      {"is_d_standard", rep.is_d_standard}};
}

ordered_json hyperbolicity_json(const HyperbolicityReport& rep) {
  ordered_json out{{"holds", rep.holds}};
  if (!rep.holds) {
    out["witness_i"] = rep.witness_i;
    if (rep.witness_j >= 0) out["witness_j"] = rep.witness_j;
    out["reason"] = rep.reason;
  }
  return out;
}

ordered_json cmd_check_standard(const FactorContext& f, Hypotheses& hyp, int index) {
  ordered_json out;
  if (f.is_matrix) {
    StandardnessReport rep = check_exponent_matrix(f.matrix);
    out["kind"] = "exponent_matrix";
    out["matrix"] = json_int_matrix(f.matrix.entries);
    out["report"] = standardness_json(rep);
    if (rep.is_d_standard)
      hyp.verified.push_back("factor " + std::to_string(index) + " action is d-standard, d = " +
                             std::to_string(rep.common_row_sum));
    else
      hyp.violated.push_back("factor " + std::to_string(index) +
                             " exponent matrix is not d-standard");
    return out;
  }
  out["kind"] = "flag_factor";
  out["root_system"] = ordered_json{{"series", std::string(1, static_cast<char>(f.rs.series))},
                                    {"rank", f.rs.rank},
                                    {"cartan", json_eigen_int_matrix(f.rs.cartan)}};
  ordered_json roots = ordered_json::array();
  for (const Root& r : f.rs.positive_roots) roots.push_back(json_int_vector(r));
  out["root_system"]["positive_roots"] = roots;
  out["omega"] = json_int_vector(f.omega.coeffs);
  out["d_prime"] = f.std_data.d_prime;
  out["d"] = f.std_data.d;
  ordered_json table = ordered_json::array();
  for (const auto& [mu, row] : f.std_data.exponent_table)
    table.push_back(ordered_json{{"weight", json_int_vector(mu.coeffs)},
                                 {"multiplicity", f.std_data.weights.multiplicity(mu)},
                                 {"exponents", json_int_vector(row)}});
  out["exponent_table"] = table;
  StandardnessReport rep = check_exponent_matrix(exponent_matrix_of(f.std_data));
  out["report"] = standardness_json(rep);
  if (!rep.is_d_standard || rep.common_row_sum != f.std_data.d)
    throw std::logic_error("standard extension failed its own standardness check");
  hyp.verified.push_back("factor " + std::to_string(index) +
                         " extended action is d-standard, d = " + std::to_string(f.std_data.d));
  return out;
}

ordered_json cmd_check_hyperbolic(WorkbenchState& st, Hypotheses& hyp) {
  const HyperbolicityReport& rep = st.hyperbolicity();
  if (rep.holds)
    hyp.verified.push_back("lambda_s satisfies weak hyperbolicity of type (" +
                           std::to_string(st.f1.n_torus) + "," + std::to_string(st.f2.n_torus) +
                           ")");
  else
    hyp.violated.push_back("lambda_s is not weakly hyperbolic: " + rep.reason);
  ordered_json out = hyperbolicity_json(rep);
  out["type"] = ordered_json::array({st.f1.n_torus, st.f2.n_torus});
  return out;
}

ordered_json cmd_spectrum(WorkbenchState& st, Hypotheses& hyp) {
  st.require_flag_factors("spectrum");
  if (!st.hyperbolicity().holds)
    hyp.violated.push_back("lambda_s is not weakly hyperbolic: " + st.hyperbolicity().reason);
  else
    hyp.verified.push_back("lambda_s weakly hyperbolic");
  InducedSpectrum spec = induced_spectrum(st.f1.std_data, st.f2.std_data, st.cfg->semisimple);
  ordered_json vals = ordered_json::array();
  for (const auto& [v, m] : spec.values)
    vals.push_back(ordered_json{{"value", v.str()}, {"multiplicity", m}});
  if (spec.report.holds)
    hyp.verified.push_back("induced eigenvalues satisfy weak hyperbolicity of type (" +
                           std::to_string(spec.r1) + "," + std::to_string(spec.r2) + ")");
  else
    hyp.violated.push_back("induced weak hyperbolicity failed: " + spec.report.reason);
  return ordered_json{{"r1", spec.r1},
                      {"r2", spec.r2},
                      {"values", vals},
                      {"induced_report", hyperbolicity_json(spec.report)}};
}

ordered_json cmd_vanishing(WorkbenchState& st, Hypotheses& hyp) {
  VanishingReport rep = vanishing_sets(st.f1.dim_x, st.f2.dim_x);
  hyp.assumed.push_back(
      "factors projective with very ample dual bundles and Cohen-Macaulay cones");
  return ordered_json{{"dim_x1", rep.dim_x1},
                      {"dim_x2", rep.dim_x2},
                      {"allowed_q_L", rep.allowed_q_L},
                      {"allowed_q_S", rep.allowed_q_S},
                      {"pic0", rep.pic0},
                      {"undetermined_degrees_note",
                       "degrees listed in allowed_q_S are possibly nonzero, not computed"}};
}

ordered_json cmd_picard(WorkbenchState& st, Hypotheses& hyp) {
  st.require_flag_factors("picard");
  bool m1 = st.f1.maximal_parabolic(), m2 = st.f2.maximal_parabolic();
  bool g1 = st.f1.generator_bundle(), g2 = st.f2.generator_bundle();
  PicardReport rep = picard_report(m1, m2, g1, g2, st.f1.dim_x, st.f2.dim_x);
  for (const auto& v : rep.verified) hyp.verified.push_back(v);
  for (const auto& v : rep.violations) hyp.violated.push_back(v);
  return ordered_json{{"maximal_parabolics", ordered_json::array({m1, m2})},
                      {"generator_bundles", ordered_json::array({g1, g2})},
                      {"pic0", rep.pic0},
                      {"pic", rep.pic},
                      {"asserted", rep.asserted}};
}

ordered_json cmd_kahler(WorkbenchState& st, Hypotheses& hyp) {
  (void)st;  // flag and projective-space factors satisfy both hypotheses
  KahlerVerdict v = kahler_obstruction(true, true);
  hyp.verified.push_back("H^1(X_1; R) = 0 (factor is simply connected)");
  hyp.verified.push_back("c_1(L_1) != 0 in H^2(X_1; R) (negative ample bundle)");
  return ordered_json{{"obstructed", v.obstructed}, {"verdict", v.verdict}};
}

ordered_json cmd_solve_eq9(WorkbenchState& st, Hypotheses& hyp) {
  std::vector<GaussianRational> b =
      exact_block_eigenvalues(st.f1, lambda_block(st.cfg->semisimple, 0, st.f1.n_torus));
  std::vector<GaussianRational> b2 = exact_block_eigenvalues(
      st.f2, lambda_block(st.cfg->semisimple, st.f1.n_torus, st.f2.n_torus));
  const int r1 = static_cast<int>(b.size());
  b.insert(b.end(), b2.begin(), b2.end());
  const int r = static_cast<int>(b.size());

  HyperbolicityReport rep = is_weakly_hyperbolic(b, r1, r - r1);
  if (rep.holds)
    hyp.verified.push_back("coefficient vector b is weakly hyperbolic of type (" +
                           std::to_string(r1) + "," + std::to_string(r - r1) + ")");
  else
    hyp.violated.push_back("coefficient vector b is not weakly hyperbolic: " + rep.reason);

  LaurentPoly f(r);
  if (st.cfg->eq9.present) {
    for (const auto& [m, c] : st.cfg->eq9.terms) f.add_term(m, c);
  } else {
    std::vector<int> m(static_cast<std::size_t>(r), 0);
    m[0] = 1;
    m[static_cast<std::size_t>(r1)] = 1;
    f.add_term(m, GaussianRational(Rational(1)));
  }
  LaurentPoly phi = solve_cohomological_equation(f, b);
  bool exact = apply_euler_operator(phi, b) == f;
  if (!exact) throw std::logic_error("eq9 residual is nonzero");
  hyp.verified.push_back("residual of the solved equation is identically zero (exact)");

  ordered_json terms = ordered_json::array();
  for (const auto& [m, c] : phi.terms())
    terms.push_back(ordered_json{{"m", m}, {"c", c.str()}});
  ordered_json bj = ordered_json::array();
  for (const auto& v : b) bj.push_back(v.str());
  return ordered_json{{"variables", r},
                      {"b", bj},
                      {"mode", phi.mode() == LaurentPoly::Mode::h1 ? "h1" : "holomorphic"},
                      {"phi", terms},
                      {"residual_zero", exact}};
}

ordered_json cmd_trdeg(WorkbenchState& st, Hypotheses& hyp) {
  st.require_flag_factors("trdeg");
  MonomialLattice lat =
      build_monomial_lattice(st.f1.parab, st.f2.parab, st.f1.std_data.weights,
                             st.f2.std_data.weights, st.f1.rs, st.f2.rs);
  WeightHom hom = weight_matrix(lat, st.f1.std_data, st.f2.std_data);

  TrdegHypotheses th;
  th.maximal_parabolics = st.f1.maximal_parabolic() && st.f2.maximal_parabolic();
  th.generator_bundles = st.f1.generator_bundle() && st.f2.generator_bundle();
  th.unipotent_zero = st.cfg->unipotent.empty();

  KernelBasis kb;
  bool generic = st.cfg->lambda_mode == "generic";
  if (generic) {
    kb = kernel_generic(hom);
    th.weakly_hyperbolic = true;
    hyp.assumed.push_back("generic mode: lambda_1..lambda_N treated as Q-independent symbols");
    if (!(kb.basis * hom.d).isZero())
      throw std::logic_error("generic kernel basis fails m^T D = 0");
    hyp.verified.push_back("kernel basis re-verified exactly: m^T D = 0");
  } else {
    const HyperbolicityReport& rep = st.hyperbolicity();
    if (!rep.holds) {
      hyp.violated.push_back("lambda_s is not weakly hyperbolic: " + rep.reason);
      return ordered_json{{"skipped", "weak hyperbolicity required for the specific-mode kernel"}};
    }
    th.weakly_hyperbolic = true;
    hyp.verified.push_back("lambda_s weakly hyperbolic");
    kb = kernel_specific(hom, st.cfg->semisimple);
    auto weights =
        generator_lambda_weights(lat, st.f1.std_data, st.f2.std_data, st.cfg->semisimple);
    for (Eigen::Index row = 0; row < kb.basis.rows(); ++row) {
      GaussianRational acc;
      for (Eigen::Index k = 0; k < kb.basis.cols(); ++k)
        acc += GaussianRational(Rational(kb.basis(row, k))) * weights[static_cast<std::size_t>(k)];
      if (!acc.is_zero()) throw std::logic_error("kernel basis fails wt_lambda(m) = 0");
    }
    hyp.verified.push_back("kernel basis re-verified exactly: wt_lambda(m) = 0");
  }

  TrdegResult res = transcendence_degree(kb, st.f1.dim_x, st.f2.dim_x, th);
  if (th.maximal_parabolics)
    hyp.verified.push_back("both parabolic subgroups are maximal");
  else
    hyp.assumed.push_back("non-maximal parabolic present; field verdict withheld");
  if (th.generator_bundles) hyp.verified.push_back("both bundles generate Pic(X_i)");
  if (th.unipotent_zero)
    hyp.verified.push_back("lambda_u = 0");
  else
    hyp.assumed.push_back("lambda_u != 0; field verdict withheld (conjectural case)");

  ordered_json gens = ordered_json::array();
  for (int k = 0; k < lat.rank; ++k)
    gens.push_back(ordered_json{
        {"name", lat.generator_names[static_cast<std::size_t>(k)]},
        {"block", lat.generator_block[static_cast<std::size_t>(k)]},
        {"weight", json_int_vector(lat.generator_weights[static_cast<std::size_t>(k)].coeffs)}});
  return ordered_json{{"mode", generic ? "generic" : "specific"},
                      {"lattice_rank", lat.rank},
                      {"generators", gens},
                      {"weight_matrix", json_int_matrix(hom.d)},
                      {"kernel_rank", kb.rank},
                      {"kernel_basis", json_int_matrix(kb.basis)},
                      {"transcendence_degree", res.degree},
                      {"scalar_type_identity", res.scalar_type_identity},
                      {"purely_transcendental", res.purely_transcendental},
                      {"notes", res.notes}};
}

ordered_json cmd_hilbert(WorkbenchState& st, Hypotheses& hyp) {
  ordered_json out = ordered_json::array();
  for (const FactorContext* f : {&st.f1, &st.f2}) {
    if (f->is_matrix) {
      out.push_back(ordered_json{{"note", "not applicable to an exponent-matrix factor"}});
      continue;
    }
    auto dims = hilbert_series_cone(f->rs, f->omega, st.cfg->experiment.hilbert_kmax);
    out.push_back(ordered_json{{"omega", json_int_vector(f->omega.coeffs)}, {"dims", dims}});
  }
  hyp.verified.push_back("graded dimensions computed by the Weyl dimension formula");
  return ordered_json{{"factors", out}};
}

ordered_json cmd_simulate_orbits(WorkbenchState& st, Hypotheses& hyp, std::string* csv_out) {
  if (st.f1.is_matrix != st.f2.is_matrix)
    throw std::invalid_argument("simulate-orbits requires both factors of the same kind");
  if (!st.hyperbolicity().holds) {
    hyp.violated.push_back("lambda_s is not weakly hyperbolic: " + st.hyperbolicity().reason);
    return ordered_json{{"skipped", "weak hyperbolicity is a precondition of the orbit theorems"}};
  }
  hyp.verified.push_back("lambda_s weakly hyperbolic");

  const ExperimentConfig& x = st.cfg->experiment;
  FlowTolerances tols;
  tols.tol = x.tol;
  tols.agree = x.agree;
  tols.jac_min = x.jac_min;

  std::function<Eigen::VectorXcd(std::uint64_t)> sampler;
  std::function<FlowSpec(const Rational&)> spec_for_eps;  // for the sweep
  FlowSpec spec;  // the configured-epsilon spec used by the main experiment

  if (st.f1.is_matrix) {
    if (!st.cfg->unipotent.empty())
      throw std::invalid_argument("unipotent terms require flag factors");
    spec = make_flow_spec(st.f1.matrix, st.f2.matrix, st.cfg->semisimple);
    const int r = spec.r1 + spec.r2;
    const double scale = x.sample_scale;
    sampler = [r, scale](std::uint64_t seed) {
      Rng rng(seed);
      Eigen::VectorXcd p(r);
      for (int k = 0; k < r; ++k)
        p[k] = std::polar(std::exp(rng.uniform(-scale, scale)),
                          rng.uniform(0.0, 2.0 * std::numbers::pi));
      return p;
    };
    spec_for_eps = [spec](const Rational&) { return spec; };
  } else {
    auto real1 = std::make_shared<Realization>(realization_for(st.f1));
    auto real2 = std::make_shared<Realization>(realization_for(st.f2));
    auto terms = st.unipotent_terms();
    LambdaParam lp = make_lambda_param(st.f1.rs, st.f2.rs, st.cfg->semisimple,
                                       scale_unipotent(terms, x.epsilon).terms);
    if (!terms.empty())
      hyp.verified.push_back("Jordan commuting condition checked exactly for lambda_u");
    spec = make_flow_spec(st.f1.std_data, st.f2.std_data, *real1, *real2, lp);
    const double scale = x.sample_scale;
    sampler = [real1, real2, scale](std::uint64_t seed) {
      ConePoint p1 = sample_cone_point(*real1, scale, mix_seed(seed, 17));
      ConePoint p2 = sample_cone_point(*real2, scale, mix_seed(seed, 23));
      Eigen::VectorXcd p(p1.coords.size() + p2.coords.size());
      p << p1.coords, p2.coords;
      return p;
    };
    const RootSystem rs1 = st.f1.rs, rs2 = st.f2.rs;
    const StandardTorusData sd1 = st.f1.std_data, sd2 = st.f2.std_data;
    const auto lam = st.cfg->semisimple;
    spec_for_eps = [=](const Rational& eps) {
      LambdaParam scaled =
          make_lambda_param(rs1, rs2, lam, scale_unipotent(terms, GaussianRational(eps)).terms);
      return make_flow_spec(sd1, sd2, *real1, *real2, scaled);
    };
  }

  auto rows = run_orbit_experiment(spec, sampler, x.samples, x.seed, tols);
  *csv_out = orbit_rows_to_csv(rows);

  int converged = 0, unique = 0, transversal = 0;
  double max_residual = 0.0;
  double min_abs_det = std::numeric_limits<double>::infinity();
  for (const auto& r : rows) {
    if (r.result.converged) {
      ++converged;
      max_residual = std::max({max_residual, r.result.residual[0], r.result.residual[1]});
      min_abs_det = std::min(min_abs_det, std::abs(r.result.jacobian_det));
    }
    if (r.result.unique) ++unique;
    if (r.result.transversal) ++transversal;
  }
  ordered_json orbit{{"samples", x.samples},
                     {"converged", converged},
                     {"unique", unique},
                     {"transversal", transversal},
                     {"max_residual", max_residual},
                     {"min_abs_jacobian_det", converged ? min_abs_det : 0.0}};

  std::vector<Eigen::VectorXcd> ps;
  std::vector<std::complex<double>> zs;
  for (int k = 0; k < x.freeness_pairs; ++k) {
    std::uint64_t seed = mix_seed(x.seed ^ 0xf5eeULL, static_cast<std::uint64_t>(k));
    ps.push_back(sampler(seed));
    Rng rng(mix_seed(seed, 99));
    double radius = std::exp(rng.uniform(std::log(1e-3), std::log(10.0)));
    zs.push_back(std::polar(radius, rng.uniform(0.0, 2.0 * std::numbers::pi)));
  }
  FreenessReport fr = check_freeness(spec, ps, zs);
  ordered_json freeness{{"pairs", fr.pairs},
                        {"min_margin", fr.min_margin},
                        {"suspect_indices", fr.suspect_indices},
                        {"ok", fr.ok}};

  std::vector<std::complex<double>> dirs;
  for (int k = 0; k < 8; ++k) dirs.push_back(std::polar(1.0, 2.0 * std::numbers::pi * k / 8.0));
  DivergenceReport dv = divergence_check(spec, sampler(mix_seed(x.seed, 0)), dirs);
  ordered_json rays = ordered_json::array();
  for (const auto& ray : dv.rays)
    rays.push_back(ordered_json{{"dir_re", ray.direction.real()},
                                {"dir_im", ray.direction.imag()},
                                {"log_min_norm", ray.log_min_norm},
                                {"log_max_norm", ray.log_max_norm},
                                {"diverged", ray.diverged}});
  ordered_json divergence{{"all_diverged", dv.all_diverged}, {"rays", rays}};

  ordered_json out{{"orbit", orbit}, {"freeness", freeness}, {"divergence", divergence}};

  if (x.epsilon_policy == "sweep") {
    if (st.cfg->unipotent.empty()) {
      out["epsilon_sweep"] = ordered_json{{"note", "no unipotent part; sweep skipped"}};
    } else {
      int sweep_samples = std::min(x.samples, 40);
      EpsilonSweepResult sw =
          epsilon_threshold_search(spec_for_eps, sampler, sweep_samples, x.seed, tols);
      ordered_json tested = ordered_json::array();
      for (const auto& [eps, ok] : sw.tested)
        tested.push_back(ordered_json{{"epsilon", eps}, {"success", ok}});
      out["epsilon_sweep"] =
          ordered_json{{"threshold", sw.threshold}, {"monotone", sw.monotone}, {"tested", tested}};
      hyp.verified.push_back("epsilon threshold measured empirically, not extrapolated");
    }
  }
  return out;
}

}  // namespace

namespace {
RunConfig parse_config_json(const nlohmann::json& j);
}  // namespace

RunConfig parse_config(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("config parse error: ") + e.what());
  }
  try {
    return parse_config_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("config validation error: ") + e.what());
  }
}

namespace {

RunConfig parse_config_json(const nlohmann::json& j) {
  check_keys(j, {"factor1", "factor2", "lambda", "experiment", "eq9", "commands"}, "config");

  RunConfig cfg;
  cfg.factor1 = parse_factor(j.at("factor1"), "factor1");
  cfg.factor2 = parse_factor(j.at("factor2"), "factor2");

  const auto& lam = j.at("lambda");
  check_keys(lam, {"semisimple", "unipotent", "mode"}, "lambda");
  for (const auto& entry : lam.at("semisimple"))
    cfg.semisimple.push_back(parse_gr_field(entry, "lambda.semisimple"));
  if (lam.contains("unipotent")) {
    for (const auto& u : lam.at("unipotent")) {
      check_keys(u, {"block", "root", "coeff"}, "lambda.unipotent");
      UnipotentConfig uc;
      uc.block = u.at("block").get<int>();
      uc.root = u.at("root").get<std::vector<int>>();
      uc.coeff = parse_gr_field(u.at("coeff"), "lambda.unipotent.coeff");
      cfg.unipotent.push_back(uc);
    }
  }
  if (lam.contains("mode")) {
    cfg.lambda_mode = lam.at("mode").get<std::string>();
    if (cfg.lambda_mode != "specific" && cfg.lambda_mode != "generic")
      throw std::invalid_argument("lambda.mode must be \"specific\" or \"generic\"");
  }

  if (j.contains("experiment")) {
    const auto& e = j.at("experiment");
    check_keys(e,
               {"seed", "samples", "tol", "agree", "jac_min", "epsilon_policy", "epsilon",
                "hilbert_kmax", "sample_scale", "freeness_pairs"},
               "experiment");
    ExperimentConfig& x = cfg.experiment;
    if (e.contains("seed")) x.seed = e.at("seed").get<std::uint64_t>();
    if (e.contains("samples")) x.samples = e.at("samples").get<int>();
    if (e.contains("tol")) x.tol = e.at("tol").get<double>();
    if (e.contains("agree")) x.agree = e.at("agree").get<double>();
    if (e.contains("jac_min")) x.jac_min = e.at("jac_min").get<double>();
    if (e.contains("epsilon_policy")) {
      x.epsilon_policy = e.at("epsilon_policy").get<std::string>();
      if (x.epsilon_policy != "fixed" && x.epsilon_policy != "sweep")
        throw std::invalid_argument("experiment.epsilon_policy must be \"fixed\" or \"sweep\"");
    }
    if (e.contains("epsilon")) x.epsilon = parse_gr_field(e.at("epsilon"), "experiment.epsilon");
    if (e.contains("hilbert_kmax")) x.hilbert_kmax = e.at("hilbert_kmax").get<int>();
    if (e.contains("sample_scale")) x.sample_scale = e.at("sample_scale").get<double>();
    if (e.contains("freeness_pairs")) x.freeness_pairs = e.at("freeness_pairs").get<int>();
  }

  if (j.contains("eq9")) {
    const auto& e = j.at("eq9");
    check_keys(e, {"terms"}, "eq9");
    cfg.eq9.present = true;
    for (const auto& t : e.at("terms")) {
      check_keys(t, {"m", "c"}, "eq9.terms");
      cfg.eq9.terms.emplace_back(t.at("m").get<std::vector<int>>(),
                                 parse_gr_field(t.at("c"), "eq9.terms.c"));
    }
  }

  for (const auto& c : j.at("commands")) {
    std::string name = c.get<std::string>();
    if (!kCommands.count(name)) throw std::invalid_argument("unknown command \"" + name + "\"");
    cfg.commands.push_back(name);
  }

  auto torus_cols = [](const FactorConfig& f) {
    return f.is_matrix ? static_cast<int>(f.matrix.front().size()) : f.rank + 1;
  };
  int n1 = torus_cols(cfg.factor1), n2 = torus_cols(cfg.factor2);
  if (static_cast<int>(cfg.semisimple.size()) != n1 + n2)
    throw std::invalid_argument("lambda.semisimple must have length " + std::to_string(n1 + n2));
  for (const auto& u : cfg.unipotent) {
    if (u.block != 1 && u.block != 2) throw std::invalid_argument("unipotent block must be 1 or 2");
    const FactorConfig& f = u.block == 1 ? cfg.factor1 : cfg.factor2;
    if (f.is_matrix) throw std::invalid_argument("unipotent terms require a flag factor");
    RootSystem rs = build_root_system(series_from_char(f.series), f.rank);
    if (!rs.is_positive_root(root_of(u.root)))
      throw std::invalid_argument("unipotent root is not a positive root of factor " +
                                  std::to_string(u.block));
  }
  return cfg;
}

}  // namespace

std::string emit_config(const RunConfig& config) {
  ordered_json j;
  auto factor_json = [](const FactorConfig& f) {
    ordered_json out;
    if (f.is_matrix) {
      out["exponent_matrix"] = f.matrix;
    } else {
      out["series"] = std::string(1, f.series);
      out["rank"] = f.rank;
      out["omega"] = f.omega;
    }
    return out;
  };
  j["factor1"] = factor_json(config.factor1);
  j["factor2"] = factor_json(config.factor2);
  ordered_json lam;
  lam["semisimple"] = ordered_json::array();
  for (const auto& g : config.semisimple) lam["semisimple"].push_back(g.str());
  lam["unipotent"] = ordered_json::array();
  for (const auto& u : config.unipotent)
    lam["unipotent"].push_back(
        ordered_json{{"block", u.block}, {"root", u.root}, {"coeff", u.coeff.str()}});
  lam["mode"] = config.lambda_mode;
  j["lambda"] = lam;
  const ExperimentConfig& x = config.experiment;
  j["experiment"] = ordered_json{{"seed", x.seed},
                                 {"samples", x.samples},
                                 {"tol", x.tol},
                                 {"agree", x.agree},
                                 {"jac_min", x.jac_min},
                                 {"epsilon_policy", x.epsilon_policy},
                                 {"epsilon", x.epsilon.str()},
                                 {"hilbert_kmax", x.hilbert_kmax},
                                 {"sample_scale", x.sample_scale},
                                 {"freeness_pairs", x.freeness_pairs}};
  if (config.eq9.present) {
    ordered_json terms = ordered_json::array();
    for (const auto& [m, c] : config.eq9.terms)
      terms.push_back(ordered_json{{"m", m}, {"c", c.str()}});
    j["eq9"] = ordered_json{{"terms", terms}};
  }
  j["commands"] = config.commands;
  return j.dump(2) + "\n";
}

RunResult run(const RunConfig& config) {
  RunResult result;
  result.report["config"] = ordered_json::parse(emit_config(config));
  result.report["commands"] = ordered_json::array();

  WorkbenchState st;
  st.cfg = &config;
  bool violated_any = false;
  try {
    st.f1 = build_factor(config.factor1);
    st.f2 = build_factor(config.factor2);
  } catch (const std::exception& e) {
    result.report["error"] = std::string("factor construction: ") + e.what();
    result.exit_code = 1;
    return result;
  }

  for (const std::string& cmd : config.commands) {
    ordered_json entry;
    entry["command"] = cmd;
    Hypotheses hyp;
    try {
      ordered_json res;
      if (cmd == "check-standard") {
        res = ordered_json{{"factor1", cmd_check_standard(st.f1, hyp, 1)},
                           {"factor2", cmd_check_standard(st.f2, hyp, 2)}};
      } else if (cmd == "check-hyperbolic") {
        res = cmd_check_hyperbolic(st, hyp);
      } else if (cmd == "spectrum") {
        res = cmd_spectrum(st, hyp);
      } else if (cmd == "vanishing") {
        res = cmd_vanishing(st, hyp);
      } else if (cmd == "picard") {
        res = cmd_picard(st, hyp);
      } else if (cmd == "kahler") {
        res = cmd_kahler(st, hyp);
      } else if (cmd == "solve-eq9") {
        res = cmd_solve_eq9(st, hyp);
      } else if (cmd == "trdeg") {
        res = cmd_trdeg(st, hyp);
      } else if (cmd == "simulate-orbits") {
        res = cmd_simulate_orbits(st, hyp, &result.csv);
      } else if (cmd == "hilbert") {
        res = cmd_hilbert(st, hyp);
      }
      entry["result"] = res;
      entry["hypotheses"] = hyp.to_json();
      if (!hyp.violated.empty()) violated_any = true;
      result.report["commands"].push_back(entry);
    } catch (const std::exception& e) {
      entry["error"] = e.what();
      entry["hypotheses"] = hyp.to_json();
      result.report["commands"].push_back(entry);
      result.report["error"] = "command \"" + cmd + "\" failed: " + e.what();
      result.exit_code = 1;
      return result;  // partial report with the completed commands
    }
  }
  result.exit_code = violated_any ? 2 : 0;
  return result;
}

std::vector<std::string> preset_names() {
  return {"calabi-eckmann-p1p1", "grassmannian-24-p3", "flag-a2"};
}

RunConfig preset(const std::string& name) {
  const std::vector<std::string> all_commands = {
      "check-standard", "check-hyperbolic", "spectrum", "vanishing",       "picard",
      "kahler",         "solve-eq9",        "trdeg",    "simulate-orbits", "hilbert"};
  RunConfig cfg;
  cfg.commands = all_commands;
  if (name == "calabi-eckmann-p1p1") {
    cfg.factor1 = FactorConfig{false, 'A', 1, {1}, {}};
    cfg.factor2 = FactorConfig{false, 'A', 1, {1}, {}};
    cfg.semisimple = {GaussianRational(Rational(1)), GaussianRational(Rational(1)),
                      GaussianRational::i(), GaussianRational::i()};
    return cfg;
  }
  if (name == "grassmannian-24-p3") {
    cfg.factor1 = FactorConfig{false, 'A', 3, {0, 1, 0}, {}};
    cfg.factor2 = FactorConfig{false, 'A', 3, {1, 0, 0}, {}};
    for (int k = 0; k < 4; ++k) cfg.semisimple.push_back(GaussianRational(Rational(1)));
    for (int k = 0; k < 4; ++k) cfg.semisimple.push_back(GaussianRational::i());
    cfg.experiment.samples = 100;
    return cfg;
  }
  if (name == "flag-a2") {
    cfg.factor1 = FactorConfig{false, 'A', 2, {1, 1}, {}};
    cfg.factor2 = FactorConfig{false, 'A', 1, {1}, {}};
    for (int k = 0; k < 3; ++k) cfg.semisimple.push_back(GaussianRational(Rational(1)));
    for (int k = 0; k < 2; ++k) cfg.semisimple.push_back(GaussianRational::i());
    cfg.commands = {"check-standard", "check-hyperbolic", "spectrum", "vanishing", "picard",
                    "kahler",         "solve-eq9",        "trdeg",    "hilbert"};
    return cfg;
  }
  throw std::invalid_argument("unknown preset \"" + name + "\"");
}

}  // namespace cbundle
