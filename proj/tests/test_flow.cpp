#include <doctest.h>

#include <cmath>

#include "cbundle/flow.hpp"
#include "cbundle/rng.hpp"

using namespace cbundle;

namespace {

using cd = std::complex<double>;

ExponentMatrix structure_group(int n) {
  ExponentMatrix m;
  m.entries = IntMatrix::Ones(n, 1);
  return m;
}

// scalar Hopf/Calabi-Eckmann model on (C^2 \ 0)^2: diag = (1, 1, i, i)
FlowSpec scalar_spec() {
  return make_flow_spec(structure_group(2), structure_group(2),
                        {GaussianRational(Rational(1)), GaussianRational::i()});
}

// full-torus Calabi-Eckmann model: diag = (6, 6, 6i, 6i)
FlowSpec ce_spec(const std::vector<UnipotentTerm>& uni = {}) {
  RootSystem a1 = build_root_system(Series::A, 1);
  StandardTorusData sd = extend_to_standard(a1, Weight{1});
  Realization real = sl2_irrep(1);
  GaussianRational one(Rational(1)), i = GaussianRational::i();
  LambdaParam lp = make_lambda_param(a1, a1, {one, one, i, i}, uni);
  return make_flow_spec(sd, sd, real, real, lp);
}

Eigen::VectorXcd point(std::initializer_list<cd> vals) {
  Eigen::VectorXcd p(static_cast<Eigen::Index>(vals.size()));
  Eigen::Index k = 0;
  for (cd v : vals) p[k++] = v;
  return p;
}

Eigen::VectorXcd random_point(Rng& rng, int n) {
  Eigen::VectorXcd p(n);
  for (int k = 0; k < n; ++k)
    p[k] = std::polar(std::exp(rng.uniform(-1.0, 1.0)), rng.uniform(0.0, 6.28));
  return p;
}

}  // namespace

TEST_CASE("flow at z = 0 is the identity and obeys the group law") {
  FlowSpec spec = ce_spec();
  Rng rng(3);
  for (int t = 0; t < 30; ++t) {
    Eigen::VectorXcd p = random_point(rng, 4);
    CHECK((flow_point(spec, p, cd(0.0, 0.0)) - p).norm() == 0.0);
    cd z = rng.complex_in_square(1.0), w = rng.complex_in_square(1.0);
    Eigen::VectorXcd two_step = flow_point(spec, flow_point(spec, p, w), z);
    Eigen::VectorXcd one_step = flow_point(spec, p, z + w);
    CHECK((two_step - one_step).norm() / one_step.norm() < 1e-10);
  }
}

TEST_CASE("scalar block scaling law") {
  FlowSpec spec = ce_spec();
  Eigen::VectorXcd p = point({cd(1.0, 0.0), cd(0.5, 0.5), cd(0.0, 1.0), cd(0.2, 0.0)});
  // block 1 carries lambda_mu = 6, so z = -1 scales its norm by e^{-6}
  Eigen::VectorXcd q = flow_point(spec, p, cd(-1.0, 0.0));
  CHECK(q.head(2).norm() == doctest::Approx(std::exp(-6.0) * p.head(2).norm()).epsilon(1e-12));
}

TEST_CASE("fundamental vector field matches finite differences") {
  RootSystem a1 = build_root_system(Series::A, 1);
  Root alpha = Eigen::VectorXi::Ones(1);
  FlowSpec spec = ce_spec({{1, alpha, GaussianRational(Rational(1, 2))}});
  Rng rng(9);
  for (int t = 0; t < 20; ++t) {
    Eigen::VectorXcd p = random_point(rng, 4);
    Eigen::VectorXcd v = fundamental_field(spec, p);
    double h = 1e-6;
    Eigen::VectorXcd fd =
        (flow_point(spec, p, cd(h, 0.0)) - flow_point(spec, p, cd(-h, 0.0))) / (2.0 * h);
    CHECK((v - fd).norm() < 1e-7 * std::max(1.0, v.norm()));
  }
  // eigen-case: a point supported on one weight line
  FlowSpec diag = ce_spec();
  Eigen::VectorXcd e0 = point({cd(1.0, 0.0), cd(0.0, 0.0), cd(0.0, 0.0), cd(1.0, 0.0)});
  Eigen::VectorXcd v = fundamental_field(diag, e0);
  CHECK(v[0] == cd(6.0, 0.0));   // lambda_mu = 6
  CHECK(v[3] == cd(0.0, 6.0));   // lambda_mu = 6i
}

TEST_CASE("closed-form anchor: scalar case hits z* = -1 exactly") {
  FlowSpec spec = scalar_spec();
  // ||p1|| = e, ||p2|| = 1 forces Re z = -log||p1|| = -1, Im z = 0
  Eigen::VectorXcd p =
      point({cd(std::exp(1.0), 0.0), cd(0.0, 0.0), cd(0.0, 1.0), cd(0.0, 0.0)});
  FlowTolerances tols;
  tols.tol = 1e-13;
  OrbitSolveResult res = solve_orbit_intersection(spec, p, tols);
  REQUIRE(res.converged);
  CHECK(res.unique);
  CHECK(res.transversal);
  CHECK(std::abs(res.z_star - cd(-1.0, 0.0)) < 1e-12);
}

TEST_CASE("points already on S(L) solve at z* = 0") {
  FlowSpec spec = ce_spec();
  Eigen::VectorXcd p = point({cd(0.6, 0.0), cd(0.8, 0.0), cd(0.0, 1.0), cd(0.0, 0.0)});
  OrbitSolveResult res = solve_orbit_intersection(spec, p);
  REQUIRE(res.converged);
  CHECK(std::abs(res.z_star) < 1e-9);
  CHECK(res.unique);

  // transversality jacobian is definite there: diag(6, -6)
  double det = transversality_jacobian(spec, p, cd(0.0, 0.0));
  CHECK(det == doctest::Approx(-36.0).epsilon(1e-9));
  CHECK_THROWS_AS(transversality_jacobian(spec, p, cd(1.0, 0.0)), std::domain_error);
}

TEST_CASE("orbit solving over random cone points") {
  FlowSpec spec = ce_spec();
  Rng rng(21);
  for (int t = 0; t < 50; ++t) {
    Eigen::VectorXcd p = random_point(rng, 4);
    OrbitSolveResult res = solve_orbit_intersection(spec, p);
    REQUIRE(res.converged);
    CHECK(res.unique);
    CHECK(res.transversal);
    CHECK(res.residual[0] < 1e-9);
    CHECK(res.residual[1] < 1e-9);
  }
}

TEST_CASE("non-hyperbolic data degrades as the theory predicts") {
  // lambda = (1, 1): both blocks on the positive real axis
  FlowSpec bad = make_flow_spec(structure_group(2), structure_group(2),
                                {GaussianRational(Rational(1)), GaussianRational(Rational(1))});
  Rng rng(4);
  Eigen::VectorXcd p = random_point(rng, 4);
  OrbitSolveResult res = solve_orbit_intersection(bad, p);
  // the log-norm jacobian is singular: no transversal unique solution exists
  CHECK_FALSE((res.converged && res.unique && res.transversal));

  // pure rotation lambda = (i, i): the flow along the real axis is unitary,
  // so those rays are flagged as non-divergent
  FlowSpec rot = make_flow_spec(structure_group(2), structure_group(2),
                                {GaussianRational::i(), GaussianRational::i()});
  std::vector<cd> dirs{cd(1.0, 0.0), cd(0.0, 1.0), cd(-1.0, 0.0), cd(0.0, -1.0)};
  DivergenceReport dv = divergence_check(rot, p, dirs);
  CHECK_FALSE(dv.all_diverged);
  CHECK_FALSE(dv.rays[0].diverged);
  CHECK_FALSE(dv.rays[2].diverged);
}

TEST_CASE("freeness margins on the Calabi-Eckmann model") {
  FlowSpec spec = ce_spec();
  Rng rng(17);
  std::vector<Eigen::VectorXcd> ps;
  std::vector<cd> zs;
  for (int k = 0; k < 100; ++k) {
    ps.push_back(random_point(rng, 4));
    double radius = std::exp(rng.uniform(std::log(1e-3), std::log(10.0)));
    zs.push_back(std::polar(radius, rng.uniform(0.0, 6.28)));
  }
  FreenessReport rep = check_freeness(spec, ps, zs);
  CHECK(rep.ok);
  CHECK(rep.min_margin > 1e-6);

  // z = 2 pi i rotates block 1 back to itself but contracts block 2
  Eigen::VectorXcd p = random_point(rng, 4);
  std::vector<Eigen::VectorXcd> one{p};
  std::vector<cd> z{cd(0.0, 2.0 * 3.14159265358979323846 / 6.0)};
  FreenessReport rot = check_freeness(spec, one, z);
  CHECK(rot.min_margin > 1e-3);

  std::vector<cd> zero{cd(0.0, 0.0)};
  CHECK_THROWS_AS(check_freeness(spec, one, zero), std::domain_error);
}

TEST_CASE("orbits diverge along rays for weakly hyperbolic data") {
  FlowSpec spec = ce_spec();
  Rng rng(8);
  Eigen::VectorXcd p = random_point(rng, 4);
  std::vector<cd> dirs;
  for (int k = 0; k < 8; ++k) dirs.push_back(std::polar(1.0, 6.2831853 * k / 8.0));
  DivergenceReport dv = divergence_check(spec, p, dirs);
  CHECK(dv.all_diverged);
}

TEST_CASE("closed-form flow values on the scalar model") {
  FlowSpec spec = scalar_spec();
  Eigen::VectorXcd p = point({cd(0.3, 0.4), cd(-0.2, 0.1), cd(0.5, 0.0), cd(0.0, 0.7)});
  // z = 2 pi i fixes block 1 (exp(2 pi i) = 1) and contracts block 2 by e^{-2 pi}
  cd z(0.0, 2.0 * 3.14159265358979323846);
  Eigen::VectorXcd q = flow_point(spec, p, z);
  CHECK((q.head(2) - p.head(2)).norm() < 1e-13);
  CHECK((q.tail(2) - std::exp(-2.0 * 3.14159265358979323846) * p.tail(2)).norm() < 1e-13);
}

TEST_CASE("experiment runner honors the thread-count override") {
  FlowSpec spec = ce_spec();
  auto sampler = [](std::uint64_t seed) {
    Rng rng(seed);
    Eigen::VectorXcd p(4);
    for (int k = 0; k < 4; ++k)
      p[k] = std::polar(std::exp(rng.uniform(-1.0, 1.0)), rng.uniform(0.0, 6.28));
    return p;
  };
  auto serial = run_orbit_experiment(spec, sampler, 16, 9);
  setenv("CBUNDLE_THREADS", "3", 1);
  auto parallel = run_orbit_experiment(spec, sampler, 16, 9);
  unsetenv("CBUNDLE_THREADS");
  CHECK(orbit_rows_to_csv(serial) == orbit_rows_to_csv(parallel));
}

TEST_CASE("experiment runner is deterministic and order independent") {
  FlowSpec spec = ce_spec();
  auto sampler = [](std::uint64_t seed) {
    Rng rng(seed);
    Eigen::VectorXcd p(4);
    for (int k = 0; k < 4; ++k)
      p[k] = std::polar(std::exp(rng.uniform(-1.0, 1.0)), rng.uniform(0.0, 6.28));
    return p;
  };
  auto rows1 = run_orbit_experiment(spec, sampler, 20, 5);
  auto rows2 = run_orbit_experiment(spec, sampler, 20, 5);
  REQUIRE(rows1.size() == rows2.size());
  for (std::size_t k = 0; k < rows1.size(); ++k) {
    CHECK(rows1[k].seed == rows2[k].seed);
    CHECK(rows1[k].result.z_star == rows2[k].result.z_star);
  }
  CHECK(orbit_rows_to_csv(rows1) == orbit_rows_to_csv(rows2));
}

TEST_CASE("unipotent flow keeps the group law and block structure") {
  RootSystem a1 = build_root_system(Series::A, 1);
  Root alpha = Eigen::VectorXi::Ones(1);
  FlowSpec spec = ce_spec({{1, alpha, GaussianRational(Rational(1))}});
  CHECK(spec.has_nilpotent);
  // nonzero entries only in block 1, strictly upper
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (spec.nilpotent(i, j) != cd(0.0, 0.0)) {
        CHECK(i < j);
        CHECK(i < 2);
        CHECK(j < 2);
      }
  Rng rng(31);
  for (int t = 0; t < 10; ++t) {
    Eigen::VectorXcd p = random_point(rng, 4);
    cd z = rng.complex_in_square(0.8), w = rng.complex_in_square(0.8);
    Eigen::VectorXcd a = flow_point(spec, flow_point(spec, p, w), z);
    Eigen::VectorXcd b = flow_point(spec, p, z + w);
    CHECK((a - b).norm() / b.norm() < 1e-10);
  }
}

TEST_CASE("transversality margin is continuous in epsilon and nonzero at 0") {
  RootSystem a1 = build_root_system(Series::A, 1);
  Root alpha = Eigen::VectorXi::Ones(1);
  Rng rng(41);
  Eigen::VectorXcd p = random_point(rng, 4);
  double det0 = 0.0;
  double prev = 0.0;
  for (int k = 0; k <= 4; ++k) {
    Rational eps(k, 20);  // 0, 1/20, ..., 1/5
    FlowSpec spec = ce_spec({{1, alpha, GaussianRational(eps)}});
    OrbitSolveResult res = solve_orbit_intersection(spec, p);
    REQUIRE(res.converged);
    double det = res.jacobian_det;
    if (k == 0) {
      det0 = det;
      CHECK(std::abs(det0) > 1e-8);
    } else {
      CHECK(std::abs(det - prev) < 0.25 * std::abs(det0));
    }
    prev = det;
  }
}

TEST_CASE("epsilon sweep reports a positive monotone threshold") {
  RootSystem a1 = build_root_system(Series::A, 1);
  Root alpha = Eigen::VectorXi::Ones(1);
  auto spec_for_eps = [&](const Rational& eps) {
    return ce_spec({{1, alpha, GaussianRational(eps)}});
  };
  auto sampler = [](std::uint64_t seed) {
    Rng rng(seed);
    Eigen::VectorXcd p(4);
    for (int k = 0; k < 4; ++k)
      p[k] = std::polar(std::exp(rng.uniform(-1.0, 1.0)), rng.uniform(0.0, 6.28));
    return p;
  };
  EpsilonSweepResult sw = epsilon_threshold_search(spec_for_eps, sampler, 10, 2);
  CHECK(sw.threshold > 0.0);
  CHECK(sw.monotone);
}
