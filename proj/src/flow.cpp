#include "cbundle/flow.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>
#include <mutex>
#include <thread>

#include "cbundle/rng.hpp"

namespace cbundle {

namespace {

constexpr double kExpCap = 700.0;  // saturate instead of overflowing doubles

std::complex<double> exp_saturated(std::complex<double> w) {
  if (w.real() > kExpCap) w.real(kExpCap);
  return std::exp(w);
}

// exp(z N) p for strictly triangular N; terminates exactly
Eigen::VectorXcd nilpotent_flow(const FlowSpec& spec, const Eigen::VectorXcd& p,
                                std::complex<double> z) {
  if (!spec.has_nilpotent) return p;
  Eigen::VectorXcd acc = p, term = p;
  for (int j = 1; j <= spec.diag.size(); ++j) {
    term = (z / static_cast<double>(j)) * (spec.nilpotent * term);
    if (term.isZero(0.0)) break;
    acc += term;
  }
  return acc;
}

struct BlockState {
  std::array<double, 2> g;         // log ||p_i(z)||
  std::array<double, 2> gx, gy;    // d/d(Re z), d/d(Im z) of g
};

// scale-invariant per-block evaluation of g and its derivatives; the common
// factor e^{s} per block cancels in every ratio
BlockState eval_blocks(const FlowSpec& spec, const Eigen::VectorXcd& p, std::complex<double> z) {
  const Eigen::Index n = spec.diag.size();
  Eigen::VectorXcd w = nilpotent_flow(spec, p, z);

  Eigen::VectorXd logmag(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    double a = std::abs(w[k]);
    logmag[k] = a == 0.0 ? -std::numeric_limits<double>::infinity()
                         : (z * spec.diag[k]).real() + std::log(a);
  }

  BlockState st{};
  for (int blk = 0; blk < 2; ++blk) {
    Eigen::Index lo = blk == 0 ? 0 : spec.r1;
    Eigen::Index hi = blk == 0 ? spec.r1 : n;
    double s = -std::numeric_limits<double>::infinity();
    for (Eigen::Index k = lo; k < hi; ++k) s = std::max(s, logmag[k]);
    if (std::isinf(s))
      throw std::domain_error("flow: block " + std::to_string(blk + 1) + " of the point is zero");

    Eigen::VectorXcd q = Eigen::VectorXcd::Zero(n);
    for (Eigen::Index k = lo; k < hi; ++k) {
      if (w[k] == std::complex<double>(0.0, 0.0)) continue;
      std::complex<double> expo = z * spec.diag[k] + std::log(w[k]);
      q[k] = std::exp(std::complex<double>(expo.real() - s, expo.imag()));
    }
    // q' = (Lambda + N) q restricted to the block (N is block diagonal)
    Eigen::VectorXcd qp = spec.diag.cwiseProduct(q);
    if (spec.has_nilpotent) qp += spec.nilpotent * q;

    double n2 = 0.0;
    std::complex<double> inner(0.0, 0.0);
    for (Eigen::Index k = lo; k < hi; ++k) {
      n2 += std::norm(q[k]);
      inner += std::conj(q[k]) * qp[k];
    }
    st.g[blk] = s + 0.5 * std::log(n2);
    st.gx[blk] = inner.real() / n2;
    st.gy[blk] = -inner.imag() / n2;
  }
  return st;
}

int env_thread_count() {
  const char* v = std::getenv("CBUNDLE_THREADS");
  if (!v) return 1;
  int n = std::atoi(v);
  return n > 1 ? n : 1;
}

}  // namespace

FlowSpec make_flow_spec(const StandardTorusData& std1, const StandardTorusData& std2,
                        const Realization& real1, const Realization& real2,
                        const LambdaParam& lambda) {
  if (lambda.n1 != std1.rank + 1 || lambda.n2 != std2.rank + 1)
    throw std::invalid_argument("lambda block sizes do not match the torus data");
  std::vector<GaussianRational> block1(lambda.semisimple.begin(),
                                       lambda.semisimple.begin() + lambda.n1);
  std::vector<GaussianRational> block2(lambda.semisimple.begin() + lambda.n1,
                                       lambda.semisimple.end());

  FlowSpec spec;
  spec.r1 = real1.dim;
  spec.r2 = real2.dim;
  const int n = spec.r1 + spec.r2;
  spec.diag.resize(n);
  std::vector<GaussianRational> exact(static_cast<std::size_t>(n));
  for (int k = 0; k < spec.r1; ++k) {
    exact[static_cast<std::size_t>(k)] =
        lambda_mu(std1, block1, real1.basis_weights[static_cast<std::size_t>(k)]);
    spec.diag[k] = exact[static_cast<std::size_t>(k)].to_complex();
  }
  for (int k = 0; k < spec.r2; ++k) {
    exact[static_cast<std::size_t>(spec.r1 + k)] =
        lambda_mu(std2, block2, real2.basis_weights[static_cast<std::size_t>(k)]);
    spec.diag[spec.r1 + k] = exact[static_cast<std::size_t>(spec.r1 + k)].to_complex();
  }

  spec.nilpotent = Eigen::MatrixXcd::Zero(n, n);
  for (const UnipotentTerm& t : lambda.unipotent) {
    if (t.coeff.is_zero()) continue;
    const Realization& real = t.block == 1 ? real1 : real2;
    const int off = t.block == 1 ? 0 : spec.r1;
    const IntMatrix& x = real.op_X(t.beta);
    for (int row = 0; row < real.dim; ++row) {
      for (int col = 0; col < real.dim; ++col) {
        if (x(row, col) == 0) continue;
        if (row >= col)
          throw std::logic_error("flow spec: raising operator is not strictly upper triangular");
        // block structure of lambda(omega_1, omega_2): nonzero entries may
        // only join coordinates with exactly equal induced eigenvalues
        if (exact[static_cast<std::size_t>(off + row)] != exact[static_cast<std::size_t>(off + col)])
          throw std::logic_error("flow spec: nilpotent part joins distinct eigenvalues");
        spec.nilpotent(off + row, off + col) +=
            t.coeff.to_complex() * static_cast<double>(x(row, col));
        spec.has_nilpotent = true;
      }
    }
  }
  return spec;
}

FlowSpec make_flow_spec(const ExponentMatrix& a1, const ExponentMatrix& a2,
                        const std::vector<GaussianRational>& lambda) {
  const Eigen::Index n1 = a1.entries.cols(), n2 = a2.entries.cols();
  if (static_cast<Eigen::Index>(lambda.size()) != n1 + n2)
    throw std::invalid_argument("lambda length does not match exponent matrix columns");
  FlowSpec spec;
  spec.r1 = static_cast<int>(a1.entries.rows());
  spec.r2 = static_cast<int>(a2.entries.rows());
  spec.diag.resize(spec.r1 + spec.r2);
  for (Eigen::Index i = 0; i < a1.entries.rows(); ++i) {
    GaussianRational acc;
    for (Eigen::Index j = 0; j < n1; ++j)
      acc += lambda[static_cast<std::size_t>(j)] * GaussianRational(Rational(a1.entries(i, j)));
    spec.diag[i] = acc.to_complex();
  }
  for (Eigen::Index i = 0; i < a2.entries.rows(); ++i) {
    GaussianRational acc;
    for (Eigen::Index j = 0; j < n2; ++j)
      acc += lambda[static_cast<std::size_t>(n1 + j)] *
             GaussianRational(Rational(a2.entries(i, j)));
    spec.diag[spec.r1 + i] = acc.to_complex();
  }
  spec.nilpotent = Eigen::MatrixXcd::Zero(spec.r1 + spec.r2, spec.r1 + spec.r2);
  return spec;
}

Eigen::VectorXcd flow_point(const FlowSpec& spec, const Eigen::VectorXcd& p,
                            std::complex<double> z) {
  if (z == std::complex<double>(0.0, 0.0)) return p;
  Eigen::VectorXcd w = nilpotent_flow(spec, p, z);
  Eigen::VectorXcd q(w.size());
  for (Eigen::Index k = 0; k < w.size(); ++k) {
    if (w[k] == std::complex<double>(0.0, 0.0)) {
      q[k] = 0.0;
      continue;
    }
    q[k] = exp_saturated(z * spec.diag[k] + std::log(w[k]));
  }
  return q;
}

Eigen::VectorXcd fundamental_field(const FlowSpec& spec, const Eigen::VectorXcd& p) {
  Eigen::VectorXcd v = spec.diag.cwiseProduct(p);
  if (spec.has_nilpotent) v += spec.nilpotent * p;
  return v;
}

std::array<double, 2> block_log_norms(const FlowSpec& spec, const Eigen::VectorXcd& p,
                                      std::complex<double> z) {
  return eval_blocks(spec, p, z).g;
}

namespace {

struct NewtonOutcome {
  bool converged = false;
  std::complex<double> z{};
  int iterations = 0;
  std::array<double, 2> residual{};
  double det = 0.0;
};

NewtonOutcome newton_from(const FlowSpec& spec, const Eigen::VectorXcd& p,
                          std::complex<double> z0, const FlowTolerances& tols) {
  NewtonOutcome out;
  std::complex<double> z = z0;
  BlockState st = eval_blocks(spec, p, z);
  for (int it = 0; it < tols.max_iterations; ++it) {
    double r0 = std::max(std::abs(std::expm1(st.g[0])), std::abs(std::expm1(st.g[1])));
    out.iterations = it;
    if (r0 < tols.tol) {
      out.converged = true;
      out.z = z;
      out.residual = {std::abs(std::expm1(st.g[0])), std::abs(std::expm1(st.g[1]))};
      out.det = st.gx[0] * st.gy[1] - st.gy[0] * st.gx[1];
      return out;
    }
    double det = st.gx[0] * st.gy[1] - st.gy[0] * st.gx[1];
    if (std::abs(det) < 1e-300) return out;  // singular jacobian, start failed
    double dx = (-st.g[0] * st.gy[1] + st.g[1] * st.gy[0]) / det;
    double dy = (-st.gx[0] * st.g[1] + st.gx[1] * st.g[0]) / det;
    double base = std::max(std::abs(st.g[0]), std::abs(st.g[1]));
    double alpha = 1.0;
    for (int halving = 0; halving < 30; ++halving) {
      std::complex<double> zn = z + alpha * std::complex<double>(dx, dy);
      BlockState stn = eval_blocks(spec, p, zn);
      double rn = std::max(std::abs(stn.g[0]), std::abs(stn.g[1]));
      if (rn < base) {
        z = zn;
        st = stn;
        break;
      }
      alpha *= 0.5;
      if (halving == 29) return out;  // no descent
    }
  }
  return out;
}

}  // namespace

OrbitSolveResult solve_orbit_intersection(const FlowSpec& spec, const Eigen::VectorXcd& p,
                                          const FlowTolerances& tols) {
  OrbitSolveResult res;
  std::vector<NewtonOutcome> roots;
  const double w = tols.grid_halfwidth;
  for (int gi = 0; gi < 5; ++gi) {
    for (int gj = 0; gj < 5; ++gj) {
      std::complex<double> z0(-w + gi * w / 2.0, -w + gj * w / 2.0);
      NewtonOutcome out = newton_from(spec, p, z0, tols);
      if (out.converged) roots.push_back(out);
    }
  }
  res.converged_starts = static_cast<int>(roots.size());
  if (roots.empty()) return res;  // solver failure; caller inspects converged
  res.converged = true;
  const NewtonOutcome& first = roots.front();
  res.z_star = first.z;
  res.iterations = first.iterations;
  res.residual = first.residual;
  res.jacobian_det = first.det;
  res.unique = true;
  for (const NewtonOutcome& r : roots)
    if (std::abs(r.z - first.z) > tols.agree) res.unique = false;
  res.transversal = std::abs(res.jacobian_det) > tols.jac_min;
  return res;
}

double transversality_jacobian(const FlowSpec& spec, const Eigen::VectorXcd& p,
                               std::complex<double> z, const FlowTolerances& tols) {
  BlockState st = eval_blocks(spec, p, z);
  for (int blk = 0; blk < 2; ++blk)
    if (std::abs(std::expm1(st.g[blk])) > 10 * tols.tol)
      throw std::domain_error("transversality_jacobian: point is not on S(L)");
  // at ||p_i|| = 1 the derivative of the norm equals the derivative of its log
  return st.gx[0] * st.gy[1] - st.gy[0] * st.gx[1];
}

FreenessReport check_freeness(const FlowSpec& spec, std::span<const Eigen::VectorXcd> samples,
                              std::span<const std::complex<double>> z_samples) {
  if (samples.size() != z_samples.size())
    throw std::invalid_argument("check_freeness: sample count mismatch");
  FreenessReport rep;
  rep.pairs = static_cast<int>(samples.size());
  rep.min_margin = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const Eigen::VectorXcd& p = samples[k];
    std::complex<double> z = z_samples[k];
    if (z == std::complex<double>(0.0, 0.0))
      throw std::domain_error("check_freeness: z = 0 excluded");
    std::array<double, 2> g = block_log_norms(spec, p, z);
    double n1 = p.head(spec.r1).norm(), n2 = p.tail(spec.r2).norm();
    double norm_gap = std::max(std::abs(std::expm1(g[0] - std::log(n1))),
                               std::abs(std::expm1(g[1] - std::log(n2))));
    double margin;
    if (norm_gap > 1.0) {
      margin = norm_gap;  // norms alone already separate the points
    } else {
      Eigen::VectorXcd q = flow_point(spec, p, z);
      margin = (q - p).norm() / p.norm();
    }
    margin = std::min(margin, 1e12);  // capped for reporting
    rep.min_margin = std::min(rep.min_margin, margin);
    if (margin < 1e-12) rep.suspect_indices.push_back(static_cast<int>(k));
  }
  rep.ok = rep.suspect_indices.empty();
  return rep;
}

DivergenceReport divergence_check(const FlowSpec& spec, const Eigen::VectorXcd& p,
                                  std::span<const std::complex<double>> directions) {
  const std::array<double, 3> radii{10.0, 20.0, 40.0};
  DivergenceReport rep;
  rep.all_diverged = true;
  for (std::complex<double> dir : directions) {
    DivergenceReport::Ray ray;
    ray.direction = dir / std::abs(dir);
    for (int t = 0; t < 3; ++t) {
      std::array<double, 2> g = block_log_norms(spec, p, radii[static_cast<std::size_t>(t)] * ray.direction);
      ray.log_min_norm[static_cast<std::size_t>(t)] = std::min(g[0], g[1]);
      ray.log_max_norm[static_cast<std::size_t>(t)] = std::max(g[0], g[1]);
    }
    bool shrink = ray.log_min_norm[2] < ray.log_min_norm[1] &&
                  ray.log_min_norm[1] < ray.log_min_norm[0] && ray.log_min_norm[2] < -5.0;
    bool grow = ray.log_max_norm[2] > ray.log_max_norm[1] &&
                ray.log_max_norm[1] > ray.log_max_norm[0] && ray.log_max_norm[2] > 5.0;
    ray.diverged = shrink || grow;
    rep.all_diverged = rep.all_diverged && ray.diverged;
    rep.rays.push_back(ray);
  }
  return rep;
}

std::vector<OrbitExperimentRow> run_orbit_experiment(
    const FlowSpec& spec, const std::function<Eigen::VectorXcd(std::uint64_t)>& sample,
    int n_samples, std::uint64_t base_seed, const FlowTolerances& tols) {
  std::vector<OrbitExperimentRow> rows(static_cast<std::size_t>(n_samples));
  auto work = [&](int index) {
    OrbitExperimentRow& row = rows[static_cast<std::size_t>(index)];
    row.index = index;
    row.seed = mix_seed(base_seed, static_cast<std::uint64_t>(index));
    row.result = solve_orbit_intersection(spec, sample(row.seed), tols);
  };
  int threads = env_thread_count();
  if (threads <= 1 || n_samples < 2) {
    for (int i = 0; i < n_samples; ++i) work(i);
  } else {
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([&] {
        try {
          for (int i = next.fetch_add(1); i < n_samples; i = next.fetch_add(1)) work(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      });
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
  }
  return rows;
}

std::string orbit_rows_to_csv(const std::vector<OrbitExperimentRow>& rows) {
  std::string csv = "sample,seed,z_re,z_im,residual1,residual2,jac_det,unique,converged\n";
  char buf[256];
  for (const OrbitExperimentRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%d,%llu,%.17g,%.17g,%.17g,%.17g,%.17g,%d,%d\n", r.index,
                  static_cast<unsigned long long>(r.seed), r.result.z_star.real(),
                  r.result.z_star.imag(), r.result.residual[0], r.result.residual[1],
                  r.result.jacobian_det, r.result.unique ? 1 : 0, r.result.converged ? 1 : 0);
    csv += buf;
  }
  return csv;
}

EpsilonSweepResult epsilon_threshold_search(
    const std::function<FlowSpec(const Rational&)>& spec_for_eps,
    const std::function<Eigen::VectorXcd(std::uint64_t)>& sample, int n_samples,
    std::uint64_t base_seed, const FlowTolerances& tols) {
  auto success_at = [&](const Rational& eps) {
    FlowSpec spec = spec_for_eps(eps);
    auto rows = run_orbit_experiment(spec, sample, n_samples, base_seed, tols);
    for (const auto& r : rows)
      if (!(r.result.converged && r.result.unique && r.result.transversal)) return false;
    return true;
  };

  EpsilonSweepResult out;
  std::vector<std::pair<Rational, bool>> tested;
  Rational lo(0), hi;
  bool have_failure = false;
  for (int k = 10; k >= 0; --k) {  // 2^-10 .. 1, ascending
    Rational eps(1, std::int64_t(1) << k);
    bool ok = success_at(eps);
    tested.emplace_back(eps, ok);
    if (ok) lo = eps;
    else if (!have_failure) {
      hi = eps;
      have_failure = true;
    }
  }
  if (have_failure && lo.sign() > 0) {
    for (int step = 0; step < 8; ++step) {
      Rational mid = (lo + hi) / Rational(2);
      bool ok = success_at(mid);
      tested.emplace_back(mid, ok);
      (ok ? lo : hi) = mid;
    }
  }
  out.threshold = lo.to_double();
  std::sort(tested.begin(), tested.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  bool seen_failure = false;
  for (const auto& [eps, ok] : tested) {
    out.tested.emplace_back(eps.to_double(), ok);
    if (!ok) seen_failure = true;
    else if (seen_failure) out.monotone = false;  // success above a failure
  }
  return out;
}

}  // namespace cbundle
