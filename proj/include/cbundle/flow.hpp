#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "cbundle/hyperbolicity.hpp"
#include "cbundle/realization.hpp"
#include "cbundle/standardize.hpp"

namespace cbundle {

struct FlowTolerances {
  double tol = 1e-9;       // residual on | ||p_i(z)|| - 1 |
  double agree = 1e-6;     // multi-start roots must coincide within this
  double jac_min = 1e-8;   // transversality margin
  int max_iterations = 80;
  double grid_halfwidth = 3.0;  // 5x5 start grid over [-w, w]^2
};

// C-action data on V(omega_1) x V(omega_2): per-coordinate eigenvalues plus a
// nilpotent block-diagonal part that commutes with them.
struct FlowSpec {
  Eigen::VectorXcd diag;
  Eigen::MatrixXcd nilpotent;  // strictly upper triangular, block diagonal
  int r1 = 0, r2 = 0;
  bool has_nilpotent = false;
};

FlowSpec make_flow_spec(const StandardTorusData& std1, const StandardTorusData& std2,
                        const Realization& real1, const Realization& real2,
                        const LambdaParam& lambda);
// diagonal-type action read off an exponent matrix per factor
FlowSpec make_flow_spec(const ExponentMatrix& a1, const ExponentMatrix& a2,
                        const std::vector<GaussianRational>& lambda);

// exp(z diag) exp(z nilpotent) p, computed coordinate-wise in log form;
// magnitudes saturate at e^700 instead of overflowing
Eigen::VectorXcd flow_point(const FlowSpec& spec, const Eigen::VectorXcd& p,
                            std::complex<double> z);
Eigen::VectorXcd fundamental_field(const FlowSpec& spec, const Eigen::VectorXcd& p);

// log ||p_i(z)|| per block, overflow-free
std::array<double, 2> block_log_norms(const FlowSpec& spec, const Eigen::VectorXcd& p,
                                      std::complex<double> z);

struct OrbitSolveResult {
  std::complex<double> z_star{0.0, 0.0};
  int iterations = 0;
  std::array<double, 2> residual{0.0, 0.0};  // | ||p_i(z*)|| - 1 |
  bool converged = false;
  int converged_starts = 0;
  bool unique = false;       // all converged starts agree within tolerance
  bool transversal = false;  // |jacobian_det| > jac_min
  double jacobian_det = 0.0;
};

OrbitSolveResult solve_orbit_intersection(const FlowSpec& spec, const Eigen::VectorXcd& p,
                                          const FlowTolerances& tols = {});

// determinant of d(||p_1||, ||p_2||)/d(Re z, Im z) at a point of S(L)
double transversality_jacobian(const FlowSpec& spec, const Eigen::VectorXcd& p,
                               std::complex<double> z, const FlowTolerances& tols = {});

struct FreenessReport {
  double min_margin = 0.0;  // relative lower bound on ||flow(z)p - p|| / ||p||
  int pairs = 0;
  std::vector<int> suspect_indices;  // margin below 1e-12, flagged not asserted
  bool ok = false;
};

FreenessReport check_freeness(const FlowSpec& spec, std::span<const Eigen::VectorXcd> samples,
                              std::span<const std::complex<double>> z_samples);

struct DivergenceReport {
  struct Ray {
    std::complex<double> direction;
    std::array<double, 3> log_min_norm{};  // at |z| = 10, 20, 40
    std::array<double, 3> log_max_norm{};
    bool diverged = false;
  };
  std::vector<Ray> rays;
  bool all_diverged = false;
};

DivergenceReport divergence_check(const FlowSpec& spec, const Eigen::VectorXcd& p,
                                  std::span<const std::complex<double>> directions);

struct OrbitExperimentRow {
  int index = 0;
  std::uint64_t seed = 0;
  OrbitSolveResult result;
};

// Embarrassingly parallel over samples (CBUNDLE_THREADS workers); results are
// merged by index, so the output is independent of scheduling.
std::vector<OrbitExperimentRow> run_orbit_experiment(
    const FlowSpec& spec, const std::function<Eigen::VectorXcd(std::uint64_t)>& sample,
    int n_samples, std::uint64_t base_seed, const FlowTolerances& tols = {});

std::string orbit_rows_to_csv(const std::vector<OrbitExperimentRow>& rows);

struct EpsilonSweepResult {
  double threshold = 0.0;  // largest epsilon with a fully successful sample set
  std::vector<std::pair<double, bool>> tested;  // (epsilon, success), ascending
  bool monotone = true;
};

EpsilonSweepResult epsilon_threshold_search(
    const std::function<FlowSpec(const Rational&)>& spec_for_eps,
    const std::function<Eigen::VectorXcd(std::uint64_t)>& sample, int n_samples,
    std::uint64_t base_seed, const FlowTolerances& tols = {});

}  // namespace cbundle
