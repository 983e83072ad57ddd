#include "cbundle/realization.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "cbundle/rng.hpp"

namespace cbundle {

const IntMatrix& Realization::op_X(const Root& beta) const {
  int k = rs.positive_root_index(beta);
  if (k < 0) throw std::domain_error("op_X: " + root_str(beta) + " is not a positive root");
  return op_x[static_cast<std::size_t>(k)];
}

const IntMatrix& Realization::op_Y(const Root& beta) const {
  int k = rs.positive_root_index(beta);
  if (k < 0) throw std::domain_error("op_Y: " + root_str(beta) + " is not a positive root");
  return op_y[static_cast<std::size_t>(k)];
}

IntMatrix Realization::op_H(const Root& beta) const {
  const IntMatrix& x = op_X(beta);
  const IntMatrix& y = op_Y(beta);
  return x * y - y * x;
}

Realization sl2_irrep(int k) {
  if (k < 1) throw std::domain_error("sl2_irrep: trivial representation (k = 0) excluded");
  Realization real;
  real.rs = build_root_system(Series::A, 1);
  real.omega = Weight{k};
  real.dim = k + 1;
  real.highest_index = 0;
  IntMatrix x = IntMatrix::Zero(k + 1, k + 1);
  IntMatrix y = IntMatrix::Zero(k + 1, k + 1);
  for (int m = 0; m <= k; ++m) {
    real.basis_weights.push_back(Weight{k - 2 * m});
    if (m >= 1) x(m - 1, m) = static_cast<std::int64_t>(m) * (k - m + 1);
    if (m + 1 <= k) y(m + 1, m) = 1;
  }
  real.op_x.push_back(std::move(x));
  real.op_y.push_back(std::move(y));
  return real;
}

namespace {

// k-subsets of {1..n} in lexicographic order
std::vector<std::vector<int>> subsets_lex(int n, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) cur[static_cast<std::size_t>(i)] = i + 1;
  for (;;) {
    out.push_back(cur);
    int i = k - 1;
    while (i >= 0 && cur[static_cast<std::size_t>(i)] == n - (k - 1 - i)) --i;
    if (i < 0) break;
    ++cur[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j)
      cur[static_cast<std::size_t>(j)] = cur[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

// weight of e_i in fundamental coordinates of A_{n-1}
Eigen::VectorXi eps_weight(int n, int i) {
  Eigen::VectorXi w = Eigen::VectorXi::Zero(n - 1);
  if (i <= n - 1) w[i - 1] += 1;
  if (i >= 2) w[i - 2] -= 1;
  return w;
}

// action of E_{ab} on the wedge basis: e_S -> sign * e_{S - b + a}
struct WedgeAction {
  int target = -1;  // basis index, -1 when the action kills e_S
  int sign = 1;
};

WedgeAction wedge_apply(const std::map<std::vector<int>, int>& index_of,
                        const std::vector<int>& s, int a, int b) {
  WedgeAction act;
  if (std::find(s.begin(), s.end(), b) == s.end()) return act;
  if (std::find(s.begin(), s.end(), a) != s.end()) return act;
  std::vector<int> t;
  int crossings = 0;
  for (int v : s)
    if (v != b) t.push_back(v);
  for (int v : t)
    if (v > std::min(a, b) && v < std::max(a, b)) ++crossings;
  t.push_back(a);
  std::sort(t.begin(), t.end());
  act.target = index_of.at(t);
  act.sign = (crossings % 2 == 0) ? 1 : -1;
  return act;
}

}  // namespace

Realization sln_wedge(int n, int k) {
  if (n < 2 || n > 6) throw std::domain_error("sln_wedge: n must be in [2, 6]");
  if (k < 1 || k >= n) throw std::domain_error("sln_wedge: k must satisfy 1 <= k < n");

  Realization real;
  real.rs = build_root_system(Series::A, n - 1);
  Eigen::VectorXi om = Eigen::VectorXi::Zero(n - 1);
  om[k - 1] = 1;
  real.omega = Weight(om);

  auto basis = subsets_lex(n, k);
  real.dim = static_cast<int>(basis.size());
  std::map<std::vector<int>, int> index_of;
  for (int i = 0; i < real.dim; ++i) index_of[basis[static_cast<std::size_t>(i)]] = i;
  real.highest_index = 0;  // {1..k} is lex-first

  for (const auto& s : basis) {
    Eigen::VectorXi w = Eigen::VectorXi::Zero(n - 1);
    for (int v : s) w += eps_weight(n, v);
    real.basis_weights.push_back(Weight(w));
  }

  // positive root sum(alpha_i .. alpha_{j-1}) acts as E_{ij} in the defining rep
  for (const Root& beta : real.rs.positive_roots) {
    int lo = 0;
    while (beta[lo] == 0) ++lo;
    int hi = real.rs.rank - 1;
    while (beta[hi] == 0) --hi;
    int a = lo + 1, b = hi + 2;
    IntMatrix x = IntMatrix::Zero(real.dim, real.dim);
    IntMatrix y = IntMatrix::Zero(real.dim, real.dim);
    for (int col = 0; col < real.dim; ++col) {
      WedgeAction up = wedge_apply(index_of, basis[static_cast<std::size_t>(col)], a, b);
      if (up.target >= 0) x(up.target, col) += up.sign;
      WedgeAction down = wedge_apply(index_of, basis[static_cast<std::size_t>(col)], b, a);
      if (down.target >= 0) y(down.target, col) += down.sign;
    }
    real.op_x.push_back(std::move(x));
    real.op_y.push_back(std::move(y));
  }
  return real;
}

Eigen::MatrixXcd matrix_exponential(const Eigen::MatrixXcd& m) {
  const Eigen::Index n = m.rows();
  Eigen::MatrixXcd term = Eigen::MatrixXcd::Identity(n, n);
  Eigen::MatrixXcd acc = term;
  // nilpotent inputs terminate exactly within n steps
  for (Eigen::Index j = 1; j <= n; ++j) {
    term = (term * m) / static_cast<double>(j);
    if (term.isZero(0.0)) return acc;
    acc += term;
  }
  // general fallback: scaling and squaring on a Taylor series
  int squarings = 0;
  double norm = m.cwiseAbs().sum();
  while (norm > 0.5) {
    norm /= 2;
    ++squarings;
  }
  Eigen::MatrixXcd s = m / std::pow(2.0, squarings);
  Eigen::MatrixXcd r = Eigen::MatrixXcd::Identity(n, n);
  term = r;
  for (int j = 1; j <= 24; ++j) {
    term = (term * s) / static_cast<double>(j);
    r += term;
  }
  for (int j = 0; j < squarings; ++j) r = r * r;
  return r;
}

ConePoint sample_cone_point(const Realization& real, double scale, std::uint64_t seed) {
  if (scale <= 0) throw std::domain_error("sample_cone_point: scale must be positive");
  Rng rng(seed);
  Eigen::MatrixXcd xi = Eigen::MatrixXcd::Zero(real.dim, real.dim);
  ConePoint p;
  for (const IntMatrix& y : real.op_y) {
    std::complex<double> c = rng.complex_in_square(scale);
    p.y_coeffs.push_back(c);
    xi += c * y.cast<double>().cast<std::complex<double>>();
  }
  double mag = std::exp(rng.uniform(-scale, scale));
  double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
  p.scale = std::polar(mag, phase);
  Eigen::VectorXcd v0 = Eigen::VectorXcd::Zero(real.dim);
  v0[real.highest_index] = p.scale;
  p.coords = matrix_exponential(xi) * v0;
  return p;
}

std::complex<double> BigCellChart::F_beta(std::size_t k, const Eigen::VectorXcd& v) const {
  return (f_beta[k].cast<std::complex<double>>() * v).value();
}

BigCellChart big_cell_chart(const Realization& real, const ParabolicData& parab) {
  BigCellChart chart;
  chart.parab = parab;
  chart.f_index = real.highest_index;
  // lowest-weight property of F in V(omega)^vee: the highest row of every
  // lowering operator vanishes, i.e. F o op_Y(beta) = 0 for all positive beta
  for (const Root& beta : real.rs.positive_roots)
    if (!real.op_Y(beta).row(chart.f_index).isZero())
      throw std::logic_error("big_cell_chart: F is not annihilated by Y_" + root_str(beta));
  for (const Root& beta : parab.complement_roots) {
    chart.cell_roots.push_back(beta);
    chart.f_beta.push_back(real.op_X(beta).row(chart.f_index).cast<double>());
    chart.omega_h.push_back(pair_with_coroot(real.rs, real.omega, beta));
  }
  return chart;
}

Eigen::VectorXcd chart_point(const Realization& real, const BigCellChart& chart,
                             const Eigen::VectorXcd& y, std::complex<double> z) {
  if (y.size() != static_cast<Eigen::Index>(chart.cell_roots.size()))
    throw std::domain_error("chart_point: coordinate count mismatch");
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(real.dim);
  v[real.highest_index] = z;
  for (Eigen::Index k = y.size() - 1; k >= 0; --k) {
    Eigen::MatrixXcd g = matrix_exponential(
        y[k] * real.op_Y(chart.cell_roots[static_cast<std::size_t>(k)])
                   .cast<double>()
                   .cast<std::complex<double>>());
    v = g * v;
  }
  return v;
}

double jacobian_check(const Realization& real, const BigCellChart& chart,
                      const Eigen::VectorXcd& y, std::complex<double> z, double h) {
  const std::size_t r = chart.cell_roots.size();
  Eigen::VectorXcd base = chart_point(real, chart, y, z);
  if (std::abs(chart.F(base)) < 1e-12)
    throw std::domain_error("jacobian_check: point is outside the big cell (F = 0)");
  double worst = 0.0;
  for (std::size_t b = 0; b < r; ++b) {
    Eigen::VectorXcd yp = y, ym = y;
    yp[static_cast<Eigen::Index>(b)] += h;
    ym[static_cast<Eigen::Index>(b)] -= h;
    Eigen::VectorXcd vp = chart_point(real, chart, yp, z);
    Eigen::VectorXcd vm = chart_point(real, chart, ym, z);
    for (std::size_t g = 0; g < r; ++g) {
      std::complex<double> fd =
          (chart.F_beta(g, vp) / chart.F(vp) - chart.F_beta(g, vm) / chart.F(vm)) / (2.0 * h);
      std::complex<double> expected =
          (g == b) ? std::complex<double>(static_cast<double>(chart.omega_h[b]), 0.0)
                   : std::complex<double>(0.0, 0.0);
      worst = std::max(worst, std::abs(fd - expected));
    }
  }
  return worst;
}

}  // namespace cbundle
