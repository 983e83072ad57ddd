#include "cbundle/rootdata.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <stdexcept>

namespace cbundle {

Series series_from_char(char c) {
  switch (c) {
    case 'A': return Series::A;
    case 'B': return Series::B;
    case 'C': return Series::C;
    case 'D': return Series::D;
    default: throw std::invalid_argument(std::string("unsupported series '") + c + "'");
  }
}

Weight::Weight(std::initializer_list<int> c) {
  coeffs.resize(static_cast<Eigen::Index>(c.size()));
  Eigen::Index k = 0;
  for (int v : c) coeffs[k++] = v;
}

std::string Weight::str() const {
  std::string s = "(";
  for (int i = 0; i < coeffs.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(coeffs[i]);
  }
  return s + ")";
}

std::string root_str(const Root& beta) {
  std::string s;
  for (int i = 0; i < beta.size(); ++i) {
    if (beta[i] == 0) continue;
    if (!s.empty()) s += "+";
    if (beta[i] != 1) s += std::to_string(beta[i]);
    s += "a" + std::to_string(i + 1);
  }
  return s.empty() ? "0" : s;
}

int root_height(const Root& beta) { return beta.sum(); }

Eigen::VectorXi RootSystem::root_to_weight_coords(const Root& beta) const {
  return cartan * beta;
}

Rational RootSystem::form(const Weight& mu, const Root& beta) const {
  // (mu, beta) = sum_j mu_j d_j c_j with beta = sum c_j alpha_j
  Rational acc(0);
  for (int j = 0; j < rank; ++j)
    acc += Rational(mu.coeffs[j]) * symmetrizer[j] * Rational(beta[j]);
  return acc;
}

Rational RootSystem::form_root_root(const Root& a, const Root& b) const {
  Eigen::VectorXi aw = root_to_weight_coords(a);
  Rational acc(0);
  for (int j = 0; j < rank; ++j) acc += Rational(aw[j]) * symmetrizer[j] * Rational(b[j]);
  return acc;
}

bool RootSystem::is_positive_root(const Root& beta) const {
  return positive_root_index(beta) >= 0;
}

int RootSystem::positive_root_index(const Root& beta) const {
  for (std::size_t k = 0; k < positive_roots.size(); ++k)
    if (positive_roots[k] == beta) return static_cast<int>(k);
  return -1;
}

Weight RootSystem::add_root(const Weight& mu, const Root& beta, int sign) const {
  return Weight(mu.coeffs + sign * root_to_weight_coords(beta));
}

Weight RootSystem::reflect(const Weight& mu, int i) const {
  return Weight(mu.coeffs - mu.coeffs[i] * cartan.col(i));
}

Weight RootSystem::dominant_conjugate(const Weight& mu) const {
  Weight w = mu;
  for (;;) {
    int i = -1;
    for (int j = 0; j < rank; ++j)
      if (w.coeffs[j] < 0) {
        i = j;
        break;
      }
    if (i < 0) return w;
    w = reflect(w, i);
  }
}

Eigen::VectorXi RootSystem::root_coords_of_difference(const Weight& omega, const Weight& mu) const {
  RationalVector rhs(rank);
  for (int j = 0; j < rank; ++j) rhs[j] = Rational(omega.coeffs[j] - mu.coeffs[j]);
  RationalVector c = inverse_cartan * rhs;
  Eigen::VectorXi out(rank);
  for (int j = 0; j < rank; ++j) {
    if (!c[j].is_integer())
      throw std::domain_error("weight difference is not in the root lattice");
    out[j] = static_cast<int>(c[j].as_integer());
  }
  return out;
}

std::int64_t WeightSystem::dimension() const {
  std::int64_t total = 0;
  for (const auto& [w, m] : entries) total += m;
  return total;
}

std::int64_t WeightSystem::multiplicity(const Weight& mu) const {
  auto it = entries.find(mu);
  return it == entries.end() ? 0 : it->second;
}

namespace {

Eigen::MatrixXi cartan_matrix(Series series, int l) {
  Eigen::MatrixXi c = Eigen::MatrixXi::Zero(l, l);
  for (int i = 0; i < l; ++i) c(i, i) = 2;
  auto chain = [&](int upto) {
    for (int i = 0; i + 1 < upto; ++i) {
      c(i, i + 1) = -1;
      c(i + 1, i) = -1;
    }
  };
  switch (series) {
    case Series::A:
      chain(l);
      break;
    case Series::B:
      // alpha_l short: <alpha_{l-1}, alpha_l^vee> = -2
      chain(l);
      c(l - 1, l - 2) = -2;
      break;
    case Series::C:
      // alpha_l long: <alpha_l, alpha_{l-1}^vee> = -2
      chain(l);
      c(l - 2, l - 1) = -2;
      break;
    case Series::D:
      chain(l - 1);
      c(l - 3, l - 1) = -1;
      c(l - 1, l - 3) = -1;
      break;
  }
  return c;
}

std::vector<Rational> symmetrizer_for(Series series, int l) {
  std::vector<Rational> d(static_cast<std::size_t>(l), Rational(1));
  if (series == Series::B) d[static_cast<std::size_t>(l - 1)] = Rational(1, 2);
  if (series == Series::C) d[static_cast<std::size_t>(l - 1)] = Rational(2);
  return d;
}

std::size_t expected_positive_count(Series series, int l) {
  switch (series) {
    case Series::A: return static_cast<std::size_t>(l) * (l + 1) / 2;
    case Series::B:
    case Series::C: return static_cast<std::size_t>(l) * l;
    case Series::D: return static_cast<std::size_t>(l) * (l - 1);
  }
  return 0;
}

struct RootLess {
  bool operator()(const Root& a, const Root& b) const {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
  }
};

}  // namespace

RootSystem build_root_system(Series series, int rank) {
  if (rank < 1) throw std::invalid_argument("rank must be positive");
  if ((series == Series::B || series == Series::C) && rank < 2)
    throw std::invalid_argument("series B and C require rank >= 2");
  if (series == Series::D && rank < 3)
    throw std::invalid_argument("series D requires rank >= 3");

  RootSystem rs;
  rs.series = series;
  rs.rank = rank;
  rs.fundamental_weight_count = rank;
  rs.cartan = cartan_matrix(series, rank);
  rs.symmetrizer = symmetrizer_for(series, rank);

  RationalMatrix rc(rank, rank);
  for (int i = 0; i < rank; ++i)
    for (int j = 0; j < rank; ++j) rc(i, j) = Rational(rs.cartan(i, j));
  rs.inverse_cartan = rational_inverse(rc);

  // Grow positive roots height by height using root strings: for a root beta
  // and simple alpha_i, beta + alpha_i is a root iff p - <beta, alpha_i^vee> > 0
  // where p is the number of steps down the alpha_i-string from beta.
  std::set<Root, RootLess> roots;
  std::deque<Root> frontier;
  for (int i = 0; i < rank; ++i) {
    Root alpha = Root::Zero(rank);
    alpha[i] = 1;
    roots.insert(alpha);
    frontier.push_back(alpha);
  }
  while (!frontier.empty()) {
    Root beta = frontier.front();
    frontier.pop_front();
    Eigen::VectorXi pairing = rs.cartan * beta;  // <beta, alpha_i^vee> per i
    for (int i = 0; i < rank; ++i) {
      Root down = beta;
      int p = 0;
      for (;;) {
        down[i] -= 1;
        if (down[i] < 0 || (down.array() == 0).all() || !roots.count(down)) break;
        ++p;
      }
      if (beta[i] > 0 && beta.sum() == beta[i]) continue;  // multiples of alpha_i
      int q = p - pairing[i];
      if (q > 0) {
        Root up = beta;
        up[i] += 1;
        if (roots.insert(up).second) frontier.push_back(up);
      }
    }
  }

  rs.positive_roots.assign(roots.begin(), roots.end());
  if (rs.positive_roots.size() != expected_positive_count(series, rank))
    throw std::logic_error("positive root enumeration produced an unexpected count");
  return rs;
}

WeightSystem weight_system(const RootSystem& rs, const Weight& omega) {
  if (omega.rank() != rs.rank) throw std::domain_error("weight rank mismatch");
  if (!omega.dominant()) throw std::domain_error("weight_system requires a dominant weight");

  // Membership: mu in Lambda(omega) iff its dominant conjugate mu+ satisfies
  // omega - mu+ in the non-negative root lattice.
  auto member = [&](const Weight& mu) {
    Weight dc = rs.dominant_conjugate(mu);
    Eigen::VectorXi c;
    try {
      c = rs.root_coords_of_difference(omega, dc);
    } catch (const std::domain_error&) {
      return false;
    }
    return (c.array() >= 0).all();
  };

  // BFS from the highest weight, one simple-root subtraction per step.
  std::map<Weight, int> depth;
  depth[omega] = 0;
  std::deque<Weight> frontier{omega};
  while (!frontier.empty()) {
    Weight mu = frontier.front();
    frontier.pop_front();
    for (int i = 0; i < rs.rank; ++i) {
      Root alpha = Root::Zero(rs.rank);
      alpha[i] = 1;
      Weight nu = rs.add_root(mu, alpha, -1);
      if (depth.count(nu) || !member(nu)) continue;
      depth[nu] = depth[mu] + 1;
      frontier.push_back(nu);
    }
  }

  std::vector<std::pair<int, Weight>> order;
  order.reserve(depth.size());
  for (const auto& [w, d] : depth) order.emplace_back(d, w);
  std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return a.second < b.second;
  });

  Weight rho(Eigen::VectorXi::Ones(rs.rank));

  WeightSystem ws;
  ws.highest = omega;
  for (const auto& [d, mu] : order) {
    if (d == 0) {
      ws.entries[mu] = 1;
      continue;
    }
    // Freudenthal: (|omega+rho|^2 - |mu+rho|^2) m_mu
    //            = 2 sum_{alpha>0} sum_{k>=1} m_{mu+k alpha} (mu+k alpha, alpha)
    Rational numerator(0);
    for (const Root& alpha : rs.positive_roots) {
      for (int k = 1;; ++k) {
        Weight nu = rs.add_root(mu, alpha, k);
        auto it = ws.entries.find(nu);
        if (it == ws.entries.end()) break;  // weight strings are unbroken
        numerator += Rational(it->second) * rs.form(nu, alpha);
      }
    }
    // |omega+rho|^2 - |mu+rho|^2 = (omega+mu+2rho, omega-mu)
    Weight s(omega.coeffs + mu.coeffs + 2 * rho.coeffs);
    Eigen::VectorXi diff = rs.root_coords_of_difference(omega, mu);
    Rational denominator(0);
    for (int j = 0; j < rs.rank; ++j)
      denominator += Rational(s.coeffs[j]) * rs.symmetrizer[j] * Rational(diff[j]);
    if (denominator.is_zero())
      throw std::logic_error("Freudenthal denominator vanished on a member weight");
    Rational m = Rational(2) * numerator / denominator;
    std::int64_t mi = m.as_integer();
    if (mi <= 0) throw std::logic_error("Freudenthal produced a non-positive multiplicity");
    ws.entries[mu] = mi;
  }
  return ws;
}

std::int64_t weyl_dimension(const RootSystem& rs, const Weight& omega) {
  if (omega.rank() != rs.rank) throw std::domain_error("weight rank mismatch");
  if (!omega.dominant()) throw std::domain_error("weyl_dimension requires a dominant weight");
  Weight rho(Eigen::VectorXi::Ones(rs.rank));
  Weight shifted(omega.coeffs + rho.coeffs);
  Rational dim(1);
  for (const Root& alpha : rs.positive_roots)
    dim *= rs.form(shifted, alpha) / rs.form(rho, alpha);
  return dim.as_integer();
}

ParabolicData parabolic_from_weight(const RootSystem& rs, const Weight& omega) {
  if (omega.rank() != rs.rank) throw std::domain_error("weight rank mismatch");
  if (!omega.dominant()) throw std::domain_error("parabolic_from_weight requires a dominant weight");
  if (omega.is_zero()) throw std::domain_error("omega = 0 would give P = G");
  ParabolicData pd;
  for (int j = 0; j < rs.rank; ++j)
    if (omega.coeffs[j] == 0) pd.levi_simples.push_back(j + 1);
  for (const Root& beta : rs.positive_roots) {
    bool outside = false;
    for (int j = 0; j < rs.rank; ++j)
      if (beta[j] > 0 && omega.coeffs[j] != 0) {
        outside = true;
        break;
      }
    if (outside) pd.complement_roots.push_back(beta);
  }
  pd.dim_x = static_cast<int>(pd.complement_roots.size());
  return pd;
}

std::int64_t pair_with_coroot(const RootSystem& rs, const Weight& omega, const Root& beta) {
  if (!rs.is_positive_root(beta)) throw std::domain_error("beta is not a positive root");
  Rational value = Rational(2) * rs.form(omega, beta) / rs.form_root_root(beta, beta);
  return value.as_integer();
}

}  // namespace cbundle
