#include "krc/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <string>

#include "krc/errors.hpp"
#include "krc/tolerances.hpp"

namespace krc {

CouplingPlan::CouplingPlan(SpacePtr row_space, SpacePtr col_space,
                           std::vector<double> pi, double value)
    : row_space_(std::move(row_space)),
      col_space_(std::move(col_space)),
      pi_(std::move(pi)),
      value_(value) {
  if (!row_space_ || !col_space_) throw InputError("CouplingPlan: null space");
  rows_ = row_space_->size();
  cols_ = col_space_->size();
  if (pi_.size() != rows_ * cols_) {
    throw ShapeMismatch("CouplingPlan: matrix shape mismatch");
  }
  for (double& v : pi_) {
    if (v < -tol::kNegativeMass) {
      throw NegativeMass("CouplingPlan: negative entry " + std::to_string(v));
    }
    if (v < 0.0) v = 0.0;
  }
}

std::vector<double> CouplingPlan::row_sums() const {
  std::vector<double> r(rows_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) r[i] += pi_[i * cols_ + j];
  }
  return r;
}

std::vector<double> CouplingPlan::col_sums() const {
  std::vector<double> s(cols_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) s[j] += pi_[i * cols_ + j];
  }
  return s;
}

double CouplingPlan::cost_under(const CostMatrix& c) const {
  if (c.size() != rows_ || c.size() != cols_) {
    throw ShapeMismatch("cost_under: cost size mismatch");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) {
      acc += pi_[i * cols_ + j] * c(i, j);
    }
  }
  return acc;
}

double CouplingPlan::off_diagonal_mass() const {
  double acc = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) {
      if (i != j) acc += pi_[i * cols_ + j];
    }
  }
  return acc;
}

namespace {

void require_instance(const ProbVec& mu, const ProbVec& nu,
                      const CostMatrix& c, bool allow_untight,
                      const char* where) {
  if (!same_space(mu.space(), nu.space()) ||
      !same_space(mu.space(), c.space())) {
    throw SpaceMismatch(std::string(where) +
                        ": measures and cost must share one space");
  }
  if (!c.tight() && !allow_untight) {
    throw UntightCost(std::string(where) +
                      ": cost fails condition (4); close it with path_closure "
                      "or pass allow_untight");
  }
}

//--------------------------------------------------------------------------
// Successive shortest augmenting paths with node potentials on the bipartite
// transportation network. Nodes: left 0..n-1, right n..2n-1, source 2n,
// sink 2n+1. Middle arcs are uncapacitated, so every augmentation saturates
// a source or sink arc (or empties a middle arc), and Dijkstra runs on
// nonnegative reduced costs throughout. All ties break toward the lowest
// (distance, node) pair, which makes the solver fully deterministic.
//--------------------------------------------------------------------------

struct Edge {
  int to;
  double cap;
  double flow;
  double cost;
};

struct SspResult {
  std::vector<double> plan;       // row-major n*n
  std::vector<double> left_pot;   // potentials on left nodes
  std::vector<double> right_pot;  // potentials on right nodes
  double value = 0.0;
};

SspResult run_ssp(const ProbVec& mu, const ProbVec& nu, const CostMatrix& c) {
  const std::size_t n = mu.size();
  const int num_nodes = int(2 * n) + 2;
  const int src = int(2 * n);
  const int snk = int(2 * n) + 1;
  constexpr double kInf = std::numeric_limits<double>::infinity();

  std::vector<Edge> edges;
  std::vector<std::vector<int>> adj(num_nodes);
  auto add_edge = [&](int u, int v, double cap, double cost) {
    adj[u].push_back(int(edges.size()));
    edges.push_back({v, cap, 0.0, cost});
    adj[v].push_back(int(edges.size()));
    edges.push_back({u, 0.0, 0.0, -cost});
  };

  for (std::size_t i = 0; i < n; ++i) {
    if (mu[i] > 0.0) add_edge(src, int(i), mu[i], 0.0);
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (nu[j] > 0.0) add_edge(int(n + j), snk, nu[j], 0.0);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (mu[i] <= 0.0) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (nu[j] <= 0.0) continue;
      add_edge(int(i), int(n + j), kInf, c(i, j));
    }
  }

  std::vector<double> pot(num_nodes, 0.0);
  std::vector<double> dist(num_nodes);
  std::vector<int> parent_edge(num_nodes);

  // Combinatorial ceiling on augmentations (Edmonds-Karp style V*E bound);
  // exceeding it means floating-point trouble, not a hard instance.
  const std::size_t max_rounds = 8 * (n + 2) * (n + 2) * (n + 2) + 64;
  std::size_t rounds = 0;

  using QItem = std::pair<double, int>;
  while (true) {
    if (++rounds > max_rounds) {
      throw NumericalFailure("solve_primal: augmentation count exceeded the "
                             "combinatorial bound");
    }
    std::fill(dist.begin(), dist.end(), kInf);
    std::fill(parent_edge.begin(), parent_edge.end(), -1);
    dist[src] = 0.0;
    std::priority_queue<QItem, std::vector<QItem>, std::greater<QItem>> pq;
    pq.emplace(0.0, src);
    while (!pq.empty()) {
      auto [d, u] = pq.top();
      pq.pop();
      if (d > dist[u]) continue;
      for (int eid : adj[u]) {
        const Edge& e = edges[eid];
        if (e.cap - e.flow <= 0.0) continue;
        double rc = e.cost + pot[u] - pot[e.to];
        if (rc < 0.0) rc = 0.0;  // guards rounding in the invariant
        const double nd = d + rc;
        if (nd < dist[e.to]) {
          dist[e.to] = nd;
          parent_edge[e.to] = eid;
          pq.emplace(nd, e.to);
        }
      }
    }
    if (dist[snk] == kInf) break;
    for (int v = 0; v < num_nodes; ++v) {
      pot[v] += std::min(dist[v], dist[snk]);
    }
    double push = kInf;
    for (int v = snk; v != src;) {
      const Edge& e = edges[parent_edge[v]];
      push = std::min(push, e.cap - e.flow);
      v = edges[parent_edge[v] ^ 1].to;
    }
    for (int v = snk; v != src;) {
      Edge& e = edges[parent_edge[v]];
      Edge& rev = edges[parent_edge[v] ^ 1];
      e.flow += push;
      rev.flow -= push;
      v = rev.to;
    }
  }

  // All supply must have shipped: the network is a complete bipartite graph
  // over the supports, so an unshipped residual signals numerical failure.
  for (int eid : adj[src]) {
    const Edge& e = edges[eid];
    if (e.cap > 0.0 && e.cap - e.flow > 1e-9) {
      throw NumericalFailure("solve_primal: unshipped supply " +
                             std::to_string(e.cap - e.flow));
    }
  }

  SspResult r;
  r.plan.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (int eid : adj[int(i)]) {
      const Edge& e = edges[eid];
      if (e.to >= int(n) && e.to < int(2 * n) && (eid & 1) == 0) {
        const double f = e.flow > 0.0 ? e.flow : 0.0;
        r.plan[i * n + std::size_t(e.to - int(n))] += f;
      }
    }
  }
  r.value = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      r.value += r.plan[i * n + j] * c(i, j);
    }
  }
  r.left_pot.assign(pot.begin(), pot.begin() + int(n));
  r.right_pot.assign(pot.begin() + int(n), pot.begin() + int(2 * n));
  return r;
}

// KR dual potential from the LP duals embedded in the final node potentials.
// With alpha_i = -pot(L_i), beta_j = pot(R_j) feasible for the transportation
// dual, the c-transform f(i) = min_{j in supp(nu)} c(i,j) - beta_j lies in
// Lip_c (triangle inequality of the tight cost) and attains
// mu(f) - nu(f) = primal optimum.
std::vector<double> dual_from_potentials(const SspResult& ssp,
                                         const ProbVec& nu,
                                         const CostMatrix& c) {
  const std::size_t n = nu.size();
  std::vector<double> f(n);
  for (std::size_t i = 0; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
      if (nu[j] <= 0.0) continue;
      best = std::min(best, c(i, j) - ssp.right_pot[j]);
    }
    f[i] = best;
  }
  const double lo = *std::min_element(f.begin(), f.end());
  for (double& v : f) v -= lo;
  return f;
}

}  // namespace

CouplingPlan solve_primal(const ProbVec& mu, const ProbVec& nu,
                          const CostMatrix& c, bool allow_untight) {
  require_instance(mu, nu, c, allow_untight, "solve_primal");
  SspResult ssp = run_ssp(mu, nu, c);
  return CouplingPlan(mu.space(), nu.space(), std::move(ssp.plan), ssp.value);
}

std::pair<DualPotential, double> solve_dual(const ProbVec& mu,
                                            const ProbVec& nu,
                                            const CostMatrix& c,
                                            bool allow_untight) {
  require_instance(mu, nu, c, allow_untight, "solve_dual");
  std::vector<double> f;
  if (c.tight()) {
    SspResult ssp = run_ssp(mu, nu, c);
    f = dual_from_potentials(ssp, nu, c);
  } else {
    // Lip_c is unchanged by the closure, so the closed problem has the same
    // dual value and its potential certifies the original one.
    const CostMatrix closed = path_closure(c);
    SspResult ssp = run_ssp(mu, nu, closed);
    f = dual_from_potentials(ssp, nu, closed);
  }
  const double value = mu.expectation(f) - nu.expectation(f);
  return {DualPotential(mu.space(), std::move(f), c), value};
}

TransportResult solve(const ProbVec& mu, const ProbVec& nu,
                      const CostMatrix& c, bool allow_untight) {
  CouplingPlan plan = solve_primal(mu, nu, c, allow_untight);
  auto [potential, dual_value] = solve_dual(mu, nu, c, allow_untight);
  const double primal = plan.value();
  const double gap = primal - dual_value;
  if (std::abs(gap) > tol::kGap) {
    throw DualityGapExceeded("solve: |primal - dual| = " +
                             std::to_string(std::abs(gap)) +
                             " exceeds 1e-9 (solver bug or untight cost)");
  }
  return TransportResult{std::move(plan), primal, std::move(potential),
                         dual_value, gap};
}

CouplingPlan dobrushin_plan(const ProbVec& mu, const ProbVec& nu) {
  if (!same_space(mu.space(), nu.space())) {
    throw SpaceMismatch("dobrushin_plan: measures on different spaces");
  }
  const std::size_t n = mu.size();
  const SignedDecomposition d = hahn_decompose(mu, nu);
  std::vector<double> pi(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    pi[i * n + i] = std::min(mu[i], nu[i]);
  }
  double off_mass = 0.0;
  if (d.total_plus > 0.0) {
    for (std::size_t i = 0; i < n; ++i) {
      if (d.pi_plus[i] == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (d.pi_minus[j] == 0.0) continue;
        const double m = d.pi_plus[i] * d.pi_minus[j] / d.total_plus;
        pi[i * n + j] += m;
        off_mass += m;
      }
    }
  }
  return CouplingPlan(mu.space(), nu.space(), std::move(pi), off_mass);
}

}  // namespace krc
