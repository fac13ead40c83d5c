#include "oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace krc::oracle {

namespace {

// Union-find over the 2n node indices of the bipartite graph.
struct Dsu {
  std::vector<int> parent;
  explicit Dsu(int n) : parent(n) {
    for (int i = 0; i < n; ++i) parent[i] = i;
  }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[a] = b;
    return true;
  }
};

// Solves the unique flow on a spanning tree by peeling leaves. Returns the
// tree's cost if all flows are (numerically) nonnegative, nullopt when the
// tree is not a feasible basis. A left node i carries balance mu(i), a right
// node j carries -nu(j); the flow on edge (i,j) moves the left balance down
// and the right balance up.
std::optional<double> tree_flow_cost(const std::vector<int>& edges,
                                     const ProbVec& mu, const ProbVec& nu,
                                     const CostMatrix& c) {
  const int n = int(mu.size());
  std::vector<double> balance(2 * n);
  for (int i = 0; i < n; ++i) balance[i] = mu[std::size_t(i)];
  for (int j = 0; j < n; ++j) balance[n + j] = -nu[std::size_t(j)];

  std::vector<std::vector<std::size_t>> incident(2 * n);
  for (std::size_t k = 0; k < edges.size(); ++k) {
    incident[edges[k] / n].push_back(k);
    incident[n + edges[k] % n].push_back(k);
  }
  std::vector<bool> edge_done(edges.size(), false);
  std::vector<int> degree(2 * n, 0);
  for (int v = 0; v < 2 * n; ++v) degree[v] = int(incident[v].size());

  std::vector<int> leaves;
  for (int v = 0; v < 2 * n; ++v) {
    if (degree[v] == 1) leaves.push_back(v);
  }
  std::vector<double> flow(edges.size(), 0.0);
  std::size_t processed = 0;
  while (!leaves.empty()) {
    const int v = leaves.back();
    leaves.pop_back();
    if (degree[v] != 1) continue;
    std::size_t eid = edges.size();
    for (std::size_t k : incident[v]) {
      if (!edge_done[k]) {
        eid = k;
        break;
      }
    }
    if (eid == edges.size()) return std::nullopt;
    const int left = edges[eid] / n;
    const int right = n + edges[eid] % n;
    const int other = (v == left) ? right : left;
    const double f = (v == left) ? balance[v] : -balance[v];
    flow[eid] = f;
    balance[v] = 0.0;
    balance[other] += (other == right) ? f : -f;
    edge_done[eid] = true;
    ++processed;
    --degree[v];
    --degree[other];
    if (degree[other] == 1) leaves.push_back(other);
  }
  if (processed != edges.size()) return std::nullopt;

  double cost = 0.0;
  for (std::size_t k = 0; k < edges.size(); ++k) {
    if (flow[k] < -1e-12) return std::nullopt;
    const int e = edges[k];
    cost += std::max(flow[k], 0.0) * c(std::size_t(e / n), std::size_t(e % n));
  }
  return cost;
}

}  // namespace

double brute_force_transport(const ProbVec& mu, const ProbVec& nu,
                             const CostMatrix& c) {
  const int n = int(mu.size());
  const int num_edges = n * n;
  const int tree_size = 2 * n - 1;
  double best = std::numeric_limits<double>::infinity();

  std::vector<int> pick;
  pick.reserve(std::size_t(tree_size));
  // Enumerate all (2n-1)-subsets of the n*n edges, keep the spanning trees.
  std::vector<int> stack;
  auto recurse = [&](auto&& self, int start) -> void {
    if (int(stack.size()) == tree_size) {
      Dsu dsu(2 * n);
      for (int e : stack) {
        if (!dsu.unite(e / n, n + e % n)) return;  // cycle
      }
      if (auto cost = tree_flow_cost(stack, mu, nu, c)) {
        best = std::min(best, *cost);
      }
      return;
    }
    const int need = tree_size - int(stack.size());
    for (int e = start; e <= num_edges - need; ++e) {
      stack.push_back(e);
      self(self, e + 1);
      stack.pop_back();
    }
  };
  recurse(recurse, 0);

  if (!std::isfinite(best)) {
    throw std::logic_error("brute_force_transport: no feasible vertex found");
  }
  return best;
}

std::vector<double> lipschitz_envelope(const std::vector<double>& g,
                                       const CostMatrix& c) {
  const std::size_t n = c.size();
  std::vector<double> f(n);
  for (std::size_t i = 0; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
      best = std::min(best, g[j] + c(i, j));
    }
    f[i] = best;
  }
  return f;
}

double independent_coupling_cost(const ProbVec& mu, const ProbVec& nu,
                                 const CostMatrix& c) {
  double acc = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    for (std::size_t j = 0; j < nu.size(); ++j) {
      acc += mu[i] * nu[j] * c(i, j);
    }
  }
  return acc;
}

}  // namespace krc::oracle
