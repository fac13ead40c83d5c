// Test-only oracles, kept independent of the solver paths they check.
#ifndef KRC_TESTS_ORACLE_HPP
#define KRC_TESTS_ORACLE_HPP

#include <optional>
#include <vector>

#include "krc/cost.hpp"
#include "krc/measures.hpp"

namespace krc::oracle {

/// Exhaustive minimum of sum c*pi over the vertex set of the transportation
/// polytope D(mu, nu): every vertex is supported on a spanning forest of the
/// complete bipartite support graph, so enumerating all (2n-1)-edge spanning
/// trees and back-solving the unique tree flow covers all of them. Intended
/// for n <= 4.
double brute_force_transport(const ProbVec& mu, const ProbVec& nu,
                             const CostMatrix& c);

/// McShane regularization f(i) = min_j (g(j) + c(i,j)): a genuine member of
/// Lip_c for any g when c is tight (no slack needed).
std::vector<double> lipschitz_envelope(const std::vector<double>& g,
                                       const CostMatrix& c);

/// Cost of the independent coupling mu (x) nu.
double independent_coupling_cost(const ProbVec& mu, const ProbVec& nu,
                                 const CostMatrix& c);

}  // namespace krc::oracle

#endif  // KRC_TESTS_ORACLE_HPP
