#ifndef KRC_COUPLING_HPP
#define KRC_COUPLING_HPP

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "krc/cost.hpp"
#include "krc/measures.hpp"

namespace krc {

/// A joint measure pi on row_space x col_space with prescribed margins,
/// stored as a dense row-major nonnegative matrix. `value` is the transport
/// cost sum c(i,j) pi(i,j) under the cost the plan was solved for (the
/// discrete metric for dobrushin_plan).
class CouplingPlan {
 public:
  CouplingPlan(SpacePtr row_space, SpacePtr col_space, std::vector<double> pi,
               double value);

  const SpacePtr& row_space() const { return row_space_; }
  const SpacePtr& col_space() const { return col_space_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double operator()(std::size_t i, std::size_t j) const {
    return pi_[i * cols_ + j];
  }
  std::span<const double> entries() const { return pi_; }
  double value() const { return value_; }

  std::vector<double> row_sums() const;
  std::vector<double> col_sums() const;
  double cost_under(const CostMatrix& c) const;
  double off_diagonal_mass() const;

  friend bool operator==(const CouplingPlan& a, const CouplingPlan& b) {
    return a.pi_ == b.pi_;
  }

 private:
  SpacePtr row_space_;
  SpacePtr col_space_;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> pi_;
  double value_ = 0.0;
};

struct TransportResult {
  CouplingPlan plan;
  double primal_value;
  DualPotential potential;
  double dual_value;
  double gap;  // primal - dual, certified |gap| <= 1e-9
};

/// Exact optimal transport plan between mu and nu under cost c, by successive
/// shortest augmenting paths with node potentials on the bipartite flow
/// network. Deterministic: lowest-index tie-breaking throughout, so repeated
/// calls return bit-identical plans.
/// Errors: UntightCost unless allow_untight; SpaceMismatch; NumericalFailure.
CouplingPlan solve_primal(const ProbVec& mu, const ProbVec& nu,
                          const CostMatrix& c, bool allow_untight = false);

/// Optimal dual potential f in Lip_c with value mu(f) - nu(f) equal to the
/// primal optimum, normalized so min_i f(i) = 0. With allow_untight the
/// potential is computed against the path closure of c (same Lipschitz
/// class), which yields the exact value of sup_{f in Lip_c} mu(f) - nu(f)
/// even when c itself is untight.
std::pair<DualPotential, double> solve_dual(const ProbVec& mu,
                                            const ProbVec& nu,
                                            const CostMatrix& c,
                                            bool allow_untight = false);

/// Primal + dual with the duality certificate. Throws DualityGapExceeded if
/// |primal - dual| > 1e-9, which signals a solver bug or an untight cost.
TransportResult solve(const ProbVec& mu, const ProbVec& nu,
                      const CostMatrix& c, bool allow_untight = false);

/// The explicit maximal coupling for the discrete metric:
/// lambda(i,i) = min(mu(i), nu(i)) and, off the diagonal,
/// lambda(i,j) = pi_plus(i) * pi_minus(j) / total_plus (diagonal coupling
/// when total_plus = 0). Its off-diagonal mass is (1/2)||mu - nu||_v and it
/// attains the discrete-metric transport optimum.
CouplingPlan dobrushin_plan(const ProbVec& mu, const ProbVec& nu);

}  // namespace krc

#endif  // KRC_COUPLING_HPP
