#ifndef KRC_DEPENDENCE_HPP
#define KRC_DEPENDENCE_HPP

#include <cstddef>
#include <vector>

#include "krc/cost.hpp"
#include "krc/measures.hpp"
#include "krc/param.hpp"

namespace krc {

/// Joint law of a pair (M, X): M ranges over the atoms of a finite partition
/// Omega, X over the state space S. The conditional laws P_{X|M=w} and the
/// marginal P_X both derive from the table.
class JointLaw {
 public:
  /// `table` is row-major |Omega| x n, entries >= 0 summing to 1 (1e-12).
  JointLaw(SpacePtr omega, SpacePtr s, std::vector<double> table);

  const SpacePtr& omega() const { return omega_; }
  const SpacePtr& state_space() const { return s_; }
  std::size_t atoms() const { return omega_->size(); }
  std::size_t points() const { return s_->size(); }
  double operator()(std::size_t w, std::size_t i) const {
    return table_[w * s_->size() + i];
  }
  const std::vector<double>& table() const { return table_; }

  std::vector<double> row_sums() const;
  std::vector<double> col_sums() const;

  /// Independent product of given margins.
  static JointLaw product(const ProbVec& weights, const ProbVec& marginal);

 private:
  SpacePtr omega_;
  SpacePtr s_;
  std::vector<double> table_;
};

/// The disintegration of a JointLaw: atom weights, conditional laws, and the
/// marginal. Atoms with zero weight carry the marginal by convention; they
/// contribute nothing to any coefficient.
struct ConditionalSystem {
  ProbVec weights;
  RandomMeasureFamily conditionals;
  ProbVec marginal;
};

ConditionalSystem conditionals(const JointLaw& joint);

/// tau_c(M, X) = E[ l_c(P_{X|M}, P_X) ]: expected KR distance between the
/// conditional law and the marginal, the c-cost dependence coefficient.
double tau_c(const JointLaw& joint, const CostMatrix& c);

/// The dual form of tau_c: an optimal integrand f(w, x) assembled from
/// per-atom potentials, evaluated as
/// E[f(M, X)] - E[ int f(M, x) P_X(dx) ]. Agrees with tau_c to 1e-9.
double tau_c_dual(const JointLaw& joint, const CostMatrix& c);

/// beta-mixing coefficient between M and sigma(X):
/// (1/2) E || P_{X|M} - P_X ||_v. Equals tau_c under the discrete metric.
double beta(const JointLaw& joint);

/// The generalized inverse Q(u) = inf{ t >= 0 : P(c(X, x0) > t) <= u } of the
/// tail of c(X, x0) under P_X, stored as an exact step function.
class TailQuantile {
 public:
  /// `values` strictly decreasing, `cum_tail[k]` = P(c(X,x0) >= values[k]).
  TailQuantile(std::vector<double> values, std::vector<double> cum_tail);

  double operator()(double u) const;

  /// Exact integral of Q over [0, b] as a finite sum of step areas.
  double integral_to(double b) const;

  const std::vector<double>& values() const { return values_; }
  const std::vector<double>& cum_tail() const { return cum_tail_; }

 private:
  std::vector<double> values_;
  std::vector<double> cum_tail_;
};

TailQuantile tail_quantile(const JointLaw& joint, const CostMatrix& c,
                           std::size_t x0);

struct MpBound {
  double bound = 0.0;          // 2 * int_0^beta Q(u) du
  bool holds = false;          // tau_c <= bound + 1e-9
  double bounded_form = 0.0;   // 2 * max(c) * beta
  double tau = 0.0;
  double beta = 0.0;
};

/// The comparison bound tau_c <= 2 int_0^beta Q_{c(X,x0)}(u) du, evaluated
/// exactly from the step geometry, together with the bounded-cost form
/// tau_c <= 2 max(c) beta.
MpBound mp_bound(const JointLaw& joint, const CostMatrix& c, std::size_t x0);

}  // namespace krc

#endif  // KRC_DEPENDENCE_HPP
