#include "krc/dependence.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "krc/errors.hpp"
#include "krc/tolerances.hpp"

namespace krc {

JointLaw::JointLaw(SpacePtr omega, SpacePtr s, std::vector<double> table)
    : omega_(std::move(omega)), s_(std::move(s)), table_(std::move(table)) {
  if (!omega_ || !s_) throw InputError("JointLaw: null space");
  if (table_.size() != omega_->size() * s_->size()) {
    throw ShapeMismatch("JointLaw: table shape mismatch");
  }
  double total = 0.0;
  for (double& v : table_) {
    if (!std::isfinite(v)) throw InputError("JointLaw: non-finite entry");
    if (v < -tol::kNegativeMass) {
      throw NegativeMass("JointLaw: negative entry " + std::to_string(v));
    }
    if (v < 0.0) v = 0.0;
    total += v;
  }
  if (std::abs(total - 1.0) > tol::kNormalization) {
    throw NotNormalized("JointLaw: table sums to " + std::to_string(total));
  }
}

std::vector<double> JointLaw::row_sums() const {
  std::vector<double> r(atoms(), 0.0);
  for (std::size_t w = 0; w < atoms(); ++w) {
    for (std::size_t i = 0; i < points(); ++i) r[w] += (*this)(w, i);
  }
  return r;
}

std::vector<double> JointLaw::col_sums() const {
  std::vector<double> cs(points(), 0.0);
  for (std::size_t w = 0; w < atoms(); ++w) {
    for (std::size_t i = 0; i < points(); ++i) cs[i] += (*this)(w, i);
  }
  return cs;
}

JointLaw JointLaw::product(const ProbVec& weights, const ProbVec& marginal) {
  std::vector<double> table(weights.size() * marginal.size());
  for (std::size_t w = 0; w < weights.size(); ++w) {
    for (std::size_t i = 0; i < marginal.size(); ++i) {
      table[w * marginal.size() + i] = weights[w] * marginal[i];
    }
  }
  return JointLaw(weights.space(), marginal.space(), std::move(table));
}

ConditionalSystem conditionals(const JointLaw& joint) {
  const std::size_t nw = joint.atoms();
  const std::size_t n = joint.points();
  ProbVec weights(joint.omega(), joint.row_sums());
  ProbVec marginal(joint.state_space(), joint.col_sums());
  std::vector<ProbVec> margins;
  margins.reserve(nw);
  for (std::size_t w = 0; w < nw; ++w) {
    const double p = weights[w];
    if (p > 0.0) {
      std::vector<double> row(n);
      for (std::size_t i = 0; i < n; ++i) row[i] = joint(w, i) / p;
      margins.emplace_back(joint.state_space(), std::move(row));
    } else {
      margins.push_back(marginal);  // null-atom convention
    }
  }
  RandomMeasureFamily fam(joint.omega(), weights, std::move(margins));
  return ConditionalSystem{std::move(weights), std::move(fam),
                           std::move(marginal)};
}

double tau_c(const JointLaw& joint, const CostMatrix& c) {
  if (!same_space(joint.state_space(), c.space())) {
    throw SpaceMismatch("tau_c: cost not on the state space");
  }
  const ConditionalSystem sys = conditionals(joint);
  const RandomMeasureFamily target = RandomMeasureFamily::constant(
      joint.omega(), sys.weights, sys.marginal);
  return param_primal(sys.conditionals, target, c).total;
}

double tau_c_dual(const JointLaw& joint, const CostMatrix& c) {
  if (!same_space(joint.state_space(), c.space())) {
    throw SpaceMismatch("tau_c_dual: cost not on the state space");
  }
  const ConditionalSystem sys = conditionals(joint);
  const RandomMeasureFamily target = RandomMeasureFamily::constant(
      joint.omega(), sys.weights, sys.marginal);
  auto [f, value] = param_dual(sys.conditionals, target, c);
  (void)value;
  // Evaluate the integrand against the joint law directly:
  // E f(M, X) - E int f(M, x) dP_X.
  double on_joint = 0.0;
  double on_product = 0.0;
  for (std::size_t w = 0; w < joint.atoms(); ++w) {
    const auto& slice = f.slices[w];
    double marginal_term = 0.0;
    for (std::size_t i = 0; i < joint.points(); ++i) {
      on_joint += joint(w, i) * slice[i];
      marginal_term += sys.marginal[i] * slice[i];
    }
    on_product += sys.weights[w] * marginal_term;
  }
  return on_joint - on_product;
}

double beta(const JointLaw& joint) {
  const ConditionalSystem sys = conditionals(joint);
  double acc = 0.0;
  for (std::size_t w = 0; w < joint.atoms(); ++w) {
    acc += sys.weights[w] *
           variation_norm(sys.conditionals.margin(w), sys.marginal);
  }
  return 0.5 * acc;
}

TailQuantile::TailQuantile(std::vector<double> values,
                           std::vector<double> cum_tail)
    : values_(std::move(values)), cum_tail_(std::move(cum_tail)) {
  if (values_.size() != cum_tail_.size()) {
    throw ShapeMismatch("TailQuantile: breakpoint arrays differ in length");
  }
}

double TailQuantile::operator()(double u) const {
  // Q(u) = values[k] on [cum_tail[k-1], cum_tail[k]), with cum_tail[-1] = 0.
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (u < cum_tail_[k]) return values_[k];
  }
  return 0.0;
}

double TailQuantile::integral_to(double b) const {
  double acc = 0.0;
  double prev = 0.0;
  for (std::size_t k = 0; k < values_.size(); ++k) {
    const double hi = std::min(cum_tail_[k], b);
    if (hi > prev) acc += values_[k] * (hi - prev);
    prev = cum_tail_[k];
    if (prev >= b) break;
  }
  return acc;
}

TailQuantile tail_quantile(const JointLaw& joint, const CostMatrix& c,
                           std::size_t x0) {
  if (x0 >= joint.points()) {
    throw IndexOutOfRange("tail_quantile: x0 out of range");
  }
  if (!same_space(joint.state_space(), c.space())) {
    throw SpaceMismatch("tail_quantile: cost not on the state space");
  }
  const std::vector<double> marginal = joint.col_sums();
  // Aggregate P_X mass by cost value, largest cost first.
  std::map<double, double, std::greater<double>> mass_by_value;
  for (std::size_t i = 0; i < joint.points(); ++i) {
    if (marginal[i] > 0.0) mass_by_value[c(i, x0)] += marginal[i];
  }
  std::vector<double> values;
  std::vector<double> cum;
  double acc = 0.0;
  for (const auto& [v, m] : mass_by_value) {
    acc += m;
    values.push_back(v);
    cum.push_back(acc);
  }
  return TailQuantile(std::move(values), std::move(cum));
}

MpBound mp_bound(const JointLaw& joint, const CostMatrix& c, std::size_t x0) {
  MpBound r;
  r.tau = tau_c(joint, c);
  r.beta = beta(joint);
  const TailQuantile q = tail_quantile(joint, c, x0);
  r.bound = 2.0 * q.integral_to(r.beta);
  r.bounded_form = 2.0 * c.max_entry() * r.beta;
  r.holds = r.tau <= r.bound + tol::kGap;
  return r;
}

}  // namespace krc
