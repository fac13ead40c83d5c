#include "krc/param.hpp"

#include <cmath>
#include <optional>
#include <string>

#include "krc/errors.hpp"
#include "krc/parallel.hpp"
#include "krc/tolerances.hpp"

namespace krc {

RandomMeasureFamily::RandomMeasureFamily(SpacePtr omega, ProbVec weights,
                                         std::vector<ProbVec> margins)
    : omega_(std::move(omega)),
      weights_(std::move(weights)),
      margins_(std::move(margins)) {
  if (!omega_) throw InputError("RandomMeasureFamily: null parameter space");
  if (!same_space(weights_.space(), omega_)) {
    throw SpaceMismatch("RandomMeasureFamily: weights not on Omega");
  }
  if (margins_.size() != omega_->size()) {
    throw ShapeMismatch("RandomMeasureFamily: need one margin per atom, got " +
                        std::to_string(margins_.size()));
  }
  state_space_ = margins_.front().space();
  for (const ProbVec& m : margins_) {
    if (!same_space(m.space(), state_space_)) {
      throw SpaceMismatch("RandomMeasureFamily: margins on different spaces");
    }
  }
}

RandomMeasureFamily RandomMeasureFamily::constant(SpacePtr omega,
                                                  ProbVec weights,
                                                  const ProbVec& measure) {
  std::vector<ProbVec> margins(omega->size(), measure);
  return RandomMeasureFamily(std::move(omega), std::move(weights),
                             std::move(margins));
}

double Tensor3::total_mass() const {
  double acc = 0.0;
  for (double v : data_) acc += v;
  return acc;
}

ValidatedFamily validate_family(RandomMeasureFamily family,
                                const CostMatrix& c) {
  if (!same_space(family.state_space(), c.space())) {
    throw SpaceMismatch("validate_family: margins not on the cost space");
  }
  double integral = 0.0;
  for (std::size_t w = 0; w < family.atoms(); ++w) {
    const ProbVec& m = family.margin(w);
    double per_atom = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) per_atom += m[i] * c(i, 0);
    integral += family.weights()[w] * per_atom;
  }
  return ValidatedFamily{std::move(family), integral};
}

namespace {

void require_compatible(const RandomMeasureFamily& a,
                        const RandomMeasureFamily& b, const CostMatrix& c,
                        const char* where) {
  if (!same_space(a.omega(), b.omega())) {
    throw SpaceMismatch(std::string(where) + ": parameter spaces differ");
  }
  if (!same_space(a.state_space(), b.state_space()) ||
      !same_space(a.state_space(), c.space())) {
    throw SpaceMismatch(std::string(where) + ": state spaces differ");
  }
  for (std::size_t w = 0; w < a.atoms(); ++w) {
    if (std::abs(a.weights()[w] - b.weights()[w]) > tol::kWeights) {
      throw WeightMismatch(std::string(where) +
                           ": families carry different laws at atom " +
                           a.omega()->label(w));
    }
  }
}

}  // namespace

ParamPlan param_primal(const RandomMeasureFamily& mu_fam,
                       const RandomMeasureFamily& nu_fam,
                       const CostMatrix& c) {
  require_compatible(mu_fam, nu_fam, c, "param_primal");
  const std::size_t nw = mu_fam.atoms();
  std::vector<CouplingPlan> plans;
  plans.reserve(nw);
  // Slots are filled in parallel, then moved in atom order: scheduling never
  // affects the result.
  std::vector<std::optional<CouplingPlan>> slots(nw);
  parallel_for(nw, [&](std::size_t w) {
    slots[w] = solve_primal(mu_fam.margin(w), nu_fam.margin(w), c);
  });
  ParamPlan pp;
  pp.G.resize(nw);
  pp.total = 0.0;
  for (std::size_t w = 0; w < nw; ++w) {
    pp.G[w] = slots[w]->value();
    pp.total += mu_fam.weights()[w] * pp.G[w];
    plans.push_back(std::move(*slots[w]));
  }
  pp.plans = std::move(plans);
  return pp;
}

std::pair<ParamIntegrand, double> param_dual(
    const RandomMeasureFamily& mu_fam, const RandomMeasureFamily& nu_fam,
    const CostMatrix& c) {
  require_compatible(mu_fam, nu_fam, c, "param_dual");
  const std::size_t nw = mu_fam.atoms();
  ParamIntegrand f;
  f.omega = mu_fam.omega();
  f.state_space = mu_fam.state_space();
  f.slices.resize(nw);
  std::vector<double> per_atom(nw, 0.0);
  parallel_for(nw, [&](std::size_t w) {
    auto [potential, value] =
        solve_dual(mu_fam.margin(w), nu_fam.margin(w), c);
    f.slices[w].assign(potential.values().begin(), potential.values().end());
    per_atom[w] = value;
  });
  double total = 0.0;
  for (std::size_t w = 0; w < nw; ++w) {
    total += mu_fam.weights()[w] * per_atom[w];
  }
  return {std::move(f), total};
}

Tensor3 glue(const ParamPlan& pp, const ProbVec& weights) {
  if (pp.plans.size() != weights.size()) {
    throw ShapeMismatch("glue: one plan per atom required");
  }
  if (pp.plans.empty()) throw ShapeMismatch("glue: empty plan list");
  const std::size_t rows = pp.plans.front().rows();
  const std::size_t cols = pp.plans.front().cols();
  Tensor3 t(weights.size(), rows, cols);
  for (std::size_t w = 0; w < weights.size(); ++w) {
    const CouplingPlan& plan = pp.plans[w];
    if (plan.rows() != rows || plan.cols() != cols) {
      throw ShapeMismatch("glue: plans have mixed shapes");
    }
    const double p = weights[w];
    for (std::size_t i = 0; i < rows; ++i) {
      for (std::size_t j = 0; j < cols; ++j) {
        t(w, i, j) = p * plan(i, j);
      }
    }
  }
  return t;
}

}  // namespace krc
