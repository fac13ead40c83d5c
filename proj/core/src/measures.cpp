#include "krc/measures.hpp"

#include <cmath>
#include <string>

#include "krc/errors.hpp"
#include "krc/tolerances.hpp"

namespace krc {

ProbVec::ProbVec(SpacePtr space, std::vector<double> mass)
    : space_(std::move(space)), mass_(std::move(mass)) {
  if (!space_) throw InputError("ProbVec: null space");
  if (mass_.size() != space_->size()) {
    throw ShapeMismatch("ProbVec: mass has " + std::to_string(mass_.size()) +
                        " entries but space has " +
                        std::to_string(space_->size()) + " points");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < mass_.size(); ++i) {
    double& m = mass_[i];
    if (!std::isfinite(m)) {
      throw InputError("ProbVec: non-finite mass at index " +
                       std::to_string(i));
    }
    if (m < -tol::kNegativeMass) {
      throw NegativeMass("ProbVec: negative mass " + std::to_string(m) +
                         " at index " + std::to_string(i));
    }
    if (m < 0.0) m = 0.0;  // rounding noise within the tolerance
    sum += m;
  }
  if (std::abs(sum - 1.0) > tol::kNormalization) {
    throw NotNormalized("ProbVec: mass sums to " + std::to_string(sum));
  }
}

double ProbVec::expectation(std::span<const double> f) const {
  if (f.size() != mass_.size()) {
    throw ShapeMismatch("expectation: function length mismatch");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < mass_.size(); ++i) acc += mass_[i] * f[i];
  return acc;
}

ProbVec validate_prob(std::vector<double> raw, SpacePtr space) {
  return ProbVec(std::move(space), std::move(raw));
}

ProbVec dirac(SpacePtr space, std::size_t i) {
  if (i >= space->size()) throw IndexOutOfRange("dirac: index out of range");
  std::vector<double> m(space->size(), 0.0);
  m[i] = 1.0;
  return ProbVec(std::move(space), std::move(m));
}

ProbVec uniform(SpacePtr space) {
  std::vector<double> m(space->size(), 1.0 / double(space->size()));
  return ProbVec(std::move(space), std::move(m));
}

namespace {
void require_same_space(const ProbVec& mu, const ProbVec& nu,
                        const char* where) {
  if (!same_space(mu.space(), nu.space())) {
    throw SpaceMismatch(std::string(where) + ": measures on different spaces");
  }
}
}  // namespace

SignedDecomposition hahn_decompose(const ProbVec& mu, const ProbVec& nu) {
  require_same_space(mu, nu, "hahn_decompose");
  const std::size_t n = mu.size();
  SignedDecomposition d;
  d.pi_plus.resize(n);
  d.pi_minus.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double diff = mu[i] - nu[i];
    d.pi_plus[i] = diff > 0.0 ? diff : 0.0;
    d.pi_minus[i] = diff < 0.0 ? -diff : 0.0;
    d.total_plus += d.pi_plus[i];
  }
  return d;
}

double variation_norm(const ProbVec& mu, const ProbVec& nu) {
  require_same_space(mu, nu, "variation_norm");
  double acc = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) acc += std::abs(mu[i] - nu[i]);
  return acc;
}

}  // namespace krc
