#ifndef KRC_MEASURES_HPP
#define KRC_MEASURES_HPP

#include <span>
#include <vector>

#include "krc/finite_space.hpp"

namespace krc {

/// A probability measure on a FiniteSpace: nonnegative masses summing to one.
/// Construction validates and never renormalizes; off-by-more-than-1e-12 sums
/// are rejected so data errors fail loudly.
class ProbVec {
 public:
  ProbVec(SpacePtr space, std::vector<double> mass);

  const SpacePtr& space() const { return space_; }
  std::size_t size() const { return mass_.size(); }
  std::span<const double> mass() const { return mass_; }
  double operator[](std::size_t i) const { return mass_[i]; }

  /// Integral of f against this measure.
  double expectation(std::span<const double> f) const;

  friend bool operator==(const ProbVec& a, const ProbVec& b) {
    return same_space(a.space_, b.space_) && a.mass_ == b.mass_;
  }

 private:
  SpacePtr space_;
  std::vector<double> mass_;
};

/// Validates a raw vector as a probability measure on `space`.
/// Errors: NegativeMass if any entry < -1e-15 (entries in [-1e-15, 0) are
/// treated as noise and clamped to 0); NotNormalized if |sum - 1| > 1e-12.
ProbVec validate_prob(std::vector<double> raw, SpacePtr space);

/// Dirac mass at point index i.
ProbVec dirac(SpacePtr space, std::size_t i);

/// Uniform measure.
ProbVec uniform(SpacePtr space);

/// Componentwise Hahn decomposition of the signed measure mu - nu:
/// pi_plus and pi_minus are nonnegative with disjoint supports and
/// mu - nu = pi_plus - pi_minus holds exactly.
struct SignedDecomposition {
  std::vector<double> pi_plus;
  std::vector<double> pi_minus;
  double total_plus = 0.0;  // == sum(pi_plus) == sum(pi_minus) for probabilities
};

SignedDecomposition hahn_decompose(const ProbVec& mu, const ProbVec& nu);

/// Variation norm ||mu - nu||_v = sum_i |mu(i) - nu(i)|
/// (twice the total-variation distance).
double variation_norm(const ProbVec& mu, const ProbVec& nu);

}  // namespace krc

#endif  // KRC_MEASURES_HPP
