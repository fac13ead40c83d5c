// Seeded random-instance generators shared by the unit and acceptance suites.
#ifndef KRC_TESTS_FUZZ_HPP
#define KRC_TESTS_FUZZ_HPP

#include <random>
#include <vector>

#include "krc/cost.hpp"
#include "krc/dependence.hpp"
#include "krc/measures.hpp"
#include "krc/param.hpp"

namespace krc::fuzz {

inline std::mt19937_64 make_rng(std::uint64_t seed) {
  return std::mt19937_64(seed);
}

/// Random probability vector; with allow_zeros roughly a third of the
/// entries are zeroed before normalization (at least one survives).
inline ProbVec random_prob(std::mt19937_64& rng, const SpacePtr& space,
                           bool allow_zeros = false) {
  std::uniform_real_distribution<double> mass(0.05, 1.0);
  std::uniform_int_distribution<int> coin(0, 2);
  const std::size_t n = space->size();
  std::vector<double> m(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    m[i] = (allow_zeros && coin(rng) == 0) ? 0.0 : mass(rng);
    total += m[i];
  }
  if (total == 0.0) {
    m[std::uniform_int_distribution<std::size_t>(0, n - 1)(rng)] = 1.0;
    total = 1.0;
  }
  for (double& v : m) v /= total;
  return ProbVec(space, std::move(m));
}

/// Random tight cost: the path closure of a random symmetric matrix with
/// entries in [lo, hi]. Off-diagonal entries stay >= lo > 0, so Lip_c
/// separates points.
inline CostMatrix random_tight_cost(std::mt19937_64& rng,
                                    const SpacePtr& space, double lo = 0.1,
                                    double hi = 2.0) {
  std::uniform_real_distribution<double> weight(lo, hi);
  const std::size_t n = space->size();
  std::vector<double> c(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      c[i * n + j] = c[j * n + i] = weight(rng);
    }
  }
  return path_closure(CostMatrix(space, std::move(c)));
}

/// Random joint law with strictly positive entries unless allow_zeros.
inline JointLaw random_joint(std::mt19937_64& rng, const SpacePtr& omega,
                             const SpacePtr& s, bool allow_zeros = false) {
  std::uniform_real_distribution<double> mass(0.05, 1.0);
  std::uniform_int_distribution<int> coin(0, 2);
  std::vector<double> table(omega->size() * s->size());
  double total = 0.0;
  for (double& v : table) {
    v = (allow_zeros && coin(rng) == 0) ? 0.0 : mass(rng);
    total += v;
  }
  if (total == 0.0) {
    table.front() = 1.0;
    total = 1.0;
  }
  for (double& v : table) v /= total;
  return JointLaw(omega, s, std::move(table));
}

inline RandomMeasureFamily random_family(std::mt19937_64& rng,
                                         const SpacePtr& omega,
                                         const SpacePtr& s,
                                         const ProbVec& weights,
                                         bool allow_zeros = false) {
  std::vector<ProbVec> margins;
  margins.reserve(omega->size());
  for (std::size_t w = 0; w < omega->size(); ++w) {
    margins.push_back(random_prob(rng, s, allow_zeros));
  }
  return RandomMeasureFamily(omega, weights, std::move(margins));
}

}  // namespace krc::fuzz

#endif  // KRC_TESTS_FUZZ_HPP
