#ifndef KRC_COST_HPP
#define KRC_COST_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "krc/finite_space.hpp"

namespace krc {

/// Symmetric cost c(x,y) >= 0 on pairs of points, with zero diagonal and
/// finite entries. Carries a `tight` certificate: c is tight when it equals
/// its min-plus (shortest-path) closure, which on a finite space is exactly
/// the condition that c coincides with sup_{u in Lip_c} |u(x)-u(y)|.
/// Infinite entries are rejected at construction: they would break the
/// closure test.
class CostMatrix {
 public:
  /// `entries` is row-major n*n. Throws InputError on asymmetry, nonzero
  /// diagonal, negative or non-finite entries.
  CostMatrix(SpacePtr space, std::vector<double> entries);

  const SpacePtr& space() const { return space_; }
  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const {
    return c_[i * n_ + j];
  }
  std::span<const double> entries() const { return c_; }
  bool tight() const { return tight_; }
  double max_entry() const { return max_; }

  /// Discrete metric: c(i,j) = 1 for i != j.
  static CostMatrix discrete(SpacePtr space);

  /// Line metric |x - y| over given point positions (defaults to indices).
  static CostMatrix line(SpacePtr space, std::vector<double> positions = {});

 private:
  SpacePtr space_;
  std::size_t n_ = 0;
  std::vector<double> c_;
  bool tight_ = false;
  double max_ = 0.0;
};

/// Min-plus path closure (Floyd-Warshall): C*(i,j) = min over paths i -> j of
/// summed costs. The result is a pseudo-metric, dominated by C, idempotent,
/// and has the same Lipschitz class as C.
CostMatrix path_closure(const CostMatrix& c);

struct TightnessReport {
  bool tight = false;
  std::size_t worst_i = 0;
  std::size_t worst_j = 0;
  double gap = 0.0;  // max_{i,j} C(i,j) - closure(C)(i,j)
};

/// Decides condition (4) on a finite space: tight iff the worst gap between
/// C and its path closure is <= 1e-12.
TightnessReport check_cost_tight(const CostMatrix& c);

/// Membership in Lip_c with 1e-9 slack: |f(i)-f(j)| <= c(i,j) + 1e-9.
bool lipschitz_check(std::span<const double> f, const CostMatrix& c);

/// A function certified to lie in Lip_c at construction.
class DualPotential {
 public:
  DualPotential(SpacePtr space, std::vector<double> f, const CostMatrix& c);

  const SpacePtr& space() const { return space_; }
  std::span<const double> values() const { return f_; }
  double operator[](std::size_t i) const { return f_[i]; }

 private:
  SpacePtr space_;
  std::vector<double> f_;
};

}  // namespace krc

#endif  // KRC_COST_HPP
