#include "krc/cost.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "krc/errors.hpp"
#include "krc/tolerances.hpp"

namespace krc {

namespace {

// Closure and worst-gap report on a raw row-major matrix; used both by the
// CostMatrix constructor (certificate) and the public operations.
std::vector<double> closure_of(std::span<const double> c, std::size_t n) {
  std::vector<double> d(c.begin(), c.end());
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      const double dik = d[i * n + k];
      for (std::size_t j = 0; j < n; ++j) {
        const double via = dik + d[k * n + j];
        if (via < d[i * n + j]) d[i * n + j] = via;
      }
    }
  }
  return d;
}

TightnessReport gap_report(std::span<const double> c,
                           std::span<const double> closed, std::size_t n) {
  TightnessReport r;
  r.gap = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double g = c[i * n + j] - closed[i * n + j];
      if (g > r.gap) {
        r.gap = g;
        r.worst_i = i;
        r.worst_j = j;
      }
    }
  }
  r.tight = r.gap <= tol::kTight;
  return r;
}

}  // namespace

CostMatrix::CostMatrix(SpacePtr space, std::vector<double> entries)
    : space_(std::move(space)), c_(std::move(entries)) {
  if (!space_) throw InputError("CostMatrix: null space");
  n_ = space_->size();
  if (c_.size() != n_ * n_) {
    throw ShapeMismatch("CostMatrix: expected " + std::to_string(n_ * n_) +
                        " entries, got " + std::to_string(c_.size()));
  }
  for (std::size_t i = 0; i < n_; ++i) {
    if (c_[i * n_ + i] != 0.0) {
      throw InputError("CostMatrix: nonzero diagonal at index " +
                       std::to_string(i));
    }
    for (std::size_t j = 0; j < n_; ++j) {
      const double v = c_[i * n_ + j];
      if (!std::isfinite(v)) {
        throw InputError("CostMatrix: non-finite cost at (" +
                         std::to_string(i) + "," + std::to_string(j) + ")");
      }
      if (v < 0.0) {
        throw InputError("CostMatrix: negative cost at (" + std::to_string(i) +
                         "," + std::to_string(j) + ")");
      }
      if (c_[j * n_ + i] != v) {
        throw InputError("CostMatrix: asymmetric at (" + std::to_string(i) +
                         "," + std::to_string(j) + ")");
      }
      max_ = std::max(max_, v);
    }
  }
  const auto closed = closure_of(c_, n_);
  tight_ = gap_report(c_, closed, n_).tight;
}

CostMatrix CostMatrix::discrete(SpacePtr space) {
  const std::size_t n = space->size();
  std::vector<double> c(n * n, 1.0);
  for (std::size_t i = 0; i < n; ++i) c[i * n + i] = 0.0;
  return CostMatrix(std::move(space), std::move(c));
}

CostMatrix CostMatrix::line(SpacePtr space, std::vector<double> positions) {
  const std::size_t n = space->size();
  if (positions.empty()) {
    positions.resize(n);
    for (std::size_t i = 0; i < n; ++i) positions[i] = double(i);
  }
  if (positions.size() != n) {
    throw ShapeMismatch("CostMatrix::line: positions length mismatch");
  }
  std::vector<double> c(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      c[i * n + j] = std::abs(positions[i] - positions[j]);
    }
  }
  return CostMatrix(std::move(space), std::move(c));
}

CostMatrix path_closure(const CostMatrix& c) {
  auto closed = closure_of(c.entries(), c.size());
  return CostMatrix(c.space(), std::move(closed));
}

TightnessReport check_cost_tight(const CostMatrix& c) {
  const auto closed = closure_of(c.entries(), c.size());
  return gap_report(c.entries(), closed, c.size());
}

bool lipschitz_check(std::span<const double> f, const CostMatrix& c) {
  const std::size_t n = c.size();
  if (f.size() != n) throw ShapeMismatch("lipschitz_check: length mismatch");
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::abs(f[i] - f[j]) > c(i, j) + tol::kLipschitz) return false;
    }
  }
  return true;
}

DualPotential::DualPotential(SpacePtr space, std::vector<double> f,
                             const CostMatrix& c)
    : space_(std::move(space)), f_(std::move(f)) {
  if (!same_space(space_, c.space())) {
    throw SpaceMismatch("DualPotential: space differs from cost space");
  }
  if (!lipschitz_check(f_, c)) {
    throw InputError("DualPotential: function is not c-Lipschitz");
  }
}

}  // namespace krc
