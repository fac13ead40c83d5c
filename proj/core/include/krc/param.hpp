#ifndef KRC_PARAM_HPP
#define KRC_PARAM_HPP

#include <cstddef>
#include <utility>
#include <vector>

#include "krc/coupling.hpp"
#include "krc/cost.hpp"
#include "krc/measures.hpp"

namespace krc {

/// A parameter-indexed family of probability measures: a finite parameter
/// space Omega with a weighting law and one measure on S per atom. This is
/// the finite form of a disintegrated random measure.
class RandomMeasureFamily {
 public:
  RandomMeasureFamily(SpacePtr omega, ProbVec weights,
                      std::vector<ProbVec> margins);

  const SpacePtr& omega() const { return omega_; }
  const SpacePtr& state_space() const { return state_space_; }
  const ProbVec& weights() const { return weights_; }
  const ProbVec& margin(std::size_t w) const { return margins_[w]; }
  std::size_t atoms() const { return margins_.size(); }

  /// Constant family: every atom carries the same measure.
  static RandomMeasureFamily constant(SpacePtr omega, ProbVec weights,
                                      const ProbVec& measure);

 private:
  SpacePtr omega_;
  SpacePtr state_space_;
  ProbVec weights_;
  std::vector<ProbVec> margins_;
};

/// Per-atom optimal plans with their values G(w) and the weighted total
/// sum_w p(w) G(w). The deterministic per-atom solve plays the role of a
/// measurable selection on a finite parameter space.
struct ParamPlan {
  std::vector<CouplingPlan> plans;
  std::vector<double> G;
  double total = 0.0;
};

/// A measurable integrand f(w, x) whose every slice f(w, .) lies in Lip_c.
struct ParamIntegrand {
  SpacePtr omega;
  SpacePtr state_space;
  std::vector<std::vector<double>> slices;  // one vector of length n per atom
};

/// Dense rank-3 tensor indexed (omega, i, j); the glued joint law on
/// Omega x S x S lives here.
class Tensor3 {
 public:
  Tensor3(std::size_t omega_size, std::size_t rows, std::size_t cols)
      : nw_(omega_size), rows_(rows), cols_(cols),
        data_(omega_size * rows * cols, 0.0) {}

  std::size_t omega_size() const { return nw_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double operator()(std::size_t w, std::size_t i, std::size_t j) const {
    return data_[(w * rows_ + i) * cols_ + j];
  }
  double& operator()(std::size_t w, std::size_t i, std::size_t j) {
    return data_[(w * rows_ + i) * cols_ + j];
  }
  const std::vector<double>& data() const { return data_; }
  double total_mass() const;

  friend bool operator==(const Tensor3& a, const Tensor3& b) {
    return a.nw_ == b.nw_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ &&
           a.data_ == b.data_;
  }

 private:
  std::size_t nw_, rows_, cols_;
  std::vector<double> data_;
};

struct ValidatedFamily {
  RandomMeasureFamily family;
  double cost_integral;  // int c(x, x0) dmu, x0 = point index 0
};

/// Shape/normalization checks plus the (automatically finite) integrability
/// certificate int c(x, x0) dmu recorded for reporting.
ValidatedFamily validate_family(RandomMeasureFamily family,
                                const CostMatrix& c);

/// Per-atom optimal plans between mu_w and nu_w. The families must carry the
/// same weighting law (to 1e-12) on the same parameter space.
/// Zero-weight atoms are solved anyway; they contribute nothing to total.
ParamPlan param_primal(const RandomMeasureFamily& mu_fam,
                       const RandomMeasureFamily& nu_fam, const CostMatrix& c);

/// Per-atom dual potentials assembled into an integrand, and the dual value
/// sum_w p(w) (mu_w(f_w) - nu_w(f_w)), which equals param_primal().total.
std::pair<ParamIntegrand, double> param_dual(
    const RandomMeasureFamily& mu_fam, const RandomMeasureFamily& nu_fam,
    const CostMatrix& c);

/// The glued joint law lambda(w,i,j) = p(w) * plans[w](i,j).
Tensor3 glue(const ParamPlan& pp, const ProbVec& weights);

}  // namespace krc

#endif  // KRC_PARAM_HPP
