#ifndef KRC_RECONSTRUCT_HPP
#define KRC_RECONSTRUCT_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include "krc/cost.hpp"
#include "krc/dependence.hpp"
#include "krc/measures.hpp"
#include "krc/param.hpp"

namespace krc {

/// Joint law of a triple (M, X, Y) on Omega x S x S. For outputs of
/// couple_against, the (w, i)-margin recovers the input joint law of (M, X)
/// and the (w, j)-margin recovers p(w) * Q_w(j).
struct TripleLaw {
  SpacePtr omega;
  SpacePtr s;
  ProbVec weights;  // p(w), the law of M
  Tensor3 t;        // t(w, i, j)

  double expected_cost(const CostMatrix& c) const;

  /// Margin over j: the recovered law of (M, X).
  std::vector<double> mx_margin() const;
  /// Margin over i: the recovered law of (M, Y).
  std::vector<double> my_margin() const;
  /// Global law of Y.
  std::vector<double> y_marginal() const;
};

/// The general coupling: for every atom w, an optimal plan lambda_w between
/// P_{X|M=w} and the target Q_w, glued by the weights. The conditional cost
/// identity E[c(X,Y)|M=w] = l_c(P_{X|M=w}, Q_w) holds per atom by
/// construction. Requires Q to carry the same weights as the joint rows.
TripleLaw couple_against(const JointLaw& joint, const RandomMeasureFamily& q,
                         const CostMatrix& c);

/// The reconstruction coupling: couple_against with Q_w == P_X for every w.
/// The output makes Y independent of M and distributed as X, with
/// E c(X, Y) = tau_c(joint, c).
TripleLaw reconstruct_law(const JointLaw& joint, const CostMatrix& c);

/// Conditional kernels lambda_{w,x}(j) of Y given (M, X) = (w, x), each with
/// its CDF over the fixed label order of S (the finite stand-in for a Borel
/// isomorphism into [0,1]). Cells with zero mass carry the target margin of
/// their slice; the choice is invisible in the reassembled TripleLaw.
class ConditionalKernel {
 public:
  ConditionalKernel(SpacePtr omega, SpacePtr s,
                    std::vector<std::vector<double>> rows);

  const SpacePtr& omega() const { return omega_; }
  const SpacePtr& state_space() const { return s_; }
  const std::vector<double>& row(std::size_t w, std::size_t x) const {
    return rows_[w * s_->size() + x];
  }
  const std::vector<double>& cdf(std::size_t w, std::size_t x) const {
    return cdfs_[w * s_->size() + x];
  }

  /// The cadlag generalized inverse F^{-1}(u) = inf{ s : F(s) >= u } of the
  /// cell CDF, as a label index.
  std::size_t inverse_cdf(std::size_t w, std::size_t x, double u) const;

 private:
  SpacePtr omega_;
  SpacePtr s_;
  std::vector<std::vector<double>> rows_;
  std::vector<std::vector<double>> cdfs_;
};

ConditionalKernel disintegrate_kernel(const TripleLaw& t);

struct SampleRecord {
  std::size_t omega;
  std::size_t x;
  std::size_t y;
  double u;  // the uniform consumed by the inverse CDF
};

struct SampleBatch {
  std::uint64_t seed;
  std::vector<SampleRecord> records;
};

/// Draws N iid triples: (omega, x) from the joint law, u from a second
/// independent stream, y = F^{-1}_{omega,x}(u). Bit-exactly reproducible
/// from the seed.
SampleBatch inverse_cdf_sample(const ConditionalKernel& kernel,
                               const JointLaw& joint, std::uint64_t seed,
                               std::size_t n);

/// Max over (w, j) of | sum_i t(w,i,j) - p(w) * P_Y(j) |: zero exactly when
/// Y is independent of M. Reconstruction outputs stay below 1e-9.
double verify_independence(const TripleLaw& t);

struct TauDecay {
  std::vector<double> tau;   // tau_k for k = 1..n_max
  double fitted_rate = 0.0;  // least-squares geometric rate, diagnostic only
  bool rate_valid = false;
};

/// tau_c between X_0 and X_k for a finite Markov chain with transition
/// matrix P (row-major, rows summing to 1) started from `init`, for
/// k = 1..n_max, with a fitted geometric decay rate.
TauDecay markov_tau_decay(const std::vector<double>& transition,
                          const ProbVec& init, const CostMatrix& c,
                          std::size_t n_max);

}  // namespace krc

#endif  // KRC_RECONSTRUCT_HPP
