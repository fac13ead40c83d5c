#include "krc/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "krc/errors.hpp"
#include "krc/parallel.hpp"
#include "krc/rng.hpp"
#include "krc/tolerances.hpp"

namespace krc {

double TripleLaw::expected_cost(const CostMatrix& c) const {
  double acc = 0.0;
  for (std::size_t w = 0; w < t.omega_size(); ++w) {
    for (std::size_t i = 0; i < t.rows(); ++i) {
      for (std::size_t j = 0; j < t.cols(); ++j) {
        acc += t(w, i, j) * c(i, j);
      }
    }
  }
  return acc;
}

std::vector<double> TripleLaw::mx_margin() const {
  std::vector<double> m(t.omega_size() * t.rows(), 0.0);
  for (std::size_t w = 0; w < t.omega_size(); ++w) {
    for (std::size_t i = 0; i < t.rows(); ++i) {
      for (std::size_t j = 0; j < t.cols(); ++j) {
        m[w * t.rows() + i] += t(w, i, j);
      }
    }
  }
  return m;
}

std::vector<double> TripleLaw::my_margin() const {
  std::vector<double> m(t.omega_size() * t.cols(), 0.0);
  for (std::size_t w = 0; w < t.omega_size(); ++w) {
    for (std::size_t i = 0; i < t.rows(); ++i) {
      for (std::size_t j = 0; j < t.cols(); ++j) {
        m[w * t.cols() + j] += t(w, i, j);
      }
    }
  }
  return m;
}

std::vector<double> TripleLaw::y_marginal() const {
  std::vector<double> m(t.cols(), 0.0);
  for (std::size_t w = 0; w < t.omega_size(); ++w) {
    for (std::size_t i = 0; i < t.rows(); ++i) {
      for (std::size_t j = 0; j < t.cols(); ++j) {
        m[j] += t(w, i, j);
      }
    }
  }
  return m;
}

TripleLaw couple_against(const JointLaw& joint, const RandomMeasureFamily& q,
                         const CostMatrix& c) {
  if (!same_space(joint.omega(), q.omega())) {
    throw SpaceMismatch("couple_against: parameter spaces differ");
  }
  if (!same_space(joint.state_space(), q.state_space()) ||
      !same_space(joint.state_space(), c.space())) {
    throw SpaceMismatch("couple_against: state spaces differ");
  }
  const std::vector<double> rows = joint.row_sums();
  for (std::size_t w = 0; w < rows.size(); ++w) {
    if (std::abs(rows[w] - q.weights()[w]) > tol::kWeights) {
      throw WeightMismatch(
          "couple_against: target weights differ from the joint law at atom " +
          joint.omega()->label(w));
    }
  }
  const ConditionalSystem sys = conditionals(joint);
  const ParamPlan pp = param_primal(sys.conditionals, q, c);
  Tensor3 glued = glue(pp, sys.weights);
  return TripleLaw{joint.omega(), joint.state_space(), sys.weights,
                   std::move(glued)};
}

TripleLaw reconstruct_law(const JointLaw& joint, const CostMatrix& c) {
  const ConditionalSystem sys = conditionals(joint);
  const RandomMeasureFamily target = RandomMeasureFamily::constant(
      joint.omega(), sys.weights, sys.marginal);
  return couple_against(joint, target, c);
}

ConditionalKernel::ConditionalKernel(SpacePtr omega, SpacePtr s,
                                     std::vector<std::vector<double>> rows)
    : omega_(std::move(omega)), s_(std::move(s)), rows_(std::move(rows)) {
  if (rows_.size() != omega_->size() * s_->size()) {
    throw ShapeMismatch("ConditionalKernel: need one row per (omega, x) cell");
  }
  cdfs_.reserve(rows_.size());
  for (const auto& row : rows_) {
    if (row.size() != s_->size()) {
      throw ShapeMismatch("ConditionalKernel: row length mismatch");
    }
    std::vector<double> cdf(row.size());
    double acc = 0.0;
    for (std::size_t j = 0; j < row.size(); ++j) {
      acc += row[j];
      cdf[j] = acc;
    }
    cdfs_.push_back(std::move(cdf));
  }
}

std::size_t ConditionalKernel::inverse_cdf(std::size_t w, std::size_t x,
                                           double u) const {
  const std::vector<double>& cdf = cdfs_[w * s_->size() + x];
  const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
  if (it == cdf.end()) return cdf.size() - 1;  // u above the rounded total
  return std::size_t(it - cdf.begin());
}

ConditionalKernel disintegrate_kernel(const TripleLaw& law) {
  const std::size_t nw = law.t.omega_size();
  const std::size_t n = law.t.rows();
  const std::size_t m = law.t.cols();
  const std::vector<double> global = law.y_marginal();
  std::vector<std::vector<double>> rows(nw * n);
  for (std::size_t w = 0; w < nw; ++w) {
    // Target margin of the slice, used for zero-mass conditioning cells.
    std::vector<double> slice_margin(m, 0.0);
    double slice_mass = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        slice_margin[j] += law.t(w, i, j);
        slice_mass += law.t(w, i, j);
      }
    }
    if (slice_mass > 0.0) {
      for (double& v : slice_margin) v /= slice_mass;
    } else {
      slice_margin = global;
    }
    for (std::size_t i = 0; i < n; ++i) {
      double row_mass = 0.0;
      for (std::size_t j = 0; j < m; ++j) row_mass += law.t(w, i, j);
      std::vector<double>& row = rows[w * n + i];
      row.resize(m);
      if (row_mass > 0.0) {
        for (std::size_t j = 0; j < m; ++j) row[j] = law.t(w, i, j) / row_mass;
      } else {
        row = slice_margin;
      }
    }
  }
  return ConditionalKernel(law.omega, law.s, std::move(rows));
}

SampleBatch inverse_cdf_sample(const ConditionalKernel& kernel,
                               const JointLaw& joint, std::uint64_t seed,
                               std::size_t n) {
  if (!same_space(kernel.omega(), joint.omega()) ||
      !same_space(kernel.state_space(), joint.state_space())) {
    throw SpaceMismatch("inverse_cdf_sample: kernel does not match the joint");
  }
  // CDF of the (omega, x) law in row-major cell order.
  const std::vector<double>& table = joint.table();
  std::vector<double> cell_cdf(table.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < table.size(); ++k) {
    acc += table[k];
    cell_cdf[k] = acc;
  }

  SplitRng rng(seed);
  SampleBatch batch;
  batch.seed = seed;
  batch.records.reserve(n);
  const std::size_t points = joint.points();
  for (std::size_t k = 0; k < n; ++k) {
    const double u_pair = next_uniform(rng.pair_stream);
    const auto it =
        std::lower_bound(cell_cdf.begin(), cell_cdf.end(), u_pair);
    const std::size_t cell =
        it == cell_cdf.end() ? cell_cdf.size() - 1
                             : std::size_t(it - cell_cdf.begin());
    const std::size_t w = cell / points;
    const std::size_t x = cell % points;
    const double u = next_uniform(rng.uniform_stream);
    const std::size_t y = kernel.inverse_cdf(w, x, u);
    batch.records.push_back(SampleRecord{w, x, y, u});
  }
  return batch;
}

double verify_independence(const TripleLaw& law) {
  const std::vector<double> marginal = law.y_marginal();
  double worst = 0.0;
  for (std::size_t w = 0; w < law.t.omega_size(); ++w) {
    for (std::size_t j = 0; j < law.t.cols(); ++j) {
      double slice = 0.0;
      for (std::size_t i = 0; i < law.t.rows(); ++i) slice += law.t(w, i, j);
      worst = std::max(worst,
                       std::abs(slice - law.weights[w] * marginal[j]));
    }
  }
  return worst;
}

namespace {

std::vector<double> multiply_stochastic(const std::vector<double>& a,
                                        const std::vector<double>& b,
                                        std::size_t n) {
  std::vector<double> out(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      const double aik = a[i * n + k];
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        out[i * n + j] += aik * b[k * n + j];
      }
    }
  }
  return out;
}

}  // namespace

TauDecay markov_tau_decay(const std::vector<double>& transition,
                          const ProbVec& init, const CostMatrix& c,
                          std::size_t n_max) {
  const std::size_t n = init.size();
  if (transition.size() != n * n) {
    throw ShapeMismatch("markov_tau_decay: transition matrix shape mismatch");
  }
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double p = transition[i * n + j];
      if (!std::isfinite(p) || p < -tol::kNegativeMass) {
        throw NotStochastic("markov_tau_decay: bad entry in row " +
                            std::to_string(i));
      }
      row += std::max(p, 0.0);
    }
    if (std::abs(row - 1.0) > tol::kNormalization) {
      throw NotStochastic("markov_tau_decay: row " + std::to_string(i) +
                          " sums to " + std::to_string(row));
    }
  }

  TauDecay result;
  result.tau.reserve(n_max);
  std::vector<double> power = transition;  // P^k
  for (std::size_t k = 1; k <= n_max; ++k) {
    if (k > 1) power = multiply_stochastic(power, transition, n);
    std::vector<double> table(n * n);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        table[i * n + j] = init[i] * power[i * n + j];
        total += table[i * n + j];
      }
    }
    // Repeated products drift by a few ulps; rescale so the joint law
    // validates, and refuse anything beyond rounding noise.
    if (std::abs(total - 1.0) > 1e-9) {
      throw NumericalFailure("markov_tau_decay: mass drift " +
                             std::to_string(total - 1.0));
    }
    if (total != 1.0) {
      for (double& v : table) v /= total;
    }
    JointLaw joint(init.space(), init.space(), std::move(table));
    result.tau.push_back(tau_c(joint, c));
  }

  // Diagnostic least-squares fit of log tau_k against k.
  std::vector<std::pair<double, double>> pts;
  for (std::size_t k = 0; k < result.tau.size(); ++k) {
    if (result.tau[k] > 1e-12) {
      pts.emplace_back(double(k + 1), std::log(result.tau[k]));
    }
  }
  if (pts.size() >= 2) {
    double mean_k = 0.0, mean_y = 0.0;
    for (const auto& [k, y] : pts) {
      mean_k += k;
      mean_y += y;
    }
    mean_k /= double(pts.size());
    mean_y /= double(pts.size());
    double num = 0.0, den = 0.0;
    for (const auto& [k, y] : pts) {
      num += (k - mean_k) * (y - mean_y);
      den += (k - mean_k) * (k - mean_k);
    }
    if (den > 0.0) {
      result.fitted_rate = std::exp(num / den);
      result.rate_valid = true;
    }
  }
  return result;
}

}  // namespace krc
