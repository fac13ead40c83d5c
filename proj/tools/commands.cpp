#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "krc/coupling.hpp"
#include "krc/errors.hpp"
#include "krc/reconstruct.hpp"
#include "krc/tolerances.hpp"
#include "problem.hpp"

namespace krc::cli {

using nlohmann::json;

namespace {

class Timer {
 public:
  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ =
      std::chrono::steady_clock::now();
};

json vector_json(std::span<const double> v) {
  return json(std::vector<double>(v.begin(), v.end()));
}

json matrix_json(std::span<const double> m, std::size_t rows,
                 std::size_t cols) {
  json out = json::array();
  for (std::size_t i = 0; i < rows; ++i) {
    out.push_back(
        json(std::vector<double>(m.begin() + long(i * cols),
                                 m.begin() + long((i + 1) * cols))));
  }
  return out;
}

void print_human(const json& j, int indent = 0) {
  const std::string pad(std::size_t(indent) * 2, ' ');
  for (const auto& [key, value] : j.items()) {
    if (value.is_object()) {
      std::cout << pad << key << ":\n";
      print_human(value, indent + 1);
    } else if (value.is_array() && !value.empty() &&
               value.front().is_array()) {
      std::cout << pad << key << ":\n";
      for (const auto& row : value) {
        std::cout << pad << "  " << row.dump() << "\n";
      }
    } else {
      std::cout << pad << key << ": " << value.dump() << "\n";
    }
  }
}

void emit(json report, const Timer& timer, bool as_json) {
  report["wall_time_ms"] = timer.elapsed_ms();
  if (as_json) {
    std::cout << report.dump(2) << "\n";
  } else {
    print_human(report);
  }
}

// Resolves the cost for commands that need one, applying --closure (with a
// warning) when asked. Untight costs without --closure are a mathematical
// failure, not an input error.
CostMatrix resolve_cost(const Problem& p, bool apply_closure,
                        const char* command) {
  if (!p.space || !p.cost) {
    throw InputError(std::string(command) +
                     ": the problem file needs a space block with a cost");
  }
  if (p.cost->tight()) return *p.cost;
  if (apply_closure) {
    const auto report = check_cost_tight(*p.cost);
    std::cerr << "warning: cost is not tight (worst gap " << report.gap
              << " at (" << p.space->label(report.worst_i) << ", "
              << p.space->label(report.worst_j)
              << ")); using its path closure\n";
    return path_closure(*p.cost);
  }
  throw UntightCost(std::string(command) +
                    ": cost fails condition (4); rerun with --closure to "
                    "replace it by its path closure");
}

const JointLaw& require_joint(const Problem& p, const char* command) {
  if (!p.joint) {
    throw InputError(std::string(command) +
                     ": the problem file needs a joint block");
  }
  return *p.joint;
}

}  // namespace

int cmd_validate(const CommonOptions& opt) {
  Timer timer;
  const LoadedProblem loaded = load_problem(opt.file);
  const Problem& p = loaded.problem;

  json results;
  bool tight_ok = true;
  if (p.space) {
    results["space"] = {{"points", p.space->size()}};
  }
  if (p.cost) {
    const auto report = check_cost_tight(*p.cost);
    tight_ok = report.tight;
    results["cost"] = {
        {"tight", report.tight},
        {"worst_pair", {p.space->label(report.worst_i),
                        p.space->label(report.worst_j)}},
        {"gap", report.gap},
        {"max_entry", p.cost->max_entry()},
    };
  }
  if (!p.measures.empty()) {
    json names = json::array();
    for (const auto& [name, m] : p.measures) names.push_back(name);
    results["measures"] = {{"valid", true}, {"names", names}};
  }
  if (p.joint) {
    results["joint"] = {{"atoms", p.joint->atoms()},
                        {"points", p.joint->points()},
                        {"valid", true}};
  }
  if (!p.families.empty()) {
    json fams;
    for (const auto& [name, fam] : p.families) {
      json info = {{"atoms", fam.atoms()}, {"valid", true}};
      if (p.cost) {
        info["cost_integral"] = validate_family(fam, *p.cost).cost_integral;
      }
      fams[name] = info;
    }
    results["families"] = fams;
  }

  json report = {{"command", "validate"},
                 {"arguments", {{"file", opt.file}}},
                 {"inputs_digest", "fnv1a:" + loaded.digest},
                 {"results", results}};
  emit(std::move(report), timer, opt.json);
  return tight_ok ? kExitOk : kExitMathFailure;
}

int cmd_ot(const OtOptions& opt) {
  Timer timer;
  const LoadedProblem loaded = load_problem(opt.file);
  const Problem& p = loaded.problem;
  const CostMatrix cost = resolve_cost(p, opt.apply_closure, "ot");

  const auto mu_it = p.measures.find(opt.mu_name);
  const auto nu_it = p.measures.find(opt.nu_name);
  if (mu_it == p.measures.end()) {
    throw InputError("ot: unknown measure \"" + opt.mu_name + "\"");
  }
  if (nu_it == p.measures.end()) {
    throw InputError("ot: unknown measure \"" + opt.nu_name + "\"");
  }
  const ProbVec& mu = mu_it->second;
  const ProbVec& nu = nu_it->second;

  const TransportResult result = solve(mu, nu, cost);

  // Certificates are recomputed here from the raw plan and potential, not
  // copied out of the solver.
  const auto rows = result.plan.row_sums();
  const auto cols = result.plan.col_sums();
  double margin_residual = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    margin_residual = std::max(margin_residual, std::abs(rows[i] - mu[i]));
    margin_residual = std::max(margin_residual, std::abs(cols[i] - nu[i]));
  }
  const double primal = result.plan.cost_under(cost);
  const double dual = mu.expectation(result.potential.values()) -
                      nu.expectation(result.potential.values());
  const double gap = primal - dual;

  json results = {{"value", primal},
                  {"dual_value", dual},
                  {"plan", matrix_json(result.plan.entries(), mu.size(),
                                       nu.size())}};
  if (opt.show_dual) {
    results["potential"] = vector_json(result.potential.values());
  }
  json report = {
      {"command", "ot"},
      {"arguments",
       {{"file", opt.file}, {"mu", opt.mu_name}, {"nu", opt.nu_name},
        {"closure", opt.apply_closure}}},
      {"inputs_digest", "fnv1a:" + loaded.digest},
      {"results", results},
      {"certificates",
       {{"duality_gap", gap},
        {"margin_residual", margin_residual},
        {"potential_is_lipschitz",
         lipschitz_check(result.potential.values(), cost)}}}};
  emit(std::move(report), timer, opt.json);
  return std::abs(gap) <= tol::kGap ? kExitOk : kExitMathFailure;
}

int cmd_tau(const TauOptions& opt) {
  Timer timer;
  const LoadedProblem loaded = load_problem(opt.file);
  const Problem& p = loaded.problem;
  const JointLaw& joint = require_joint(p, "tau");
  const CostMatrix cost = resolve_cost(p, opt.apply_closure, "tau");

  const double tau = tau_c(joint, cost);
  const double tau_dual = tau_c_dual(joint, cost);

  json results = {{"tau_c", tau}, {"tau_c_dual", tau_dual}};
  if (opt.with_beta) {
    results["beta"] = beta(joint);
  }
  bool bounds_hold = true;
  if (opt.bound_x0) {
    const auto idx = joint.state_space()->index_of(*opt.bound_x0);
    if (!idx) {
      throw InputError("tau: unknown point \"" + *opt.bound_x0 +
                       "\" for --bound");
    }
    const MpBound mp = mp_bound(joint, cost, *idx);
    bounds_hold = bounds_hold && mp.holds;
    results["bound"] = {{"x0", *opt.bound_x0},
                        {"value", mp.bound},
                        {"holds", mp.holds},
                        {"bounded_form", mp.bounded_form},
                        {"beta", mp.beta}};
  }
  if (opt.bound_min) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_x0 = 0;
    for (std::size_t i = 0; i < joint.points(); ++i) {
      const MpBound mp = mp_bound(joint, cost, i);
      if (mp.bound < best) {
        best = mp.bound;
        best_x0 = i;
      }
    }
    const bool min_holds = tau <= best + tol::kGap;
    bounds_hold = bounds_hold && min_holds;
    results["bound_min"] = {{"x0", joint.state_space()->label(best_x0)},
                            {"value", best},
                            {"holds", min_holds}};
  }

  json report = {
      {"command", "tau"},
      {"arguments", {{"file", opt.file}, {"closure", opt.apply_closure}}},
      {"inputs_digest", "fnv1a:" + loaded.digest},
      {"results", results},
      {"certificates",
       {{"primal_dual_difference", std::abs(tau - tau_dual)}}}};
  emit(std::move(report), timer, opt.json);
  const bool ok = std::abs(tau - tau_dual) <= tol::kGap && bounds_hold;
  return ok ? kExitOk : kExitMathFailure;
}

int cmd_reconstruct(const ReconstructOptions& opt) {
  Timer timer;
  const LoadedProblem loaded = load_problem(opt.file);
  const Problem& p = loaded.problem;
  const JointLaw& joint = require_joint(p, "reconstruct");
  const CostMatrix cost = resolve_cost(p, opt.apply_closure, "reconstruct");

  const TripleLaw law = reconstruct_law(joint, cost);
  const double expected = law.expected_cost(cost);
  const double tau = tau_c(joint, cost);

  // Certificates from the raw tensor.
  const double independence = verify_independence(law);
  const auto mx = law.mx_margin();
  double recovery = 0.0;
  for (std::size_t w = 0; w < joint.atoms(); ++w) {
    for (std::size_t i = 0; i < joint.points(); ++i) {
      recovery = std::max(
          recovery, std::abs(mx[w * joint.points() + i] - joint(w, i)));
    }
  }

  json tensor = json::array();
  for (std::size_t w = 0; w < law.t.omega_size(); ++w) {
    json slice = json::array();
    for (std::size_t i = 0; i < law.t.rows(); ++i) {
      std::vector<double> row(law.t.cols());
      for (std::size_t j = 0; j < law.t.cols(); ++j) row[j] = law.t(w, i, j);
      slice.push_back(json(row));
    }
    tensor.push_back(slice);
  }
  json results = {{"expected_cost", expected},
                  {"tau_c", tau},
                  {"tensor", tensor}};

  if (opt.sample_count) {
    const auto kernel = disintegrate_kernel(law);
    const SampleBatch batch =
        inverse_cdf_sample(kernel, joint, opt.seed, *opt.sample_count);
    double empirical = 0.0;
    for (const auto& rec : batch.records) {
      empirical += cost(rec.x, rec.y);
    }
    empirical /= double(batch.records.size());
    results["sample"] = {{"count", *opt.sample_count},
                         {"seed", opt.seed},
                         {"empirical_cost", empirical}};
    if (opt.csv_path) {
      std::ofstream out(*opt.csv_path, std::ios::binary);
      if (!out) throw InputError("reconstruct: cannot write " + *opt.csv_path);
      out << "omega_label,x_label,y_label,u\n";
      char buf[64];
      for (const auto& rec : batch.records) {
        std::snprintf(buf, sizeof buf, "%.17g", rec.u);
        out << joint.omega()->label(rec.omega) << ','
            << joint.state_space()->label(rec.x) << ','
            << joint.state_space()->label(rec.y) << ',' << buf << '\n';
      }
      results["sample"]["csv"] = *opt.csv_path;
    }
  }

  json report = {
      {"command", "reconstruct"},
      {"arguments", {{"file", opt.file}, {"closure", opt.apply_closure}}},
      {"inputs_digest", "fnv1a:" + loaded.digest},
      {"results", results},
      {"certificates",
       {{"independence_deviation", independence},
        {"margin_recovery", recovery},
        {"cost_tau_difference", std::abs(expected - tau)}}}};
  emit(std::move(report), timer, opt.json);
  const bool ok = independence <= tol::kGap && recovery <= tol::kGap &&
                  std::abs(expected - tau) <= tol::kGap;
  return ok ? kExitOk : kExitMathFailure;
}

int cmd_chain(const ChainOptions& opt) {
  Timer timer;
  const LoadedProblem loaded = load_problem(opt.file);
  const Problem& p = loaded.problem;
  if (!p.chain) {
    throw InputError("chain: the problem file needs a chain block");
  }
  const CostMatrix cost = resolve_cost(p, opt.apply_closure, "chain");

  const TauDecay decay =
      markov_tau_decay(p.chain->transition, p.chain->init, cost, opt.steps);

  json results = {{"tau_series", decay.tau}};
  if (decay.rate_valid) {
    results["fitted_rate"] = decay.fitted_rate;
  }
  json report = {
      {"command", "chain"},
      {"arguments",
       {{"file", opt.file}, {"steps", opt.steps},
        {"closure", opt.apply_closure}}},
      {"inputs_digest", "fnv1a:" + loaded.digest},
      {"results", results}};
  emit(std::move(report), timer, opt.json);
  return kExitOk;
}

}  // namespace krc::cli
