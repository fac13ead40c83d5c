// krc: optimal couplings, Kantorovich-Rubinstein distances and dependence
// coefficients on finite spaces.
#include <exception>
#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "krc/errors.hpp"

int main(int argc, char** argv) {
  using namespace krc::cli;

  CLI::App app{"Optimal couplings and Kantorovich-Rubinstein distances "
               "between probability measures on finite spaces"};
  app.require_subcommand(1);

  CommonOptions validate_opt;
  auto* validate = app.add_subcommand(
      "validate", "Check the problem file: cost tightness, measure validity");
  validate->add_option("file", validate_opt.file, "problem JSON file")
      ->required();
  validate->add_flag("--json", validate_opt.json, "machine-readable report");

  OtOptions ot_opt;
  auto* ot = app.add_subcommand(
      "ot", "Solve the transport problem between two named measures");
  ot->add_option("file", ot_opt.file, "problem JSON file")->required();
  ot->add_option("--mu", ot_opt.mu_name, "first margin name")->required();
  ot->add_option("--nu", ot_opt.nu_name, "second margin name")->required();
  ot->add_flag("--dual", ot_opt.show_dual, "include the dual potential");
  ot->add_flag("--closure", ot_opt.apply_closure,
               "replace an untight cost by its path closure");
  ot->add_flag("--json", ot_opt.json, "machine-readable report");

  TauOptions tau_opt;
  auto* tau = app.add_subcommand(
      "tau", "Dependence coefficient tau_c of the joint law");
  tau->add_option("file", tau_opt.file, "problem JSON file")->required();
  tau->add_flag("--beta", tau_opt.with_beta, "include the beta coefficient");
  auto* bound_opt = tau->add_option(
      "--bound", tau_opt.bound_x0,
      "report the tail-quantile bound at this base point");
  tau->add_flag("--bound-min", tau_opt.bound_min,
                "report the tightest tail-quantile bound over base points");
  (void)bound_opt;
  tau->add_flag("--closure", tau_opt.apply_closure,
                "replace an untight cost by its path closure");
  tau->add_flag("--json", tau_opt.json, "machine-readable report");

  ReconstructOptions rec_opt;
  auto* rec = app.add_subcommand(
      "reconstruct",
      "Couple X with an independent copy X* at expected cost tau_c");
  rec->add_option("file", rec_opt.file, "problem JSON file")->required();
  auto* sample = rec->add_option("--sample", rec_opt.sample_count,
                                 "draw this many inverse-CDF samples");
  rec->add_option("--seed", rec_opt.seed, "sampler seed")->needs(sample);
  rec->add_option("--csv", rec_opt.csv_path, "write samples to this CSV file")
      ->needs(sample);
  rec->add_flag("--closure", rec_opt.apply_closure,
                "replace an untight cost by its path closure");
  rec->add_flag("--json", rec_opt.json, "machine-readable report");

  ChainOptions chain_opt;
  auto* chain = app.add_subcommand(
      "chain", "tau_c decay of a finite Markov chain");
  chain->add_option("file", chain_opt.file, "problem JSON file")->required();
  chain->add_option("--steps", chain_opt.steps, "number of steps")
      ->default_val(10);
  chain->add_flag("--closure", chain_opt.apply_closure,
                  "replace an untight cost by its path closure");
  chain->add_flag("--json", chain_opt.json, "machine-readable report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (*validate) return cmd_validate(validate_opt);
    if (*ot) return cmd_ot(ot_opt);
    if (*tau) return cmd_tau(tau_opt);
    if (*rec) return cmd_reconstruct(rec_opt);
    if (*chain) return cmd_chain(chain_opt);
  } catch (const krc::MathError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitMathFailure;
  } catch (const krc::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitMathFailure;
  }
  return kExitInputError;
}
