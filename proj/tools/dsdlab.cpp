// dsdlab: evolve and classify bipartite qutrit states under local dephasing.
//
//   dsdlab evolve        --alpha 4.5 --gamma-a 1 --gamma-b 1 --t 1 --initial rho
//   dsdlab classify      ... [--certificate paper3x3]
//   dsdlab sweep         --quantity pt-min-eig --alpha 4.5 --gamma 1 --t-range 0,2,201
//   dsdlab thresholds    --alpha 4.5 --gamma 1
//   dsdlab verify-lemmas [--seed 42] [--samples 200]
//
// Exit codes: 0 success, 1 verification failure, 2 usage error, 3 invalid input.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "dsd/cli.hpp"
#include "dsd/verify.hpp"

namespace {

struct StateFlags {
  double alpha = 4.5;
  double gamma_a = 1.0;
  double gamma_b = 1.0;
  double t = 0.0;
  std::string initial = "rho";
  std::string channel = "eq1";
};

void add_state_flags(CLI::App* cmd, StateFlags& f) {
  cmd->add_option("--alpha", f.alpha, "mixing parameter of the family, in (3,5]")->capture_default_str();
  cmd->add_option("--gamma-a", f.gamma_a, "dephasing rate on A")->capture_default_str();
  cmd->add_option("--gamma-b", f.gamma_b, "dephasing rate on B")->capture_default_str();
  cmd->add_option("--t", f.t, "evolution time")->capture_default_str();
  cmd->add_option("--initial", f.initial, "rho | rho-prime | path to a state JSON file")->capture_default_str();
  cmd->add_option("--channel", f.channel, "eq1 | general")->capture_default_str();
}

dsd::cli::StateSource source_of(const StateFlags& f) {
  return {f.initial, f.alpha, dsd::cli::parse_channel(f.channel)};
}

}  // namespace

int main(int argc, char** argv) {
  using namespace dsd::cli;
  CLI::App app{"Distillability under local dephasing: state evolution, classification, sweeps, thresholds"};
  app.require_subcommand(1);

  StateFlags ev;
  auto* evolve_cmd = app.add_subcommand("evolve", "print the evolved state as JSON");
  add_state_flags(evolve_cmd, ev);

  StateFlags cl;
  std::string certificate;
  auto* classify_cmd = app.add_subcommand("classify", "print the entanglement verdict and metrics");
  add_state_flags(classify_cmd, cl);
  classify_cmd->add_option("--certificate", certificate, "separability certificate layout: paper3x3");

  std::string quantity = "pt-min-eig", gamma = "0.1,2,20", t_range = "0,3,301", sw_initial = "rho", sw_channel = "eq1";
  double sw_alpha = 4.5;
  auto* sweep_cmd = app.add_subcommand("sweep", "emit a CSV grid over t and gamma");
  sweep_cmd->add_option("--quantity", quantity, "pt-min-eig | realignment | fidelity | verdict")->capture_default_str();
  sweep_cmd->add_option("--alpha", sw_alpha)->capture_default_str();
  sweep_cmd->add_option("--gamma", gamma, "value or start,end,steps (Γ_A = Γ_B)")->capture_default_str();
  sweep_cmd->add_option("--t-range", t_range, "start,end,steps")->capture_default_str();
  sweep_cmd->add_option("--initial", sw_initial, "rho | rho-prime | path")->capture_default_str();
  sweep_cmd->add_option("--channel", sw_channel, "eq1 | general")->capture_default_str();

  double th_alpha = 4.5, th_gamma = 1.0;
  auto* thresholds_cmd = app.add_subcommand("thresholds", "PPT time, realignment zero and certificate onset as JSON");
  thresholds_cmd->add_option("--alpha", th_alpha)->capture_default_str();
  thresholds_cmd->add_option("--gamma", th_gamma)->capture_default_str();

  dsd::verify::Options vopt;
  auto* verify_cmd = app.add_subcommand("verify-lemmas", "run the DSD-free construction checks");
  verify_cmd->add_option("--seed", vopt.seed)->capture_default_str();
  verify_cmd->add_option("--samples", vopt.samples)->capture_default_str();
  verify_cmd->add_option("--alpha", vopt.alpha)->capture_default_str();
#ifdef DSDLAB_FAULT_INJECTION
  verify_cmd->add_flag("--inject-fault", vopt.inject_fault, "flip one expectation (harness self-test)");
#endif

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*evolve_cmd) {
      cmd_evolve(source_of(ev), dsd::NoiseParams(ev.gamma_a, ev.gamma_b, ev.t), std::cout);
    } else if (*classify_cmd) {
      cmd_classify(source_of(cl), dsd::NoiseParams(cl.gamma_a, cl.gamma_b, cl.t), certificate, std::cout);
    } else if (*sweep_cmd) {
      SweepRequest req;
      req.quantity = parse_quantity(quantity);
      req.source = {sw_initial, sw_alpha, parse_channel(sw_channel)};
      req.gamma = parse_range(gamma, true);
      req.t = parse_range(t_range, false);
      cmd_sweep(req, std::cout);
    } else if (*thresholds_cmd) {
      cmd_thresholds(th_alpha, th_gamma, std::cout);
    } else if (*verify_cmd) {
      const auto failures = dsd::verify::run(vopt, std::cout);
      return failures == 0 ? kOk : kVerificationFailed;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const dsd::Error& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kValidation;
  }
  return kOk;
}
