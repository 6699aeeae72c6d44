// allax: command-line front end for the CMV / Ablowitz-Ladik toolkit.
//
// Exit codes: 0 pass, 1 threshold failure, 2 usage or input error,
// 3 numeric abort.

#include <iostream>

#include "CLI11.hpp"
#include "allax/error.hpp"
#include "commands.hpp"
#include "manifest.hpp"

namespace {

int exit_code(allax::ErrorCode code) {
  using allax::ErrorCode;
  switch (code) {
    case ErrorCode::DiskExit:
    case ErrorCode::StepRejected:
    case ErrorCode::RhoDegenerate:
    case ErrorCode::NonFiniteEntry:
    case ErrorCode::StepTooLarge:
    case ErrorCode::GradientUnavailable:
    case ErrorCode::TruncationTooTight:
      return 3;
    default:
      return 2;
  }
}

void add_input(CLI::App* cmd, allax::cli::InputOptions& in) {
  cmd->add_option("--coeffs", in.coeffs, "Coefficient JSON file");
  cmd->add_option("--random", in.random, "Random input: P SEED COUNT")->expected(3);
}

}  // namespace

int main(int argc, char** argv) {
  using namespace allax::cli;
  CLI::App app{"CMV matrices, Ablowitz-Ladik flows and their Lax pairs", "allax"};
  app.set_version_flag("--version", tool_version());
  app.require_subcommand(1);

  GlobalOptions g;
  double thr_analytic = g.thresholds["analytic"];
  double thr_fd = g.thresholds["fd"];
  double thr_drift = g.thresholds["drift"];
  double thr_commute = g.thresholds["commute"];
  app.add_flag("--json", g.json, "Print JSON to stdout");
  app.add_option("--seed", g.seed, "Seed for built-in random data");
  app.add_option("--threads", g.threads, "Worker threads (0: all cores)");
  app.add_option("--out", g.out, "Output file");
  app.add_option("--thr-analytic", thr_analytic, "Residual threshold, analytic gradients");
  app.add_option("--thr-fd", thr_fd, "Residual threshold, finite differences");
  app.add_option("--thr-drift", thr_drift, "Flow drift threshold");
  app.add_option("--thr-commute", thr_commute, "Bracket threshold");

  VerifyOptions verify;
  auto* c_verify = app.add_subcommand("verify", "Lax residual suites");
  add_input(c_verify, verify.input);
  c_verify->add_flag("--all", verify.all, "Every variant matching the input");
  c_verify->add_option("--variant", verify.variants, "Variant name, e.g. PeriodicReK");
  c_verify->add_option("--n", verify.n, "Orders")->capture_default_str();
  c_verify->add_option("--d", verify.d, "Floquet multiples")->capture_default_str();
  c_verify->add_option("--method", verify.method, "analytic|fd|both")->capture_default_str();

  VerifyLaxOptions vlax;
  auto* c_vlax = app.add_subcommand("verify-lax", "One Lax residual report");
  c_vlax->add_option("--coeffs", vlax.coeffs, "Coefficient JSON file")->required();
  c_vlax->add_option("--variant", vlax.variant, "Variant name")->required();
  c_vlax->add_option("--n", vlax.n)->capture_default_str();
  c_vlax->add_option("--d", vlax.d)->capture_default_str();
  c_vlax->add_option("--method", vlax.method, "analytic|fd")->capture_default_str();

  VerifyBracketOptions vbr;
  auto* c_vbr = app.add_subcommand("verify-bracket", "Gradient and commutation checks");
  add_input(c_vbr, vbr.input);
  c_vbr->add_option("--n", vbr.max_order, "Highest order")->capture_default_str();

  FlowOptions flow;
  auto* c_flow = app.add_subcommand("flow", "Integrate a Hamiltonian flow");
  c_flow->add_option("--coeffs", flow.coeffs, "Coefficient JSON file")->required();
  c_flow->add_option("--hamiltonian", flow.hamiltonian, "AL|ReK:n|ImK:n|K0|logK0")
      ->capture_default_str();
  c_flow->add_option("--t", flow.t_end, "End time")->capture_default_str();
  c_flow->add_option("--dt", flow.dt, "Step")->capture_default_str();
  c_flow->add_option("--monitor-every", flow.monitor_every)->capture_default_str();
  c_flow->add_option("--method", flow.method, "analytic|fd")->capture_default_str();
  c_flow->add_flag("--backward", flow.backward, "Integrate towards -t");
  c_flow->add_flag("--order-check", flow.order_check, "Also run at dt/2 and report");

  DiscriminantOptions disc;
  auto* c_disc = app.add_subcommand("discriminant", "Delta on a theta grid");
  c_disc->add_option("--coeffs", disc.coeffs, "Coefficient JSON file")->required();
  c_disc->add_option("--grid", disc.grid)->capture_default_str();

  InvariantsOptions inv;
  auto* c_inv = app.add_subcommand("invariants", "K_n, K_0 and Delta coefficients");
  c_inv->add_option("--coeffs", inv.coeffs, "Coefficient JSON file")->required();
  c_inv->add_option("--n", inv.max_order, "Highest order")->capture_default_str();

  DumpOptions dump;
  auto* c_dump = app.add_subcommand("dump", "Matrix as row,col,re,im CSV");
  c_dump->add_option("--coeffs", dump.coeffs, "Coefficient JSON file")->required();
  c_dump->add_option("--matrix", dump.what, "floquet|finite|halfline|theta")
      ->capture_default_str();
  c_dump->add_option("--d", dump.d)->capture_default_str();
  c_dump->add_option("--size", dump.size, "Half-line section size");
  c_dump->add_option("--index", dump.index, "Theta block index");

  auto* c_self = app.add_subcommand("selftest", "Built-in smoke checks");

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  g.thresholds = {{"analytic", thr_analytic},
                  {"fd", thr_fd},
                  {"drift", thr_drift},
                  {"commute", thr_commute}};

  try {
    if (c_verify->parsed()) return cmd_verify(g, verify);
    if (c_vlax->parsed()) return cmd_verify_lax(g, vlax);
    if (c_vbr->parsed()) return cmd_verify_bracket(g, vbr);
    if (c_flow->parsed()) return cmd_flow(g, flow);
    if (c_disc->parsed()) return cmd_discriminant(g, disc);
    if (c_inv->parsed()) return cmd_invariants(g, inv);
    if (c_dump->parsed()) return cmd_dump(g, dump);
    if (c_self->parsed()) return cmd_selftest(g);
  } catch (const allax::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
