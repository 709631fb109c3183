// wick: experiment front end.  Exit code 0 iff every suite passes.

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>

#include "wick/report/report.hpp"

using namespace wick;

namespace {

int exit_code_for(const std::string& code) {
  if (code == "config-schema") return 2;
  if (code.empty()) return 0;
  return 3;
}

void print_suite(const SuiteReport& s) {
  for (const auto& v : s.verdicts) {
    if (v.criterion < 0) continue;
    std::printf("%s  %-70s %.3g", v.pass ? "PASS" : "FAIL", v.name.c_str(), v.measured);
    if (v.relation == "<=" || v.relation == ">=") std::printf(" %s %.3g", v.relation.c_str(), v.threshold);
    std::printf("\n");
  }
  std::printf("-- %s: %s in %.1f s\n", s.name.c_str(), s.pass() ? "pass" : "FAIL", s.seconds);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lapse-Wick-rotated heat semigroups on a lattice: spectra, coefficients, kernels, Lorentzian limit"};
  std::string config_path, out, grid, theta, profile;
  long seed = -1;
  int order = -1;
  app.add_option("--config", config_path, "key = value configuration file")->check(CLI::ExistingFile);
  app.add_option("--out", out, "output directory");
  app.add_option("--seed", seed, "random seed");
  app.add_option("--grid", grid, "grid sizes, e.g. 24x24");
  app.add_option("--theta", theta, "comma-separated angles, e.g. pi/6,pi/4");
  app.add_option("--order", order, "transport truncation order N");
  app.add_option("--tol-profile", profile, "tolerance profile")->check(CLI::IsMember({"strict", "default"}));
  app.require_subcommand(1);
  std::string command;
  for (const char* name : {"spectrum", "coefficients", "kernel", "limit", "all"}) {
    auto* sub = app.add_subcommand(name);
    sub->fallthrough();
    sub->callback([&command, name] { command = name; });
  }
  app.get_subcommand("spectrum")->description("wedge, numerical range, resolvent bounds, semigroup contracts");
  app.get_subcommand("coefficients")->description("eikonal and transport coefficients with oracle checks");
  app.get_subcommand("kernel")->description("kernel laws, diagonal asymptotics, smoothing exponents");
  app.get_subcommand("limit")->description("trace gaps against the Schrodinger group");
  app.get_subcommand("all")->description("every suite plus the acceptance criteria");
  CLI11_PARSE(app, argc, argv);

  RunOutcome outcome;
  outcome.command = command;
  outcome.start = std::chrono::system_clock::now();
  RunConfig cfg;
  std::vector<SuiteReport> suites;
  try {
    if (!config_path.empty()) cfg = load_config(config_path);
    if (!out.empty()) apply_setting(cfg, "out", out);
    if (seed >= 0) apply_setting(cfg, "seed", std::to_string(seed));
    if (!grid.empty()) apply_setting(cfg, "grid", grid);
    if (!theta.empty()) apply_setting(cfg, "theta", theta);
    if (order >= 0) apply_setting(cfg, "order", std::to_string(order));
    if (!profile.empty()) apply_setting(cfg, "profile", profile);
    validate(cfg);
    auto run = [&](auto fn) {
      suites.push_back(fn(cfg));
      print_suite(suites.back());
    };
    if (command == "spectrum" || command == "all") run(cmd_spectrum);
    if (command == "coefficients" || command == "all") run(cmd_coefficients);
    if (command == "kernel" || command == "all") run(cmd_kernel);
    if (command == "limit" || command == "all") run(cmd_limit);
    if (command == "all") {
      suites.push_back(run_acceptance(cfg.tol));
      print_suite(suites.back());
    }
  } catch (const Error& e) {
    outcome.error_code = e.code();
    outcome.error_message = e.what();
    std::fprintf(stderr, "error [%s]: %s\n", e.code().c_str(), e.what());
  } catch (const std::exception& e) {
    outcome.error_code = "internal";
    outcome.error_message = e.what();
    std::fprintf(stderr, "error [internal]: %s\n", e.what());
  }
  outcome.end = std::chrono::system_clock::now();
  bool pass = outcome.error_code.empty();
  for (const auto& s : suites) pass = pass && s.pass();
  const std::string dir = out.empty() ? cfg.out : out;  // --out wins even if the config never parsed
  try {
    write_report(dir, cfg, suites, outcome);
    std::printf("report: %s/manifest.json\n", dir.c_str());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error [io]: cannot write report: %s\n", e.what());
    return 4;
  }
  if (!outcome.error_code.empty()) return exit_code_for(outcome.error_code);
  return pass ? 0 : 1;
}
