// fgap: command line front end for spectrum, fga, drum and verify runs.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fga/error.hpp"
#include "fga/runner.hpp"

namespace {

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::vector<std::string> overrides;
  std::string suite;
  bool quiet = false;
};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "JSON run manifest")->check(CLI::ExistingFile);
  sub->add_option("--seed", f.seed, "RNG seed (overrides the manifest)");
  sub->add_option("--out", f.out, "Output directory (overrides the manifest)");
  sub->add_option("--override", f.overrides, "Parameter override key=value (repeatable)")->allow_extra_args(false);
  sub->add_flag("-q,--quiet", f.quiet, "Only print the exit status line");
}

int execute(fga::Command cmd, const Flags& f) {
  fga::RunManifest m;
  try {
    m = f.config.empty() ? fga::default_manifest(cmd) : fga::parse_config(f.config, cmd);
    if (f.seed) m.seed = *f.seed;
    if (!f.out.empty()) m.output = f.out;
    if (!f.suite.empty()) fga::apply_override(m, "suite=" + f.suite);
    for (const auto& o : f.overrides) fga::apply_override(m, o);
    fga::validate_manifest(m);
  } catch (const std::exception& e) {
    std::cerr << "fgap: config error: " << e.what() << '\n';
    return fga::kExitUsage;
  }

  const fga::RunOutcome outcome = fga::run(m);
  const fga::ResultRecord& r = outcome.record;
  if (!f.quiet) {
    if (r.lambda0_estimate) std::cout << "lambda0_estimate " << fga::format_double(*r.lambda0_estimate) << '\n';
    for (const auto& [name, ok] : r.checks.items())
      std::cout << (ok.get<bool>() ? "PASS " : "FAIL ") << name << '\n';
  }
  if (!r.error.is_null())
    std::cerr << "fgap: error in stage " << r.error.at("stage").get<std::string>() << ": "
              << r.error.at("message").get<std::string>() << '\n';
  std::cout << (outcome.exit_code == fga::kExitPass ? "ok" : "checks failed") << " (" << (m.output / "result.json").string()
            << ")\n";
  return outcome.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fundamental gap spectra, adiabatic runs, polytope drums and property checks"};
  app.require_subcommand(1);
  Flags flags;

  auto* spectrum = app.add_subcommand("spectrum", "Lowest eigenpairs of a discretized Schrodinger operator");
  auto* fga_cmd = app.add_subcommand("fga", "Adiabatic ground-state preparation and energy measurement");
  auto* drum = app.add_subcommand("drum", "Dirichlet ground energy of a convex polytope");
  auto* verify = app.add_subcommand("verify", "Run a property-check suite");
  for (auto* s : {spectrum, fga_cmd, drum, verify}) add_common(s, flags);
  verify->add_option("--suite", flags.suite, "Suite name")->check(CLI::IsMember(fga::suite_names()));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : fga::kExitUsage;
  }

  fga::Command cmd = fga::Command::spectrum;
  if (*fga_cmd) cmd = fga::Command::fga;
  if (*drum) cmd = fga::Command::drum;
  if (*verify) cmd = fga::Command::verify;
  return execute(cmd, flags);
}
