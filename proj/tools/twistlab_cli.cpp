// twistlab verify <suite> [options]
//
// Exit status: 0 when every gating check passes, 1 on a gating failure,
// 2 on a configuration or usage error.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "twistlab/errors.hpp"
#include "twistlab/suite.hpp"

namespace {

constexpr int kExitGating = 1;
constexpr int kExitConfig = 2;

struct Flags {
  std::string suite;
  std::string config_path;
  std::string out = "-";
  std::string format = "json";
  std::optional<int> n_sites;
  std::optional<std::string> xi;
  std::optional<std::string> eta;
  std::optional<std::string> boundary;
  std::optional<int> samples;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> tol;
  bool complex_xi = false;
};

twistlab::RunConfig resolve(const Flags& f) {
  twistlab::RunConfig config;
  config.seed = twistlab::default_seed();
  if (!f.config_path.empty()) config = twistlab::load_config_file(f.config_path, config);

  // Command-line flags go through the same parser as the file.
  std::string overrides;
  if (f.seed) overrides += "seed = " + std::to_string(*f.seed) + "\n";
  if (f.n_sites) overrides += "n_sites = " + std::to_string(*f.n_sites) + "\n";
  if (f.xi) overrides += "xi = " + *f.xi + "\n";
  if (f.eta) overrides += "eta = " + *f.eta + "\n";
  if (f.boundary) overrides += "boundary = " + *f.boundary + "\n";
  if (f.samples) overrides += "samples = " + std::to_string(*f.samples) + "\n";
  if (f.complex_xi) overrides += "complex_xi = true\n";
  for (const std::string& t : f.tol) {
    if (t.find('=') == std::string::npos || t.find('\n') != std::string::npos) {
      throw twistlab::DomainError("--tol expects CHECK=VALUE, got '" + t + "'");
    }
    overrides += "tol." + t + "\n";
  }
  config = twistlab::parse_config(overrides, config);
  config.validate();
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks for the Jordanian-twisted XXX chain"};
  app.require_subcommand(1);
  Flags f;

  CLI::App* verify = app.add_subcommand("verify", "Run a verification suite and emit a report");
  verify->add_option("suite", f.suite, "ybe|rtt|cr|spectrum|bethe|symmetry|fusion|twist|all")->required();
  verify->add_option("--n-sites", f.n_sites, "Chain length");
  verify->add_option("--xi", f.xi, "Twist parameter; sampled when omitted (e.g. 0.3 or 0.2-0.1i)");
  verify->add_option("--eta", f.eta, "Spectral shift eta");
  verify->add_option("--boundary", f.boundary, "periodic|open");
  verify->add_option("--samples", f.samples, "Random samples per check");
  verify->add_option("--seed", f.seed, "RNG seed (default $TWISTLAB_SEED or 20240917)");
  verify->add_flag("--complex-xi", f.complex_xi, "Sample xi from the unit disk");
  verify->add_option("--format", f.format, "json|csv")->check(CLI::IsMember({"json", "csv"}));
  verify->add_option("--out", f.out, "Output file, '-' for stdout");
  verify->add_option("--config", f.config_path, "key = value config file");
  verify->add_option("--tol", f.tol, "Tolerance override CHECK=VALUE (repeatable)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  const auto suite = twistlab::parse_suite(f.suite);
  if (!suite) {
    std::cerr << "error: unknown suite '" << f.suite << "'\n";
    return kExitConfig;
  }

  twistlab::RunConfig config;
  try {
    config = resolve(f);
  } catch (const twistlab::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    const auto reports = twistlab::run_suite(config, *suite);
    const auto format = f.format == "csv" ? twistlab::ReportFormat::csv : twistlab::ReportFormat::json;
    twistlab::emit_report(config, reports, format, f.out);
    return twistlab::any_gating_failure(reports) ? kExitGating : 0;
  } catch (const twistlab::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}
