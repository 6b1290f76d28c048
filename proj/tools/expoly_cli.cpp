#include <chrono>
#include <exception>
#include <ctime>
#include <iomanip>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "expoly/harness.hpp"

namespace {

using expoly::CommandOutcome;
using expoly::ExperimentConfig;

using Runner = std::function<CommandOutcome(const ExperimentConfig&)>;

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  std::ostringstream os;
  os << std::put_time(&utc, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

void add_shared(CLI::App* sub, ExperimentConfig& cfg, std::string& out) {
  sub->add_option("--seed", cfg.seed, "RNG seed")->capture_default_str();
  sub->add_option("--tol", cfg.tol, "pass threshold")->capture_default_str();
  sub->add_option("--trials", cfg.trials, "number of trials")->capture_default_str();
  sub->add_option("--order", cfg.order, "order n")->capture_default_str();
  sub->add_option("--dim", cfg.dim, "dimension d")->capture_default_str();
  sub->add_option("--out", out, "write the report here instead of stdout");
  sub->add_option("--function", cfg.function, "built-in name or JSON file")->capture_default_str();
  sub->add_option("--terms", cfg.terms, "term count for random built-ins")->capture_default_str();
  sub->add_option("--box", cfg.box, "x, h drawn from [-box, box]^d")->capture_default_str();
}

void add_line_options(CLI::App* sub, ExperimentConfig& cfg) {
  sub->add_option("--max-order", cfg.max_order)->capture_default_str();
  sub->add_option("--samples", cfg.samples)->capture_default_str();
  sub->add_option("--spacing", cfg.spacing)->capture_default_str();
  sub->add_option("--recovery-tol", cfg.recovery_tol)->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exponential polynomial toolkit: Popoviciu checks, Prony recovery, Montel checks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", expoly::kToolVersion);

  ExperimentConfig cfg;
  std::string out;
  Runner runner;
  std::string command;

  auto wire = [&](CLI::App* sub, Runner r) {
    add_shared(sub, cfg, out);
    sub->callback([&, sub, r] {
      runner = r;
      command = sub->get_name();
    });
  };

  auto* verify = app.add_subcommand("verify-popoviciu", "Hankel residual scan over random (x, h)");
  wire(verify, expoly::cmd_verify_popoviciu);
  verify->add_option("--expect-min-pass-rate", cfg.expect_min_pass_rate);
  verify->add_option("--expect-max-pass-rate", cfg.expect_max_pass_rate);

  auto* line = app.add_subcommand("line-restrict", "Fit an exponential polynomial to f(x0 + t h0)");
  wire(line, expoly::cmd_line_restriction);
  add_line_options(line, cfg);
  line->add_option("--x0", cfg.x0)->expected(1, -1);
  line->add_option("--h0", cfg.h0)->expected(1, -1);

  auto* search = app.add_subcommand("search-counterexample",
                                    "Look for functions passing Popoviciu but failing line recovery");
  wire(search, expoly::cmd_search_counterexample);
  add_line_options(search, cfg);
  search->add_option("--scan-trials", cfg.scan_trials)->capture_default_str();
  search->add_option("--lines", cfg.lines)->capture_default_str();
  search->add_option("--expect-max-flags", cfg.expect_max_flags);

  auto* recover = app.add_subcommand("recover", "Prony recovery from a k,re,im CSV");
  wire(recover, expoly::cmd_recover);
  recover->add_option("--input", cfg.input, "samples CSV")->required()->check(CLI::ExistingFile);
  recover->add_option("--grid", cfg.grid, "JSON sidecar with base and step")->check(CLI::ExistingFile);
  recover->add_option("--base", cfg.base)->expected(1, -1);
  recover->add_option("--step", cfg.step)->expected(1, -1);
  recover->add_option("--recovery-tol", cfg.recovery_tol)->capture_default_str();

  auto* dense = app.add_subcommand("dense-gens", "Generators of a dense subgroup near a center");
  wire(dense, expoly::cmd_dense_gens);
  dense->add_option("--eps", cfg.eps, "neighbourhood radius")->capture_default_str();
  dense->add_option("--center", cfg.center)->expected(1, -1);

  auto* montel = app.add_subcommand("montel-check", "Step operators and translate-space membership");
  wire(montel, expoly::cmd_montel_check);
  montel->add_option("--eps", cfg.eps)->capture_default_str();
  montel->add_option("--generators", cfg.generators, "generator set JSON")->check(CLI::ExistingFile);
  montel->add_option("--ranks", cfg.ranks)->expected(1, -1);
  montel->add_option("--max-order", cfg.max_order)->capture_default_str();
  montel->add_option("--max-shift", cfg.max_shift)->capture_default_str();
  montel->add_option("--expect-max-residual", cfg.expect_max_residual);

  auto* trig = app.add_subcommand("trig-reconstruct", "Joint trigonometric polynomial from grid samples");
  wire(trig, expoly::cmd_trig_reconstruct);
  trig->add_option("--periods", cfg.periods)->expected(1, -1);
  trig->add_flag("--adaptive", cfg.adaptive, "double m until the spectrum stabilizes");
  trig->add_option("--expect-max-residual", cfg.expect_max_residual);

  auto* grid = app.add_subcommand("grid-samples", "Write a grid-sample document for trig-reconstruct");
  wire(grid, [](const ExperimentConfig& c) {
    expoly::Rng rng(c.seed);
    const auto fn = expoly::resolve_function(c, rng);
    const auto periods = c.periods ? *c.periods : std::vector<double>(fn.dim, 1.0);
    return CommandOutcome{expoly::grid_samples_to_json(fn.oracle, periods, c.order), true};
  });
  grid->add_option("--periods", cfg.periods)->expected(1, -1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  CommandOutcome outcome;
  try {
    outcome = runner(cfg);
  } catch (const std::exception& e) {
    std::cerr << command << ": " << e.what() << '\n';
    return 1;
  }
  if (command != "grid-samples") outcome.report["timestamp"] = utc_timestamp();

  const std::string text = outcome.report.dump(2) + "\n";
  if (out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(out, std::ios::binary | std::ios::trunc);
    if (!f) {
      std::cerr << "cannot write " << out << '\n';
      return 1;
    }
    f << text;
  }
  if (!outcome.expectation_met) {
    std::cerr << command << ": expectation not met\n";
    return 1;
  }
  return 0;
}
