#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "expoly/common.hpp"
#include "expoly/exp_polynomial.hpp"
#include "expoly/families.hpp"
#include "expoly/prony.hpp"
#include "expoly/trig.hpp"

namespace expoly {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kReportSchema = "expoly-report";
inline constexpr int kReportSchemaVersion = 1;

/// Options shared by every command; each command reads the fields it needs.
/// The seed determines all randomness.
struct ExperimentConfig {
  std::uint64_t seed = 1;
  int dim = 1;
  int order = 1;
  int trials = 100;
  double tol = 1e-8;
  /// Built-in name or path to an ExpPolynomial / TrigPolynomial / grid-sample JSON file.
  std::string function = "exp";
  /// Term count for random built-ins.
  int terms = 3;
  /// x and h are drawn from [-box, box]^d.
  double box = 2.0;

  // line-restrict and search-counterexample
  int max_order = 8;
  std::optional<std::vector<double>> x0;
  std::optional<std::vector<double>> h0;
  int samples = 64;
  double spacing = 0.25;
  double recovery_tol = 1e-8;
  int scan_trials = 20;
  int lines = 2;

  // recover
  std::string input;
  std::string grid;
  std::optional<std::vector<double>> base;
  std::optional<std::vector<double>> step;

  // dense-gens and montel-check
  double eps = 0.3;
  std::optional<std::vector<double>> center;
  std::string generators;
  std::optional<std::vector<int>> ranks;
  long long max_shift = 20;

  // trig-reconstruct
  std::optional<std::vector<double>> periods;
  bool adaptive = false;

  // expected-pass predicates; unset means no expectation
  std::optional<double> expect_min_pass_rate;
  std::optional<double> expect_max_pass_rate;
  std::optional<int> expect_max_flags;
  std::optional<double> expect_max_residual;
};

nlohmann::json config_to_json(const ExperimentConfig& cfg);

/// A function specification turned into an oracle, plus its symbolic form when known.
struct ResolvedFunction {
  std::string label;
  Oracle oracle;
  std::optional<ExpPolynomial> exp_poly;
  std::optional<TrigPolynomial> trig;
  /// Set for grid-sample sources, which are only defined on their grid.
  std::optional<std::vector<double>> grid_periods;
  int dim = 1;
};

/// Built-ins: exp, product, gaussian, runge, abs-smooth, exppoly-random,
/// trig-bounded, cos-product, trig-random. Anything else is read as a JSON file.
ResolvedFunction resolve_function(const ExperimentConfig& cfg, Rng& rng);

/// Oracle over a grid-sample document {"dim", "periods", "degree", "samples"};
/// off-grid points evaluate to NaN.
Oracle grid_sample_oracle(const nlohmann::json& doc);
nlohmann::json grid_samples_to_json(const Oracle& f, const std::vector<double>& periods, int m);

struct ScanRecord {
  Point x;
  Point h;
  int n = 0;
  double residual = 0.0;
  bool pass = false;
};

struct ScanReport {
  std::vector<ScanRecord> records;
  double pass_rate = 0.0;
  double max_residual = 0.0;
  double min_residual = 0.0;
};

/// Popoviciu residual at order n for `trials` random (x, h) pairs; pass iff residual < tol.
ScanReport popoviciu_scan(const Oracle& f, int dim, int n, int trials, double box, double tol,
                          Rng& rng);
nlohmann::json scan_report_to_json(const ScanReport& r);

struct LineAttempt {
  int order = 0;
  std::optional<double> residual;
  std::string status;
};

/// Exponential-polynomial fit of F(t) = f(x0 + t h0), t = 0, spacing, 2 spacing, ...
struct LineFit {
  bool success = false;
  std::vector<LineAttempt> attempts;
  /// Univariate in t (not arc length) when success.
  std::optional<ExpPolynomial> poly;
  std::optional<Recovery> recovery;
};

LineFit fit_line_restriction(const Oracle& f, const Point& x0, const Point& h0, int samples,
                             double spacing, int max_order, double tol);

struct CommandOutcome {
  nlohmann::json report;
  bool expectation_met = true;
};

/// Report envelope shared by every command (timestamp is added by the CLI).
nlohmann::json make_report(const std::string& command, const ExperimentConfig& cfg,
                           nlohmann::json result);

CommandOutcome cmd_verify_popoviciu(const ExperimentConfig& cfg);
CommandOutcome cmd_line_restriction(const ExperimentConfig& cfg);
CommandOutcome cmd_search_counterexample(const ExperimentConfig& cfg);
CommandOutcome cmd_recover(const ExperimentConfig& cfg);
CommandOutcome cmd_dense_gens(const ExperimentConfig& cfg);
CommandOutcome cmd_montel_check(const ExperimentConfig& cfg);
CommandOutcome cmd_trig_reconstruct(const ExperimentConfig& cfg);

}  // namespace expoly
