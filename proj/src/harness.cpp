#include "expoly/harness.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>

#include "expoly/hankel.hpp"
#include "expoly/kronecker.hpp"
#include "expoly/montel.hpp"

namespace expoly {

namespace {

using nlohmann::json;

json point_json(const Point& p) { return std::vector<double>(p.data(), p.data() + p.size()); }

Point to_point(const std::vector<double>& v) {
  return Eigen::Map<const Point>(v.data(), static_cast<Eigen::Index>(v.size()));
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

template <typename T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InvalidArgument("cannot parse " + path + ": " + e.what());
  }
}

Point random_point(Rng& rng, int dim, double half_width) {
  std::uniform_real_distribution<double> coord(-half_width, half_width);
  Point p(dim);
  for (int k = 0; k < dim; ++k) p(k) = coord(rng);
  return p;
}

Point random_direction(Rng& rng, int dim) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Point p(dim);
  do {
    for (int k = 0; k < dim; ++k) p(k) = gauss(rng);
  } while (p.norm() < 1e-6);
  return p / p.norm();
}

std::vector<double> periods_for(const ExperimentConfig& cfg, int dim) {
  if (cfg.periods) {
    if (static_cast<int>(cfg.periods->size()) != dim) {
      throw DimensionMismatch(dim, static_cast<int>(cfg.periods->size()));
    }
    return *cfg.periods;
  }
  return std::vector<double>(dim, 1.0);
}

ResolvedFunction from_exp_polynomial(std::string label, ExpPolynomial p) {
  ResolvedFunction fn;
  fn.label = std::move(label);
  fn.dim = p.dim();
  fn.oracle = as_oracle(p);
  fn.exp_poly = std::move(p);
  return fn;
}

ResolvedFunction from_trig(std::string label, TrigPolynomial p) {
  ResolvedFunction fn;
  fn.label = std::move(label);
  fn.dim = p.dim;
  fn.oracle = as_oracle(p);
  fn.trig = std::move(p);
  return fn;
}

ResolvedFunction from_oracle(std::string label, Oracle f, int dim) {
  ResolvedFunction fn;
  fn.label = std::move(label);
  fn.dim = dim;
  fn.oracle = std::move(f);
  return fn;
}

json describe(const ResolvedFunction& fn) {
  json d = {{"label", fn.label}, {"dim", fn.dim}};
  d["exp_polynomial"] = fn.exp_poly ? exp_polynomial_to_json(*fn.exp_poly) : json(nullptr);
  d["translate_span_dim"] = fn.exp_poly ? json(translate_span_dim(*fn.exp_poly)) : json(nullptr);
  d["trig_polynomial"] = fn.trig ? trig_polynomial_to_json(*fn.trig) : json(nullptr);
  return d;
}

// Rewrites a polynomial in arc length s = t * scale as a polynomial in t.
ExpPolynomial rescale_variable(const ExpPolynomial& p, double scale) {
  std::vector<ExpTerm> terms;
  for (const auto& t : p.terms()) {
    ExpTerm u = t;
    u.coeff *= std::pow(scale, t.alpha[0]);
    u.lambda[0] *= scale;
    terms.push_back(std::move(u));
  }
  return canonicalize(ExpPolynomial(1, std::move(terms)));
}

// One member of a search family; random parameters come from rng.
ResolvedFunction family_member(const std::string& family, int dim, int terms, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  if (family == "exppoly-random") {
    return from_exp_polynomial(family, random_exp_polynomial(rng, {dim, terms, 1, 1.0, 1.0}));
  }
  if (family == "trig-bounded") {
    return from_exp_polynomial(family, random_bounded_trig(rng, dim, terms, 1.0));
  }
  const Point center = random_point(rng, dim, 1.0);
  if (family == "gaussian") return from_oracle(family, gaussian_oracle(center, 0.5 + 1.5 * unit(rng)), dim);
  if (family == "runge") return from_oracle(family, runge_oracle(center, 0.5 + 1.5 * unit(rng)), dim);
  if (family == "abs-smooth") {
    return from_oracle(family, abs_smooth_oracle(center, 0.05 + 0.45 * unit(rng)), dim);
  }
  throw InvalidArgument("unknown search family: " + family);
}

bool expectation_on_rate(const ExperimentConfig& cfg, double rate) {
  if (cfg.expect_min_pass_rate && rate < *cfg.expect_min_pass_rate) return false;
  if (cfg.expect_max_pass_rate && rate > *cfg.expect_max_pass_rate) return false;
  return true;
}

}  // namespace

nlohmann::json config_to_json(const ExperimentConfig& cfg) {
  return {{"seed", cfg.seed},
          {"dim", cfg.dim},
          {"order", cfg.order},
          {"trials", cfg.trials},
          {"tol", cfg.tol},
          {"function", cfg.function},
          {"terms", cfg.terms},
          {"box", cfg.box},
          {"max_order", cfg.max_order},
          {"x0", optional_json(cfg.x0)},
          {"h0", optional_json(cfg.h0)},
          {"samples", cfg.samples},
          {"spacing", cfg.spacing},
          {"recovery_tol", cfg.recovery_tol},
          {"scan_trials", cfg.scan_trials},
          {"lines", cfg.lines},
          {"input", cfg.input},
          {"grid", cfg.grid},
          {"base", optional_json(cfg.base)},
          {"step", optional_json(cfg.step)},
          {"eps", cfg.eps},
          {"center", optional_json(cfg.center)},
          {"generators", cfg.generators},
          {"ranks", optional_json(cfg.ranks)},
          {"max_shift", cfg.max_shift},
          {"periods", optional_json(cfg.periods)},
          {"adaptive", cfg.adaptive},
          {"expect_min_pass_rate", optional_json(cfg.expect_min_pass_rate)},
          {"expect_max_pass_rate", optional_json(cfg.expect_max_pass_rate)},
          {"expect_max_flags", optional_json(cfg.expect_max_flags)},
          {"expect_max_residual", optional_json(cfg.expect_max_residual)}};
}

ResolvedFunction resolve_function(const ExperimentConfig& cfg, Rng& rng) {
  const std::string& name = cfg.function;
  const int d = cfg.dim;
  if (name == "exp") {
    ExpTerm t{1.0, std::vector<int>(d, 0), std::vector<Complex>(d, Complex(1.0, 0.0))};
    return from_exp_polynomial(name, ExpPolynomial(d, {t}));
  }
  if (name == "product") {
    ExpTerm t{1.0, std::vector<int>(d, 1), std::vector<Complex>(d, Complex(0.0, 0.0))};
    return from_exp_polynomial(name, ExpPolynomial(d, {t}));
  }
  if (name == "gaussian") return from_oracle(name, gaussian_oracle(Point::Zero(d)), d);
  if (name == "runge") return from_oracle(name, runge_oracle(Point::Zero(d)), d);
  if (name == "abs-smooth") return from_oracle(name, abs_smooth_oracle(Point::Zero(d)), d);
  if (name == "exppoly-random") {
    return from_exp_polynomial(name, random_exp_polynomial(rng, {d, cfg.terms, 0, 1.0, 1.0}));
  }
  if (name == "trig-bounded") {
    return from_exp_polynomial(name, random_bounded_trig(rng, d, cfg.terms, 1.0));
  }
  if (name == "cos-product") {
    TrigPolynomial p;
    p.dim = d;
    p.periods = periods_for(cfg, d);
    p.degree = 1;
    std::vector<int> alpha(d, -1);
    while (true) {
      p.coeffs[alpha] = std::pow(0.5, d);
      int k = 0;
      for (; k < d; ++k) {
        alpha[k] += 2;
        if (alpha[k] <= 1) break;
        alpha[k] = -1;
      }
      if (k == d) break;
    }
    return from_trig(name, std::move(p));
  }
  if (name == "trig-random") {
    return from_trig(name, random_trig_polynomial(rng, periods_for(cfg, d), cfg.order));
  }

  if (!std::filesystem::exists(name)) throw InvalidArgument("unknown function: " + name);
  const json doc = read_json_file(name);
  if (doc.contains("samples")) {
    ResolvedFunction fn = from_oracle("grid:" + name, grid_sample_oracle(doc), doc.at("dim").get<int>());
    fn.grid_periods = doc.at("periods").get<std::vector<double>>();
    return fn;
  }
  if (doc.contains("coeffs")) return from_trig("file:" + name, trig_polynomial_from_json(doc));
  if (doc.contains("terms")) return from_exp_polynomial("file:" + name, exp_polynomial_from_json(doc));
  throw InvalidArgument("unrecognized function document: " + name);
}

Oracle grid_sample_oracle(const nlohmann::json& doc) {
  try {
    const int dim = doc.at("dim").get<int>();
    const auto periods = doc.at("periods").get<std::vector<double>>();
    const int m = doc.at("degree").get<int>();
    const int n = 2 * m + 1;
    std::vector<Complex> values;
    for (const auto& v : doc.at("samples")) values.emplace_back(v.at(0).get<double>(), v.at(1).get<double>());
    std::size_t total = 1;
    for (int k = 0; k < dim; ++k) total *= n;
    if (static_cast<int>(periods.size()) != dim || values.size() != total) {
      throw InvalidArgument("grid-sample document has inconsistent sizes");
    }
    return [=](const Point& x) -> Complex {
      if (x.size() != dim) throw DimensionMismatch(dim, static_cast<int>(x.size()));
      std::size_t idx = 0;
      std::size_t stride = 1;
      for (int k = 0; k < dim; ++k) {
        const double pos = x(k) / periods[k] * n;
        const double node = std::round(pos);
        if (std::abs(pos - node) > 1e-9 * std::max(1.0, std::abs(pos))) {
          return {std::numeric_limits<double>::quiet_NaN(), 0.0};
        }
        const long long j = ((static_cast<long long>(node) % n) + n) % n;
        idx += static_cast<std::size_t>(j) * stride;
        stride *= n;
      }
      return values[idx];
    };
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed grid-sample document: ") + e.what());
  }
}

nlohmann::json grid_samples_to_json(const Oracle& f, const std::vector<double>& periods, int m) {
  const int dim = static_cast<int>(periods.size());
  const int n = 2 * m + 1;
  std::size_t total = 1;
  for (int k = 0; k < dim; ++k) total *= n;
  json samples = json::array();
  Point x(dim);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rest = idx;
    for (int k = 0; k < dim; ++k) {
      x(k) = static_cast<double>(rest % n) * periods[k] / n;
      rest /= n;
    }
    const Complex v = f(x);
    samples.push_back({v.real(), v.imag()});
  }
  return {{"dim", dim}, {"periods", periods}, {"degree", m}, {"samples", std::move(samples)}};
}

ScanReport popoviciu_scan(const Oracle& f, int dim, int n, int trials, double box, double tol,
                          Rng& rng) {
  if (trials < 1) throw InvalidArgument("trials must be at least 1");
  if (!(tol > 0.0)) throw InvalidArgument("tol must be positive");
  ScanReport report;
  int passes = 0;
  report.max_residual = 0.0;
  report.min_residual = std::numeric_limits<double>::infinity();
  for (int t = 0; t < trials; ++t) {
    ScanRecord rec;
    rec.n = n;
    rec.x = random_point(rng, dim, box);
    do {
      rec.h = random_point(rng, dim, box);
    } while (rec.h.cwiseAbs().maxCoeff() < 1e-9 * box);
    const SampleGrid1D g = sample_line(f, rec.x, rec.h, 2 * n + 1);
    const bool finite = std::all_of(g.values.begin(), g.values.end(), [](const Complex& v) {
      return std::isfinite(v.real()) && std::isfinite(v.imag());
    });
    rec.residual = finite ? popoviciu_residual(g, n) : std::numeric_limits<double>::quiet_NaN();
    rec.pass = rec.residual < tol;
    if (rec.pass) ++passes;
    if (std::isfinite(rec.residual)) {
      report.max_residual = std::max(report.max_residual, rec.residual);
      report.min_residual = std::min(report.min_residual, rec.residual);
    }
    report.records.push_back(std::move(rec));
  }
  report.pass_rate = static_cast<double>(passes) / trials;
  if (!std::isfinite(report.min_residual)) report.min_residual = 0.0;
  return report;
}

nlohmann::json scan_report_to_json(const ScanReport& r) {
  json records = json::array();
  for (const auto& rec : r.records) {
    records.push_back({{"x", point_json(rec.x)},
                       {"h", point_json(rec.h)},
                       {"n", rec.n},
                       {"residual", number_or_null(rec.residual)},
                       {"pass", rec.pass}});
  }
  return {{"records", std::move(records)},
          {"summary",
           {{"pass_rate", r.pass_rate}, {"max_residual", r.max_residual}, {"min_residual", r.min_residual}}}};
}

LineFit fit_line_restriction(const Oracle& f, const Point& x0, const Point& h0, int samples,
                             double spacing, int max_order, double tol) {
  if (x0.size() != h0.size()) throw DimensionMismatch(static_cast<int>(x0.size()), static_cast<int>(h0.size()));
  if (!(spacing > 0.0)) throw InvalidArgument("spacing must be positive");
  const SampleGrid1D g = sample_line(f, x0, spacing * h0, samples);
  g.validate();
  RecoveryOptions opts;
  opts.tol = tol;

  LineFit fit;
  for (int n = 1; n <= max_order; ++n) {
    LineAttempt attempt;
    attempt.order = n;
    try {
      Recovery r = recover_exp_polynomial(g, n, opts);
      attempt.residual = r.residual;
      attempt.status = "ok";
      fit.attempts.push_back(attempt);
      fit.success = true;
      fit.poly = rescale_variable(r.poly, h0.norm());
      fit.recovery = std::move(r);
      return fit;
    } catch (const ResidualTooLarge& e) {
      attempt.residual = e.residual();
      attempt.status = "residual_too_large";
    } catch (const AmbiguousOrder&) {
      attempt.status = "ambiguous_order";
    } catch (const ZeroCharacteristicRoot&) {
      attempt.status = "zero_root";
    } catch (const InsufficientSamples&) {
      attempt.status = "insufficient_samples";
      fit.attempts.push_back(attempt);
      break;
    }
    fit.attempts.push_back(attempt);
  }
  return fit;
}

nlohmann::json make_report(const std::string& command, const ExperimentConfig& cfg,
                           nlohmann::json result) {
  return {{"schema", kReportSchema},
          {"schema_version", kReportSchemaVersion},
          {"tool_version", kToolVersion},
          {"command", command},
          {"rng", kRngAlgorithm},
          {"seed", cfg.seed},
          {"config", config_to_json(cfg)},
          {"result", std::move(result)}};
}

CommandOutcome cmd_verify_popoviciu(const ExperimentConfig& cfg) {
  Rng rng(cfg.seed);
  const ResolvedFunction fn = resolve_function(cfg, rng);
  const ScanReport scan = popoviciu_scan(fn.oracle, fn.dim, cfg.order, cfg.trials, cfg.box, cfg.tol, rng);
  json result = {{"function", describe(fn)}, {"order", cfg.order}, {"scan", scan_report_to_json(scan)}};
  return {make_report("verify-popoviciu", cfg, std::move(result)), expectation_on_rate(cfg, scan.pass_rate)};
}

CommandOutcome cmd_line_restriction(const ExperimentConfig& cfg) {
  Rng rng(cfg.seed);
  const ResolvedFunction fn = resolve_function(cfg, rng);
  const Point x0 = cfg.x0 ? to_point(*cfg.x0) : random_point(rng, fn.dim, cfg.box);
  const Point h0 = cfg.h0 ? to_point(*cfg.h0) : random_direction(rng, fn.dim);
  if (x0.size() != fn.dim) throw DimensionMismatch(fn.dim, static_cast<int>(x0.size()));
  if (h0.size() != fn.dim) throw DimensionMismatch(fn.dim, static_cast<int>(h0.size()));
  const LineFit fit = fit_line_restriction(fn.oracle, x0, h0, cfg.samples, cfg.spacing, cfg.max_order,
                                           cfg.recovery_tol);

  json attempts = json::array();
  for (const auto& a : fit.attempts) {
    attempts.push_back({{"order", a.order}, {"residual", optional_json(a.residual)}, {"status", a.status}});
  }
  json result = {{"function", describe(fn)},
                 {"x0", point_json(x0)},
                 {"h0", point_json(h0)},
                 {"samples", cfg.samples},
                 {"spacing", cfg.spacing},
                 {"variable", "t"},
                 {"attempts", std::move(attempts)},
                 {"success", fit.success},
                 {"status", fit.success ? "ok" : "order_budget_exceeded"},
                 {"order", fit.success ? json(fit.recovery->coefficients.order) : json(nullptr)},
                 {"polynomial", fit.poly ? exp_polynomial_to_json(*fit.poly) : json(nullptr)},
                 {"recovery", fit.recovery ? recovery_report(*fit.recovery) : json(nullptr)}};
  return {make_report("line-restrict", cfg, std::move(result)), fit.success};
}

CommandOutcome cmd_search_counterexample(const ExperimentConfig& cfg) {
  if (cfg.trials < 1) throw InvalidArgument("trials must be at least 1");
  Rng rng(cfg.seed);
  json candidates = json::array();
  int flags = 0;
  for (int c = 0; c < cfg.trials; ++c) {
    const ResolvedFunction fn = family_member(cfg.function, cfg.dim, cfg.terms, rng);
    json orders = json::array();
    std::optional<int> first_pass;
    for (int n = 1; n <= cfg.order; ++n) {
      const ScanReport scan = popoviciu_scan(fn.oracle, fn.dim, n, cfg.scan_trials, cfg.box, cfg.tol, rng);
      orders.push_back({{"n", n}, {"pass_rate", scan.pass_rate}, {"max_residual", scan.max_residual}});
      if (!first_pass && scan.pass_rate == 1.0) first_pass = n;
    }
    bool recovered = true;
    json lines = json::array();
    for (int l = 0; l < cfg.lines; ++l) {
      const Point x0 = random_point(rng, fn.dim, cfg.box);
      const Point h0 = random_direction(rng, fn.dim);
      const LineFit fit = fit_line_restriction(fn.oracle, x0, h0, cfg.samples, cfg.spacing, cfg.max_order,
                                               cfg.recovery_tol);
      recovered = recovered && fit.success;
      lines.push_back({{"x0", point_json(x0)},
                       {"h0", point_json(h0)},
                       {"success", fit.success},
                       {"order", fit.success ? json(fit.recovery->coefficients.order) : json(nullptr)}});
    }
    const bool flagged = first_pass.has_value() && !recovered;
    if (flagged) ++flags;
    candidates.push_back({{"index", c},
                          {"function", describe(fn)},
                          {"orders", std::move(orders)},
                          {"popoviciu_pass_order", optional_json(first_pass)},
                          {"lines", std::move(lines)},
                          {"line_recovered", recovered},
                          {"flagged", flagged}});
  }
  json result = {{"family", cfg.function},
                 {"candidates", std::move(candidates)},
                 {"summary", {{"candidates", cfg.trials}, {"flags", flags}}}};
  const bool ok = !cfg.expect_max_flags || flags <= *cfg.expect_max_flags;
  return {make_report("search-counterexample", cfg, std::move(result)), ok};
}

CommandOutcome cmd_recover(const ExperimentConfig& cfg) {
  if (cfg.input.empty()) throw InvalidArgument("recover needs an input CSV");
  std::ifstream in(cfg.input);
  if (!in) throw Error("cannot open " + cfg.input);
  SampleGrid1D g;
  g.values = read_samples_csv(in);
  g.base = Point::Zero(1);
  g.step = Point::Ones(1);
  if (!cfg.grid.empty()) apply_grid_geometry(read_json_file(cfg.grid), g);
  if (cfg.base) g.base = to_point(*cfg.base);
  if (cfg.step) g.step = to_point(*cfg.step);
  RecoveryOptions opts;
  opts.tol = cfg.recovery_tol;
  const Recovery r = recover_exp_polynomial(g, cfg.order, opts);
  json result = {{"geometry", grid_geometry_to_json(g)},
                 {"variable", "arc_length"},
                 {"polynomial", exp_polynomial_to_json(r.poly)},
                 {"report", recovery_report(r)}};
  return {make_report("recover", cfg, std::move(result)), true};
}

CommandOutcome cmd_dense_gens(const ExperimentConfig& cfg) {
  const Point center = cfg.center ? to_point(*cfg.center) : Point::Zero(cfg.dim);
  const GeneratorSet gens = dense_generators(cfg.dim, center, cfg.eps);
  json norms = json::array();
  for (const auto& h : gens.generators) norms.push_back((h - center).norm());
  json result = {{"radius", cfg.eps},
                 {"center", point_json(center)},
                 {"generator_set", generator_set_to_json(gens)},
                 {"distances_from_center", std::move(norms)}};
  return {make_report("dense-gens", cfg, std::move(result)), true};
}

CommandOutcome cmd_montel_check(const ExperimentConfig& cfg) {
  Rng rng(cfg.seed);
  const ResolvedFunction fn = resolve_function(cfg, rng);

  GeneratorSet gens;
  if (!cfg.generators.empty()) {
    gens = generator_set_from_json(read_json_file(cfg.generators));
  } else if (fn.dim == 1) {
    gens.dim = 1;
    gens.generators = {Point::Constant(1, 1.0), Point::Constant(1, std::numbers::sqrt2)};
  } else {
    gens = dense_generators(fn.dim, Point::Zero(fn.dim), cfg.eps);
  }
  if (gens.dim != fn.dim) throw DimensionMismatch(fn.dim, gens.dim);
  if (cfg.ranks) gens.ranks = cfg.ranks;

  const LatticeSampler sampler = LatticeSampler::with_probe_cloud(fn.oracle, fn.dim, rng());
  if (!gens.ranks) {
    std::vector<int> ranks;
    for (const auto& h : gens.generators) {
      ranks.push_back(std::max(1, detect_step_rank(sampler, h, cfg.max_order)));
    }
    gens.ranks = ranks;
  }

  json per_generator = json::array();
  for (int i = 0; i < gens.size(); ++i) {
    json entry = {{"generator", point_json(gens.generators[i])}, {"n", (*gens.ranks)[i]}};
    try {
      const StepOperator op = fit_step_operator(sampler, gens.generators[i], (*gens.ranks)[i]);
      entry["status"] = "ok";
      entry["residual"] = op.residual;
      entry["condition_number"] = number_or_null(op.condition);
    } catch (const Error& e) {
      entry["status"] = e.what();
      entry["residual"] = nullptr;
      entry["condition_number"] = nullptr;
    }
    per_generator.push_back(std::move(entry));
  }

  const TranslateSpace w = build_w_basis(sampler, gens);
  std::uniform_int_distribution<long long> shift(-cfg.max_shift, cfg.max_shift);
  json trials = json::array();
  double worst = 0.0;
  for (int t = 0; t < cfg.trials; ++t) {
    std::vector<long long> m(gens.size());
    for (auto& v : m) v = shift(rng);
    const double r = membership_residual(sampler, w, m, gens);
    worst = std::max(worst, r);
    trials.push_back({{"m", m}, {"residual", r}});
  }
  json result = {{"function", describe(fn)},
                 {"generator_set", generator_set_to_json(gens)},
                 {"dimW", w.dim},
                 {"dropped_probes", w.dropped_probes},
                 {"generators", std::move(per_generator)},
                 {"trials", std::move(trials)},
                 {"max_membership_residual", worst}};
  const bool ok = !cfg.expect_max_residual || worst <= *cfg.expect_max_residual;
  return {make_report("montel-check", cfg, std::move(result)), ok};
}

CommandOutcome cmd_trig_reconstruct(const ExperimentConfig& cfg) {
  Rng rng(cfg.seed);
  const ResolvedFunction fn = resolve_function(cfg, rng);
  std::vector<double> periods;
  if (fn.grid_periods) {
    periods = *fn.grid_periods;
  } else if (fn.trig && !cfg.periods) {
    periods = fn.trig->periods;
  } else {
    periods = periods_for(cfg, fn.dim);
  }
  const TrigPolynomial p = cfg.adaptive ? reconstruct_adaptive(fn.oracle, periods, cfg.order)
                                        : reconstruct_joint(fn.oracle, periods, cfg.order);
  json deviation = nullptr;
  if (!fn.grid_periods) deviation = verify_separate_slices(p, fn.oracle, cfg.trials, rng());
  json result = {{"function", describe(fn)},
                 {"polynomial", trig_polynomial_to_json(p)},
                 {"slice_trials", fn.grid_periods ? 0 : cfg.trials},
                 {"slice_deviation", deviation}};
  const bool ok = !cfg.expect_max_residual || deviation.is_null() ||
                  deviation.get<double>() <= *cfg.expect_max_residual;
  return {make_report("trig-reconstruct", cfg, std::move(result)), ok};
}

}  // namespace expoly
