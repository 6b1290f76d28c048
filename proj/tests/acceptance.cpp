// Acceptance run: one PASS/FAIL line per criterion.
//
//   acceptance        run all eight
//   acceptance 3 5    run the listed ones
//
// Exit status is nonzero when any selected criterion fails.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "expoly/families.hpp"
#include "expoly/hankel.hpp"
#include "expoly/harness.hpp"
#include "expoly/kronecker.hpp"
#include "expoly/montel.hpp"
#include "expoly/prony.hpp"
#include "expoly/trig.hpp"

using namespace expoly;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

Point point1(double x) {
  Point p(1);
  p << x;
  return p;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

// ---- criteria 1 and 2 share their instances

struct VanishingInstance {
  ExpPolynomial p{1};
  int n = 0;
  double x = 0.0;
  double h = 0.0;
};

std::vector<VanishingInstance> vanishing_instances() {
  constexpr int kCount = 200;
  Rng rng(20240101);
  std::uniform_real_distribution<double> box(-2.0, 2.0);
  std::vector<VanishingInstance> out;
  for (int k = 0; k < kCount; ++k) {
    VanishingInstance v;
    v.n = 1 + k % 5;
    v.p = random_univariate_exp_polynomial(rng, {v.n, 1.0, 1.0});
    v.x = box(rng);
    do v.h = box(rng);
    while (v.h == 0.0);
    out.push_back(std::move(v));
  }
  return out;
}

double residual_at(const VanishingInstance& v, int order) {
  // a grid needs two samples even when order 0 reads only the first
  const int count = std::max(2, 2 * order + 1);
  return popoviciu_residual(sample_line(as_oracle(v.p), point1(v.x), point1(v.h), count), order);
}

Verdict criterion_vanishing() {
  constexpr double kTol = 1e-8;
  constexpr double kBudgetSeconds = 5.0;
  const auto start = Clock::now();
  int ok = 0;
  int wrong_dim = 0;
  double worst = 0.0;
  const auto instances = vanishing_instances();
  for (const auto& v : instances) {
    if (translate_span_dim(v.p) != v.n) ++wrong_dim;
    const double r = residual_at(v, v.n);
    worst = std::max(worst, r);
    if (r < kTol) ++ok;
  }
  const double elapsed = seconds_since(start);
  const int total = static_cast<int>(instances.size());
  return {ok == total && wrong_dim == 0 && elapsed < kBudgetSeconds,
          std::to_string(ok) + "/" + std::to_string(total) + " below " + fmt(kTol) + ", worst " + fmt(worst) +
              ", dimension mismatches " + std::to_string(wrong_dim) + ", " + fmt(elapsed) + " s (budget " +
              fmt(kBudgetSeconds) + " s)"};
}

Verdict criterion_minimality() {
  constexpr double kFloor = 1e-4;
  constexpr double kMinRate = 0.95;
  std::array<int, 6> above_by_n{};
  std::array<int, 6> count_by_n{};
  int above = 0;
  const auto instances = vanishing_instances();
  for (const auto& v : instances) {
    ++count_by_n[v.n];
    if (residual_at(v, v.n - 1) > kFloor) {
      ++above;
      ++above_by_n[v.n];
    }
  }
  const double rate = static_cast<double>(above) / static_cast<double>(instances.size());
  std::string per_n;
  for (int n = 1; n <= 5; ++n) {
    per_n += " n=" + std::to_string(n) + ":" + std::to_string(above_by_n[n]) + "/" + std::to_string(count_by_n[n]);
  }
  return {rate >= kMinRate, "residual at n-1 above " + fmt(kFloor) + " in " + fmt(100.0 * rate) +
                                "% (need " + fmt(100.0 * kMinRate) + "%);" + per_n};
}

// ---- criterion 3

Verdict criterion_prony() {
  constexpr int kCount = 100;
  constexpr double kHeldOutTol = 1e-6;
  constexpr double kCoeffTol = 1e-10;
  constexpr double kRootTol = 1e-8;
  Rng rng(31);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int ok = 0;
  double worst = 0.0;
  for (int trial = 0; trial < kCount; ++trial) {
    const double h = 0.2 + 0.8 * unit(rng);
    const int n = 1 + trial % 4;
    UnivariateFamily fam{n};
    fam.allow_multiplicity = false;
    fam.max_imag = std::numbers::pi / h;
    const ExpPolynomial p = random_univariate_exp_polynomial(rng, fam);
    const double x0 = 4.0 * unit(rng) - 2.0;
    const int count = 2 * n + 8;
    try {
      const Recovery r = recover_exp_polynomial(sample_line(as_oracle(p), point1(x0), point1(h), count), n);
      double err = 0.0;
      double scale = 0.0;
      for (int k = 0; k < 50; ++k) {
        const double s = unit(rng) * (count - 1) * h;
        const Complex truth = evaluate(p, point1(x0 + s));
        err = std::max(err, std::abs(evaluate(r.poly, point1(s)) - truth));
        scale = std::max(scale, std::abs(truth));
      }
      const double rel = err / scale;
      worst = std::max(worst, rel);
      if (rel < kHeldOutTol) ++ok;
    } catch (const Error&) {
      worst = std::max(worst, 1.0);
    }
  }

  SampleGrid1D g;
  g.base = point1(0.0);
  g.step = point1(1.0);
  g.values = {2.0, 5.0, 13.0, 35.0, 97.0};
  const Recovery exact = recover_exp_polynomial(g, 2);
  const double coeff_err = std::max({std::abs(exact.coefficients.a(0) - 6.0),
                                     std::abs(exact.coefficients.a(1) + 5.0),
                                     std::abs(exact.coefficients.a(2) - 1.0)});
  bool roots_ok = exact.roots.roots.size() == 2;
  double root_err = 0.0;
  if (roots_ok) {
    root_err = std::max(std::abs(exact.roots.roots[0].mu - 2.0), std::abs(exact.roots.roots[1].mu - 3.0));
    roots_ok = root_err < kRootTol;
  }
  return {ok == kCount && coeff_err < kCoeffTol && roots_ok,
          std::to_string(ok) + "/" + std::to_string(kCount) + " held-out relative error below " + fmt(kHeldOutTol) +
              " (worst " + fmt(worst) + "); exact case coefficient error " + fmt(coeff_err) + ", root error " +
              fmt(root_err)};
}

// ---- criterion 4

// Distance checked in exact rational arithmetic on the double inputs.
bool verifies_exactly(const GeneratorSet& g, const std::vector<long long>& m, const Point& target, double tol) {
  mpq_class dist2 = 0;
  for (int k = 0; k < g.dim; ++k) {
    mpq_class sum = -mpq_class(target(k));
    for (int i = 0; i < g.size(); ++i) sum += mpq_class(static_cast<long>(m[i])) * mpq_class(g.generators[i](k));
    dist2 += sum * sum;
  }
  const mpq_class t(tol);
  return dist2 < t * t;
}

Verdict criterion_kronecker() {
  constexpr double kEps = 0.3;
  constexpr double kTol = 1e-2;
  constexpr long long kBudget = 10000;
  constexpr int kTargets = 100;
  Rng rng(41);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::string detail;
  bool pass = true;
  for (int d = 1; d <= 2; ++d) {
    const GeneratorSet g = dense_generators(d, Point::Zero(d), kEps);
    int found = 0;
    int verified = 0;
    for (int trial = 0; trial < kTargets; ++trial) {
      Point target(d);
      for (int k = 0; k < d; ++k) target(k) = unit(rng);
      const Approximation a = approximate_by_combination(g, target, kTol, kBudget);
      if (!a.found) continue;
      ++found;
      bool in_budget = true;
      for (long long m : a.coefficients) in_budget = in_budget && std::llabs(m) <= kBudget;
      if (in_budget && verifies_exactly(g, a.coefficients, target, kTol)) ++verified;
    }
    pass = pass && found == kTargets && verified == kTargets;
    detail += (d == 1 ? "" : "; ") + std::string("d=") + std::to_string(d) + " found " + std::to_string(found) +
              "/" + std::to_string(kTargets) + ", re-verified " + std::to_string(verified);
  }
  return {pass, detail};
}

// ---- criterion 5

struct MontelTally {
  int functions = 0;
  int step_ok = 0;
  int membership_ok = 0;
  double worst_step = 0.0;
  double worst_membership = 0.0;
};

void montel_run(MontelTally& t, const Oracle& f, int dim, std::uint64_t probe_seed, GeneratorSet g,
                const std::vector<int>& ranks, Rng& rng) {
  constexpr double kStepTol = 1e-8;
  constexpr double kMembershipTol = 1e-7;
  constexpr int kTranslates = 50;
  constexpr long long kShift = 20;
  ++t.functions;
  const auto s = LatticeSampler::with_probe_cloud(f, dim, probe_seed);
  bool step_ok = true;
  for (int i = 0; i < g.size(); ++i) {
    try {
      const double r = fit_step_operator(s, g.generators[i], ranks[i]).residual;
      t.worst_step = std::max(t.worst_step, r);
      step_ok = step_ok && r < kStepTol;
    } catch (const Error&) {
      step_ok = false;
      t.worst_step = std::max(t.worst_step, 1.0);
    }
  }
  if (step_ok) ++t.step_ok;
  g.ranks = ranks;
  const auto w = build_w_basis(s, g);
  std::uniform_int_distribution<long long> shift(-kShift, kShift);
  bool member_ok = true;
  for (int k = 0; k < kTranslates; ++k) {
    std::vector<long long> m(g.size());
    for (auto& v : m) v = shift(rng);
    const double r = membership_residual(s, w, m, g);
    t.worst_membership = std::max(t.worst_membership, r);
    member_ok = member_ok && r < kMembershipTol;
  }
  if (member_ok) ++t.membership_ok;
}

Verdict criterion_montel() {
  constexpr int kFunctions = 50;
  constexpr double kNegativeFloor = 1e-2;
  Rng rng(51);

  GeneratorSet pair;
  pair.dim = 1;
  pair.generators = {point1(1.0), point1(std::sqrt(2.0))};
  MontelTally one;
  for (int k = 0; k < kFunctions; ++k) {
    const ExpPolynomial p = random_univariate_exp_polynomial(rng, {1 + k % 4, 0.5});
    const int n = translate_span_dim(p);
    montel_run(one, as_oracle(p), 1, 1000 + k, pair, {n, n}, rng);
  }

  // with polynomial factors the step order along one generator can be below
  // the translate dimension, so each generator uses its detected step rank
  const GeneratorSet dense = dense_generators(2, Point::Zero(2), 0.3);
  MontelTally two;
  for (int k = 0; k < kFunctions; ++k) {
    const ExpPolynomial p = random_exp_polynomial(rng, {2, 1 + k % 3, 1, 0.5, 1.0});
    const Oracle f = as_oracle(p);
    const auto probe = LatticeSampler::with_probe_cloud(f, 2, 2000 + k);
    std::vector<int> ranks;
    for (const auto& h : dense.generators) ranks.push_back(detect_step_rank(probe, h, translate_span_dim(p) + 2));
    montel_run(two, f, 2, 2000 + k, dense, ranks, rng);
  }

  const auto gauss = LatticeSampler::with_probe_cloud(
      [](const Point& x) { return Complex(std::exp(-x(0) * x(0))); }, 1, 3000);
  GeneratorSet control = pair;
  control.ranks = std::vector<int>{2, 2};
  const auto w = build_w_basis(gauss, control);
  const std::vector<long long> m{5, 0};
  const double weakest = membership_residual(gauss, w, m, control);

  const bool pass = one.step_ok == kFunctions && one.membership_ok == kFunctions && two.step_ok == kFunctions &&
                    two.membership_ok == kFunctions && weakest > kNegativeFloor;
  auto line = [](const char* name, const MontelTally& t) {
    return std::string(name) + " step " + std::to_string(t.step_ok) + "/" + std::to_string(t.functions) +
           " (worst " + fmt(t.worst_step) + "), membership " + std::to_string(t.membership_ok) + "/" +
           std::to_string(t.functions) + " (worst " + fmt(t.worst_membership) + ")";
  };
  return {pass, line("d=1", one) + "; " + line("d=2", two) + "; e^{-x^2} control " + fmt(weakest)};
}

// ---- criterion 6

Verdict criterion_trig() {
  constexpr int kCount = 100;
  constexpr double kCoeffTol = 1e-9;
  constexpr double kSliceTol = 1e-8;
  constexpr double kBudgetSeconds = 10.0;
  const auto start = Clock::now();
  Rng rng(61);
  std::uniform_real_distribution<double> period(0.5, 3.0);
  int ok = 0;
  double worst_coeff = 0.0;
  double worst_slice = 0.0;
  for (int trial = 0; trial < kCount; ++trial) {
    const int d = 1 + trial % 3;
    const int m = trial % 4;
    std::vector<double> periods(d);
    for (auto& t : periods) t = period(rng);
    const TrigPolynomial p = random_trig_polynomial(rng, periods, m);
    const Oracle f = as_oracle(p);
    const TrigPolynomial q = reconstruct_joint(f, periods, m);
    double err = 0.0;
    for (const auto& [alpha, c] : p.coeffs) {
      const auto it = q.coeffs.find(alpha);
      err = std::max(err, std::abs(c - (it == q.coeffs.end() ? Complex(0.0) : it->second)));
    }
    for (const auto& [alpha, c] : q.coeffs) {
      if (!p.coeffs.contains(alpha)) err = std::max(err, std::abs(c));
    }
    const double slice = verify_separate_slices(q, f, 20, static_cast<std::uint64_t>(trial));
    worst_coeff = std::max(worst_coeff, err);
    worst_slice = std::max(worst_slice, slice);
    if (err < kCoeffTol && slice < kSliceTol) ++ok;
  }
  const double elapsed = seconds_since(start);
  return {ok == kCount && elapsed < kBudgetSeconds,
          std::to_string(ok) + "/" + std::to_string(kCount) + " (worst coefficient " + fmt(worst_coeff) +
              ", worst slice " + fmt(worst_slice) + "), " + fmt(elapsed) + " s (budget " + fmt(kBudgetSeconds) +
              " s)"};
}

// ---- criterion 7

Verdict criterion_negative_controls() {
  constexpr double kTol = 1e-3;
  constexpr int kTrials = 200;
  constexpr double kMinFailRate = 0.99;
  bool pass = true;
  std::string detail;
  for (const char* name : {"gaussian", "runge"}) {
    detail += std::string(detail.empty() ? "" : "; ") + name + " fail rates";
    for (int n = 1; n <= 5; ++n) {
      ExperimentConfig cfg;
      cfg.function = name;
      cfg.order = n;
      cfg.trials = kTrials;
      cfg.tol = kTol;
      cfg.seed = 70 + n;
      const double rate = cmd_verify_popoviciu(cfg).report["result"]["scan"]["summary"]["pass_rate"];
      const double fail = 1.0 - rate;
      pass = pass && fail >= kMinFailRate;
      detail += " n=" + std::to_string(n) + ":" + fmt(fail);
    }
  }

  Rng rng(77);
  std::uniform_real_distribution<double> box(-2.0, 2.0);
  int trig_ok = 0;
  int trig_total = 0;
  double worst = 0.0;
  for (int d = 1; d <= 2; ++d) {
    for (int n = 1; n <= 5; ++n) {
      const ExpPolynomial p = random_bounded_trig(rng, d, n, 1.0);
      const Oracle f = as_oracle(p);
      const bool dim_ok = translate_span_dim(p) == n;
      for (int trial = 0; trial < kTrials; ++trial) {
        Point x(d);
        Point h(d);
        for (int k = 0; k < d; ++k) x(k) = box(rng);
        do {
          for (int k = 0; k < d; ++k) h(k) = box(rng);
        } while (h.norm() == 0.0);
        const double r = popoviciu_residual(sample_line(f, x, h, 2 * n + 1), n);
        worst = std::max(worst, r);
        ++trig_total;
        if (dim_ok && r < kTol) ++trig_ok;
      }
    }
  }
  pass = pass && trig_ok == trig_total;
  detail += "; bounded trig " + std::to_string(trig_ok) + "/" + std::to_string(trig_total) + " pass at n (worst " +
            fmt(worst) + "); need fail rate >= " + fmt(kMinFailRate);
  return {pass, detail};
}

// ---- criterion 8

struct Run {
  int status = -1;
  std::string output;
};

Run run_cli(const std::string& args) {
  Run r;
  const std::string command = std::string(EXPOLY_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(command.c_str(), "r");
  if (pipe == nullptr) return r;
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.output.append(buf.data(), got);
  r.status = pclose(pipe);
  return r;
}

std::string without_timestamp(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::string out;
  while (std::getline(in, line)) {
    if (line.find("\"timestamp\":") != std::string::npos) continue;
    out += line;
    out += '\n';
  }
  return out;
}

Verdict criterion_determinism() {
  const fs::path dir = fs::temp_directory_path() / "expoly_acceptance_determinism";
  fs::create_directories(dir);
  const fs::path csv = dir / "samples.csv";
  std::ofstream(csv) << "k,re,im\n0,2,0\n1,5,0\n2,13,0\n3,35,0\n4,97,0\n";

  const std::vector<std::string> commands = {
      "verify-popoviciu --function exppoly-random --dim 2 --order 3 --trials 50 --seed 11",
      "line-restrict --function product --dim 2 --seed 12",
      "search-counterexample --function trig-bounded --dim 2 --terms 2 --order 3 --trials 3 --seed 13",
      "recover --input " + csv.string() + " --order 2 --seed 14",
      "dense-gens --dim 2 --eps 0.3 --seed 15",
      "montel-check --function exppoly-random --dim 1 --terms 2 --seed 16",
      "trig-reconstruct --function trig-random --dim 2 --order 2 --seed 17",
  };
  int identical = 0;
  std::string mismatched;
  for (const auto& c : commands) {
    const Run a = run_cli(c);
    const Run b = run_cli(c);
    const bool same = a.status == b.status && !a.output.empty() &&
                      without_timestamp(a.output) == without_timestamp(b.output) &&
                      a.output.find("\"timestamp\":") != std::string::npos;
    if (same) {
      ++identical;
    } else {
      mismatched += " [" + c.substr(0, c.find(' ')) + "]";
    }
  }
  fs::remove_all(dir);
  const int total = static_cast<int>(commands.size());
  return {identical == total, std::to_string(identical) + "/" + std::to_string(total) +
                                  " subcommands byte-identical across two runs" + mismatched};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
      {"popoviciu vanishing", criterion_vanishing},
      {"minimality", criterion_minimality},
      {"prony round trip", criterion_prony},
      {"kronecker density", criterion_kronecker},
      {"montel machinery", criterion_montel},
      {"trig reconstruction", criterion_trig},
      {"negative controls", criterion_negative_controls},
      {"determinism", criterion_determinism},
  };

  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    const int k = std::atoi(argv[i]);
    if (k < 1 || k > static_cast<int>(criteria.size())) {
      std::cerr << "unknown criterion " << argv[i] << "\n";
      return 2;
    }
    selected.push_back(k);
  }
  if (selected.empty()) {
    for (int k = 1; k <= static_cast<int>(criteria.size()); ++k) selected.push_back(k);
  }

  int failed = 0;
  for (int k : selected) {
    const auto& [name, run] = criteria[k - 1];
    Verdict v;
    try {
      v = run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    if (!v.pass) ++failed;
    std::cout << "criterion " << k << " " << (v.pass ? "PASS" : "FAIL") << "  " << name << ": " << v.detail
              << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
