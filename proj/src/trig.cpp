#include "expoly/trig.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace expoly {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool finite(const Complex& v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

void validate_periods(const std::vector<double>& periods) {
  if (periods.empty()) throw InvalidArgument("at least one period is required");
  for (double t : periods) {
    if (!(t > 0.0) || !std::isfinite(t)) throw InvalidArgument("periods must be positive");
  }
}

// Frequencies -m..m from N = 2m+1 equispaced samples on one axis of a
// row-major (axis 0 fastest) tensor array, in place.
void dft_axis(std::vector<Complex>& data, int axis, int m) {
  const int n = 2 * m + 1;
  std::vector<Complex> twiddle(static_cast<std::size_t>(n) * n);
  for (int a = -m; a <= m; ++a) {
    for (int j = 0; j < n; ++j) {
      // reduce a*j mod n first so the angle stays small
      const int phase = ((a * j) % n + n) % n;
      twiddle[static_cast<std::size_t>(a + m) * n + j] =
          std::polar(1.0 / n, -kTwoPi * phase / static_cast<double>(n));
    }
  }
  std::size_t stride = 1;
  for (int k = 0; k < axis; ++k) stride *= n;
  const std::size_t total = data.size();
  std::vector<Complex> line(n);
  for (std::size_t start = 0; start < total; ++start) {
    if ((start / stride) % n != 0) continue;
    for (int j = 0; j < n; ++j) line[j] = data[start + j * stride];
    for (int a = 0; a < n; ++a) {
      Complex acc = 0.0;
      for (int j = 0; j < n; ++j) acc += twiddle[static_cast<std::size_t>(a) * n + j] * line[j];
      data[start + a * stride] = acc;
    }
  }
}

std::vector<Complex> slice_spectrum(const Oracle& f, int axis, const Point& base, double period,
                                    int m) {
  const int n = 2 * m + 1;
  std::vector<Complex> samples(n);
  Point x = base;
  for (int j = 0; j < n; ++j) {
    x(axis) = base(axis) + j * period / n;
    samples[j] = f(x);
    if (!finite(samples[j])) throw NonFiniteSamples("oracle returned a non-finite sample");
  }
  dft_axis(samples, 0, m);
  return samples;
}

}  // namespace

Complex evaluate_trig(const TrigPolynomial& p, const Point& x) {
  if (x.size() != p.dim) throw DimensionMismatch(p.dim, static_cast<int>(x.size()));
  Complex total = 0.0;
  for (const auto& [alpha, c] : p.coeffs) {
    double phase = 0.0;
    for (int k = 0; k < p.dim; ++k) phase += alpha[k] * x(k) / p.periods[k];
    total += c * std::polar(1.0, kTwoPi * phase);
  }
  return total;
}

TrigPolynomial reconstruct_joint(const Oracle& f, const std::vector<double>& periods, int m) {
  validate_periods(periods);
  if (m < 0) throw InvalidArgument("degree must be nonnegative");
  const int d = static_cast<int>(periods.size());
  const int n = 2 * m + 1;
  std::size_t total = 1;
  for (int k = 0; k < d; ++k) total *= n;

  std::vector<Complex> grid(total);
  std::vector<int> j(d, 0);
  Point x(d);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rest = idx;
    for (int k = 0; k < d; ++k) {
      j[k] = static_cast<int>(rest % n);
      rest /= n;
      x(k) = j[k] * periods[k] / n;
    }
    grid[idx] = f(x);
    if (!finite(grid[idx])) throw NonFiniteSamples("oracle returned a non-finite grid sample");
  }
  for (int k = 0; k < d; ++k) dft_axis(grid, k, m);

  TrigPolynomial out;
  out.dim = d;
  out.periods = periods;
  out.degree = m;
  std::vector<int> alpha(d);
  for (std::size_t idx = 0; idx < total; ++idx) {
    if (std::abs(grid[idx]) <= kTrigTrim) continue;
    std::size_t rest = idx;
    for (int k = 0; k < d; ++k) {
      alpha[k] = static_cast<int>(rest % n) - m;
      rest /= n;
    }
    out.coeffs.emplace(alpha, grid[idx]);
  }
  return out;
}

TrigPolynomial reconstruct_adaptive(const Oracle& f, const std::vector<double>& periods,
                                    int m_start, int m_cap, double vanish_tol) {
  int m = std::max(1, m_start);
  if (m > m_cap) throw InvalidArgument("starting degree exceeds the cap");
  TrigPolynomial current = reconstruct_joint(f, periods, m);
  while (true) {
    const int next = std::min(2 * m, m_cap);
    if (next == m) {
      throw Error("trigonometric degree did not stabilize below " + std::to_string(m_cap));
    }
    TrigPolynomial wider = reconstruct_joint(f, periods, next);
    bool vanished = true;
    for (const auto& [alpha, c] : wider.coeffs) {
      const bool outside = std::any_of(alpha.begin(), alpha.end(), [&](int a) { return std::abs(a) > m; });
      if (outside && std::abs(c) >= vanish_tol) {
        vanished = false;
        break;
      }
    }
    if (vanished) return current;
    m = next;
    current = std::move(wider);
  }
}

double verify_separate_slices(const TrigPolynomial& p, const Oracle& f, int trials,
                              std::uint64_t seed) {
  if (p.dim < 1) throw InvalidArgument("trigonometric polynomial has no dimension");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick_axis(0, p.dim - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int points = 4 * p.degree + 5;
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    const int axis = pick_axis(rng);
    Point base(p.dim);
    for (int k = 0; k < p.dim; ++k) base(k) = unit(rng) * p.periods[k];
    Point x = base;
    for (int j = 0; j < points; ++j) {
      x(axis) = base(axis) + j * p.periods[axis] / points;
      worst = std::max(worst, std::abs(evaluate_trig(p, x) - f(x)));
    }
  }
  return worst;
}

int detect_axis_degree(const Oracle& f, int axis, const Point& base, double period, int m_max) {
  if (m_max < 0) throw InvalidArgument("m_max must be nonnegative");
  if (axis < 0 || axis >= base.size()) throw InvalidArgument("axis out of range");
  if (!(period > 0.0)) throw InvalidArgument("period must be positive");
  const auto spectrum = slice_spectrum(f, axis, base, period, m_max);
  double largest = 0.0;
  for (const auto& c : spectrum) largest = std::max(largest, std::abs(c));
  if (largest == 0.0) return 0;
  int degree = 0;
  for (int a = -m_max; a <= m_max; ++a) {
    if (std::abs(spectrum[a + m_max]) > 1e-9 * largest) degree = std::max(degree, std::abs(a));
  }
  return degree;
}

nlohmann::json trig_polynomial_to_json(const TrigPolynomial& p) {
  nlohmann::json coeffs = nlohmann::json::array();
  for (const auto& [alpha, c] : p.coeffs) {
    coeffs.push_back({{"alpha", alpha}, {"c", {c.real(), c.imag()}}});
  }
  return {{"dim", p.dim}, {"periods", p.periods}, {"degree", p.degree}, {"coeffs", std::move(coeffs)}};
}

TrigPolynomial trig_polynomial_from_json(const nlohmann::json& j) {
  try {
    TrigPolynomial p;
    p.dim = j.at("dim").get<int>();
    p.periods = j.at("periods").get<std::vector<double>>();
    p.degree = j.at("degree").get<int>();
    if (static_cast<int>(p.periods.size()) != p.dim) {
      throw DimensionMismatch(p.dim, static_cast<int>(p.periods.size()));
    }
    validate_periods(p.periods);
    for (const auto& jc : j.at("coeffs")) {
      auto alpha = jc.at("alpha").get<std::vector<int>>();
      if (static_cast<int>(alpha.size()) != p.dim) {
        throw DimensionMismatch(p.dim, static_cast<int>(alpha.size()));
      }
      for (int a : alpha) {
        if (std::abs(a) > p.degree) throw InvalidArgument("frequency exceeds declared degree");
      }
      const auto& c = jc.at("c");
      p.coeffs[alpha] += Complex(c.at(0).get<double>(), c.at(1).get<double>());
    }
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed TrigPolynomial document: ") + e.what());
  }
}

}  // namespace expoly
