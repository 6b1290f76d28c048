#include "expoly/families.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace expoly {

namespace {

constexpr int kMaxRedraws = 10000;

double min_distance(const std::vector<Complex>& taken, const Complex& z) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& t : taken) best = std::min(best, std::abs(t - z));
  return best;
}

}  // namespace

Complex random_in_disc(Rng& rng, double radius) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double r = radius * std::sqrt(unit(rng));
  const double angle = 2.0 * std::numbers::pi * unit(rng);
  return std::polar(r, angle);
}

ExpPolynomial random_univariate_exp_polynomial(Rng& rng, const UnivariateFamily& family) {
  if (family.translate_dim < 0) throw InvalidArgument("translate dimension must be nonnegative");
  std::vector<ExpTerm> terms;
  std::vector<Complex> exponents;
  int remaining = family.translate_dim;
  while (remaining > 0) {
    int multiplicity = 1;
    if (family.allow_multiplicity) {
      std::uniform_int_distribution<int> pick(1, std::min(remaining, 3));
      multiplicity = pick(rng);
    }
    Complex lambda;
    int attempts = 0;
    do {
      if (++attempts > kMaxRedraws) throw InvalidArgument("cannot place separated exponents");
      lambda = random_in_disc(rng, family.lambda_radius);
    } while (std::abs(lambda.imag()) >= family.max_imag ||
             min_distance(exponents, lambda) < family.min_separation);
    exponents.push_back(lambda);

    for (int r = 0; r < multiplicity; ++r) {
      Complex c = random_in_disc(rng, family.coeff_radius);
      while (c == Complex(0.0, 0.0)) c = random_in_disc(rng, family.coeff_radius);
      terms.push_back({c, {r}, {lambda}});
    }
    remaining -= multiplicity;
  }
  return canonicalize(ExpPolynomial(1, std::move(terms)));
}

ExpPolynomial random_exp_polynomial(Rng& rng, const MultivariateFamily& family) {
  if (family.dim < 1) throw InvalidArgument("dimension must be positive");
  std::uniform_int_distribution<int> degree(0, family.max_degree);
  const double component_radius = family.lambda_radius / std::sqrt(static_cast<double>(family.dim));
  std::vector<ExpTerm> terms;
  for (int t = 0; t < family.terms; ++t) {
    ExpTerm term;
    term.coeff = random_in_disc(rng, family.coeff_radius);
    for (int k = 0; k < family.dim; ++k) {
      term.alpha.push_back(degree(rng));
      term.lambda.push_back(random_in_disc(rng, component_radius));
    }
    terms.push_back(std::move(term));
  }
  return canonicalize(ExpPolynomial(family.dim, std::move(terms)));
}

ExpPolynomial random_bounded_trig(Rng& rng, int dim, int terms, double max_frequency) {
  if (dim < 1) throw InvalidArgument("dimension must be positive");
  std::uniform_real_distribution<double> freq(-max_frequency, max_frequency);
  std::vector<ExpTerm> out;
  std::vector<std::vector<double>> taken;
  for (int t = 0; t < terms; ++t) {
    std::vector<double> omega(dim);
    int attempts = 0;
    bool separated = false;
    while (!separated) {
      if (++attempts > kMaxRedraws) throw InvalidArgument("cannot place separated frequencies");
      for (auto& w : omega) w = freq(rng);
      separated = std::all_of(taken.begin(), taken.end(), [&](const std::vector<double>& o) {
        double dist = 0.0;
        for (int k = 0; k < dim; ++k) dist = std::max(dist, std::abs(o[k] - omega[k]));
        return dist >= 0.05 * max_frequency;
      });
    }
    taken.push_back(omega);
    ExpTerm term;
    term.coeff = random_in_disc(rng, 1.0);
    term.alpha.assign(dim, 0);
    for (double w : omega) term.lambda.emplace_back(0.0, w);
    out.push_back(std::move(term));
  }
  return canonicalize(ExpPolynomial(dim, std::move(out)));
}

TrigPolynomial random_trig_polynomial(Rng& rng, const std::vector<double>& periods, int m,
                                      double coeff_radius) {
  TrigPolynomial p;
  p.dim = static_cast<int>(periods.size());
  p.periods = periods;
  p.degree = m;
  std::vector<int> alpha(p.dim, -m);
  while (true) {
    p.coeffs[alpha] = random_in_disc(rng, coeff_radius);
    int k = 0;
    for (; k < p.dim; ++k) {
      if (++alpha[k] <= m) break;
      alpha[k] = -m;
    }
    if (k == p.dim) break;
  }
  return p;
}

Oracle gaussian_oracle(Point center, double scale) {
  return [center = std::move(center), scale](const Point& x) {
    return Complex(std::exp(-scale * (x - center).squaredNorm()), 0.0);
  };
}

Oracle runge_oracle(Point center, double scale) {
  return [center = std::move(center), scale](const Point& x) {
    return Complex(1.0 / (1.0 + scale * (x - center).squaredNorm()), 0.0);
  };
}

Oracle abs_smooth_oracle(Point center, double eps) {
  return [center = std::move(center), eps](const Point& x) {
    return Complex(std::sqrt((x - center).squaredNorm() + eps * eps), 0.0);
  };
}

Oracle as_oracle(ExpPolynomial p) {
  return [p = std::move(p)](const Point& x) { return evaluate(p, x); };
}

Oracle as_oracle(TrigPolynomial p) {
  return [p = std::move(p)](const Point& x) { return evaluate_trig(p, x); };
}

}  // namespace expoly
