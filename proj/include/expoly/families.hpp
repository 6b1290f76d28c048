#pragma once

#include <random>
#include <string>

#include "expoly/common.hpp"
#include "expoly/exp_polynomial.hpp"
#include "expoly/trig.hpp"

namespace expoly {

/// Every random draw in the library and CLI goes through this engine.
using Rng = std::mt19937_64;
inline constexpr const char* kRngAlgorithm = "mt19937_64";

/// Uniform sample from the closed disc |z| <= radius.
Complex random_in_disc(Rng& rng, double radius);

struct UnivariateFamily {
  /// Exact translate-span dimension of the result.
  int translate_dim = 3;
  double lambda_radius = 1.0;
  double coeff_radius = 1.0;
  /// Allow repeated exponents (polynomial factors t^r e^{lambda t}).
  bool allow_multiplicity = true;
  /// Minimum distance between distinct exponents.
  double min_separation = 0.05;
  /// |Im lambda| is kept below this (use pi / |h| to stay alias-free).
  double max_imag = 1e300;
};

ExpPolynomial random_univariate_exp_polynomial(Rng& rng, const UnivariateFamily& family);

struct MultivariateFamily {
  int dim = 2;
  int terms = 3;
  /// Each alpha component is drawn from 0..max_degree.
  int max_degree = 0;
  /// Bound on the norm of each exponent vector.
  double lambda_radius = 1.0;
  double coeff_radius = 1.0;
};

ExpPolynomial random_exp_polynomial(Rng& rng, const MultivariateFamily& family);

/// sum_j c_j exp(i <omega_j, x>) with distinct real frequencies |omega_j|_inf <= max_frequency.
ExpPolynomial random_bounded_trig(Rng& rng, int dim, int terms, double max_frequency);

/// sum c_alpha e^{2 pi i <alpha, x / T>} with random coefficients on every |alpha_k| <= m.
TrigPolynomial random_trig_polynomial(Rng& rng, const std::vector<double>& periods, int m,
                                      double coeff_radius = 1.0);

/// exp(-|x - center|^2 * scale)
Oracle gaussian_oracle(Point center, double scale = 1.0);
/// 1 / (1 + scale |x - center|^2)
Oracle runge_oracle(Point center, double scale = 1.0);
/// sqrt(|x - center|^2 + eps^2), a smooth approximant of |x|.
Oracle abs_smooth_oracle(Point center, double eps = 0.1);

Oracle as_oracle(ExpPolynomial p);
Oracle as_oracle(TrigPolynomial p);

}  // namespace expoly
