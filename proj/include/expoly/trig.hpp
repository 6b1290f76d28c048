#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include <json.hpp>

#include "expoly/common.hpp"

namespace expoly {

/// sum_alpha c_alpha prod_k exp(2 pi i alpha_k x_k / T_k), |alpha_k| <= degree.
struct TrigPolynomial {
  int dim = 0;
  std::vector<double> periods;
  int degree = 0;
  std::map<std::vector<int>, Complex> coeffs;
};

inline constexpr double kTrigTrim = 1e-12;

Complex evaluate_trig(const TrigPolynomial& p, const Point& x);

///
/// Rebuilds a joint trigonometric polynomial from an oracle that is, in each
/// variable separately, a T_k-periodic trigonometric polynomial of degree <= m.
///
/// Samples the tensor grid x_k = j T_k / (2m+1), j = 0..2m, and inverts the
/// interpolation system with a separable DFT. Coefficients with magnitude at
/// most kTrigTrim are dropped.
///
TrigPolynomial reconstruct_joint(const Oracle& f, const std::vector<double>& periods, int m);

/// Doubles m from `m_start` until the coefficients outside the previous
/// degree all fall below `vanish_tol`; throws if `m_cap` is reached first.
TrigPolynomial reconstruct_adaptive(const Oracle& f, const std::vector<double>& periods,
                                    int m_start, int m_cap = 64, double vanish_tol = 1e-10);

/// Max |p - f| over `trials` random axis-parallel slices, 4m+5 points each.
double verify_separate_slices(const TrigPolynomial& p, const Oracle& f, int trials,
                              std::uint64_t seed);

/// Largest |frequency| whose coefficient exceeds 1e-9 of the largest one on
/// the slice through `base` along `axis`, from 2 m_max + 1 samples.
int detect_axis_degree(const Oracle& f, int axis, const Point& base, double period, int m_max);

/// {"dim", "periods", "degree", "coeffs": [{"alpha": [..], "c": [re, im]}]}
nlohmann::json trig_polynomial_to_json(const TrigPolynomial& p);
TrigPolynomial trig_polynomial_from_json(const nlohmann::json& j);

}  // namespace expoly
