#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "expoly/common.hpp"
#include "expoly/kronecker.hpp"

namespace expoly {

/// Oracle values above this magnitude (or non-finite) drop their probe.
inline constexpr double kMaxOracleMagnitude = 1e12;

///
/// Represents functions by their values on a fixed probe cloud.
///
/// A translate tau_v f becomes the vector (f(p + v))_p over the probes.
/// The oracle may be called from several threads only if it is itself
/// thread-safe; the sampler never calls it concurrently.
///
class LatticeSampler {
 public:
  LatticeSampler(Oracle f, std::vector<Point> probes);

  /// `count` probes uniform in [-half_width, half_width]^dim from mt19937_64(seed).
  static LatticeSampler with_probe_cloud(Oracle f, int dim, std::uint64_t seed, int count = 200,
                                         double half_width = 3.0);

  int dim() const { return dim_; }
  const std::vector<Point>& probes() const { return probes_; }
  Complex value(const Point& x) const { return f_(x); }

  /// probes x shifts matrix with entry f(probe_i + shift_j).
  ComplexMatrix translates(const std::vector<Point>& shifts) const;

 private:
  Oracle f_;
  std::vector<Point> probes_;
  int dim_;
};

/// tau_h restricted to W_h = span{f, tau_h f, ..., tau_h^{n-1} f}, in that basis.
struct StepOperator {
  Point generator;
  int order = 0;
  ComplexMatrix matrix;
  /// Relative least-squares residual of tau_h^n f against the basis.
  double residual = 0.0;
  double condition = 0.0;
  int dropped_probes = 0;
};

/// The requested order is not minimal: fewer independent translates exist.
class RankDeficient : public Error {
 public:
  RankDeficient(int order, int detected)
      : Error("translate family has rank " + std::to_string(detected) + " < order " +
              std::to_string(order)),
        detected_(detected) {}
  int detected_rank() const { return detected_; }

 private:
  int detected_;
};

/// dim span{f, ..., tau_h^n f} exceeds n: the step condition fails at this order.
class RankExcess : public Error {
 public:
  RankExcess(int order, int detected)
      : Error("translate family has rank " + std::to_string(detected) + " > order " +
              std::to_string(order)),
        detected_(detected) {}
  int detected_rank() const { return detected_; }

 private:
  int detected_;
};

class SingularStepOperator : public Error {
 public:
  using Error::Error;
};

class ProbeSetTooSmall : public Error {
 public:
  using Error::Error;
};

StepOperator fit_step_operator(const LatticeSampler& s, const Point& h, int n,
                               double tol = kDefaultRankTol);

/// Smallest n with tau_h^n f numerically in span{f, ..., tau_h^{n-1} f}, the
/// order fit_step_operator accepts; max_order + 1 when no such n <= max_order.
int detect_step_rank(const LatticeSampler& s, const Point& h, int max_order,
                     double tol = kDefaultRankTol);

/// Probe vectors of the mixed translates tau_{a_1 h_1 + ... + a_s h_s} f, 0 <= a_i < n_i.
struct TranslateSpace {
  std::vector<int> ranks;
  /// Multi-indices a, generator 0 varying fastest; column j of `raw` is exponents[j].
  std::vector<std::vector<int>> exponents;
  ComplexMatrix raw;
  std::vector<int> kept_probes;
  /// Orthonormal basis of W over the kept probes.
  ComplexMatrix orthonormal;
  int dim = 0;
  int dropped_probes = 0;

  int column_of(std::span<const int> a) const;
};

TranslateSpace build_w_basis(const LatticeSampler& s, const GeneratorSet& gens,
                             double tol = kDefaultRankTol);

/// |v - P_W v| / |v| for v the probe vector of tau_{sum m_i h_i} f; 0 when v = 0.
double membership_residual(const LatticeSampler& s, const TranslateSpace& w,
                           std::span<const long long> m, const GeneratorSet& gens,
                           double tol = kDefaultRankTol);

/// Coordinates of tau_h^m f in the basis {tau_h^k f}_{k<n}: M^m e_0 (negative m uses M^{-1}).
ComplexVector power_coordinates(const StepOperator& op, long long m);

///
/// Rebuilds the probe vector of tau_{sum m_i h_i} f over the kept probes from
/// the mixed translates, expanding one generator at a time in `order`
/// (a permutation of 0..s-1). Each expansion multiplies in the coordinates
/// M_i^{m_i} e_0, so different orders only differ in rounding.
///
ComplexVector synthesize_translate(const TranslateSpace& w, std::span<const StepOperator> ops,
                                   std::span<const long long> m, std::span<const int> order);

/// Probe vector of tau_shift f over the given probe rows.
ComplexVector probe_vector(const LatticeSampler& s, const Point& shift,
                           std::span<const int> rows);

}  // namespace expoly
