#pragma once

#include <vector>

#include <json.hpp>

#include "expoly/common.hpp"
#include "expoly/exp_polynomial.hpp"
#include "expoly/hankel.hpp"

namespace expoly {

/// Recurrence a_0 f(x) + a_1 f(x+h) + ... + a_n f(x+nh) = 0, normalized to a_n = 1.
struct RadoCoefficients {
  int order = 0;
  ComplexVector a;
  /// ||H a|| / (||H||_F ||a||) over the sample Hankel system.
  double residual = 0.0;
};

/// Characteristic roots grouped into (mu, multiplicity) clusters.
struct RootCluster {
  struct Root {
    Complex mu;
    int multiplicity = 1;
  };
  std::vector<Root> roots;

  int total_multiplicity() const;
};

/// Order n is not identifiable from the samples: the leading n columns of the
/// Hankel system are rank deficient. A smaller order should be tried.
class AmbiguousOrder : public Error {
 public:
  AmbiguousOrder(int order, int detected_rank)
      : Error("order " + std::to_string(order) + " is ambiguous: sample Hankel rank is " +
              std::to_string(detected_rank)),
        detected_rank_(detected_rank) {}
  int detected_rank() const { return detected_rank_; }

 private:
  int detected_rank_;
};

class ZeroCharacteristicRoot : public Error {
 public:
  using Error::Error;
};

class ResidualTooLarge : public Error {
 public:
  explicit ResidualTooLarge(double residual)
      : Error("reconstruction residual " + std::to_string(residual) + " above tolerance"),
        residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

///
/// Least-squares solution of sum_k a_k values[j+k] = 0, j = 0..K-n, with a_n = 1.
///
/// Needs at least n equations (K + 1 >= 2n samples). Throws AmbiguousOrder
/// when the n unknown columns are numerically rank deficient at `rank_tol`,
/// both raw and with rows equilibrated.
///
RadoCoefficients rado_coefficients(const SampleGrid1D& g, int n,
                                   double rank_tol = kDefaultRankTol);

inline constexpr double kDefaultClusterRadius = 1e-6;

/// Roots of z^n + a_{n-1} z^{n-1} + ... + a_0 from the companion matrix,
/// greedily merged when closer than cluster_radius * max(1, |mu|).
RootCluster characteristic_roots(const RadoCoefficients& a,
                                 double cluster_radius = kDefaultClusterRadius);

struct RecoveryOptions {
  /// Reject fits whose reconstruction residual exceeds this.
  double tol = 1e-8;
  double rank_tol = kDefaultRankTol;
  /// Radii tried in order; the first whose fit meets `tol` is kept, otherwise
  /// the radius with the smallest residual.
  std::vector<double> cluster_radii = {1e-3, 1e-4, 1e-5, 1e-6};
  /// Roots with |mu| below this (relative to the largest root) count as zero.
  double zero_root_tol = 1e-12;
  /// Coefficients below this fraction of the largest one are dropped.
  double coefficient_trim = 1e-12;
};

struct Recovery {
  ExpPolynomial poly{1};
  RadoCoefficients coefficients;
  RootCluster roots;
  double residual = 0.0;
};

///
/// Recovers f along the sampled line as a univariate exponential polynomial.
///
/// The variable is the arc length s along step / |step| from the base point,
/// so sample k sits at s = k |h| and each exponent is Log(mu) / |h| on the
/// principal branch. A root of multiplicity m contributes s^r e^{lambda s},
/// r < m. Coefficients come from a least-squares fit against all samples.
///
Recovery recover_exp_polynomial(const SampleGrid1D& g, int n, const RecoveryOptions& opts = {});

/// max_k |p(k |h|) - values[k]| / (1 + max_k |values[k]|), p univariate along the line.
double reconstruction_residual(const ExpPolynomial& p, const SampleGrid1D& g);

/// {order, residual, roots: [[re, im, multiplicity], ..]}
nlohmann::json recovery_report(const Recovery& r);

}  // namespace expoly
