#pragma once

#include <optional>
#include <vector>

#include <json.hpp>

#include "expoly/common.hpp"

namespace expoly {

/// Vectors h_1..h_s whose integer combinations are dense in R^d, with
/// optional per-generator translate ranks n_i.
struct GeneratorSet {
  int dim = 0;
  std::vector<Point> generators;
  std::optional<std::vector<int>> ranks;

  int size() const { return static_cast<int>(generators.size()); }
};

/// (sqrt(p_1), ..., sqrt(p_d)) for the first d primes; {1, theta} is
/// Q-linearly independent. Supports 1 <= d <= 25.
Point q_independent_witness(int d);

///
/// Generators of a dense subgroup inside the open ball of radius `radius`.
///
/// Returns e_k / N (k = 1..d) and theta / M with theta from
/// q_independent_witness(d), where N and M are the smallest positive
/// integers putting every norm strictly below `radius`. For a nonzero center
/// x0 the shifted family {x0, x0 + h_1, ..., x0 + h_{d+1}} is returned
/// instead; its integer span contains every h_i and is therefore still dense.
///
GeneratorSet dense_generators(int d, const Point& center, double radius);

struct Approximation {
  bool found = false;
  std::vector<long long> coefficients;
  /// Distance of the best combination seen (the returned one when found).
  double distance = 0.0;
};

///
/// Searches integer m with |sum m_i h_i - target| < tol and max |m_i| <= bound.
///
/// The first d generators are treated as a basis that is rounded against
/// (exact nearest point when they are a scaled standard basis); the last
/// generator's coefficient is scanned over [-bound, bound]. Generators in
/// between keep coefficient 0. Among successes the smallest |m_last| wins,
/// then the lexicographically smallest vector.
///
Approximation approximate_by_combination(const GeneratorSet& gens, const Point& target,
                                         double tol, long long bound);

/// {"dim": d, "generators": [[..], ..], "ranks": [..] | null}
nlohmann::json generator_set_to_json(const GeneratorSet& g);
GeneratorSet generator_set_from_json(const nlohmann::json& j);

}  // namespace expoly
