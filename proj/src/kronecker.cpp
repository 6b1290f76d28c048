#include "expoly/kronecker.hpp"

#include <cmath>
#include <cstdlib>
#include <iterator>
#include <limits>

#include <Eigen/LU>

namespace expoly {

namespace {

constexpr int kWitnessPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41,
                                  43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97};
constexpr int kMaxWitnessDim = static_cast<int>(std::size(kWitnessPrimes));

// Smallest positive integer q with length / q < radius.
long long smallest_divisor_below(double length, double radius) {
  long long q = static_cast<long long>(std::floor(length / radius));
  if (q < 1) q = 1;
  while (q > 1 && length / static_cast<double>(q - 1) < radius) --q;
  while (!(length / static_cast<double>(q) < radius)) ++q;
  return q;
}

}  // namespace

Point q_independent_witness(int d) {
  if (d < 1 || d > kMaxWitnessDim) {
    throw InvalidArgument("witness dimension must lie in [1, " + std::to_string(kMaxWitnessDim) +
                          "], got " + std::to_string(d));
  }
  Point theta(d);
  for (int k = 0; k < d; ++k) theta(k) = std::sqrt(static_cast<double>(kWitnessPrimes[k]));
  return theta;
}

GeneratorSet dense_generators(int d, const Point& center, double radius) {
  if (!(radius > 0.0)) throw InvalidArgument("radius must be positive");
  if (center.size() != d) throw DimensionMismatch(d, static_cast<int>(center.size()));
  const Point theta = q_independent_witness(d);

  const long long n = smallest_divisor_below(1.0, radius);
  const long long m = smallest_divisor_below(theta.norm(), radius);

  GeneratorSet out;
  out.dim = d;
  std::vector<Point> steps;
  for (int k = 0; k < d; ++k) {
    Point e = Point::Zero(d);
    e(k) = 1.0 / static_cast<double>(n);
    steps.push_back(std::move(e));
  }
  steps.push_back(theta / static_cast<double>(m));

  if (center.cwiseAbs().maxCoeff() == 0.0) {
    out.generators = std::move(steps);
  } else {
    out.generators.push_back(center);
    for (const auto& h : steps) out.generators.push_back(center + h);
  }
  return out;
}

Approximation approximate_by_combination(const GeneratorSet& gens, const Point& target,
                                         double tol, long long bound) {
  const int d = gens.dim;
  const int s = gens.size();
  if (target.size() != d) throw DimensionMismatch(d, static_cast<int>(target.size()));
  if (s < d + 1) throw InvalidArgument("need at least d + 1 generators");
  if (bound < 0) throw InvalidArgument("coefficient bound must be nonnegative");
  for (const auto& h : gens.generators) {
    if (h.size() != d) throw DimensionMismatch(d, static_cast<int>(h.size()));
  }

  Eigen::MatrixXd basis(d, d);
  for (int k = 0; k < d; ++k) basis.col(k) = gens.generators[k];
  Eigen::FullPivLU<Eigen::MatrixXd> lu(basis);
  if (lu.rank() < d) throw InvalidArgument("leading d generators are not linearly independent");
  const Point& last = gens.generators.back();

  Approximation best;
  best.distance = std::numeric_limits<double>::infinity();

  auto candidate = [&](long long m_last, std::vector<long long>& m) -> double {
    const Point rest = target - static_cast<double>(m_last) * last;
    const Eigen::VectorXd coords = lu.solve(rest);
    m.assign(s, 0);
    m[s - 1] = m_last;
    Point combo = static_cast<double>(m_last) * last;
    for (int k = 0; k < d; ++k) {
      const double r = std::nearbyint(coords(k));
      if (std::abs(r) > static_cast<double>(bound)) return std::numeric_limits<double>::infinity();
      m[k] = static_cast<long long>(r);
      combo += r * gens.generators[k];
    }
    return (combo - target).norm();
  };

  std::vector<long long> m;
  for (long long k = 0; k <= bound; ++k) {
    Approximation level;
    level.distance = std::numeric_limits<double>::infinity();
    for (long long m_last : {-k, k}) {
      if (k == 0 && m_last > 0) break;
      const double dist = candidate(m_last, m);
      if (dist < best.distance) {
        best.distance = dist;
        best.coefficients = m;
      }
      if (dist < tol && (!level.found || m < level.coefficients)) {
        level.found = true;
        level.coefficients = m;
        level.distance = dist;
      }
    }
    if (level.found) return level;
  }
  best.found = false;
  return best;
}

nlohmann::json generator_set_to_json(const GeneratorSet& g) {
  nlohmann::json gens = nlohmann::json::array();
  for (const auto& h : g.generators) {
    gens.push_back(std::vector<double>(h.data(), h.data() + h.size()));
  }
  nlohmann::json ranks = nullptr;
  if (g.ranks) ranks = *g.ranks;
  return {{"dim", g.dim}, {"generators", std::move(gens)}, {"ranks", std::move(ranks)}};
}

GeneratorSet generator_set_from_json(const nlohmann::json& j) {
  try {
    GeneratorSet g;
    g.dim = j.at("dim").get<int>();
    for (const auto& h : j.at("generators")) {
      const auto v = h.get<std::vector<double>>();
      if (static_cast<int>(v.size()) != g.dim) throw DimensionMismatch(g.dim, static_cast<int>(v.size()));
      g.generators.push_back(Eigen::Map<const Point>(v.data(), static_cast<Eigen::Index>(v.size())));
    }
    if (j.contains("ranks") && !j.at("ranks").is_null()) {
      g.ranks = j.at("ranks").get<std::vector<int>>();
      if (g.ranks->size() != g.generators.size()) {
        throw InvalidArgument("ranks and generators differ in length");
      }
    }
    return g;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed GeneratorSet document: ") + e.what());
  }
}

}  // namespace expoly
