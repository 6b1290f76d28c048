#include "expoly/prony.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

namespace expoly {

int RootCluster::total_multiplicity() const {
  int total = 0;
  for (const auto& r : roots) total += r.multiplicity;
  return total;
}

RadoCoefficients rado_coefficients(const SampleGrid1D& g, int n, double rank_tol) {
  g.validate();
  if (n < 1) throw InvalidArgument("recurrence order must be positive");
  const int samples = static_cast<int>(g.values.size());
  if (samples < 2 * n) throw InsufficientSamples(2 * n, samples);

  const int rows = samples - n;
  ComplexMatrix h(rows, n + 1);
  for (int j = 0; j < rows; ++j) {
    for (int k = 0; k <= n; ++k) h(j, k) = g.values[j + k];
  }
  // Exponential growth along the window lets late rows swamp the early ones.
  // When the raw columns lose rank, equilibrated rows usually still see every mode.
  ComplexMatrix system = h;
  if (numerical_rank(h.leftCols(n), rank_tol) < n) {
    for (int j = 0; j < rows; ++j) {
      const double norm = h.row(j).norm();
      if (norm > 0.0) system.row(j) /= norm;
    }
    const int rank = numerical_rank(system.leftCols(n), rank_tol);
    if (rank < n) throw AmbiguousOrder(n, rank);
  }

  RadoCoefficients out;
  out.order = n;
  out.a.resize(n + 1);
  out.a.head(n) = system.leftCols(n).colPivHouseholderQr().solve(-system.col(n));
  out.a(n) = 1.0;
  const double scale = system.norm() * out.a.norm();
  out.residual = scale > 0.0 ? (system * out.a).norm() / scale : 0.0;
  return out;
}

RootCluster characteristic_roots(const RadoCoefficients& a, double cluster_radius) {
  const int n = a.order;
  std::vector<Complex> raw;
  if (n == 1) {
    raw.push_back(-a.a(0));
  } else {
    ComplexMatrix companion = ComplexMatrix::Zero(n, n);
    for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) companion(i, n - 1) = -a.a(i);
    Eigen::ComplexEigenSolver<ComplexMatrix> solver(companion, false);
    const auto& ev = solver.eigenvalues();
    raw.assign(ev.data(), ev.data() + ev.size());
  }

  auto lex = [](const Complex& x, const Complex& y) {
    return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
  };
  std::sort(raw.begin(), raw.end(), lex);

  struct Accumulator {
    Complex sum;
    int count;
    Complex center() const { return sum / static_cast<double>(count); }
  };
  std::vector<Accumulator> clusters;
  for (const Complex& mu : raw) {
    bool placed = false;
    for (auto& c : clusters) {
      const Complex center = c.center();
      if (std::abs(mu - center) <= cluster_radius * std::max(1.0, std::abs(center))) {
        c.sum += mu;
        ++c.count;
        placed = true;
        break;
      }
    }
    if (!placed) clusters.push_back({mu, 1});
  }

  RootCluster out;
  for (const auto& c : clusters) out.roots.push_back({c.center(), c.count});
  std::sort(out.roots.begin(), out.roots.end(),
            [&](const RootCluster::Root& x, const RootCluster::Root& y) { return lex(x.mu, y.mu); });
  return out;
}

double reconstruction_residual(const ExpPolynomial& p, const SampleGrid1D& g) {
  if (p.dim() != 1) throw DimensionMismatch(1, p.dim());
  const double step = g.step.norm();
  double worst = 0.0;
  double peak = 0.0;
  Point s(1);
  for (std::size_t k = 0; k < g.values.size(); ++k) {
    s(0) = static_cast<double>(k) * step;
    worst = std::max(worst, std::abs(evaluate(p, s) - g.values[k]));
    peak = std::max(peak, std::abs(g.values[k]));
  }
  return worst / (1.0 + peak);
}

namespace {

struct Fit {
  ExpPolynomial poly{1};
  RootCluster roots;
  double residual = std::numeric_limits<double>::infinity();
};

Fit fit_coefficients(const SampleGrid1D& g, const RootCluster& roots,
                     const RecoveryOptions& opts) {
  const double step = g.step.norm();
  const int samples = static_cast<int>(g.values.size());
  const double span = std::max(1, samples - 1) * step;

  struct Basis {
    Complex lambda;
    int power;
  };
  std::vector<Basis> basis;
  for (const auto& r : roots.roots) {
    const Complex lambda = std::log(r.mu) / step;
    for (int p = 0; p < r.multiplicity; ++p) basis.push_back({lambda, p});
  }

  const int cols = static_cast<int>(basis.size());
  ComplexMatrix design(samples, cols);
  for (int k = 0; k < samples; ++k) {
    const double s = k * step;
    for (int c = 0; c < cols; ++c) {
      design(k, c) = std::pow(s / span, basis[c].power) * std::exp(basis[c].lambda * s);
    }
  }
  Eigen::VectorXd col_scale(cols);
  for (int c = 0; c < cols; ++c) {
    col_scale(c) = design.col(c).norm();
    if (col_scale(c) == 0.0) col_scale(c) = 1.0;
    design.col(c) /= col_scale(c);
  }
  const ComplexVector rhs =
      Eigen::Map<const ComplexVector>(g.values.data(), static_cast<Eigen::Index>(samples));
  const ComplexVector scaled = design.colPivHouseholderQr().solve(rhs);

  std::vector<Complex> coeffs(cols);
  double largest = 0.0;
  for (int c = 0; c < cols; ++c) {
    coeffs[c] = scaled(c) / col_scale(c) / std::pow(span, basis[c].power);
    largest = std::max(largest, std::abs(coeffs[c]));
  }

  std::vector<ExpTerm> terms;
  for (int c = 0; c < cols; ++c) {
    if (std::abs(coeffs[c]) <= opts.coefficient_trim * largest) continue;
    terms.push_back({coeffs[c], {basis[c].power}, {basis[c].lambda}});
  }
  Fit fit;
  fit.poly = canonicalize(ExpPolynomial(1, std::move(terms)));
  fit.roots = roots;
  fit.residual = reconstruction_residual(fit.poly, g);
  return fit;
}

}  // namespace

Recovery recover_exp_polynomial(const SampleGrid1D& g, int n, const RecoveryOptions& opts) {
  Recovery out;
  out.coefficients = rado_coefficients(g, n, opts.rank_tol);

  std::vector<double> radii = opts.cluster_radii;
  if (radii.empty()) radii.push_back(kDefaultClusterRadius);

  Fit best;
  for (double radius : radii) {
    RootCluster roots = characteristic_roots(out.coefficients, radius);
    double largest = 0.0;
    for (const auto& r : roots.roots) largest = std::max(largest, std::abs(r.mu));
    for (const auto& r : roots.roots) {
      if (std::abs(r.mu) <= opts.zero_root_tol * std::max(1.0, largest)) {
        throw ZeroCharacteristicRoot("characteristic root at zero: sample set is degenerate");
      }
    }
    Fit fit = fit_coefficients(g, roots, opts);
    if (fit.residual < best.residual) best = std::move(fit);
    if (best.residual <= opts.tol) break;
  }

  if (!(best.residual <= opts.tol)) throw ResidualTooLarge(best.residual);
  out.poly = std::move(best.poly);
  out.roots = std::move(best.roots);
  out.residual = best.residual;
  return out;
}

nlohmann::json recovery_report(const Recovery& r) {
  nlohmann::json roots = nlohmann::json::array();
  for (const auto& root : r.roots.roots) {
    roots.push_back({root.mu.real(), root.mu.imag(), root.multiplicity});
  }
  nlohmann::json coeffs = nlohmann::json::array();
  for (Eigen::Index k = 0; k < r.coefficients.a.size(); ++k) {
    coeffs.push_back({r.coefficients.a(k).real(), r.coefficients.a(k).imag()});
  }
  return {{"order", r.coefficients.order},
          {"residual", r.residual},
          {"recurrence_residual", r.coefficients.residual},
          {"coefficients", std::move(coeffs)},
          {"roots", std::move(roots)}};
}

}  // namespace expoly
