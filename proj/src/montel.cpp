#include "expoly/montel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include <Eigen/LU>
#include <Eigen/QR>
#include <Eigen/SVD>

namespace expoly {

namespace {

bool usable(const Complex& v) {
  return std::isfinite(v.real()) && std::isfinite(v.imag()) && std::abs(v) <= kMaxOracleMagnitude;
}

// Rows of `m` whose entries are all usable.
std::vector<int> usable_rows(const ComplexMatrix& m) {
  std::vector<int> rows;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    bool ok = true;
    for (Eigen::Index j = 0; j < m.cols() && ok; ++j) ok = usable(m(i, j));
    if (ok) rows.push_back(static_cast<int>(i));
  }
  return rows;
}

ComplexMatrix select_rows(const ComplexMatrix& m, std::span<const int> rows) {
  ComplexMatrix out(static_cast<Eigen::Index>(rows.size()), m.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(i) = m.row(rows[i]);
  return out;
}

// Left singular vectors above the relative threshold.
ComplexMatrix orthonormal_range(const ComplexMatrix& m, double tol) {
  if (m.size() == 0) return ComplexMatrix(m.rows(), 0);
  Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeThinU);
  const auto& sigma = svd.singularValues();
  int rank = 0;
  if (sigma.size() > 0 && sigma(0) > 0.0) {
    for (Eigen::Index k = 0; k < sigma.size(); ++k) {
      if (sigma(k) / sigma(0) > tol) ++rank;
    }
  }
  return svd.matrixU().leftCols(rank);
}

Point combination(const GeneratorSet& gens, std::span<const long long> m) {
  Point shift = Point::Zero(gens.dim);
  for (int i = 0; i < gens.size(); ++i) shift += static_cast<double>(m[i]) * gens.generators[i];
  return shift;
}

}  // namespace

LatticeSampler::LatticeSampler(Oracle f, std::vector<Point> probes)
    : f_(std::move(f)), probes_(std::move(probes)), dim_(0) {
  if (!f_) throw InvalidArgument("sampler needs an oracle");
  if (probes_.empty()) throw InvalidArgument("sampler needs at least one probe");
  dim_ = static_cast<int>(probes_.front().size());
  auto less = [](const Point& a, const Point& b) {
    return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
  };
  std::set<Point, decltype(less)> seen(less);
  for (const auto& p : probes_) {
    if (p.size() != dim_) throw DimensionMismatch(dim_, static_cast<int>(p.size()));
    if (!seen.insert(p).second) throw InvalidArgument("probes must be pairwise distinct");
  }
}

LatticeSampler LatticeSampler::with_probe_cloud(Oracle f, int dim, std::uint64_t seed, int count,
                                                double half_width) {
  if (dim < 1) throw InvalidArgument("dimension must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(-half_width, half_width);
  std::vector<Point> probes;
  probes.reserve(count);
  for (int i = 0; i < count; ++i) {
    Point p(dim);
    for (int k = 0; k < dim; ++k) p(k) = coord(rng);
    probes.push_back(std::move(p));
  }
  return LatticeSampler(std::move(f), std::move(probes));
}

ComplexMatrix LatticeSampler::translates(const std::vector<Point>& shifts) const {
  ComplexMatrix out(static_cast<Eigen::Index>(probes_.size()),
                    static_cast<Eigen::Index>(shifts.size()));
  for (std::size_t j = 0; j < shifts.size(); ++j) {
    if (shifts[j].size() != dim_) throw DimensionMismatch(dim_, static_cast<int>(shifts[j].size()));
    for (std::size_t i = 0; i < probes_.size(); ++i) out(i, j) = f_(probes_[i] + shifts[j]);
  }
  return out;
}

StepOperator fit_step_operator(const LatticeSampler& s, const Point& h, int n, double tol) {
  if (n < 1) throw InvalidArgument("step order must be positive");
  if (h.size() != s.dim()) throw DimensionMismatch(s.dim(), static_cast<int>(h.size()));
  if (h.cwiseAbs().maxCoeff() == 0.0) throw InvalidArgument("generator must be nonzero");

  std::vector<Point> shifts;
  for (int k = 0; k <= n; ++k) shifts.push_back(static_cast<double>(k) * h);
  const ComplexMatrix all = s.translates(shifts);
  const std::vector<int> rows = usable_rows(all);
  const ComplexMatrix v = select_rows(all, rows);

  const ComplexMatrix lead = v.leftCols(n);
  const int lead_rank = numerical_rank(lead, tol);
  if (lead_rank < n) throw RankDeficient(n, lead_rank);
  const int full_rank = numerical_rank(v, tol);
  if (full_rank > n) throw RankExcess(n, full_rank);

  const ComplexVector next = v.col(n);
  const ComplexVector c = lead.colPivHouseholderQr().solve(next);

  StepOperator op;
  op.generator = h;
  op.order = n;
  op.matrix = ComplexMatrix::Zero(n, n);
  for (int k = 1; k < n; ++k) op.matrix(k, k - 1) = 1.0;
  op.matrix.col(n - 1) = c;
  const double scale = next.norm();
  op.residual = scale > 0.0 ? (lead * c - next).norm() / scale : 0.0;
  op.condition = condition_number(op.matrix);
  op.dropped_probes = static_cast<int>(all.rows()) - static_cast<int>(rows.size());
  if (!(op.condition < 1.0 / tol)) {
    throw SingularStepOperator("step operator is numerically singular (condition " +
                               std::to_string(op.condition) + ")");
  }
  return op;
}

int detect_step_rank(const LatticeSampler& s, const Point& h, int max_order, double tol) {
  if (max_order < 0) throw InvalidArgument("max order must be nonnegative");
  std::vector<Point> shifts;
  for (int k = 0; k <= max_order; ++k) shifts.push_back(static_cast<double>(k) * h);
  const ComplexMatrix all = s.translates(shifts);
  const ComplexMatrix v = select_rows(all, usable_rows(all));
  // Scan upwards, not one rank of the whole block: with short steps and
  // polynomial factors an early near-dependency can sit below tol while
  // later columns lift the total rank past it.
  for (int n = 0; n <= max_order; ++n) {
    const int r = numerical_rank(v.leftCols(n + 1), tol);
    if (r <= n) return r;
  }
  return max_order + 1;
}

int TranslateSpace::column_of(std::span<const int> a) const {
  int index = 0;
  int stride = 1;
  for (std::size_t i = 0; i < ranks.size(); ++i) {
    index += a[i] * stride;
    stride *= ranks[i];
  }
  return index;
}

TranslateSpace build_w_basis(const LatticeSampler& s, const GeneratorSet& gens, double tol) {
  if (!gens.ranks) throw InvalidArgument("generator ranks must be set");
  if (gens.dim != s.dim()) throw DimensionMismatch(s.dim(), gens.dim);
  if (static_cast<int>(gens.ranks->size()) != gens.size()) {
    throw InvalidArgument("ranks and generators differ in length");
  }
  TranslateSpace w;
  w.ranks = *gens.ranks;
  for (int r : w.ranks) {
    if (r < 1) throw InvalidArgument("ranks must be positive");
  }

  std::vector<int> a(w.ranks.size(), 0);
  std::vector<Point> shifts;
  while (true) {
    w.exponents.push_back(a);
    Point shift = Point::Zero(gens.dim);
    for (std::size_t i = 0; i < a.size(); ++i) shift += a[i] * gens.generators[i];
    shifts.push_back(std::move(shift));
    std::size_t i = 0;
    for (; i < a.size(); ++i) {
      if (++a[i] < w.ranks[i]) break;
      a[i] = 0;
    }
    if (i == a.size()) break;
  }

  w.raw = s.translates(shifts);
  w.kept_probes = usable_rows(w.raw);
  w.dropped_probes = static_cast<int>(w.raw.rows()) - static_cast<int>(w.kept_probes.size());
  w.orthonormal = orthonormal_range(select_rows(w.raw, w.kept_probes), tol);
  w.dim = static_cast<int>(w.orthonormal.cols());
  if (static_cast<int>(w.kept_probes.size()) < 4 * std::max(w.dim, 1)) {
    throw ProbeSetTooSmall("only " + std::to_string(w.kept_probes.size()) +
                           " usable probes for a space of dimension " + std::to_string(w.dim));
  }
  return w;
}

ComplexVector probe_vector(const LatticeSampler& s, const Point& shift, std::span<const int> rows) {
  ComplexVector v(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) v(i) = s.value(s.probes()[rows[i]] + shift);
  return v;
}

double membership_residual(const LatticeSampler& s, const TranslateSpace& w,
                           std::span<const long long> m, const GeneratorSet& gens, double tol) {
  if (static_cast<int>(m.size()) != gens.size()) {
    throw DimensionMismatch(gens.size(), static_cast<int>(m.size()));
  }
  // shifts inside the basis box are columns of W itself
  bool in_box = true;
  for (int i = 0; i < gens.size(); ++i) in_box = in_box && m[i] >= 0 && m[i] < w.ranks[i];
  if (in_box) return 0.0;
  const ComplexVector v = probe_vector(s, combination(gens, m), w.kept_probes);

  std::vector<int> local;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (usable(v(i))) local.push_back(static_cast<int>(i));
  }
  if (static_cast<int>(local.size()) < 4 * std::max(w.dim, 1)) {
    throw ProbeSetTooSmall("translate leaves only " + std::to_string(local.size()) +
                           " usable probes");
  }

  ComplexVector target;
  ComplexMatrix q;
  if (static_cast<Eigen::Index>(local.size()) == v.size()) {
    target = v;
    q = w.orthonormal;
  } else {
    std::vector<int> rows;
    target.resize(static_cast<Eigen::Index>(local.size()));
    for (std::size_t i = 0; i < local.size(); ++i) {
      target(i) = v(local[i]);
      rows.push_back(w.kept_probes[local[i]]);
    }
    q = orthonormal_range(select_rows(w.raw, rows), tol);
  }

  const double norm = target.norm();
  if (norm == 0.0) return 0.0;
  if (q.cols() == 0) return 1.0;
  const ComplexVector projected = q * (q.adjoint() * target);
  return (target - projected).norm() / norm;
}

ComplexVector power_coordinates(const StepOperator& op, long long m) {
  ComplexVector coords = ComplexVector::Zero(op.order);
  coords(0) = 1.0;
  if (m >= 0) {
    for (long long k = 0; k < m; ++k) coords = op.matrix * coords;
  } else {
    const Eigen::PartialPivLU<ComplexMatrix> lu(op.matrix);
    for (long long k = 0; k < -m; ++k) coords = lu.solve(coords);
  }
  return coords;
}

ComplexVector synthesize_translate(const TranslateSpace& w, std::span<const StepOperator> ops,
                                   std::span<const long long> m, std::span<const int> order) {
  const std::size_t s = w.ranks.size();
  if (ops.size() != s || m.size() != s || order.size() != s) {
    throw InvalidArgument("operators, coefficients and order must match the generator count");
  }
  std::vector<ComplexVector> coords;
  for (std::size_t i = 0; i < s; ++i) {
    if (ops[i].order != w.ranks[i]) throw InvalidArgument("operator order differs from W rank");
    coords.push_back(power_coordinates(ops[i], m[i]));
  }
  std::vector<int> seen(order.begin(), order.end());
  std::sort(seen.begin(), seen.end());
  for (std::size_t i = 0; i < s; ++i) {
    if (seen[i] != static_cast<int>(i)) throw InvalidArgument("order must be a permutation");
  }

  const ComplexMatrix kept = select_rows(w.raw, w.kept_probes);
  // The coordinates grow quickly with |m| and the sum cancels heavily, so the
  // expansion is accumulated in extended precision.
  using Wide = std::complex<long double>;
  std::vector<Wide> acc(static_cast<std::size_t>(kept.rows()), Wide(0.0L));
  std::vector<int> a(s, 0);

  // Expands order[level] at depth `level`, carrying the partial product.
  auto expand = [&](auto&& self, std::size_t level, Wide weight) -> void {
    if (level == s) {
      const auto col = kept.col(w.column_of(a));
      for (Eigen::Index r = 0; r < kept.rows(); ++r) acc[r] += weight * Wide(col(r));
      return;
    }
    const int g = order[level];
    for (int k = 0; k < w.ranks[g]; ++k) {
      a[g] = k;
      self(self, level + 1, weight * Wide(coords[g](k)));
    }
  };
  expand(expand, 0, Wide(1.0L));
  ComplexVector out(kept.rows());
  for (Eigen::Index r = 0; r < kept.rows(); ++r) out(r) = Complex(acc[r]);
  return out;
}

}  // namespace expoly
