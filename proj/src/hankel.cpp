#include "expoly/hankel.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include <Eigen/LU>

namespace expoly {

namespace {

void require_samples(const SampleGrid1D& g, int n) {
  g.validate();
  if (n < 0) throw InvalidArgument("order must be nonnegative");
  const int needed = 2 * n + 1;
  if (static_cast<int>(g.values.size()) < needed) {
    throw InsufficientSamples(needed, static_cast<int>(g.values.size()));
  }
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

void SampleGrid1D::validate() const {
  if (values.size() < 2) throw InvalidArgument("a sample grid needs at least two values");
  if (base.size() == 0) throw InvalidArgument("sample grid base point is empty");
  if (step.size() != base.size()) {
    throw DimensionMismatch(static_cast<int>(base.size()), static_cast<int>(step.size()));
  }
  if (step.cwiseAbs().maxCoeff() == 0.0) throw InvalidArgument("step h must be nonzero");
}

SampleGrid1D sample_line(const Oracle& f, const Point& base, const Point& step, int count) {
  SampleGrid1D g{base, step, {}};
  g.values.reserve(count);
  for (int k = 0; k < count; ++k) {
    g.values.push_back(f(base + static_cast<double>(k) * step));
  }
  return g;
}

PopoviciuMatrix build_popoviciu_matrix(const SampleGrid1D& g, int n) {
  require_samples(g, n);
  PopoviciuMatrix m{n, ComplexMatrix(n + 1, n + 1)};
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) m.entries(i, j) = g.values[i + j];
  }
  return m;
}

double popoviciu_residual(const SampleGrid1D& g, int n) {
  const PopoviciuMatrix m = build_popoviciu_matrix(g, n);
  double hadamard = 1.0;
  for (int i = 0; i <= n; ++i) {
    const double row = m.entries.row(i).norm();
    if (row == 0.0) return 0.0;
    hadamard *= row;
  }
  // Normalize rows first so the LU never sees the raw magnitude.
  ComplexMatrix scaled = m.entries;
  for (int i = 0; i <= n; ++i) scaled.row(i) /= m.entries.row(i).norm();
  return std::abs(scaled.partialPivLu().determinant());
}

int translate_rank(const SampleGrid1D& g, int window, double tol) {
  require_samples(g, window);
  const int rows = g.last_index() - window + 1;
  ComplexMatrix h(rows, window + 1);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c <= window; ++c) h(r, c) = g.values[r + c];
  }
  return numerical_rank(h, tol);
}

void write_samples_csv(std::ostream& os, const SampleGrid1D& g) {
  const auto old_precision = os.precision(17);
  os << "k,re,im\n";
  for (std::size_t k = 0; k < g.values.size(); ++k) {
    os << k << ',' << g.values[k].real() << ',' << g.values[k].imag() << '\n';
  }
  os.precision(old_precision);
}

std::vector<Complex> read_samples_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || trim(line) != "k,re,im") {
    throw InvalidArgument("sample CSV must start with header k,re,im");
  }
  std::vector<Complex> values;
  int line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string k, re, im;
    if (!std::getline(ss, k, ',') || !std::getline(ss, re, ',') || !std::getline(ss, im)) {
      throw InvalidArgument("malformed sample CSV row at line " + std::to_string(line_no));
    }
    try {
      if (std::stoul(k) != values.size()) {
        throw InvalidArgument("sample CSV index out of sequence at line " +
                              std::to_string(line_no));
      }
      values.emplace_back(std::stod(re), std::stod(im));
    } catch (const std::logic_error&) {
      throw InvalidArgument("unparseable sample CSV row at line " + std::to_string(line_no));
    }
  }
  return values;
}

nlohmann::json grid_geometry_to_json(const SampleGrid1D& g) {
  std::vector<double> base(g.base.data(), g.base.data() + g.base.size());
  std::vector<double> step(g.step.data(), g.step.data() + g.step.size());
  return {{"base", base}, {"step", step}};
}

void apply_grid_geometry(const nlohmann::json& j, SampleGrid1D& g) {
  try {
    const auto base = j.at("base").get<std::vector<double>>();
    const auto step = j.at("step").get<std::vector<double>>();
    g.base = Eigen::Map<const Point>(base.data(), static_cast<Eigen::Index>(base.size()));
    g.step = Eigen::Map<const Point>(step.data(), static_cast<Eigen::Index>(step.size()));
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed grid sidecar: ") + e.what());
  }
}

}  // namespace expoly
