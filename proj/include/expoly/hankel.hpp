#pragma once

#include <iosfwd>
#include <vector>

#include <json.hpp>

#include "expoly/common.hpp"

namespace expoly {

/// Samples f(base + k * step) for k = 0..K.
struct SampleGrid1D {
  Point base;
  Point step;
  std::vector<Complex> values;

  int dim() const { return static_cast<int>(base.size()); }
  /// Index of the last sample (K).
  int last_index() const { return static_cast<int>(values.size()) - 1; }

  /// Throws InvalidArgument unless K >= 1, base/step agree in size and the
  /// step is nonzero. A zero step satisfies every determinant identity
  /// trivially and is rejected.
  void validate() const;
};

/// Samples `count` points of f along base + k * step.
SampleGrid1D sample_line(const Oracle& f, const Point& base, const Point& step, int count);

/// (n+1) x (n+1) Hankel matrix with entry (i, j) = f(x + (i + j) h).
struct PopoviciuMatrix {
  int order = 0;
  ComplexMatrix entries;
};

PopoviciuMatrix build_popoviciu_matrix(const SampleGrid1D& g, int n);

/// |det M| divided by the product of the row norms of M (Hadamard bound).
/// Zero when any row vanishes. Order 0 is the 1x1 matrix [f(x)].
double popoviciu_residual(const SampleGrid1D& g, int n);

/// Numerical rank of the (K-n+1) x (n+1) Hankel matrix g.values[r + c].
int translate_rank(const SampleGrid1D& g, int window, double tol = kDefaultRankTol);

/// CSV with header `k,re,im`, one row per sample.
void write_samples_csv(std::ostream& os, const SampleGrid1D& g);
/// Reads sample values; base and step come from elsewhere (sidecar or flags).
std::vector<Complex> read_samples_csv(std::istream& is);

/// Sidecar document {"base": [..], "step": [..]}.
nlohmann::json grid_geometry_to_json(const SampleGrid1D& g);
void apply_grid_geometry(const nlohmann::json& j, SampleGrid1D& g);

}  // namespace expoly
