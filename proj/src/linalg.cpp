#include "expoly/common.hpp"

#include <limits>

#include <Eigen/SVD>

namespace expoly {

int numerical_rank(const ComplexMatrix& m, double tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  const auto& sigma = svd.singularValues();
  if (sigma.size() == 0 || !(sigma(0) > 0.0)) return 0;
  int rank = 0;
  for (Eigen::Index k = 0; k < sigma.size(); ++k) {
    if (sigma(k) / sigma(0) > tol) ++rank;
  }
  return rank;
}

double condition_number(const ComplexMatrix& m) {
  if (m.size() == 0) return std::numeric_limits<double>::infinity();
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  const auto& sigma = svd.singularValues();
  const double smallest = sigma(sigma.size() - 1);
  if (!(smallest > 0.0)) return std::numeric_limits<double>::infinity();
  return sigma(0) / smallest;
}

}  // namespace expoly
