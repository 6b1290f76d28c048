#pragma once

#include <vector>

#include <json.hpp>

#include "expoly/common.hpp"

namespace expoly {

/// One exponential monomial c * x^alpha * exp(<lambda, x>).
struct ExpTerm {
  Complex coeff;
  std::vector<int> alpha;
  std::vector<Complex> lambda;

  friend bool operator==(const ExpTerm&, const ExpTerm&) = default;
};

///
/// Finite sum of exponential monomials on R^d.
///
/// Construction validates shapes and the size guards (exponents up to
/// kMaxExponent, at most kMaxTerms terms). Terms are stored as given; call
/// canonicalize() for the merged, ordered form used in serialization and
/// equality tests.
///
class ExpPolynomial {
 public:
  static constexpr int kMaxExponent = 32;
  static constexpr int kMaxTerms = 1024;

  explicit ExpPolynomial(int dim, std::vector<ExpTerm> terms = {});

  int dim() const { return dim_; }
  const std::vector<ExpTerm>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  Complex operator()(const Point& x) const;

  friend bool operator==(const ExpPolynomial&, const ExpPolynomial&) = default;

 private:
  int dim_;
  std::vector<ExpTerm> terms_;
};

/// Sum over terms of c * prod_k x_k^alpha_k * exp(<lambda, x>), with 0^0 = 1.
Complex evaluate(const ExpPolynomial& p, const Point& x);

/// Merges terms with identical (alpha, lambda), drops exact zeros, and sorts
/// by (Re lambda, Im lambda, alpha) lexicographically.
ExpPolynomial canonicalize(const ExpPolynomial& p);

///
/// Dimension of the translate span of p.
///
/// The span is closed under every partial derivative, and for a fixed
/// exponent lambda the derivatives of P(x) e^{<lambda,x>} stay inside
/// span{d^beta P} e^{<lambda,x>}. Distinct exponents contribute independent
/// blocks, so the result is the sum over lambda-groups of the rank of the
/// derivative family of the polynomial part. Ranks are computed in exact
/// rational arithmetic on the stored coefficients.
///
int translate_span_dim(const ExpPolynomial& p);

/// {"dim": d, "terms": [{"coeff": [re, im], "alpha": [..], "lambda": [[re, im], ..]}]}
nlohmann::json exp_polynomial_to_json(const ExpPolynomial& p);
ExpPolynomial exp_polynomial_from_json(const nlohmann::json& j);

}  // namespace expoly

template <>
struct nlohmann::adl_serializer<expoly::ExpPolynomial> {
  static expoly::ExpPolynomial from_json(const json& j) {
    return expoly::exp_polynomial_from_json(j);
  }
  static void to_json(json& j, const expoly::ExpPolynomial& p) {
    j = expoly::exp_polynomial_to_json(p);
  }
};
