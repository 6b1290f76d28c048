#include "expoly/exp_polynomial.hpp"

#include <algorithm>
#include <map>
#include <tuple>

#include <gmpxx.h>

namespace expoly {

namespace {

void validate_term(const ExpTerm& t, int dim) {
  if (static_cast<int>(t.alpha.size()) != dim) {
    throw DimensionMismatch(dim, static_cast<int>(t.alpha.size()));
  }
  if (static_cast<int>(t.lambda.size()) != dim) {
    throw DimensionMismatch(dim, static_cast<int>(t.lambda.size()));
  }
  for (int a : t.alpha) {
    if (a < 0 || a > ExpPolynomial::kMaxExponent) {
      throw InvalidArgument("exponent " + std::to_string(a) + " outside [0, " +
                            std::to_string(ExpPolynomial::kMaxExponent) + "]");
    }
  }
}

// Orders by (Re lambda..., Im lambda..., alpha...).
bool term_key_less(const ExpTerm& a, const ExpTerm& b) {
  for (std::size_t k = 0; k < a.lambda.size(); ++k) {
    if (a.lambda[k].real() != b.lambda[k].real()) {
      return a.lambda[k].real() < b.lambda[k].real();
    }
  }
  for (std::size_t k = 0; k < a.lambda.size(); ++k) {
    if (a.lambda[k].imag() != b.lambda[k].imag()) {
      return a.lambda[k].imag() < b.lambda[k].imag();
    }
  }
  return a.alpha < b.alpha;
}

bool same_key(const ExpTerm& a, const ExpTerm& b) {
  return a.alpha == b.alpha && a.lambda == b.lambda;
}

// Exact complex rational used by the derivative-rank computation.
struct QComplex {
  mpq_class re;
  mpq_class im;

  bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
};

QComplex operator*(const QComplex& a, const QComplex& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

QComplex operator-(const QComplex& a, const QComplex& b) {
  return {a.re - b.re, a.im - b.im};
}

QComplex inverse(const QComplex& a) {
  mpq_class norm = a.re * a.re + a.im * a.im;
  return {a.re / norm, -a.im / norm};
}

using SparseRow = std::map<std::size_t, QComplex>;

// Incremental exact row echelon form; rows are keyed by their leading column.
class EchelonBasis {
 public:
  // Returns true when the row was independent of the stored rows.
  bool insert(SparseRow row) {
    while (!row.empty()) {
      auto lead = row.begin();
      if (lead->second.is_zero()) {
        row.erase(lead);
        continue;
      }
      auto pivot = pivots_.find(lead->first);
      if (pivot == pivots_.end()) {
        QComplex scale = inverse(lead->second);
        for (auto& [col, v] : row) v = v * scale;
        pivots_.emplace(lead->first, std::move(row));
        return true;
      }
      // pivot rows are normalized to a leading 1
      QComplex factor = lead->second;
      for (const auto& [col, v] : pivot->second) {
        auto it = row.find(col);
        QComplex update = factor * v;
        if (it == row.end()) {
          row.emplace(col, QComplex{-update.re, -update.im});
        } else {
          it->second = it->second - update;
          if (it->second.is_zero()) row.erase(it);
        }
      }
    }
    return false;
  }

  int rank() const { return static_cast<int>(pivots_.size()); }

 private:
  std::map<std::size_t, SparseRow> pivots_;
};

mpz_class factorial(int n) {
  mpz_class r = 1;
  for (int k = 2; k <= n; ++k) r *= k;
  return r;
}

// Rank of {d^beta P : beta} for P = sum_alpha c_alpha x^alpha.
//
// In the scaled monomial basis x^gamma / gamma!, d^beta P has coordinate
// c_{beta+gamma} (beta+gamma)! at gamma, so the family is the multi-level
// Hankel matrix H[beta][gamma] = s_{beta+gamma} with s_alpha = c_alpha alpha!.
int derivative_family_rank(const std::vector<const ExpTerm*>& group, int dim) {
  std::map<std::vector<int>, QComplex> scaled;
  for (const ExpTerm* t : group) {
    mpz_class f = 1;
    for (int a : t->alpha) f *= factorial(a);
    QComplex value{mpq_class(t->coeff.real()) * f, mpq_class(t->coeff.imag()) * f};
    scaled.emplace(t->alpha, std::move(value));
  }

  // Down-closure of the support indexes both rows (beta) and columns (gamma).
  std::map<std::vector<int>, std::size_t> column_of;
  std::vector<std::vector<int>> downset;
  for (const auto& [alpha, value] : scaled) {
    std::vector<int> beta(dim, 0);
    while (true) {
      if (!column_of.contains(beta)) {
        column_of.emplace(beta, 0);
      }
      int k = 0;
      for (; k < dim; ++k) {
        if (beta[k] < alpha[k]) {
          ++beta[k];
          break;
        }
        beta[k] = 0;
      }
      if (k == dim) break;
    }
  }
  std::size_t next = 0;
  for (auto& [gamma, index] : column_of) {
    index = next++;
    downset.push_back(gamma);
  }

  EchelonBasis basis;
  std::vector<int> sum(dim);
  for (const auto& beta : downset) {
    SparseRow row;
    for (const auto& [alpha, value] : scaled) {
      bool dominates = true;
      for (int k = 0; k < dim; ++k) {
        sum[k] = alpha[k] - beta[k];
        if (sum[k] < 0) {
          dominates = false;
          break;
        }
      }
      if (!dominates) continue;
      row.emplace(column_of.at(sum), value);
    }
    basis.insert(std::move(row));
  }
  return basis.rank();
}

}  // namespace

ExpPolynomial::ExpPolynomial(int dim, std::vector<ExpTerm> terms)
    : dim_(dim), terms_(std::move(terms)) {
  if (dim_ < 1) throw InvalidArgument("dimension must be positive");
  if (static_cast<int>(terms_.size()) > kMaxTerms) {
    throw InvalidArgument("term count " + std::to_string(terms_.size()) +
                          " exceeds " + std::to_string(kMaxTerms));
  }
  for (const auto& t : terms_) validate_term(t, dim_);
}

Complex ExpPolynomial::operator()(const Point& x) const { return evaluate(*this, x); }

Complex evaluate(const ExpPolynomial& p, const Point& x) {
  if (x.size() != p.dim()) throw DimensionMismatch(p.dim(), static_cast<int>(x.size()));
  Complex total = 0.0;
  for (const auto& t : p.terms()) {
    Complex exponent = 0.0;
    double monomial = 1.0;
    for (int k = 0; k < p.dim(); ++k) {
      exponent += t.lambda[k] * x(k);
      for (int r = 0; r < t.alpha[k]; ++r) monomial *= x(k);
    }
    total += t.coeff * monomial * std::exp(exponent);
  }
  return total;
}

ExpPolynomial canonicalize(const ExpPolynomial& p) {
  std::vector<ExpTerm> sorted = p.terms();
  std::stable_sort(sorted.begin(), sorted.end(), term_key_less);
  std::vector<ExpTerm> merged;
  for (auto& t : sorted) {
    if (!merged.empty() && same_key(merged.back(), t)) {
      merged.back().coeff += t.coeff;
    } else {
      merged.push_back(std::move(t));
    }
  }
  std::erase_if(merged, [](const ExpTerm& t) { return t.coeff == Complex(0.0, 0.0); });
  return ExpPolynomial(p.dim(), std::move(merged));
}

int translate_span_dim(const ExpPolynomial& p) {
  const ExpPolynomial canon = canonicalize(p);
  int total = 0;
  const auto& terms = canon.terms();
  std::size_t i = 0;
  while (i < terms.size()) {
    std::vector<const ExpTerm*> group;
    std::size_t j = i;
    while (j < terms.size() && terms[j].lambda == terms[i].lambda) {
      group.push_back(&terms[j]);
      ++j;
    }
    total += derivative_family_rank(group, canon.dim());
    i = j;
  }
  return total;
}

nlohmann::json exp_polynomial_to_json(const ExpPolynomial& p) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : p.terms()) {
    nlohmann::json lambda = nlohmann::json::array();
    for (const auto& l : t.lambda) lambda.push_back({l.real(), l.imag()});
    terms.push_back({{"coeff", {t.coeff.real(), t.coeff.imag()}},
                     {"alpha", t.alpha},
                     {"lambda", std::move(lambda)}});
  }
  return {{"dim", p.dim()}, {"terms", std::move(terms)}};
}

ExpPolynomial exp_polynomial_from_json(const nlohmann::json& j) {
  try {
    const int dim = j.at("dim").get<int>();
    std::vector<ExpTerm> terms;
    for (const auto& jt : j.at("terms")) {
      ExpTerm t;
      const auto& c = jt.at("coeff");
      t.coeff = {c.at(0).get<double>(), c.at(1).get<double>()};
      t.alpha = jt.at("alpha").get<std::vector<int>>();
      for (const auto& l : jt.at("lambda")) {
        t.lambda.emplace_back(l.at(0).get<double>(), l.at(1).get<double>());
      }
      terms.push_back(std::move(t));
    }
    return ExpPolynomial(dim, std::move(terms));
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed ExpPolynomial document: ") + e.what());
  }
}

}  // namespace expoly
