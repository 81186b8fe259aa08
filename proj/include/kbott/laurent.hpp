#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "kbott/error.hpp"
#include "kbott/integer.hpp"

namespace kbott {

// Identifies the generator y[j,k]: stage j of the tower, slot k within the
// stage. Both indices are 1-based everywhere (library, CLI, file formats).
struct VarId {
  int j = 0;
  int k = 0;

  auto operator<=>(const VarId&) const = default;

  // Rendering used by the expression grammar: y[2,1]
  std::string expr_name() const {
    return "y[" + std::to_string(j) + "," + std::to_string(k) + "]";
  }
  // Rendering used by JSON documents: y_2_1
  std::string json_name() const {
    return "y_" + std::to_string(j) + "_" + std::to_string(k);
  }
};

// A Laurent monomial, stored as its exponent map. Zero exponents are never
// stored, so equal monomials always compare equal. Multiplication of
// monomials adds exponents.
class ExponentVector {
 public:
  using Map = std::map<VarId, std::int64_t>;

  ExponentVector() = default;

  static ExponentVector variable(VarId v, std::int64_t e = 1) {
    ExponentVector out;
    out.set_exponent(v, e);
    return out;
  }

  std::int64_t exponent(VarId v) const {
    auto it = map_.find(v);
    return it == map_.end() ? 0 : it->second;
  }

  void set_exponent(VarId v, std::int64_t e) {
    if (e == 0)
      map_.erase(v);
    else
      map_[v] = e;
  }

  ExponentVector& operator*=(const ExponentVector& other) {
    for (const auto& [v, e] : other.map_) set_exponent(v, exponent(v) + e);
    return *this;
  }
  ExponentVector operator*(const ExponentVector& other) const {
    ExponentVector out = *this;
    out *= other;
    return out;
  }

  // Raises the monomial to an (arbitrary sign) integer power.
  ExponentVector pow(std::int64_t e) const {
    ExponentVector out;
    if (e != 0)
      for (const auto& [v, exp] : map_) out.map_[v] = exp * e;
    return out;
  }

  ExponentVector inverse() const { return pow(-1); }

  bool is_one() const { return map_.empty(); }
  bool has_negative() const {
    for (const auto& [v, e] : map_)
      if (e < 0) return true;
    return false;
  }

  const Map& entries() const { return map_; }

  bool operator==(const ExponentVector& other) const = default;
  // Ordering used for canonical term sequencing: lexicographic over the
  // underlying (variable, exponent) pairs. Any fixed total order works; this
  // one makes the constant monomial sort first.
  bool operator<(const ExponentVector& other) const { return map_ < other.map_; }

 private:
  Map map_;
};

// Integer Laurent polynomial in the y[j,k] generators. Terms live in an
// ordered map keyed by monomial, and zero coefficients are stripped as they
// appear, so representation is canonical and iteration order deterministic.
class LaurentPolynomial {
 public:
  using TermMap = std::map<ExponentVector, Int>;

  LaurentPolynomial() = default;
  LaurentPolynomial(Int constant) {
    if (constant != 0) terms_[ExponentVector()] = std::move(constant);
  }
  LaurentPolynomial(int constant) : LaurentPolynomial(Int(constant)) {}

  static LaurentPolynomial monomial(const ExponentVector& e, Int coeff = 1) {
    LaurentPolynomial out;
    if (coeff != 0) out.terms_[e] = std::move(coeff);
    return out;
  }
  static LaurentPolynomial variable(VarId v, std::int64_t e = 1) {
    return monomial(ExponentVector::variable(v, e));
  }

  bool is_zero() const { return terms_.empty(); }
  const TermMap& terms() const { return terms_; }

  Int coefficient(const ExponentVector& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Int(0) : it->second;
  }

  void add_term(const ExponentVector& e, const Int& coeff) {
    if (coeff == 0) return;
    Int& slot = terms_[e];
    slot += coeff;
    if (slot == 0) terms_.erase(e);
  }

  LaurentPolynomial& operator+=(const LaurentPolynomial& other) {
    for (const auto& [e, c] : other.terms_) add_term(e, c);
    return *this;
  }
  LaurentPolynomial& operator-=(const LaurentPolynomial& other) {
    for (const auto& [e, c] : other.terms_) add_term(e, -c);
    return *this;
  }
  LaurentPolynomial operator+(const LaurentPolynomial& other) const {
    LaurentPolynomial out = *this;
    out += other;
    return out;
  }
  LaurentPolynomial operator-(const LaurentPolynomial& other) const {
    LaurentPolynomial out = *this;
    out -= other;
    return out;
  }
  LaurentPolynomial operator-() const {
    LaurentPolynomial out;
    for (const auto& [e, c] : terms_) out.terms_[e] = -c;
    return out;
  }
  LaurentPolynomial operator*(const LaurentPolynomial& other) const {
    LaurentPolynomial out;
    for (const auto& [ea, ca] : terms_)
      for (const auto& [eb, cb] : other.terms_) out.add_term(ea * eb, ca * cb);
    return out;
  }
  LaurentPolynomial& operator*=(const LaurentPolynomial& other) {
    *this = *this * other;
    return *this;
  }

  bool operator==(const LaurentPolynomial& other) const = default;

  // True when the polynomial is invertible in the Laurent ring over the
  // integers, i.e. a single monomial with coefficient +1 or -1.
  bool is_unit_monomial() const {
    return terms_.size() == 1 &&
           (terms_.begin()->second == 1 || terms_.begin()->second == -1);
  }

  // p^e. Nonnegative e works for any polynomial (binary powering); negative
  // e requires a unit monomial.
  LaurentPolynomial pow(std::int64_t e) const {
    if (e < 0) {
      if (!is_unit_monomial())
        throw_validation(
            "negative power applied to a polynomial that is not an "
            "invertible monomial");
      const auto& [exps, coeff] = *terms_.begin();
      Int c = (coeff == 1 || e % 2 == 0) ? Int(1) : Int(-1);
      return monomial(exps.pow(e), c);
    }
    LaurentPolynomial result(1);
    LaurentPolynomial base = *this;
    std::uint64_t n = static_cast<std::uint64_t>(e);
    while (n != 0) {
      if (n & 1u) result *= base;
      base *= base;
      n >>= 1u;
    }
    return result;
  }

  // Replaces every occurrence of variable v by the given monomial (so
  // y^e substitutes to image^e; negative exponents are fine).
  LaurentPolynomial substitute(VarId v, const ExponentVector& image) const {
    LaurentPolynomial out;
    for (const auto& [e, c] : terms_) {
      const std::int64_t ev = e.exponent(v);
      if (ev == 0) {
        out.add_term(e, c);
        continue;
      }
      ExponentVector rest = e;
      rest.set_exponent(v, 0);
      out.add_term(rest * image.pow(ev), c);
    }
    return out;
  }

  // Ring homomorphism sending every generator to 1 (the augmentation): the
  // sum of all coefficients.
  Int evaluate_at_one() const {
    Int out = 0;
    for (const auto& [e, c] : terms_) out += c;
    return out;
  }

  // Canonical rendering in the expression grammar. Parsing the result gives
  // back the same polynomial.
  std::string to_expr_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [e, c] : terms_) {
      const bool negative = c < 0;
      const Int abs_coeff = negative ? Int(-c) : c;
      if (first) {
        if (negative) out += "-";
        first = false;
      } else {
        out += negative ? " - " : " + ";
      }
      std::string body;
      if (abs_coeff != 1 || e.is_one()) body = abs_coeff.str();
      for (const auto& [v, exp] : e.entries()) {
        if (!body.empty()) body += "*";
        body += v.expr_name();
        if (exp != 1) body += "^" + std::to_string(exp);
      }
      out += body;
    }
    return out;
  }

 private:
  TermMap terms_;
};

inline LaurentPolynomial add(const LaurentPolynomial& a,
                             const LaurentPolynomial& b) {
  return a + b;
}

inline LaurentPolynomial multiply(const LaurentPolynomial& a,
                                  const LaurentPolynomial& b) {
  return a * b;
}

inline Int evaluate_at_one(const LaurentPolynomial& p) {
  return p.evaluate_at_one();
}

// r-th elementary symmetric polynomial of the given items, computed by the
// standard prefix recurrence e_r(f_1..f_i) = e_r(f_1..f_{i-1}) +
// f_i * e_{r-1}(f_1..f_{i-1}). e_0 = 1; r beyond the item count gives 0.
inline LaurentPolynomial elementary_symmetric(
    const std::vector<LaurentPolynomial>& items, int r) {
  if (r < 0) throw_internal("elementary_symmetric: negative index");
  if (r > static_cast<int>(items.size())) return LaurentPolynomial();
  std::vector<LaurentPolynomial> e(static_cast<std::size_t>(r) + 1);
  e[0] = LaurentPolynomial(1);
  for (const LaurentPolynomial& item : items)
    for (int i = r; i >= 1; --i)
      e[static_cast<std::size_t>(i)] += item * e[static_cast<std::size_t>(i) - 1];
  return e[static_cast<std::size_t>(r)];
}

}  // namespace kbott
