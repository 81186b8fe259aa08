#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "kbott/error.hpp"
#include "kbott/integer.hpp"
#include "kbott/laurent.hpp"
#include "kbott/linalg.hpp"
#include "kbott/presentation.hpp"
#include "kbott/tower.hpp"

namespace kbott {

// Hard cap on the additive rank the dense engine will materialize. Towers
// beyond this are rejected with a clear error instead of exhausting memory.
inline constexpr std::size_t kMaxBasisSize = std::size_t(1) << 20;

// A residue class in the quotient ring, written in coordinates on the
// canonical monomial basis. Zero coordinates are never stored.
class QuotientElement {
 public:
  using CoordMap = std::map<ExponentVector, Int>;

  QuotientElement() = default;

  static QuotientElement one() {
    QuotientElement q;
    q.coords_[ExponentVector()] = 1;
    return q;
  }

  bool is_zero() const { return coords_.empty(); }
  const CoordMap& coords() const { return coords_; }

  Int coord(const ExponentVector& e) const {
    auto it = coords_.find(e);
    return it == coords_.end() ? Int(0) : it->second;
  }

  void add_coord(const ExponentVector& e, const Int& c) {
    if (c == 0) return;
    Int& slot = coords_[e];
    slot += c;
    if (slot == 0) coords_.erase(e);
  }

  void add_scaled(const QuotientElement& other, const Int& scale) {
    if (scale == 0) return;
    for (const auto& [e, c] : other.coords_) add_coord(e, c * scale);
  }

  QuotientElement& operator+=(const QuotientElement& other) {
    for (const auto& [e, c] : other.coords_) add_coord(e, c);
    return *this;
  }
  QuotientElement& operator-=(const QuotientElement& other) {
    for (const auto& [e, c] : other.coords_) add_coord(e, -c);
    return *this;
  }
  QuotientElement operator+(const QuotientElement& other) const {
    QuotientElement out = *this;
    out += other;
    return out;
  }
  QuotientElement operator-(const QuotientElement& other) const {
    QuotientElement out = *this;
    out -= other;
    return out;
  }
  QuotientElement operator-() const {
    QuotientElement out;
    for (const auto& [e, c] : coords_) out.coords_[e] = -c;
    return out;
  }

  // Lifts the class back to the ambient Laurent ring as the canonical
  // representative supported on basis monomials.
  LaurentPolynomial to_polynomial() const {
    LaurentPolynomial out;
    for (const auto& [e, c] : coords_) out.add_term(e, c);
    return out;
  }

  bool operator==(const QuotientElement&) const = default;

 private:
  CoordMap coords_;
};

// A monic polynomial in one formal variable t attached to variable
// y[stage,k], with coefficients that are residue classes. coeffs[i] is the
// degree-i coefficient; the leading coefficient is always the class of 1.
struct FiberPolynomial {
  int stage = 0;
  int k = 0;
  std::vector<QuotientElement> coeffs;

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
};

// The chain for one stage j: entry k-1 is the polynomial of degree
// n_j + 2 - k annihilating y[j,k], obtained by successive synthetic
// division. The last entry is linear and eliminates y[j,n_j+1].
using FiberChain = std::vector<FiberPolynomial>;

// Dense model of the quotient ring. Construction validates the tower,
// enumerates the monomial basis
//   { prod y[j,k]^{a_{j,k}} : 0 <= a_{j,k} <= n_j + 1 - k }
// in ascending lexicographic order of the exponent tuple, and builds the
// fiber polynomial chains stage by stage. After construction the object is
// logically immutable; reduction memos are internal caches guarded by a
// mutex, so concurrent use from several threads is safe.
class QuotientRing {
 public:
  explicit QuotientRing(TowerSpec spec) : spec_(std::move(spec)) {
    validate_tower(spec_);
    vars_ = spec_.variables();
    if (rank(spec_) > Int(kMaxBasisSize))
      throw_validation("quotient basis would exceed " +
                       std::to_string(kMaxBasisSize) +
                       " monomials; tower too large for the dense engine");
    ExponentVector scratch;
    enumerate_basis(0, scratch);
    for (std::size_t i = 0; i < basis_.size(); ++i) basis_index_[basis_[i]] = i;
    build_chains();
  }

  const TowerSpec& spec() const { return spec_; }
  const std::vector<ExponentVector>& basis() const { return basis_; }

  std::size_t basis_index(const ExponentVector& e) const {
    auto it = basis_index_.find(e);
    if (it == basis_index_.end())
      throw_internal("basis_index: monomial not on the basis");
    return it->second;
  }

  // Additive rank of the quotient: the product of (n_j + 1)! over stages.
  static Int rank(const TowerSpec& spec) {
    Int out = 1;
    for (int j = 1; j <= spec.stages(); ++j) out *= factorial(spec.n(j) + 1);
    return out;
  }

  const FiberChain& chain(int j) const {
    if (j < 1 || j > spec_.stages())
      throw_validation("chain: stage " + std::to_string(j) + " out of range");
    return chains_[static_cast<std::size_t>(j) - 1];
  }

  // Normal form of an arbitrary Laurent polynomial. Negative powers go
  // through the cached generator inverses; everything else is rewritten by
  // the chain rules, highest stage first.
  QuotientElement reduce(const LaurentPolynomial& p) const {
    QuotientElement out;
    for (const auto& [e, c] : p.terms())
      out.add_scaled(reduce_signed_monomial(e), c);
    return out;
  }

  // Product of two residue classes.
  QuotientElement multiply_elements(const QuotientElement& a,
                                    const QuotientElement& b) const {
    QuotientElement out;
    for (const auto& [ea, ca] : a.coords())
      for (const auto& [eb, cb] : b.coords())
        out.add_scaled(reduce_monomial(ea * eb), ca * cb);
    return out;
  }

  // The class of y[v]^{-1}. Computed once per generator by solving the
  // multiplication matrix against the class of 1 over the stages <= v.j,
  // then cached. The solution is integral because multiplication by a
  // generator is unimodular on the basis.
  QuotientElement invert_generator(VarId v) const {
    check_variable(v);
    {
      std::lock_guard<std::mutex> lock(mutex_);
      auto it = inverse_cache_.find(v);
      if (it != inverse_cache_.end()) return it->second;
    }
    QuotientElement inv = compute_inverse(v);
    std::lock_guard<std::mutex> lock(mutex_);
    return inverse_cache_.emplace(v, std::move(inv)).first->second;
  }

  // Matrix of multiplication by y[v] on the basis: column b holds the
  // coordinates of y[v] * basis[b].
  std::vector<std::vector<Int>> mult_matrix(VarId v) const {
    check_variable(v);
    const std::size_t n = basis_.size();
    std::vector<std::vector<Int>> out(n, std::vector<Int>(n, 0));
    for (std::size_t b = 0; b < n; ++b) {
      QuotientElement col =
          reduce_monomial(basis_[b] * ExponentVector::variable(v));
      for (const auto& [e, c] : col.coords()) out[basis_index(e)][b] = c;
    }
    return out;
  }

 private:
  int bound(VarId v) const { return spec_.n(v.j) + 1 - v.k; }

  void check_variable(VarId v) const {
    if (v.j < 1 || v.j > spec_.stages() || v.k < 1 || v.k > spec_.n(v.j) + 1)
      throw_validation("variable " + v.expr_name() + " out of range");
  }

  void enumerate_basis(std::size_t idx, ExponentVector& cur) {
    if (idx == vars_.size()) {
      basis_.push_back(cur);
      return;
    }
    const VarId v = vars_[idx];
    for (int e = 0; e <= bound(v); ++e) {
      cur.set_exponent(v, e);
      enumerate_basis(idx + 1, cur);
    }
    cur.set_exponent(v, 0);
  }

  // Multiplies a reduced class by the single variable y[v] (exponent
  // shift), re-reducing the shifted monomials.
  QuotientElement shift_by_variable(const QuotientElement& q, VarId v) const {
    QuotientElement out;
    const ExponentVector step = ExponentVector::variable(v);
    for (const auto& [e, c] : q.coords())
      out.add_scaled(reduce_monomial(e * step), c);
    return out;
  }

  void build_chains() {
    for (int j = 1; j <= spec_.stages(); ++j) {
      const int top = spec_.n(j) + 1;
      FiberChain chain;

      // p_{j,1}(t) = t^{n_j+1} - lambda_1 t^{n_j} + ... +- lambda_{n_j+1},
      // the characteristic polynomial every stage-j generator satisfies.
      FiberPolynomial p;
      p.stage = j;
      p.k = 1;
      p.coeffs.assign(static_cast<std::size_t>(top) + 1, QuotientElement());
      p.coeffs[static_cast<std::size_t>(top)] = QuotientElement::one();
      for (int r = 1; r <= top; ++r) {
        QuotientElement c = reduce(lambda_class(spec_, j, r));
        if (r % 2 == 1) c = -c;
        p.coeffs[static_cast<std::size_t>(top - r)] = std::move(c);
      }
      chain.push_back(std::move(p));
      chains_scratch_store(j, chain);

      // Each further p_{j,k+1} is the synthetic quotient of p_{j,k} by
      // (t - y[j,k]). The division remainder is p_{j,k}(y[j,k]), which must
      // vanish in the quotient; that is asserted as a soundness check.
      for (int k = 1; k <= spec_.n(j); ++k) {
        const FiberPolynomial& prev = chain.back();
        const int d = prev.degree();
        FiberPolynomial next;
        next.stage = j;
        next.k = k + 1;
        next.coeffs.assign(static_cast<std::size_t>(d), QuotientElement());
        next.coeffs[static_cast<std::size_t>(d) - 1] = QuotientElement::one();
        const VarId v{j, k};
        for (int i = d - 1; i >= 1; --i) {
          QuotientElement b = prev.coeffs[static_cast<std::size_t>(i)] +
                              shift_by_variable(
                                  next.coeffs[static_cast<std::size_t>(i)], v);
          next.coeffs[static_cast<std::size_t>(i) - 1] = std::move(b);
        }
        QuotientElement remainder =
            prev.coeffs[0] + shift_by_variable(next.coeffs[0], v);
        if (!remainder.is_zero())
          throw_internal("fiber chain division left a nonzero remainder at "
                         "stage " + std::to_string(j) + ", step " +
                         std::to_string(k));
        chain.push_back(std::move(next));
        chains_scratch_store(j, chain);
      }

      if (chain.back().degree() != 1)
        throw_internal("fiber chain for stage " + std::to_string(j) +
                       " did not terminate in a linear polynomial");
    }
  }

  // The chain vector for stage j grows while it is being built; rewriting
  // rules become visible to reduce_monomial as soon as they exist.
  void chains_scratch_store(int j, const FiberChain& chain) {
    if (static_cast<int>(chains_.size()) < j) chains_.resize(static_cast<std::size_t>(j));
    chains_[static_cast<std::size_t>(j) - 1] = chain;
  }

  const FiberPolynomial* rule_for(VarId v) const {
    if (v.j < 1 || v.j > static_cast<int>(chains_.size())) return nullptr;
    const FiberChain& chain = chains_[static_cast<std::size_t>(v.j) - 1];
    if (v.k < 1 || v.k > static_cast<int>(chain.size())) return nullptr;
    return &chain[static_cast<std::size_t>(v.k) - 1];
  }

  // Normal form of a monomial with nonnegative exponents. Rewrites the
  // highest out-of-bound stage first; within a stage the last variable is
  // eliminated by its linear rule before larger powers are expanded.
  QuotientElement reduce_monomial(const ExponentVector& m) const {
    {
      std::lock_guard<std::mutex> lock(mutex_);
      auto it = monomial_memo_.find(m);
      if (it != monomial_memo_.end()) return it->second;
    }

    VarId violating{0, 0};
    std::int64_t excess_exp = 0;
    for (int j = spec_.stages(); j >= 1 && violating.j == 0; --j) {
      for (int k = spec_.n(j) + 1; k >= 1; --k) {
        const std::int64_t e = m.exponent(VarId{j, k});
        if (e < 0)
          throw_internal("reduce_monomial: negative exponent on " +
                         VarId{j, k}.expr_name());
        if (e > bound(VarId{j, k})) {
          violating = VarId{j, k};
          excess_exp = e;
          break;
        }
      }
    }

    QuotientElement result;
    if (violating.j == 0) {
      result.add_coord(m, 1);
    } else {
      const FiberPolynomial* rule = rule_for(violating);
      if (rule == nullptr)
        throw_internal("reduce_monomial: no rewriting rule for " +
                       violating.expr_name());
      const int d = rule->degree();
      // y^e = y^{e-d} * y^d and y^d = -(c_{d-1} y^{d-1} + ... + c_0).
      ExponentVector rest = m;
      rest.set_exponent(violating, 0);
      for (int i = 0; i < d; ++i) {
        const QuotientElement& ci = rule->coeffs[static_cast<std::size_t>(i)];
        if (ci.is_zero()) continue;
        const ExponentVector shift =
            rest * ExponentVector::variable(violating, excess_exp - d + i);
        for (const auto& [bm, c] : ci.coords())
          result.add_scaled(reduce_monomial(bm * shift), -c);
      }
    }

    std::lock_guard<std::mutex> lock(mutex_);
    return monomial_memo_.emplace(m, std::move(result)).first->second;
  }

  // Normal form of a monomial that may carry negative exponents: the
  // nonnegative part is rewritten directly, each negative power goes
  // through the cached inverse classes.
  QuotientElement reduce_signed_monomial(const ExponentVector& m) const {
    if (!m.has_negative()) return reduce_monomial(m);
    {
      std::lock_guard<std::mutex> lock(mutex_);
      auto it = signed_memo_.find(m);
      if (it != signed_memo_.end()) return it->second;
    }

    ExponentVector positive;
    std::vector<std::pair<VarId, std::int64_t>> negative;
    for (const auto& [v, e] : m.entries()) {
      if (e > 0)
        positive.set_exponent(v, e);
      else
        negative.emplace_back(v, -e);
    }
    QuotientElement acc = reduce_monomial(positive);
    for (const auto& [v, p] : negative)
      acc = multiply_elements(acc, inverse_power(v, p));

    std::lock_guard<std::mutex> lock(mutex_);
    return signed_memo_.emplace(m, std::move(acc)).first->second;
  }

  QuotientElement inverse_power(VarId v, std::int64_t p) const {
    {
      std::lock_guard<std::mutex> lock(mutex_);
      auto it = inverse_power_cache_.find({v, p});
      if (it != inverse_power_cache_.end()) return it->second;
    }
    QuotientElement base = invert_generator(v);
    QuotientElement acc = QuotientElement::one();
    std::uint64_t n = static_cast<std::uint64_t>(p);
    while (n != 0) {
      if (n & 1u) acc = multiply_elements(acc, base);
      if (n >>= 1u) base = multiply_elements(base, base);
    }
    std::lock_guard<std::mutex> lock(mutex_);
    return inverse_power_cache_.emplace(std::make_pair(v, p), std::move(acc))
        .first->second;
  }

  QuotientElement compute_inverse(VarId v) const {
    // Work over the sub-basis spanned by stages <= v.j; multiplication by
    // y[v] is closed on it and every rewriting rule it needs exists even
    // while later stages are still under construction.
    std::vector<ExponentVector> pbasis;
    std::map<ExponentVector, std::size_t> pindex;
    for (const ExponentVector& e : basis_) {
      bool ok = true;
      for (const auto& [var, exp] : e.entries())
        if (var.j > v.j) {
          ok = false;
          break;
        }
      if (ok) {
        pindex[e] = pbasis.size();
        pbasis.push_back(e);
      }
    }
    if (pbasis.empty() || !pbasis.front().is_one())
      throw_internal("compute_inverse: prefix basis malformed");

    const std::size_t n = pbasis.size();
    std::vector<std::vector<Int>> mat(n, std::vector<Int>(n, 0));
    const ExponentVector step = ExponentVector::variable(v);
    for (std::size_t b = 0; b < n; ++b) {
      QuotientElement col = reduce_monomial(pbasis[b] * step);
      for (const auto& [e, c] : col.coords()) {
        auto it = pindex.find(e);
        if (it == pindex.end())
          throw_internal("compute_inverse: reduction left the sub-basis");
        mat[it->second][b] = c;
      }
    }

    std::vector<Int> rhs(n, 0);
    rhs[0] = 1;  // coordinates of the class of 1
    auto solution = solve_rational(mat, rhs);
    if (!solution)
      throw_internal("compute_inverse: multiplication by " + v.expr_name() +
                     " is singular");
    QuotientElement inv;
    for (std::size_t i = 0; i < n; ++i) {
      const Rat& x = (*solution)[i];
      if (boost::multiprecision::denominator(x) != 1)
        throw_internal("compute_inverse: non-integral inverse coordinates");
      inv.add_coord(pbasis[i], Int(boost::multiprecision::numerator(x)));
    }
    return inv;
  }

  TowerSpec spec_;
  std::vector<VarId> vars_;
  std::vector<ExponentVector> basis_;
  std::map<ExponentVector, std::size_t> basis_index_;
  std::vector<FiberChain> chains_;

  mutable std::mutex mutex_;
  mutable std::map<ExponentVector, QuotientElement> monomial_memo_;
  mutable std::map<ExponentVector, QuotientElement> signed_memo_;
  mutable std::map<VarId, QuotientElement> inverse_cache_;
  mutable std::map<std::pair<VarId, std::int64_t>, QuotientElement>
      inverse_power_cache_;
};

// Convenience wrapper matching the one-shot call pattern: builds the engine
// for the spec and returns the chain for stage j.
inline FiberChain build_chain(const TowerSpec& spec, int j) {
  return QuotientRing(spec).chain(j);
}

}  // namespace kbott
