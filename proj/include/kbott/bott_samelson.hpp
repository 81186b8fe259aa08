#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "kbott/error.hpp"
#include "kbott/laurent.hpp"
#include "kbott/presentation.hpp"
#include "kbott/quotient.hpp"
#include "kbott/tower.hpp"

namespace kbott {

// A generalized Cartan matrix: square, 2 on the diagonal, nonpositive off
// the diagonal, with a symmetric zero pattern. entry(i, q) is the pairing
// of simple root alpha_i against coroot alpha_q^vee (both 1-based).
struct CartanSpec {
  int rank = 0;
  std::vector<std::vector<std::int64_t>> entries;

  std::int64_t c(int i, int q) const {
    return entries[static_cast<std::size_t>(i) - 1]
                  [static_cast<std::size_t>(q) - 1];
  }

  bool operator==(const CartanSpec&) const = default;
};

inline void validate_cartan(const CartanSpec& cartan) {
  if (cartan.rank < 1) throw_validation("Cartan matrix: rank must be >= 1");
  if (static_cast<int>(cartan.entries.size()) != cartan.rank)
    throw_validation("Cartan matrix: expected " + std::to_string(cartan.rank) +
                     " rows, got " + std::to_string(cartan.entries.size()));
  for (int i = 1; i <= cartan.rank; ++i) {
    const auto& row = cartan.entries[static_cast<std::size_t>(i) - 1];
    if (static_cast<int>(row.size()) != cartan.rank)
      throw_validation("Cartan matrix: row " + std::to_string(i) +
                       " has length " + std::to_string(row.size()) +
                       ", expected " + std::to_string(cartan.rank));
    for (int q = 1; q <= cartan.rank; ++q) {
      const std::int64_t v = cartan.c(i, q);
      if (v > kMaxMatrixEntry || v < -kMaxMatrixEntry)
        throw_validation("Cartan matrix: entry magnitude exceeds 2^31");
      if (i == q && v != 2)
        throw_validation("Cartan matrix: diagonal entry (" +
                         std::to_string(i) + "," + std::to_string(q) +
                         ") must be 2, got " + std::to_string(v));
      if (i != q && v > 0)
        throw_validation("Cartan matrix: off-diagonal entry (" +
                         std::to_string(i) + "," + std::to_string(q) +
                         ") must be <= 0, got " + std::to_string(v));
    }
  }
  for (int i = 1; i <= cartan.rank; ++i)
    for (int q = i + 1; q <= cartan.rank; ++q)
      if ((cartan.c(i, q) == 0) != (cartan.c(q, i) == 0))
        throw_validation("Cartan matrix: zero pattern not symmetric at (" +
                         std::to_string(i) + "," + std::to_string(q) + ")");
}

// Per-stage index rows u_{k,1..n_k} into the simple roots. Stage k of the
// derived tower fibers the flag of the rank-(n_k + 1) bundle built from
// these indices.
struct SubsetSequence {
  std::vector<std::vector<int>> rows;

  int stages() const { return static_cast<int>(rows.size()); }
  int n(int k) const {
    return static_cast<int>(rows[static_cast<std::size_t>(k) - 1].size());
  }
  int u(int k, int s) const {
    return rows[static_cast<std::size_t>(k) - 1][static_cast<std::size_t>(s) - 1];
  }
};

inline SubsetSequence singleton_sequence(const std::vector<int>& word) {
  SubsetSequence seq;
  for (int i : word) seq.rows.push_back({i});
  return seq;
}

// Each row must name simple roots that form a path: adjacent positions pair
// to -1, non-adjacent positions pair to 0, and repeats inside a row are
// impossible (they would pair to 2).
inline void validate_enumeration(const CartanSpec& cartan,
                                 const SubsetSequence& seq) {
  validate_cartan(cartan);
  if (seq.stages() < 1)
    throw_validation("index sequence must have at least one stage");
  for (int k = 1; k <= seq.stages(); ++k) {
    if (seq.n(k) < 1)
      throw_validation("stage " + std::to_string(k) + ": empty index row");
    for (int s = 1; s <= seq.n(k); ++s) {
      const int us = seq.u(k, s);
      if (us < 1 || us > cartan.rank)
        throw_validation("stage " + std::to_string(k) + ", position " +
                         std::to_string(s) + ": index " + std::to_string(us) +
                         " outside 1.." + std::to_string(cartan.rank));
    }
    for (int s = 1; s <= seq.n(k); ++s)
      for (int t = 1; t <= seq.n(k); ++t) {
        const std::int64_t have = cartan.c(seq.u(k, s), seq.u(k, t));
        const std::int64_t want = (s == t) ? 2 : (std::abs(s - t) == 1 ? -1 : 0);
        if (have != want)
          throw_validation(
              "stage " + std::to_string(k) + ": indices at positions " +
              std::to_string(s) + " and " + std::to_string(t) +
              " pair to " + std::to_string(have) + ", need " +
              std::to_string(want));
      }
  }
}

// Twist matrices of the tower attached to (cartan, seq). For l < j the
// (p, q) entry is the pairing of the suffix root sum of row j from
// position p against the suffix coroot sum of row l from position q; the
// last row and column are zero.
inline TowerSpec q_matrices(const CartanSpec& cartan,
                            const SubsetSequence& seq) {
  validate_enumeration(cartan, seq);
  TowerSpec spec;
  for (int k = 1; k <= seq.stages(); ++k) spec.dims.push_back(seq.n(k));
  for (int j = 2; j <= seq.stages(); ++j)
    for (int l = 1; l < j; ++l) {
      PMatrix q = PMatrix::zero(seq.n(j) + 1, seq.n(l) + 1);
      for (int p = 1; p <= seq.n(j); ++p)
        for (int qq = 1; qq <= seq.n(l); ++qq) {
          std::int64_t sum = 0;
          for (int pp = p; pp <= seq.n(j); ++pp)
            for (int tt = qq; tt <= seq.n(l); ++tt)
              sum += cartan.c(seq.u(j, pp), seq.u(l, tt));
          q.at(p, qq) = sum;
        }
      spec.matrices[{l, j}] = std::move(q);
    }
  validate_tower(spec);
  return spec;
}

// Weights are integer vectors in the simple-root basis. The pairing of
// sum_i c_i alpha_i against alpha_q^vee is sum_i c_i * C(i, q).
using WeightVector = std::vector<std::int64_t>;

// Twist vector of the line bundle cut out by one weight per stage:
// component a_k(l) pairs the suffix weight sum chi_k + ... + chi_r against
// the suffix coroot sum of row k from position l; a_k(n_k + 1) = 0.
inline LineBundleVector weights_to_line_bundle_vector(
    const CartanSpec& cartan, const SubsetSequence& seq,
    const std::vector<WeightVector>& weights) {
  validate_enumeration(cartan, seq);
  const int r = seq.stages();
  if (static_cast<int>(weights.size()) != r)
    throw_validation("expected " + std::to_string(r) + " weights, got " +
                     std::to_string(weights.size()));
  for (const WeightVector& w : weights)
    if (static_cast<int>(w.size()) != cartan.rank)
      throw_validation("weight vectors must have length " +
                       std::to_string(cartan.rank));

  LineBundleVector out;
  out.stage = r;
  std::vector<std::int64_t> suffix(static_cast<std::size_t>(cartan.rank), 0);
  std::vector<std::vector<std::int64_t>> components(
      static_cast<std::size_t>(r));
  for (int k = r; k >= 1; --k) {
    for (int i = 0; i < cartan.rank; ++i)
      suffix[static_cast<std::size_t>(i)] +=
          weights[static_cast<std::size_t>(k) - 1][static_cast<std::size_t>(i)];
    std::vector<std::int64_t> a(static_cast<std::size_t>(seq.n(k)) + 1, 0);
    for (int l = 1; l <= seq.n(k); ++l) {
      std::int64_t value = 0;
      for (int i = 1; i <= cartan.rank; ++i) {
        if (suffix[static_cast<std::size_t>(i) - 1] == 0) continue;
        std::int64_t pair = 0;
        for (int lp = l; lp <= seq.n(k); ++lp) pair += cartan.c(i, seq.u(k, lp));
        value += suffix[static_cast<std::size_t>(i) - 1] * pair;
      }
      a[static_cast<std::size_t>(l) - 1] = value;
    }
    components[static_cast<std::size_t>(k) - 1] = std::move(a);
  }
  out.components = std::move(components);
  return out;
}

// Difference-of-fundamental-weights label carried by slot `slot` of stage
// `stage`: +w[plus] - w[minus], either side possibly absent.
struct WeightLabel {
  int stage = 0;
  int slot = 0;
  std::optional<int> plus;
  std::optional<int> minus;

  std::string to_string() const {
    std::string out;
    if (plus) out += "w[" + std::to_string(*plus) + "]";
    if (minus) out += (out.empty() ? "-w[" : "-w[") + std::to_string(*minus) + "]";
    if (!plus && !minus) out = "0";
    return out;
  }

  bool operator==(const WeightLabel&) const = default;
};

// Labels of the stage-j tautological slots: w[u_{j,1}], then successive
// differences w[u_{j,l}] - w[u_{j,l-1}], ending with -w[u_{j,n_j}].
inline std::vector<WeightLabel> weight_labels(const CartanSpec& cartan,
                                              const SubsetSequence& seq,
                                              int j) {
  validate_enumeration(cartan, seq);
  if (j < 1 || j > seq.stages())
    throw_validation("weight_labels: stage " + std::to_string(j) +
                     " out of range");
  std::vector<WeightLabel> out;
  for (int l = 1; l <= seq.n(j) + 1; ++l) {
    WeightLabel label;
    label.stage = j;
    label.slot = l;
    if (l <= seq.n(j)) label.plus = seq.u(j, l);
    if (l >= 2) label.minus = seq.u(j, l - 1);
    out.push_back(label);
  }
  return out;
}

namespace detail {

// Exponent monomial prod_{l<j} y[l,1]^{C(u_j, u_l)}: the twist class that
// the stage-j quadratic pairs against.
inline ExponentVector bs_twist_monomial(const CartanSpec& cartan,
                                        const std::vector<int>& word, int j) {
  ExponentVector m;
  for (int l = 1; l < j; ++l)
    m.set_exponent(VarId{l, 1},
                   cartan.c(word[static_cast<std::size_t>(j) - 1],
                            word[static_cast<std::size_t>(l) - 1]));
  return m;
}

}  // namespace detail

// One-relation-per-stage form of the tower attached to a singleton word:
// stage j contributes (y[j,1] - 1) * (y[j,1] - prod_{l<j} y[l,1]^{c_jl}).
// Variables are the y[j,1] only; the second slot of every stage has been
// eliminated.
inline Presentation bs_simplified_presentation(const CartanSpec& cartan,
                                               const std::vector<int>& word) {
  const SubsetSequence seq = singleton_sequence(word);
  TowerSpec spec = q_matrices(cartan, seq);
  Presentation out;
  out.spec = std::move(spec);
  const int r = static_cast<int>(word.size());
  for (int j = 1; j <= r; ++j) out.variables.push_back(VarId{j, 1});
  for (int j = 1; j <= r; ++j) {
    const LaurentPolynomial y = LaurentPolynomial::variable(VarId{j, 1});
    const LaurentPolynomial twist = LaurentPolynomial::monomial(
        detail::bs_twist_monomial(cartan, word, j));
    Relation rel;
    rel.stage = j;
    rel.r = 1;
    rel.poly = (y - LaurentPolynomial(1)) * (y - twist);
    out.relations.push_back(std::move(rel));
  }
  return out;
}

// Dedicated reduction engine for the simplified form: basis exponents are 0
// or 1 per stage (rank 2^r). The quadratic rule rewrites y^2 as
// (1 + M) y - M, and negative powers rewrite through y^{-1} =
// M^{-1} + 1 - M^{-1} y, where M is the stage's twist monomial.
class BsQuotient {
 public:
  BsQuotient(const CartanSpec& cartan, const std::vector<int>& word)
      : cartan_(cartan), word_(word) {
    validate_enumeration(cartan_, singleton_sequence(word_));
    for (int j = 1; j <= stages(); ++j)
      twists_.push_back(detail::bs_twist_monomial(cartan_, word_, j));
    ExponentVector scratch;
    enumerate_basis(1, scratch);
  }

  int stages() const { return static_cast<int>(word_.size()); }
  const std::vector<ExponentVector>& basis() const { return basis_; }
  Int rank() const { return int_pow(2, static_cast<std::uint64_t>(stages())); }

  QuotientElement reduce(const LaurentPolynomial& p) const {
    QuotientElement out;
    for (const auto& [e, c] : p.terms()) out.add_scaled(reduce_monomial(e), c);
    return out;
  }

 private:
  void enumerate_basis(int j, ExponentVector& cur) {
    if (j > stages()) {
      basis_.push_back(cur);
      return;
    }
    for (int e = 0; e <= 1; ++e) {
      cur.set_exponent(VarId{j, 1}, e);
      enumerate_basis(j + 1, cur);
    }
    cur.set_exponent(VarId{j, 1}, 0);
  }

  QuotientElement reduce_monomial(const ExponentVector& m) const {
    {
      std::lock_guard<std::mutex> lock(mutex_);
      auto it = memo_.find(m);
      if (it != memo_.end()) return it->second;
    }

    int violating = 0;
    std::int64_t exp = 0;
    for (int j = stages(); j >= 1; --j) {
      const std::int64_t e = m.exponent(VarId{j, 1});
      if (e < 0 || e > 1) {
        violating = j;
        exp = e;
        break;
      }
    }

    QuotientElement result;
    if (violating == 0) {
      result.add_coord(m, 1);
    } else {
      const VarId v{violating, 1};
      const ExponentVector& twist =
          twists_[static_cast<std::size_t>(violating) - 1];
      LaurentPolynomial rewritten;
      ExponentVector rest = m;
      rest.set_exponent(v, 0);
      const LaurentPolynomial rest_poly =
          LaurentPolynomial::monomial(rest);
      if (exp >= 2) {
        // y^e = y^{e-2} ((1 + M) y - M)
        LaurentPolynomial head =
            LaurentPolynomial::variable(v, exp - 1) +
            LaurentPolynomial::monomial(twist * ExponentVector::variable(v, exp - 1)) -
            LaurentPolynomial::monomial(twist * ExponentVector::variable(v, exp - 2));
        rewritten = head * rest_poly;
      } else {
        // y^e = y^{e+1} (M^{-1} + 1 - M^{-1} y)
        const ExponentVector inv_twist = twist.inverse();
        LaurentPolynomial head =
            LaurentPolynomial::monomial(inv_twist * ExponentVector::variable(v, exp + 1)) +
            LaurentPolynomial::variable(v, exp + 1) -
            LaurentPolynomial::monomial(inv_twist * ExponentVector::variable(v, exp + 2));
        rewritten = head * rest_poly;
      }
      for (const auto& [e, c] : rewritten.terms())
        result.add_scaled(reduce_monomial(e), c);
    }

    std::lock_guard<std::mutex> lock(mutex_);
    return memo_.emplace(m, std::move(result)).first->second;
  }

  CartanSpec cartan_;
  std::vector<int> word_;
  std::vector<ExponentVector> twists_;
  std::vector<ExponentVector> basis_;
  mutable std::mutex mutex_;
  mutable std::map<ExponentVector, QuotientElement> memo_;
};

// Substitution eliminating the second slot of every stage of a singleton
// tower: y[j,2] -> y[j,1]^{-1} * prod_{l<j} y[l,1]^{c_jl}.
inline LaurentPolynomial eliminate_second_slots(const CartanSpec& cartan,
                                                const std::vector<int>& word,
                                                LaurentPolynomial p) {
  for (int j = 1; j <= static_cast<int>(word.size()); ++j) {
    ExponentVector image = detail::bs_twist_monomial(cartan, word, j);
    image.set_exponent(VarId{j, 1}, image.exponent(VarId{j, 1}) - 1);
    p = p.substitute(VarId{j, 2}, image);
  }
  return p;
}

struct BsEquivalenceReport {
  // Full relations, with second slots substituted away, vanish in the
  // dedicated simplified-form engine.
  bool full_relations_vanish_after_substitution = false;
  // Simplified relations vanish under the general tower engine.
  bool simplified_relations_vanish_in_tower = false;
  Int expected_rank;
  Int full_dimension;
  Int simplified_dimension;
  bool dimensions_match = false;
  std::uint64_t oracle_steps = 0;
  std::string detail;

  bool equivalent() const {
    return full_relations_vanish_after_substitution &&
           simplified_relations_vanish_in_tower && dimensions_match;
  }
};

// Defined in oracle.hpp (it needs the polynomial-ideal machinery):
BsEquivalenceReport check_bs_equivalence(const CartanSpec& cartan,
                                         const std::vector<int>& word,
                                         std::uint64_t budget);

}  // namespace kbott
