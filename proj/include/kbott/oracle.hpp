#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "kbott/bott_samelson.hpp"
#include "kbott/error.hpp"
#include "kbott/integer.hpp"
#include "kbott/laurent.hpp"
#include "kbott/linalg.hpp"
#include "kbott/presentation.hpp"
#include "kbott/quotient.hpp"
#include "kbott/tower.hpp"

namespace kbott {

inline constexpr std::uint64_t kDefaultOracleBudget = 10'000'000;

// Dedicated polynomial machinery for the cross-check. It deliberately does
// not reuse the quotient engine's reduction: dense exponent rows, rational
// coefficients, degree-reverse-lexicographic order, Buchberger completion.
namespace gb {

using Mono = std::vector<std::int64_t>;

inline std::int64_t degree(const Mono& m) {
  std::int64_t d = 0;
  for (std::int64_t e : m) d += e;
  return d;
}

// Degree-reverse-lexicographic comparison; +1 when a is the larger
// monomial. Ties break on the rightmost differing exponent, smaller wins.
inline int cmp(const Mono& a, const Mono& b) {
  const std::int64_t da = degree(a), db = degree(b);
  if (da != db) return da < db ? -1 : 1;
  for (std::size_t i = a.size(); i-- > 0;) {
    const std::int64_t d = a[i] - b[i];
    if (d != 0) return d < 0 ? 1 : -1;
  }
  return 0;
}

struct MonoGreater {
  bool operator()(const Mono& a, const Mono& b) const { return cmp(a, b) > 0; }
};

// Terms keyed by monomial in descending order, so begin() is the leading
// term. Zero coefficients are never stored.
using Poly = std::map<Mono, Rat, MonoGreater>;

inline bool divides(const Mono& a, const Mono& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

inline Mono mono_quotient(const Mono& a, const Mono& b) {
  Mono out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

inline Mono mono_lcm(const Mono& a, const Mono& b) {
  Mono out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = std::max(a[i], b[i]);
  return out;
}

inline bool coprime(const Mono& a, const Mono& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > 0 && b[i] > 0) return false;
  return true;
}

inline void add_term(Poly& f, const Mono& m, const Rat& c) {
  if (c == 0) return;
  auto [it, fresh] = f.try_emplace(m, c);
  if (!fresh) {
    it->second += c;
    if (it->second == 0) f.erase(it);
  }
}

// f += c * x^shift * g
inline void add_scaled(Poly& f, const Poly& g, const Rat& c,
                       const Mono& shift) {
  for (const auto& [m, gc] : g) {
    Mono shifted(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) shifted[i] = m[i] + shift[i];
    add_term(f, shifted, c * gc);
  }
}

inline void make_monic(Poly& f) {
  if (f.empty()) return;
  const Rat lead = f.begin()->second;
  for (auto& [m, c] : f) c /= lead;
}

struct Budget {
  std::uint64_t limit = kDefaultOracleBudget;
  std::uint64_t used = 0;

  void charge(const char* where) {
    if (++used > limit)
      throw_budget(std::string("oracle budget of ") + std::to_string(limit) +
                   " steps exhausted during " + where);
  }
};

// Full normal form: every term of f is reduced against the basis.
inline Poly normal_form(Poly f, const std::vector<Poly>& basis,
                        Budget& budget) {
  Poly remainder;
  while (!f.empty()) {
    const auto& [lead_mono, lead_coeff] = *f.begin();
    const Poly* reducer = nullptr;
    for (const Poly& g : basis)
      if (divides(g.begin()->first, lead_mono)) {
        reducer = &g;
        break;
      }
    if (reducer == nullptr) {
      remainder.insert(*f.begin());
      f.erase(f.begin());
      continue;
    }
    budget.charge("normal form");
    const Mono shift = mono_quotient(lead_mono, reducer->begin()->first);
    const Rat scale = -lead_coeff / reducer->begin()->second;
    add_scaled(f, *reducer, scale, shift);
  }
  return remainder;
}

struct Pair {
  std::int64_t lcm_degree = 0;
  Mono lcm;
  int i = 0;
  int j = 0;

  bool operator<(const Pair& other) const {
    if (lcm_degree != other.lcm_degree) return lcm_degree < other.lcm_degree;
    const int c = cmp(lcm, other.lcm);
    if (c != 0) return c < 0;
    if (i != other.i) return i < other.i;
    return j < other.j;
  }
};

// Buchberger completion with the product criterion and a normal (smallest
// lcm first) selection strategy. Throws a budget error when the configured
// step limit is exhausted.
inline std::vector<Poly> buchberger(std::vector<Poly> gens, Budget& budget) {
  std::vector<Poly> basis;
  for (Poly& g : gens) {
    if (g.empty()) continue;
    make_monic(g);
    basis.push_back(std::move(g));
  }

  std::set<Pair> pairs;
  auto queue_pair = [&](int i, int j) {
    const Mono l = mono_lcm(basis[static_cast<std::size_t>(i)].begin()->first,
                            basis[static_cast<std::size_t>(j)].begin()->first);
    pairs.insert(Pair{degree(l), l, i, j});
  };
  for (int i = 0; i < static_cast<int>(basis.size()); ++i)
    for (int j = i + 1; j < static_cast<int>(basis.size()); ++j)
      queue_pair(i, j);

  while (!pairs.empty()) {
    const Pair p = *pairs.begin();
    pairs.erase(pairs.begin());
    const Poly& gi = basis[static_cast<std::size_t>(p.i)];
    const Poly& gj = basis[static_cast<std::size_t>(p.j)];
    const Mono& li = gi.begin()->first;
    const Mono& lj = gj.begin()->first;
    if (coprime(li, lj)) continue;
    budget.charge("pair selection");

    Poly s;
    add_scaled(s, gi, Rat(1) / gi.begin()->second, mono_quotient(p.lcm, li));
    add_scaled(s, gj, Rat(-1) / gj.begin()->second, mono_quotient(p.lcm, lj));
    Poly h = normal_form(std::move(s), basis, budget);
    if (h.empty()) continue;
    make_monic(h);
    basis.push_back(std::move(h));
    const int fresh = static_cast<int>(basis.size()) - 1;
    for (int i = 0; i < fresh; ++i) queue_pair(i, fresh);
  }
  return basis;
}

// Leading monomials of a minimal basis: drop any whose leading monomial is
// divisible by another's (ties keep the earliest).
inline std::vector<Mono> minimal_leading_monomials(
    const std::vector<Poly>& basis) {
  std::vector<Mono> lms;
  for (const Poly& g : basis) lms.push_back(g.begin()->first);
  std::vector<Mono> out;
  for (std::size_t i = 0; i < lms.size(); ++i) {
    bool keep = true;
    for (std::size_t j = 0; j < lms.size() && keep; ++j) {
      if (i == j) continue;
      if (!divides(lms[j], lms[i])) continue;
      if (lms[j] != lms[i] || j < i) keep = false;
    }
    if (keep) out.push_back(lms[i]);
  }
  return out;
}

// Number of monomials outside the leading-term ideal. Requires the ideal to
// be zero-dimensional (a pure power of every variable among the leading
// monomials); otherwise the count would be infinite and we refuse.
inline Int count_standard_monomials(const std::vector<Mono>& lms,
                                    std::size_t nvars) {
  for (const Mono& m : lms)
    if (degree(m) == 0) return 0;  // the ideal is the whole ring

  std::vector<std::int64_t> box(nvars, -1);
  for (const Mono& m : lms) {
    std::size_t support = 0, var = 0;
    for (std::size_t i = 0; i < nvars; ++i)
      if (m[i] > 0) {
        ++support;
        var = i;
      }
    if (support == 1 && (box[var] < 0 || m[var] < box[var])) box[var] = m[var];
  }
  for (std::size_t i = 0; i < nvars; ++i)
    if (box[i] < 0)
      throw_validation(
          "ideal is not zero-dimensional: no pure power of variable " +
          std::to_string(i + 1) + " among the leading monomials");

  // Highest variable index each leading monomial touches, so divisibility
  // is tested as soon as every support variable has been assigned.
  std::vector<std::size_t> last_support(lms.size(), 0);
  for (std::size_t t = 0; t < lms.size(); ++t)
    for (std::size_t i = 0; i < nvars; ++i)
      if (lms[t][i] > 0) last_support[t] = i;

  Int count = 0;
  Mono current(nvars, 0);
  auto walk = [&](auto&& self, std::size_t idx) -> void {
    for (std::size_t t = 0; t < lms.size(); ++t) {
      if (last_support[t] + 1 != idx && !(idx == 0 && degree(lms[t]) == 0))
        continue;
      if (divides(lms[t], current)) return;  // inside the ideal: prune
    }
    if (idx == nvars) {
      ++count;
      return;
    }
    for (std::int64_t e = 0; e < box[idx]; ++e) {
      current[idx] = e;
      self(self, idx + 1);
    }
    current[idx] = 0;
  };
  walk(walk, 0);
  return count;
}

}  // namespace gb

// A polynomial ideal membership/dimension problem over the rationals:
// named variables and a finite generating set.
struct PolynomialIdealProblem {
  std::vector<std::string> variable_names;
  std::vector<gb::Poly> generators;
};

// Converts a Laurent presentation into an honest polynomial problem:
// each relation is multiplied by the minimal monomial clearing its negative
// exponents, and (optionally) a fresh variable z with the relation
// z * prod(all generators) - 1 makes every generator invertible in the
// quotient, mirroring the Laurent localization.
inline PolynomialIdealProblem laurent_to_polynomial_problem(
    const Presentation& pres, bool invert_via_z = true) {
  PolynomialIdealProblem out;
  std::map<VarId, std::size_t> index;
  for (const VarId& v : pres.variables) {
    index[v] = out.variable_names.size();
    out.variable_names.push_back(v.json_name());
  }
  const std::size_t ny = out.variable_names.size();
  const std::size_t nv = ny + (invert_via_z ? 1 : 0);
  if (invert_via_z) out.variable_names.push_back("z");

  for (const Relation& rel : pres.relations) {
    std::vector<std::int64_t> clear(nv, 0);
    for (const auto& [e, c] : rel.poly.terms())
      for (const auto& [v, exp] : e.entries()) {
        auto it = index.find(v);
        if (it == index.end())
          throw_validation("relation uses variable " + v.expr_name() +
                           " outside the presentation's variable list");
        clear[it->second] = std::min(clear[it->second], exp);
      }
    gb::Poly g;
    for (const auto& [e, c] : rel.poly.terms()) {
      gb::Mono m(nv, 0);
      for (const auto& [v, exp] : e.entries()) m[index[v]] = exp;
      for (std::size_t i = 0; i < nv; ++i) m[i] -= clear[i];
      gb::add_term(g, m, Rat(c));
    }
    out.generators.push_back(std::move(g));
  }

  if (invert_via_z) {
    gb::Poly g;
    gb::Mono all(nv, 1);
    gb::add_term(g, all, Rat(1));
    gb::add_term(g, gb::Mono(nv, 0), Rat(-1));
    out.generators.push_back(std::move(g));
  }
  return out;
}

struct OracleRun {
  Int dimension;
  std::uint64_t steps = 0;
};

// Vector-space dimension of Q[vars]/ideal via a Groebner basis: count of
// standard monomials. Throws a budget error if the step limit is hit and a
// validation error if the ideal is not zero-dimensional.
inline OracleRun groebner_run(const PolynomialIdealProblem& problem,
                              std::uint64_t budget_limit = kDefaultOracleBudget) {
  gb::Budget budget;
  budget.limit = budget_limit;
  std::vector<gb::Poly> basis = gb::buchberger(problem.generators, budget);
  if (basis.empty())
    throw_validation("empty generating set: the ideal is zero and the "
                     "quotient is infinite-dimensional");
  const std::vector<gb::Mono> lms = gb::minimal_leading_monomials(basis);
  OracleRun out;
  out.dimension =
      gb::count_standard_monomials(lms, problem.variable_names.size());
  out.steps = budget.used;
  return out;
}

inline Int groebner_dimension(const PolynomialIdealProblem& problem,
                              std::uint64_t budget_limit = kDefaultOracleBudget) {
  return groebner_run(problem, budget_limit).dimension;
}

struct RankCrossCheck {
  enum class Verdict { pass, fail, inconclusive };

  Int expected;
  Int dimension;  // meaningful unless verdict == inconclusive
  Verdict verdict = Verdict::inconclusive;
  std::uint64_t steps = 0;
  std::string detail;
};

// Compares the engine's additive rank against the oracle's independently
// computed dimension of the localized polynomial model.
inline RankCrossCheck cross_check_rank(
    const TowerSpec& spec, std::uint64_t budget_limit = kDefaultOracleBudget) {
  RankCrossCheck out;
  out.expected = QuotientRing::rank(spec);
  try {
    const OracleRun run =
        groebner_run(laurent_to_polynomial_problem(build_ideal(spec)),
                     budget_limit);
    out.dimension = run.dimension;
    out.steps = run.steps;
    if (out.dimension == out.expected) {
      out.verdict = RankCrossCheck::Verdict::pass;
      out.detail = "rank " + out.expected.str() + " confirmed";
    } else {
      out.verdict = RankCrossCheck::Verdict::fail;
      out.detail = "expected rank " + out.expected.str() +
                   ", oracle dimension " + out.dimension.str();
    }
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::budget) throw;
    out.verdict = RankCrossCheck::Verdict::inconclusive;
    out.detail = e.what();
  }
  return out;
}

// Uniform random Laurent polynomial: up to max_terms terms, exponents in
// [-max_exp, max_exp], coefficients in [-max_coeff, max_coeff]. Used by the
// property checks; deterministic given the generator state.
inline LaurentPolynomial random_laurent(std::mt19937_64& rng,
                                        const std::vector<VarId>& vars,
                                        int max_terms = 4, int max_exp = 3,
                                        int max_coeff = 9) {
  std::uniform_int_distribution<int> term_count(0, max_terms);
  std::uniform_int_distribution<std::int64_t> exp_dist(-max_exp, max_exp);
  std::uniform_int_distribution<int> coeff_dist(-max_coeff, max_coeff);
  LaurentPolynomial out;
  const int terms = term_count(rng);
  for (int t = 0; t < terms; ++t) {
    ExponentVector e;
    for (const VarId& v : vars) e.set_exponent(v, exp_dist(rng));
    out.add_term(e, coeff_dist(rng));
  }
  return out;
}

// First relation whose reduction is not zero, if any; usable directly
// against deliberately corrupted relation lists.
inline std::optional<std::string> first_nonvanishing_relation(
    const QuotientRing& engine, const std::vector<Relation>& relations) {
  for (const Relation& rel : relations) {
    const QuotientElement q = engine.reduce(rel.poly);
    if (!q.is_zero())
      return "relation (stage " + std::to_string(rel.stage) + ", r=" +
             std::to_string(rel.r) + ") reduces to " +
             q.to_polynomial().to_expr_string();
  }
  return std::nullopt;
}

struct InvariantCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct InvariantSuiteReport {
  std::vector<InvariantCheck> checks;

  bool all_pass() const {
    for (const InvariantCheck& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

struct InvariantSuiteOptions {
  std::uint64_t seed = 20260814;
  int random_pairs = 100;
  int max_terms = 4;
  int max_exp = 3;
  int max_coeff = 9;
};

// Structural soundness battery for one tower: augmentation and reduction
// kill every defining relation, stage products match their twist classes,
// generator multiplication is unimodular, inverses cancel, reduction is
// idempotent and a ring homomorphism on random samples.
inline InvariantSuiteReport run_invariant_suite(
    const TowerSpec& spec, const InvariantSuiteOptions& options = {}) {
  InvariantSuiteReport report;
  auto record = [&](std::string name, bool pass, std::string detail) {
    report.checks.push_back({std::move(name), pass, std::move(detail)});
  };

  const Presentation pres = build_ideal(spec);
  const QuotientRing engine(spec);

  {
    bool pass = true;
    std::string detail;
    for (const Relation& rel : pres.relations) {
      const Int value = rel.poly.evaluate_at_one();
      if (value != 0) {
        pass = false;
        detail = "relation (stage " + std::to_string(rel.stage) + ", r=" +
                 std::to_string(rel.r) + ") evaluates to " + value.str();
        break;
      }
    }
    record("relations_evaluate_to_zero_at_one", pass, detail);
  }

  {
    const auto bad = first_nonvanishing_relation(engine, pres.relations);
    record("relations_reduce_to_zero", !bad.has_value(), bad.value_or(""));
  }

  {
    // The product of all stage-j generators equals the product of the
    // column-sum twists of the stage's matrices.
    bool pass = true;
    std::string detail;
    for (int j = 1; j <= spec.stages() && pass; ++j) {
      ExponentVector left;
      for (int k = 1; k <= spec.n(j) + 1; ++k)
        left.set_exponent(VarId{j, k}, 1);
      ExponentVector right;
      for (int l = 1; l < j; ++l) {
        const PMatrix& p = spec.matrix(l, j);
        for (int i = 1; i <= spec.n(l) + 1; ++i) {
          std::int64_t colsum = 0;
          for (int k = 1; k <= spec.n(j) + 1; ++k) colsum += p.at(k, i);
          right.set_exponent(VarId{l, i}, colsum);
        }
      }
      if (engine.reduce(LaurentPolynomial::monomial(left)) !=
          engine.reduce(LaurentPolynomial::monomial(right))) {
        pass = false;
        detail = "stage " + std::to_string(j) +
                 ": generator product differs from its twist class";
      }
    }
    record("stage_products_match_twists", pass, detail);
  }

  {
    bool pass = true;
    std::string detail;
    for (const VarId& v : spec.variables()) {
      const Int det = bareiss_determinant(engine.mult_matrix(v));
      if (det != 1 && det != -1) {
        pass = false;
        detail = v.expr_name() + ": determinant " + det.str();
        break;
      }
    }
    record("generator_matrices_unimodular", pass, detail);
  }

  {
    bool pass = true;
    std::string detail;
    for (const VarId& v : spec.variables()) {
      const QuotientElement product = engine.reduce(
          LaurentPolynomial::variable(v) *
          engine.invert_generator(v).to_polynomial());
      if (product != QuotientElement::one()) {
        pass = false;
        detail = v.expr_name() + ": inverse does not cancel";
        break;
      }
    }
    record("inverses_cancel", pass, detail);
  }

  std::mt19937_64 rng(options.seed);
  const std::vector<VarId> vars = spec.variables();

  {
    bool pass = true;
    std::string detail;
    for (int t = 0; t < options.random_pairs && pass; ++t) {
      const LaurentPolynomial p = random_laurent(
          rng, vars, options.max_terms, options.max_exp, options.max_coeff);
      const QuotientElement once = engine.reduce(p);
      if (engine.reduce(once.to_polynomial()) != once) {
        pass = false;
        detail = "sample " + std::to_string(t) + ": reduce not idempotent";
      }
    }
    record("reduction_idempotent", pass, detail);
  }

  {
    bool add_pass = true, mul_pass = true;
    std::string add_detail, mul_detail;
    for (int t = 0; t < options.random_pairs; ++t) {
      const LaurentPolynomial p = random_laurent(
          rng, vars, options.max_terms, options.max_exp, options.max_coeff);
      const LaurentPolynomial q = random_laurent(
          rng, vars, options.max_terms, options.max_exp, options.max_coeff);
      if (add_pass && engine.reduce(p + q) != engine.reduce(p) + engine.reduce(q)) {
        add_pass = false;
        add_detail = "sample " + std::to_string(t) + ": additivity broken";
      }
      if (mul_pass &&
          engine.reduce(p * q) !=
              engine.multiply_elements(engine.reduce(p), engine.reduce(q))) {
        mul_pass = false;
        mul_detail = "sample " + std::to_string(t) + ": multiplicativity broken";
      }
      if (!add_pass && !mul_pass) break;
    }
    record("reduction_additive", add_pass, add_detail);
    record("reduction_multiplicative", mul_pass, mul_detail);
  }

  return report;
}

// Cross-checks that the one-relation-per-stage form and the full form of a
// singleton-word tower present the same ring: substituted full relations
// vanish in the simplified engine, simplified relations vanish in the
// general engine, and both polynomial models have dimension 2^r.
inline BsEquivalenceReport check_bs_equivalence(
    const CartanSpec& cartan, const std::vector<int>& word,
    std::uint64_t budget = kDefaultOracleBudget) {
  BsEquivalenceReport report;
  const SubsetSequence seq = singleton_sequence(word);
  const TowerSpec spec = q_matrices(cartan, seq);
  const Presentation full = build_ideal(spec);
  const Presentation simplified = bs_simplified_presentation(cartan, word);
  report.expected_rank = int_pow(2, word.size());

  {
    const BsQuotient bs(cartan, word);
    report.full_relations_vanish_after_substitution = true;
    for (const Relation& rel : full.relations) {
      const LaurentPolynomial substituted =
          eliminate_second_slots(cartan, word, rel.poly);
      if (!bs.reduce(substituted).is_zero()) {
        report.full_relations_vanish_after_substitution = false;
        report.detail = "full relation (stage " + std::to_string(rel.stage) +
                        ", r=" + std::to_string(rel.r) +
                        ") survives substitution";
        break;
      }
    }
  }

  {
    const QuotientRing engine(spec);
    const auto bad = first_nonvanishing_relation(engine, simplified.relations);
    report.simplified_relations_vanish_in_tower = !bad.has_value();
    if (bad && report.detail.empty()) report.detail = *bad;
  }

  const OracleRun full_run =
      groebner_run(laurent_to_polynomial_problem(full), budget);
  report.full_dimension = full_run.dimension;
  report.oracle_steps = full_run.steps;
  const OracleRun simplified_run =
      groebner_run(laurent_to_polynomial_problem(simplified), budget);
  report.simplified_dimension = simplified_run.dimension;
  report.oracle_steps += simplified_run.steps;
  report.dimensions_match = report.full_dimension == report.expected_rank &&
                            report.simplified_dimension == report.expected_rank;
  if (!report.dimensions_match && report.detail.empty())
    report.detail = "dimensions " + report.full_dimension.str() + " / " +
                    report.simplified_dimension.str() + " differ from 2^r = " +
                    report.expected_rank.str();
  return report;
}

}  // namespace kbott
