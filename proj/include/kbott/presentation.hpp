#pragma once

#include <string>
#include <vector>

#include "kbott/laurent.hpp"
#include "kbott/tower.hpp"

namespace kbott {

// K-class of a line bundle: the Laurent monomial whose exponent on y[l,i]
// is the bundle's twist against slot i of stage l.
inline LaurentPolynomial vector_to_monomial(const LineBundleVector& bundle) {
  ExponentVector e;
  for (int l = 1; l <= bundle.stage; ++l) {
    const auto& comp = bundle.components[static_cast<std::size_t>(l) - 1];
    for (int i = 1; i <= static_cast<int>(comp.size()); ++i)
      e.set_exponent(VarId{l, i}, comp[static_cast<std::size_t>(i) - 1]);
  }
  return LaurentPolynomial::monomial(e);
}

// K-class of the r-th exterior power of the stage-j defining bundle: the
// r-th elementary symmetric polynomial of the summand classes. For stage 1
// every summand is trivial, so this degenerates to the binomial
// C(n_1 + 1, r).
inline LaurentPolynomial lambda_class(const TowerSpec& spec, int j, int r) {
  if (r < 0 || r > spec.n(j) + 1)
    throw_validation("lambda_class: index " + std::to_string(r) +
                     " out of range for stage " + std::to_string(j));
  std::vector<LaurentPolynomial> summands;
  for (const LineBundleVector& bundle : eta_summand_vectors(spec, j))
    summands.push_back(vector_to_monomial(bundle));
  return elementary_symmetric(summands, r);
}

// One defining relation: e_r of the stage-j generators minus the r-th
// lambda class of the stage's defining bundle.
struct Relation {
  int stage = 0;
  int r = 0;
  LaurentPolynomial poly;

  bool operator==(const Relation&) const = default;
};

// Generators-and-relations description of the K-ring: the ambient Laurent
// ring on `variables` modulo the listed relations.
struct Presentation {
  TowerSpec spec;
  std::vector<VarId> variables;
  std::vector<Relation> relations;
};

// Builds the full defining ideal of the tower's K-ring: for every stage j
// and every 1 <= r <= n_j + 1, the relation
//   e_r(y[j,1..n_j+1]) - lambda_class(spec, j, r).
inline Presentation build_ideal(const TowerSpec& spec) {
  validate_tower(spec);
  Presentation out;
  out.spec = spec;
  out.variables = spec.variables();
  for (int j = 1; j <= spec.stages(); ++j) {
    std::vector<LaurentPolynomial> gens;
    for (int k = 1; k <= spec.n(j) + 1; ++k)
      gens.push_back(LaurentPolynomial::variable(VarId{j, k}));
    for (int r = 1; r <= spec.n(j) + 1; ++r) {
      Relation rel;
      rel.stage = j;
      rel.r = r;
      rel.poly = elementary_symmetric(gens, r) - lambda_class(spec, j, r);
      out.relations.push_back(std::move(rel));
    }
  }
  return out;
}

}  // namespace kbott
