#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "kbott/error.hpp"
#include "kbott/laurent.hpp"

namespace kbott {

// Largest admissible magnitude for a twist-matrix entry. Exponent
// bookkeeping is done in 64-bit integers, and this bound keeps every sum of
// entries that the library forms comfortably inside that range.
inline constexpr std::int64_t kMaxMatrixEntry = std::int64_t(1) << 31;

// Dense integer matrix with 64-bit entries, used for the per-stage twist
// data. Row/column indices are 1-based to match the notation everywhere
// else.
struct PMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<std::int64_t> data;  // row-major

  static PMatrix zero(int rows, int cols) {
    PMatrix m;
    m.rows = rows;
    m.cols = cols;
    m.data.assign(static_cast<std::size_t>(rows) * cols, 0);
    return m;
  }

  static PMatrix from_rows(const std::vector<std::vector<std::int64_t>>& r) {
    PMatrix m;
    m.rows = static_cast<int>(r.size());
    m.cols = r.empty() ? 0 : static_cast<int>(r.front().size());
    for (const auto& row : r) {
      if (static_cast<int>(row.size()) != m.cols)
        throw_validation("matrix rows have inconsistent lengths");
      m.data.insert(m.data.end(), row.begin(), row.end());
    }
    return m;
  }

  std::int64_t at(int row, int col) const {
    return data[static_cast<std::size_t>(row - 1) * cols + (col - 1)];
  }
  std::int64_t& at(int row, int col) {
    return data[static_cast<std::size_t>(row - 1) * cols + (col - 1)];
  }

  bool operator==(const PMatrix&) const = default;
};

// A tower of m stages. Stage j fibers a flag manifold of dimension data
// n_j; the twist between stage l < j is an integer matrix of shape
// (n_j + 1) x (n_l + 1). The matrix map is keyed by the pair (l, j).
struct TowerSpec {
  std::vector<int> dims;  // dims[j-1] = n_j
  std::map<std::pair<int, int>, PMatrix> matrices;

  int stages() const { return static_cast<int>(dims.size()); }
  int n(int j) const { return dims[static_cast<std::size_t>(j - 1)]; }

  const PMatrix& matrix(int l, int j) const {
    auto it = matrices.find({l, j});
    if (it == matrices.end())
      throw_internal("missing matrix P_" + std::to_string(l) + "^(" +
                     std::to_string(j) + ")");
    return it->second;
  }

  // All generators y[j,k] in canonical order: stage-major, slot-minor.
  std::vector<VarId> variables() const {
    std::vector<VarId> out;
    for (int j = 1; j <= stages(); ++j)
      for (int k = 1; k <= n(j) + 1; ++k) out.push_back(VarId{j, k});
    return out;
  }

  bool operator==(const TowerSpec&) const = default;
};

// Checks that a spec is structurally sound: at least one stage, positive
// dimension data, exactly one twist matrix per pair l < j with the right
// shape, and entries within the supported magnitude bound. Throws a
// validation Error naming the first offending element.
inline void validate_tower(const TowerSpec& spec) {
  const int m = spec.stages();
  if (m < 1) throw_validation("tower must have at least one stage");
  for (int j = 1; j <= m; ++j)
    if (spec.n(j) < 1)
      throw_validation("stage " + std::to_string(j) +
                       ": dimension must be a positive integer, got " +
                       std::to_string(spec.n(j)));

  for (const auto& [key, mat] : spec.matrices) {
    const auto [l, j] = key;
    if (!(1 <= l && l < j && j <= m))
      throw_validation("unexpected matrix P_" + std::to_string(l) + "^(" +
                       std::to_string(j) + "): need 1 <= l < j <= " +
                       std::to_string(m));
    const int want_rows = spec.n(j) + 1;
    const int want_cols = spec.n(l) + 1;
    if (mat.rows != want_rows || mat.cols != want_cols)
      throw_validation("matrix P_" + std::to_string(l) + "^(" +
                       std::to_string(j) + "): expected shape " +
                       std::to_string(want_rows) + "x" +
                       std::to_string(want_cols) + ", got " +
                       std::to_string(mat.rows) + "x" +
                       std::to_string(mat.cols));
    for (std::int64_t entry : mat.data)
      if (entry > kMaxMatrixEntry || entry < -kMaxMatrixEntry)
        throw_validation("matrix P_" + std::to_string(l) + "^(" +
                         std::to_string(j) +
                         "): entry magnitude exceeds 2^31");
  }

  for (int j = 2; j <= m; ++j)
    for (int l = 1; l < j; ++l)
      if (!spec.matrices.contains({l, j}))
        throw_validation("missing matrix P_" + std::to_string(l) + "^(" +
                         std::to_string(j) + ")");
}

// A line bundle over stage `stage` of the tower, recorded by its integer
// vector of twists per lower stage: components[l-1] has length n_l + 1.
// Tensor product is componentwise addition, the trivial bundle is all
// zeros.
struct LineBundleVector {
  int stage = 0;
  std::vector<std::vector<std::int64_t>> components;

  bool operator==(const LineBundleVector&) const = default;
};

inline LineBundleVector trivial_line_bundle(const TowerSpec& spec, int stage) {
  LineBundleVector out;
  out.stage = stage;
  for (int l = 1; l <= stage; ++l)
    out.components.emplace_back(static_cast<std::size_t>(spec.n(l)) + 1, 0);
  return out;
}

// The k-th tautological quotient line bundle of stage j: trivial twisting
// against every stage except slot k of stage j itself.
inline LineBundleVector tautological_vector(const TowerSpec& spec, int j,
                                            int k) {
  if (j < 1 || j > spec.stages())
    throw_validation("tautological_vector: stage " + std::to_string(j) +
                     " out of range");
  if (k < 1 || k > spec.n(j) + 1)
    throw_validation("tautological_vector: slot " + std::to_string(k) +
                     " out of range for stage " + std::to_string(j));
  LineBundleVector out = trivial_line_bundle(spec, j);
  out.components[static_cast<std::size_t>(j) - 1][static_cast<std::size_t>(k) - 1] = 1;
  return out;
}

inline LineBundleVector tensor(const LineBundleVector& a,
                               const LineBundleVector& b) {
  if (a.stage != b.stage)
    throw_validation("tensor: bundles live over different stages (" +
                     std::to_string(a.stage) + " vs " +
                     std::to_string(b.stage) + ")");
  if (a.components.size() != b.components.size())
    throw_internal("tensor: component count mismatch");
  LineBundleVector out = a;
  for (std::size_t l = 0; l < out.components.size(); ++l) {
    if (out.components[l].size() != b.components[l].size())
      throw_internal("tensor: component length mismatch");
    for (std::size_t i = 0; i < out.components[l].size(); ++i)
      out.components[l][i] += b.components[l][i];
  }
  return out;
}

inline LineBundleVector dual(const LineBundleVector& a) {
  LineBundleVector out = a;
  for (auto& comp : out.components)
    for (auto& e : comp) e = -e;
  return out;
}

// Pulls a bundle back up the tower: the twist data is unchanged and the new
// stages contribute zero components.
inline LineBundleVector pullback_pad(const TowerSpec& spec,
                                     const LineBundleVector& a, int to_stage) {
  if (to_stage < a.stage)
    throw_validation("pullback_pad: target stage " + std::to_string(to_stage) +
                     " below bundle stage " + std::to_string(a.stage));
  if (to_stage > spec.stages())
    throw_validation("pullback_pad: target stage " + std::to_string(to_stage) +
                     " beyond tower height " + std::to_string(spec.stages()));
  LineBundleVector out = a;
  for (int l = a.stage + 1; l <= to_stage; ++l)
    out.components.emplace_back(static_cast<std::size_t>(spec.n(l)) + 1, 0);
  out.stage = to_stage;
  return out;
}

// The n_j + 1 line bundles over stage j - 1 whose sum is the vector bundle
// defining stage j. Summand k twists against stage l by row k of the
// matrix for (l, j). Stage 1 sits over a point, so its summands are
// trivial stage-0 bundles.
inline std::vector<LineBundleVector> eta_summand_vectors(const TowerSpec& spec,
                                                         int j) {
  if (j < 1 || j > spec.stages())
    throw_validation("eta_summand_vectors: stage " + std::to_string(j) +
                     " out of range");
  std::vector<LineBundleVector> out;
  for (int k = 1; k <= spec.n(j) + 1; ++k) {
    LineBundleVector bundle = trivial_line_bundle(spec, j - 1);
    for (int l = 1; l < j; ++l) {
      const PMatrix& p = spec.matrix(l, j);
      for (int i = 1; i <= spec.n(l) + 1; ++i)
        bundle.components[static_cast<std::size_t>(l) - 1]
                         [static_cast<std::size_t>(i) - 1] = p.at(k, i);
    }
    out.push_back(std::move(bundle));
  }
  return out;
}

}  // namespace kbott
