#pragma once

#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "ring.hpp"
#include "system.hpp"
#include "tree.hpp"

namespace treetoric {

// Interpolating polynomials: t(v) is the sum, over all paths from v down to a
// leaf, of the product of edge labels along the path.  Leaves get 1, and the
// values satisfy the one-step recursion
//     t(v) = sum_k  label(v -> child_k) * t(child_k),
// which is how they are computed here (bottom-up, each vertex once).
inline std::vector<Polynomial> interpolating_polys(const TreeSystem& sys) {
  const StagedTree& t = sys.tree;
  std::vector<Polynomial> interp(t.vertex_count());
  // Vertices in decreasing level so children are always ready.
  std::vector<int> order(t.vertex_count());
  for (std::size_t v = 0; v < order.size(); ++v) order[v] = static_cast<int>(v);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return t.level[a] > t.level[b]; });
  for (int v : order) {
    if (t.is_leaf(v)) {
      interp[v] = Polynomial(1);
      continue;
    }
    Polynomial sum;
    for (int c : t.children[v])
      sum += Polynomial::variable(sys.label_var[t.parent_label[c]]) * interp[c];
    interp[v] = sum;
  }
  return interp;
}

inline Polynomial interpolating_poly(const TreeSystem& sys, int v) {
  return interpolating_polys(sys)[v];
}

// Same position: same stage and equal interpolating polynomial.  Paths below
// two such vertices carry identical weight structure.
inline bool same_position(const TreeSystem& sys, int v, int w,
                          const std::vector<Polynomial>& interp) {
  return sys.tree.stage_of[v] == sys.tree.stage_of[w] && interp[v] == interp[w];
}

inline bool same_position(const TreeSystem& sys, int v, int w) {
  return same_position(sys, v, w, interpolating_polys(sys));
}

struct StarWitness {
  int v = -1, w = -1;  // the stage pair
  int i = -1, j = -1;  // positions in v's edge order of the two labels
  Polynomial lhs;      // t(v_i) * t(w_j)
  Polynomial rhs;      // t(w_i) * t(v_j)
};

struct StarCheck {
  bool ok = true;
  std::optional<StarWitness> witness;
};

// The exchange condition for a same-stage pair: matching children by label,
//     t(v_i) * t(w_j) == t(w_i) * t(v_j)   for all label positions i < j.
// The first violated pair (i, j) is returned with both products expanded.
inline StarCheck star_condition(const TreeSystem& sys, int v, int w,
                                const std::vector<Polynomial>& interp) {
  const StagedTree& t = sys.tree;
  if (t.stage_of[v] != t.stage_of[w])
    throw domain_error("star condition needs a same-stage pair; '" + t.id[v] + "' and '" +
                       t.id[w] + "' differ");
  std::vector<int> labels = t.labels_of(v);  // reference label order: v's edges
  for (std::size_t i = 0; i < labels.size(); ++i)
    for (std::size_t j = i + 1; j < labels.size(); ++j) {
      int vi = t.child_by_label(v, labels[i]), vj = t.child_by_label(v, labels[j]);
      int wi = t.child_by_label(w, labels[i]), wj = t.child_by_label(w, labels[j]);
      Polynomial lhs = interp[vi] * interp[wj];
      Polynomial rhs = interp[wi] * interp[vj];
      if (lhs != rhs)
        return {false, StarWitness{v, w, static_cast<int>(i), static_cast<int>(j),
                                   std::move(lhs), std::move(rhs)}};
    }
  return {true, std::nullopt};
}

inline StarCheck star_condition(const TreeSystem& sys, int v, int w) {
  return star_condition(sys, v, w, interpolating_polys(sys));
}

struct BalanceCheck {
  bool balanced = true;
  bool same_position_shortcut = false;  // proved by the position argument alone
  std::optional<StarWitness> witness;   // first failing pair otherwise
};

// Balanced: every same-stage pair satisfies the exchange condition.  For
// stratified trees, all pairs being in the same position is a sufficient
// condition and is tried first; otherwise every pair is checked directly.
inline BalanceCheck is_balanced(const TreeSystem& sys) {
  const StagedTree& t = sys.tree;
  std::vector<Polynomial> interp = interpolating_polys(sys);

  if (is_stratified(t).ok) {
    bool all_same = true;
    for (const auto& members : t.stages)
      for (std::size_t a = 0; a + 1 < members.size() && all_same; ++a)
        if (interp[members[a]] != interp[members[a + 1]]) all_same = false;
    if (all_same) return {true, true, std::nullopt};
  }

  for (const auto& members : t.stages)
    for (std::size_t a = 0; a < members.size(); ++a)
      for (std::size_t b = a + 1; b < members.size(); ++b) {
        StarCheck check = star_condition(sys, members[a], members[b], interp);
        if (!check.ok) return {false, false, std::move(check.witness)};
      }
  return {true, false, std::nullopt};
}

inline std::string describe(const StarWitness& w, const TreeSystem& sys) {
  return "stage pair ('" + sys.tree.id[w.v] + "', '" + sys.tree.id[w.w] + "'), labels #" +
         std::to_string(w.i) + ",#" + std::to_string(w.j) + ": " + to_string(w.lhs, sys.ring) +
         "  !=  " + to_string(w.rhs, sys.ring);
}

}  // namespace treetoric
