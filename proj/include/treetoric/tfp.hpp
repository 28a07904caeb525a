#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "interpolation.hpp"
#include "order.hpp"
#include "ring.hpp"
#include "system.hpp"
#include "tree.hpp"

namespace treetoric {

// The toric parametrization: each leaf's path variable maps to the product of
// the edge labels along its root-to-leaf path, times the homogenizer z.
struct MonomialMap {
  std::vector<VarId> vars;     // leaf path variables in canonical order
  std::vector<Monomial> images;

  const Monomial& image_of(VarId v) const {
    auto it = index.find(v);
    if (it == index.end()) throw internal_error("variable is not in the monomial map");
    return images[it->second];
  }

  // Image of a monomial in path variables (multiplicative extension).
  Monomial apply(const Monomial& m) const {
    Monomial out;
    for (auto& [v, e] : m.factors()) {
      const Monomial& im = image_of(v);
      for (int k = 0; k < e; ++k) out = out * im;
    }
    return out;
  }

  std::map<VarId, std::size_t> index;
};

inline MonomialMap monomial_map(const TreeSystem& sys) {
  const StagedTree& t = sys.tree;
  MonomialMap mm;
  for (int leaf : t.leaves) {
    Monomial image = Monomial::var(sys.z);
    for (int v = leaf; v != 0; v = t.parent[v])
      image = image * Monomial::var(sys.label_var[t.parent_label[v]]);
    mm.index[sys.leaf_var(leaf)] = mm.vars.size();
    mm.vars.push_back(sys.leaf_var(leaf));
    mm.images.push_back(std::move(image));
  }
  return mm;
}

// One level of the iterated gluing: the stages at level j, each block a list
// of level-j vertices sharing a label set, with per-member child lookup by
// label position.  The block partition is also the multigrading on level-j
// path variables under which quadrics from shallower levels stay homogeneous.
struct GluingStep {
  int level = 0;  // j

  struct Block {
    std::vector<int> members;  // level-j vertices in canonical index order
    std::vector<int> labels;   // label ids in the first member's edge order
    // child[member position][label position] -> level-(j+1) vertex
    std::vector<std::vector<int>> child;
  };

  std::vector<Block> blocks;
  std::map<int, std::pair<int, int>> locate;  // vertex -> (block, member position)
};

// Splits a stratified tree into its gluing steps j = 1 .. depth-1.  Blocks
// are ordered by their first member; children are resolved by label so that
// members may list their edges in different orders.
inline std::vector<GluingStep> decompose(const TreeSystem& sys) {
  const StagedTree& t = sys.tree;
  StratifiedCheck strat = is_stratified(t);
  if (!strat.ok) throw domain_error("decompose requires a stratified tree: " + strat.witness);

  std::vector<GluingStep> steps;
  for (int j = 1; j + 1 <= t.depth; ++j) {
    GluingStep step;
    step.level = j;
    for (const auto& members : t.stages) {
      if (t.level[members.front()] != j) continue;  // stages are level-homogeneous here
      GluingStep::Block block;
      block.members = members;
      block.labels = t.labels_of(members.front());
      for (int v : block.members) {
        std::vector<int> row;
        for (int lab : block.labels) {
          int c = t.child_by_label(v, lab);
          if (c < 0) throw internal_error("stage member lacks a stage label");
          row.push_back(c);
        }
        block.child.push_back(std::move(row));
      }
      step.blocks.push_back(std::move(block));
    }
    // Stage order already sorts by first member; record the reverse lookup and
    // confirm the blocks tile the whole level.
    std::size_t covered = 0;
    for (std::size_t b = 0; b < step.blocks.size(); ++b)
      for (std::size_t pos = 0; pos < step.blocks[b].members.size(); ++pos) {
        step.locate[step.blocks[b].members[pos]] = {static_cast<int>(b), static_cast<int>(pos)};
        ++covered;
      }
    std::size_t level_size = 0;
    for (std::size_t v = 0; v < t.vertex_count(); ++v)
      if (t.level[v] == j) ++level_size;
    if (covered != level_size) throw internal_error("gluing blocks do not tile the level");
    steps.push_back(std::move(step));
  }
  return steps;
}

// Where a basis element came from: the stage quadric that started it and the
// child-index pairs appended by each later lift.
struct Provenance {
  int quad_level = 0;                 // level j of the originating stage quadric
  int block = 0;                      // block index within that step
  int a = 0, b = 0;                   // member positions of the vertex pair (a < b)
  int k1 = 0, k2 = 0;                 // label positions of the column pair (k1 < k2)
  std::vector<std::pair<int, int>> lifts;  // appended child indices, one pair per lift
};

struct BasisElement {
  MarkedBinomial binomial;
  Provenance provenance;
};

// The 2x2 exchange quadrics of one gluing step: for each block, each pair of
// members a < b and label positions k1 < k2,
//     p[child(a,k1)] p[child(b,k2)]  -  p[child(b,k1)] p[child(a,k2)],
// marked on the first product.  These live in level-(j+1) path variables.
inline std::vector<BasisElement> step_quadrics(const TreeSystem& sys, const GluingStep& step) {
  std::vector<BasisElement> out;
  for (std::size_t bi = 0; bi < step.blocks.size(); ++bi) {
    const auto& block = step.blocks[bi];
    for (std::size_t a = 0; a < block.members.size(); ++a)
      for (std::size_t b = a + 1; b < block.members.size(); ++b)
        for (std::size_t k1 = 0; k1 < block.labels.size(); ++k1)
          for (std::size_t k2 = k1 + 1; k2 < block.labels.size(); ++k2) {
            auto var = [&](std::size_t member, std::size_t k) {
              return sys.vertex_var[block.child[member][k]];
            };
            BasisElement e;
            e.binomial.lead = Monomial::var(var(a, k1)) * Monomial::var(var(b, k2));
            e.binomial.trail = Monomial::var(var(b, k1)) * Monomial::var(var(a, k2));
            e.provenance = {step.level, static_cast<int>(bi), static_cast<int>(a),
                            static_cast<int>(b), static_cast<int>(k1), static_cast<int>(k2),
                            {}};
            out.push_back(std::move(e));
          }
  }
  return out;
}

namespace detail {

// Splits a squarefree degree-2 monomial in level-j variables into its two
// vertices, located in the step's blocks.
struct GradedPair {
  int v1, v2;          // vertices, ordered so block(v1) <= block(v2),
  int b1, b2;          //   ties broken by canonical position
};

inline GradedPair locate_pair(const TreeSystem& sys, const GluingStep& step, const Monomial& m,
                              const char* side) {
  std::vector<int> verts;
  for (auto& [var, e] : m.factors()) {
    if (!sys.is_vertex_var(var))
      throw domain_error(std::string("lift: ") + side + " is not in path variables");
    for (int k = 0; k < e; ++k) verts.push_back(sys.vertex_of(var));
  }
  if (verts.size() != 2 || verts[0] == verts[1])
    throw domain_error(std::string("lift: ") + side + " is not squarefree of degree 2");
  for (int v : verts)
    if (!step.locate.count(v))
      throw domain_error(std::string("lift: ") + side + " involves a vertex outside the step's level");
  auto [blk1, pos1] = step.locate.at(verts[0]);
  auto [blk2, pos2] = step.locate.at(verts[1]);
  if (std::pair(blk1, pos1) > std::pair(blk2, pos2)) {
    std::swap(verts[0], verts[1]);
    std::swap(blk1, blk2);
  }
  return {verts[0], verts[1], blk1, blk2};
}

}  // namespace detail

// Lifts a block-homogeneous quadric one level down.  Lead and trail variables
// are paired by grading block (when both blocks coincide, by canonical
// position), and for every pair of child indices (k1, k2) in the two blocks'
// label ranges the children are appended:
//     p[x1] p[x2] - p[x3] p[x4]   becomes
//     p[x1 k1] p[x2 k2] - p[x3 k1] p[x4 k2]   for all k1, k2.
// Exactly |labels(block1)| * |labels(block2)| elements result.  A lead/trail
// block mismatch means the input was not homogeneous for this grading and
// raises internal_error: assembly only ever lifts homogeneous quadrics.
inline std::vector<BasisElement> lift(const TreeSystem& sys, const BasisElement& f,
                                      const GluingStep& step) {
  detail::GradedPair lead = detail::locate_pair(sys, step, f.binomial.lead, "lead");
  detail::GradedPair trail = detail::locate_pair(sys, step, f.binomial.trail, "trail");
  if (lead.b1 != trail.b1 || lead.b2 != trail.b2)
    throw internal_error("lift: lead and trail are not homogeneous for the level grading");

  const auto& block1 = step.blocks[lead.b1];
  const auto& block2 = step.blocks[lead.b2];
  auto child = [&](const GluingStep::Block& block, int vertex, std::size_t k) {
    auto [blk, pos] = step.locate.at(vertex);
    return sys.vertex_var[block.child[pos][k]];
  };

  std::vector<BasisElement> out;
  for (std::size_t k1 = 0; k1 < block1.labels.size(); ++k1)
    for (std::size_t k2 = 0; k2 < block2.labels.size(); ++k2) {
      BasisElement e;
      e.binomial.lead = Monomial::var(child(block1, lead.v1, k1)) *
                        Monomial::var(child(block2, lead.v2, k2));
      e.binomial.trail = Monomial::var(child(block1, trail.v1, k1)) *
                         Monomial::var(child(block2, trail.v2, k2));
      e.provenance = f.provenance;
      e.provenance.lifts.push_back({static_cast<int>(k1), static_cast<int>(k2)});
      out.push_back(std::move(e));
    }
  return out;
}

// The assembled candidate basis: for each gluing step, its stage quadrics
// lifted through all deeper steps, so every element ends in leaf variables.
// Requires a stratified, balanced tree; every element is checked to vanish
// under the monomial map before being returned.
inline std::vector<BasisElement> assemble_basis(const TreeSystem& sys) {
  StratifiedCheck strat = is_stratified(sys.tree);
  if (!strat.ok)
    throw domain_error("basis assembly requires a stratified tree: " + strat.witness);
  BalanceCheck balance = is_balanced(sys);
  if (!balance.balanced)
    throw domain_error("basis assembly requires a balanced tree: " +
                       describe(*balance.witness, sys));

  std::vector<GluingStep> steps = decompose(sys);
  std::vector<BasisElement> basis;
  for (std::size_t s = 0; s < steps.size(); ++s) {
    std::vector<BasisElement> layer = step_quadrics(sys, steps[s]);
    for (std::size_t deeper = s + 1; deeper < steps.size(); ++deeper) {
      std::vector<BasisElement> next;
      for (const BasisElement& f : layer)
        for (BasisElement& g : lift(sys, f, steps[deeper])) next.push_back(std::move(g));
      layer = std::move(next);
    }
    for (BasisElement& e : layer) basis.push_back(std::move(e));
  }

  MonomialMap mm = monomial_map(sys);
  for (const BasisElement& e : basis)
    if (mm.apply(e.binomial.lead) != mm.apply(e.binomial.trail))
      throw internal_error("assembled element does not vanish under the monomial map");
  return basis;
}

inline std::vector<MarkedBinomial> binomials_of(const std::vector<BasisElement>& basis) {
  std::vector<MarkedBinomial> out;
  out.reserve(basis.size());
  for (const auto& e : basis) out.push_back(e.binomial);
  return out;
}

}  // namespace treetoric
