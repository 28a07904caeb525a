#pragma once

#include <map>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "order.hpp"
#include "ring.hpp"
#include "tree.hpp"

namespace treetoric {

// A staged tree together with its polynomial ring.  Registration order fixes
// VarIds: homogenizer first, then labels in first-use order, then one path
// variable per vertex in canonical index order (so ascending VarId equals the
// natural reading order everywhere).  Path variables of internal vertices
// belong to the truncated trees at intermediate levels; final results only
// involve leaf variables.
struct TreeSystem {
  StagedTree tree;
  Ring ring;
  VarId z = 0;
  std::vector<VarId> label_var;   // label id -> VarId
  std::vector<VarId> vertex_var;  // vertex -> VarId of p[index]

  VarId leaf_var(int leaf) const { return vertex_var[leaf]; }

  int vertex_of(VarId v) const {
    auto it = vertex_by_var.find(v);
    if (it == vertex_by_var.end()) throw internal_error("not a path variable of this tree");
    return it->second;
  }

  bool is_vertex_var(VarId v) const { return vertex_by_var.count(v) > 0; }

  std::map<VarId, int> vertex_by_var;
};

inline TreeSystem make_system(StagedTree tree) {
  TreeSystem sys;
  sys.tree = std::move(tree);
  sys.z = sys.ring.add_var("z", VarKind::homogenizer);
  for (const auto& name : sys.tree.labels)
    sys.label_var.push_back(sys.ring.add_var(name, VarKind::label));

  std::vector<int> by_index(sys.tree.vertex_count());
  for (std::size_t v = 0; v < by_index.size(); ++v) by_index[v] = static_cast<int>(v);
  std::sort(by_index.begin(), by_index.end(),
            [&](int a, int b) { return sys.tree.index[a] < sys.tree.index[b]; });
  sys.vertex_var.assign(sys.tree.vertex_count(), 0);
  for (int v : by_index) {
    VarId pv = sys.ring.add_path_var(sys.tree.index[v]);
    sys.vertex_var[v] = pv;
    sys.vertex_by_var[pv] = v;
  }
  return sys;
}

inline TermOrder path_order(const TreeSystem& sys) { return TermOrder::path_lex(sys.ring); }

}  // namespace treetoric
