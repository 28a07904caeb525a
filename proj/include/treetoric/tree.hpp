#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "errors.hpp"

namespace treetoric {

using json = nlohmann::ordered_json;

// Rooted tree with labelled edges.  The order in which a vertex's edges appear
// in the document is significant: it fixes the canonical integer index of
// every vertex (child k of the root is [k], child k of [i] is [i,k], ...) and
// thereby the order of path variables.
//
// Stages are derived, never trusted: two vertices are in the same stage when
// their outgoing label sets are equal.  Parsing enforces the label axioms
// (labels at one vertex distinct; label sets of two vertices equal or
// disjoint) and checks any declared stages against the derived partition.
struct StagedTree {
  std::string name;

  // Vertex data; vertex 0 is the root, the rest in document order.
  std::vector<std::string> id;
  std::vector<int> parent;                 // -1 for the root
  std::vector<int> parent_label;           // label id of the edge from parent
  std::vector<std::vector<int>> children;  // document edge order
  std::vector<std::vector<int>> index;     // canonical integer sequence
  std::vector<int> level;

  std::vector<std::string> labels;  // label names in first-use order

  std::vector<int> stage_of;              // vertex -> stage id
  std::vector<std::vector<int>> stages;   // stage id -> members, index order
  std::vector<std::vector<int>> stage_labels;  // stage id -> label ids (sorted)

  std::vector<int> leaves;  // leaf vertices in canonical index order
  int depth = 0;            // maximum level

  std::size_t vertex_count() const { return id.size(); }
  std::size_t edge_count() const { return id.size() - 1; }
  bool is_leaf(int v) const { return children[v].empty(); }

  // Label ids of v's outgoing edges in edge order.
  std::vector<int> labels_of(int v) const {
    std::vector<int> out;
    out.reserve(children[v].size());
    for (int c : children[v]) out.push_back(parent_label[c]);
    return out;
  }

  int child_by_label(int v, int label) const {
    for (int c : children[v])
      if (parent_label[c] == label) return c;
    return -1;
  }

  std::string index_string(int v) const {
    const auto& seq = index[v];
    bool digits = std::all_of(seq.begin(), seq.end(), [](int k) { return k <= 9; });
    std::string out;
    for (std::size_t i = 0; i < seq.size(); ++i) {
      if (!digits && i > 0) out += ',';
      out += std::to_string(seq[i]);
    }
    return out;
  }
};

namespace detail {

inline void derive_structure(StagedTree& t) {
  std::size_t n = t.vertex_count();

  // Levels and canonical indices by traversal from the root.
  t.level.assign(n, -1);
  t.index.assign(n, {});
  t.level[0] = 0;
  std::vector<int> order{0};
  for (std::size_t head = 0; head < order.size(); ++head) {
    int v = order[head];
    for (std::size_t k = 0; k < t.children[v].size(); ++k) {
      int c = t.children[v][k];
      t.level[c] = t.level[v] + 1;
      t.index[c] = t.index[v];
      t.index[c].push_back(static_cast<int>(k));
      order.push_back(c);
    }
  }
  for (std::size_t v = 0; v < n; ++v)
    if (t.level[v] < 0)
      throw input_error("vertex '" + t.id[v] + "' is not reachable from the root");

  t.depth = *std::max_element(t.level.begin(), t.level.end());

  t.leaves.clear();
  for (std::size_t v = 0; v < n; ++v)
    if (t.is_leaf(static_cast<int>(v))) t.leaves.push_back(static_cast<int>(v));
  std::sort(t.leaves.begin(), t.leaves.end(),
            [&](int a, int b) { return t.index[a] < t.index[b]; });

  // Stage derivation: group vertices by their sorted outgoing label set.
  std::map<std::vector<int>, std::vector<int>> groups;
  for (std::size_t v = 0; v < n; ++v) {
    std::vector<int> ls = t.labels_of(static_cast<int>(v));
    std::sort(ls.begin(), ls.end());
    groups[ls].push_back(static_cast<int>(v));
  }

  // Axiom: two label sets are equal or disjoint, i.e. no label may appear in
  // two distinct groups.
  std::map<int, const std::vector<int>*> label_home;
  for (auto& [ls, members] : groups)
    for (int lab : ls) {
      auto [it, fresh] = label_home.emplace(lab, &ls);
      if (!fresh && *it->second != ls)
        throw input_error("label '" + t.labels[lab] +
                          "' is shared by vertices with different label sets (e.g. '" +
                          t.id[members.front()] + "')");
    }

  std::vector<std::pair<std::vector<int>, int>> keyed;  // (index of first member, group)
  std::vector<std::pair<std::vector<int>, std::vector<int>>> glist(groups.begin(), groups.end());
  for (std::size_t g = 0; g < glist.size(); ++g) {
    auto& members = glist[g].second;
    std::sort(members.begin(), members.end(),
              [&](int a, int b) { return t.index[a] < t.index[b]; });
    keyed.push_back({t.index[members.front()], static_cast<int>(g)});
  }
  std::sort(keyed.begin(), keyed.end());

  t.stages.clear();
  t.stage_labels.clear();
  t.stage_of.assign(n, -1);
  for (auto& [key, g] : keyed) {
    int s = static_cast<int>(t.stages.size());
    t.stages.push_back(glist[g].second);
    t.stage_labels.push_back(glist[g].first);
    for (int v : glist[g].second) t.stage_of[v] = s;
  }
}

}  // namespace detail

namespace detail {

inline StagedTree parse_tree_impl(const json& doc) {
  if (!doc.is_object()) throw input_error("tree document must be a JSON object");
  for (const char* key : {"root", "edges"})
    if (!doc.contains(key)) throw input_error(std::string("tree document lacks '") + key + "'");
  if (!doc["edges"].is_array()) throw input_error("'edges' must be an array");

  StagedTree t;
  t.name = doc.contains("name") ? doc["name"].get<std::string>() : "tree";

  std::map<std::string, int> vid;
  auto vertex = [&](const std::string& s) {
    auto [it, fresh] = vid.emplace(s, static_cast<int>(t.id.size()));
    if (fresh) {
      t.id.push_back(s);
      t.parent.push_back(-1);
      t.parent_label.push_back(-1);
      t.children.push_back({});
    }
    return it->second;
  };
  vertex(doc["root"].get<std::string>());  // root becomes vertex 0

  std::map<std::string, int> lid;
  auto label = [&](const std::string& s) {
    auto [it, fresh] = lid.emplace(s, static_cast<int>(t.labels.size()));
    if (fresh) t.labels.push_back(s);
    return it->second;
  };

  for (const auto& e : doc["edges"]) {
    for (const char* key : {"from", "to", "label"})
      if (!e.contains(key) || !e[key].is_string())
        throw input_error(std::string("edge lacks string field '") + key + "'");
    int from = vertex(e["from"].get<std::string>());
    int to = vertex(e["to"].get<std::string>());
    int lab = label(e["label"].get<std::string>());
    if (to == 0) throw input_error("root '" + t.id[0] + "' may not have a parent");
    if (t.parent[to] >= 0)
      throw input_error("vertex '" + t.id[to] + "' has two parents");
    t.parent[to] = from;
    t.parent_label[to] = lab;
    t.children[from].push_back(to);
  }

  // Axiom: the labels at one vertex are distinct.
  for (std::size_t v = 0; v < t.vertex_count(); ++v) {
    std::vector<int> ls = t.labels_of(static_cast<int>(v));
    std::sort(ls.begin(), ls.end());
    if (std::adjacent_find(ls.begin(), ls.end()) != ls.end())
      throw input_error("vertex '" + t.id[v] + "' repeats an edge label");
  }

  detail::derive_structure(t);

  // Declared stages, if present, must each coincide with a derived stage.
  if (doc.contains("stages")) {
    if (!doc["stages"].is_array()) throw input_error("'stages' must be an array");
    for (const auto& group : doc["stages"]) {
      std::set<int> declared;
      for (const auto& name : group) {
        auto it = vid.find(name.get<std::string>());
        if (it == vid.end())
          throw input_error("declared stage names unknown vertex '" + name.get<std::string>() + "'");
        declared.insert(it->second);
      }
      if (declared.empty()) throw input_error("declared stage is empty");
      const auto& derived = t.stages[t.stage_of[*declared.begin()]];
      if (std::set<int>(derived.begin(), derived.end()) != declared)
        throw input_error("declared stage does not match the derived stage of vertex '" +
                          t.id[*declared.begin()] + "'");
    }
  }
  return t;
}

}  // namespace detail

// Parses and validates a tree document:
//   {"name": ..., "root": ..., "edges": [{"from","to","label"}...],
//    "stages": [[vertex,...],...]}   (stages optional)
inline StagedTree parse_tree(const json& doc) {
  try {
    return detail::parse_tree_impl(doc);
  } catch (const nlohmann::json::exception& e) {
    throw input_error(std::string("malformed tree document: ") + e.what());
  }
}

inline StagedTree parse_tree_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw input_error(std::string("JSON parse failure: ") + e.what());
  }
  return parse_tree(doc);
}

// Canonical document: edges in depth-first preorder, derived stages with more
// than one member.  parse_tree(render_tree(t)) reproduces t.
inline json render_tree(const StagedTree& t) {
  json doc;
  doc["name"] = t.name;
  doc["root"] = t.id[0];
  doc["edges"] = json::array();
  std::vector<int> stack{0};
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (auto it = t.children[v].rbegin(); it != t.children[v].rend(); ++it) stack.push_back(*it);
    if (v != 0)
      doc["edges"].push_back({{"from", t.id[t.parent[v]]},
                              {"to", t.id[v]},
                              {"label", t.labels[t.parent_label[v]]}});
  }
  doc["stages"] = json::array();
  for (const auto& members : t.stages) {
    if (members.size() < 2 || t.is_leaf(members.front())) continue;
    json group = json::array();
    for (int v : members) group.push_back(t.id[v]);
    doc["stages"].push_back(group);
  }
  return doc;
}

// --- stratified check -------------------------------------------------------

struct StratifiedCheck {
  bool ok = true;
  std::string witness;  // human-readable reason when not stratified
};

// Stratified: all leaves on one level and every stage level-homogeneous.
inline StratifiedCheck is_stratified(const StagedTree& t) {
  for (int v : t.leaves)
    if (t.level[v] != t.level[t.leaves.front()])
      return {false, "leaves '" + t.id[t.leaves.front()] + "' (level " +
                         std::to_string(t.level[t.leaves.front()]) + ") and '" + t.id[v] +
                         "' (level " + std::to_string(t.level[v]) + ") differ in level"};
  for (const auto& members : t.stages)
    for (int v : members)
      if (t.level[v] != t.level[members.front()])
        return {false, "stage of '" + t.id[members.front()] + "' spans levels " +
                           std::to_string(t.level[members.front()]) + " and " +
                           std::to_string(t.level[v]) + " ('" + t.id[v] + "')"};
  return {true, ""};
}

// All leaves at level 1 (a single floret; the shape gluing composes from).
inline bool is_one_level(const StagedTree& t) { return t.depth == 1; }

// --- sublevel truncation ----------------------------------------------------

// The subtree of all vertices at level <= q, stages re-derived.  q >= depth
// returns the tree unchanged (so truncation composes: the later cut wins).
inline StagedTree sublevel_tree(const StagedTree& t, int q) {
  if (q < 0) throw input_error("sublevel_tree: negative level");
  if (q >= t.depth) {
    StagedTree copy = t;
    return copy;
  }
  json doc;
  doc["name"] = t.name + "^" + std::to_string(q);
  doc["root"] = t.id[0];
  doc["edges"] = json::array();
  std::vector<int> stack{0};
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (auto it = t.children[v].rbegin(); it != t.children[v].rend(); ++it)
      if (t.level[*it] <= q) stack.push_back(*it);
    if (v != 0)
      doc["edges"].push_back({{"from", t.id[t.parent[v]]},
                              {"to", t.id[v]},
                              {"label", t.labels[t.parent_label[v]]}});
  }
  return parse_tree(doc);
}

// --- contraction of only-child edges ----------------------------------------

// Edges that are their parent's only outgoing edge, as (parent, child) pairs.
inline std::vector<std::pair<int, int>> only_child_edges(const StagedTree& t) {
  std::vector<std::pair<int, int>> out;
  for (std::size_t v = 0; v < t.vertex_count(); ++v)
    if (t.children[v].size() == 1) out.push_back({static_cast<int>(v), t.children[v][0]});
  return out;
}

struct ContractionResult {
  StagedTree tree;
  // Original leaf vertex -> contracted leaf vertex, in canonical leaf order
  // of the original tree.  Contraction never merges two leaves, so this is a
  // bijection between the leaf sets.
  std::vector<std::pair<int, int>> leaf_map;
  std::vector<std::pair<int, int>> contracted;  // the only-child edges removed
};

// Contracts every only-child edge: the child is merged into its parent and
// the edge's label disappears.  Label products along root-to-leaf paths lose
// exactly those forced factors, so the paths of the result biject with the
// paths of the input.  Idempotent: the result has no only-child edges.
inline ContractionResult contract_only_child_edges(const StagedTree& t) {
  ContractionResult res;
  res.contracted = only_child_edges(t);

  std::vector<bool> absorbed(t.vertex_count(), false);
  for (auto& [p, c] : res.contracted) absorbed[c] = true;

  // Representative in the contracted tree: climb while the vertex was merged
  // into its parent.
  auto rep = [&](int v) {
    while (absorbed[v]) v = t.parent[v];
    return v;
  };

  json doc;
  doc["name"] = t.name + "_contracted";
  doc["root"] = t.id[0];
  doc["edges"] = json::array();
  std::vector<int> stack{0};
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (auto it = t.children[v].rbegin(); it != t.children[v].rend(); ++it) stack.push_back(*it);
    if (v != 0 && !absorbed[v])
      doc["edges"].push_back({{"from", t.id[rep(t.parent[v])]},
                              {"to", t.id[v]},
                              {"label", t.labels[t.parent_label[v]]}});
  }
  res.tree = parse_tree(doc);

  std::map<std::string, int> new_id;
  for (std::size_t v = 0; v < res.tree.vertex_count(); ++v)
    new_id[res.tree.id[v]] = static_cast<int>(v);
  for (int leaf : t.leaves) {
    int r = rep(leaf);
    auto it = new_id.find(t.id[r]);
    if (it == new_id.end() || !res.tree.is_leaf(it->second))
      throw internal_error("contraction did not map a leaf to a leaf");
    res.leaf_map.push_back({leaf, it->second});
  }
  if (res.leaf_map.size() != res.tree.leaves.size())
    throw internal_error("contraction changed the number of leaves");
  return res;
}

}  // namespace treetoric
