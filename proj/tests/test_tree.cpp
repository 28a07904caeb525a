#include <catch2/catch_amalgamated.hpp>

#include <set>

#include <treetoric/treetoric.hpp>

#include "testutil.hpp"

using namespace treetoric;
using testutil::load_tree;

namespace {

json strip_name(json doc) {
  doc.erase("name");
  return doc;
}

}  // namespace

TEST_CASE("parse the depth-4 binary fixture") {
  StagedTree t = load_tree("binary4.json");
  CHECK(t.vertex_count() == 31);
  CHECK(t.edge_count() == 30);
  CHECK(t.leaves.size() == 16);
  CHECK(t.depth == 4);
  CHECK(t.labels.size() == 14);
  CHECK(t.stages.size() == 8);

  // Canonical indices agree with the readable vertex ids of this fixture.
  for (std::size_t v = 1; v < t.vertex_count(); ++v) CHECK(t.index_string(v) == t.id[v]);

  // Leaves in canonical order.
  CHECK(t.id[t.leaves.front()] == "0000");
  CHECK(t.id[t.leaves.back()] == "1111");

  // Derived stages: the two level-3 stages have four members each.
  auto stage_ids = [&](int v) {
    std::set<std::string> out;
    for (int m : t.stages[t.stage_of[v]]) out.insert(t.id[m]);
    return out;
  };
  int first = t.children[0][0];  // vertex "0"
  CHECK(stage_ids(first) == std::set<std::string>{"0"});
  CHECK(stage_ids(t.children[first][0]) == std::set<std::string>{"00", "10"});
  int v000 = 0;
  for (std::size_t v = 0; v < t.vertex_count(); ++v)
    if (t.id[v] == "000") v000 = static_cast<int>(v);
  CHECK(stage_ids(v000) == std::set<std::string>{"000", "010", "100", "110"});
}

TEST_CASE("single vertex tree") {
  StagedTree t = parse_tree_text(R"({"name": "point", "root": "r", "edges": []})");
  CHECK(t.vertex_count() == 1);
  CHECK(t.leaves == std::vector<int>{0});
  CHECK(t.depth == 0);
  CHECK(t.index[0].empty());
  CHECK(is_stratified(t).ok);
  CHECK_FALSE(is_one_level(t));
}

TEST_CASE("structural validation errors") {
  auto parse = [](const std::string& text) { return parse_tree_text(text); };

  SECTION("malformed JSON") {
    CHECK_THROWS_AS(parse("{"), input_error);
    CHECK_THROWS_AS(parse(R"({"root": "r"})"), input_error);
    CHECK_THROWS_AS(parse(R"({"root": 3, "edges": []})"), input_error);
  }
  SECTION("two parents") {
    CHECK_THROWS_WITH(
        parse(R"({"root": "r", "edges": [
          {"from": "r", "to": "x", "label": "a"},
          {"from": "r", "to": "y", "label": "b"},
          {"from": "y", "to": "x", "label": "c"}]})"),
        Catch::Matchers::ContainsSubstring("two parents"));
  }
  SECTION("edge into the root") {
    CHECK_THROWS_WITH(parse(R"({"root": "r", "edges": [{"from": "x", "to": "r", "label": "a"}]})"),
                      Catch::Matchers::ContainsSubstring("root"));
  }
  SECTION("unreachable component") {
    CHECK_THROWS_WITH(
        parse(R"({"root": "r", "edges": [
          {"from": "r", "to": "x", "label": "a"},
          {"from": "u", "to": "v", "label": "b"}]})"),
        Catch::Matchers::ContainsSubstring("not reachable"));
  }
  SECTION("repeated label at one vertex") {
    CHECK_THROWS_WITH(
        parse(R"({"root": "r", "edges": [
          {"from": "r", "to": "x", "label": "a"},
          {"from": "r", "to": "y", "label": "a"}]})"),
        Catch::Matchers::ContainsSubstring("repeats"));
  }
  SECTION("label sets neither equal nor disjoint") {
    CHECK_THROWS_WITH(
        parse(R"({"root": "r", "edges": [
          {"from": "r", "to": "x", "label": "a"},
          {"from": "r", "to": "y", "label": "b"},
          {"from": "x", "to": "x0", "label": "c"},
          {"from": "x", "to": "x1", "label": "d"},
          {"from": "y", "to": "y0", "label": "c"},
          {"from": "y", "to": "y1", "label": "e"}]})"),
        Catch::Matchers::ContainsSubstring("different label sets"));
  }
}

TEST_CASE("declared stages are checked against derivation") {
  std::string base = R"({"root": "r", "edges": [
      {"from": "r", "to": "x", "label": "a"},
      {"from": "r", "to": "y", "label": "b"},
      {"from": "x", "to": "x0", "label": "c"},
      {"from": "x", "to": "x1", "label": "d"},
      {"from": "y", "to": "y0", "label": "c"},
      {"from": "y", "to": "y1", "label": "d"}],
      "stages": )";
  CHECK_NOTHROW(parse_tree_text(base + R"([["x", "y"]]})"));
  CHECK_THROWS_WITH(parse_tree_text(base + R"([["x"]]})"),
                    Catch::Matchers::ContainsSubstring("declared stage"));
  CHECK_THROWS_WITH(parse_tree_text(base + R"([["x", "zz"]]})"),
                    Catch::Matchers::ContainsSubstring("unknown vertex"));
  CHECK_THROWS_WITH(parse_tree_text(base + R"([["x", "x0"]]})"),
                    Catch::Matchers::ContainsSubstring("declared stage"));
}

TEST_CASE("stratified predicate") {
  CHECK(is_stratified(load_tree("binary4.json")).ok);
  CHECK(is_stratified(load_tree("fan3a.json")).ok);
  CHECK(is_stratified(load_tree("fan3b.json")).ok);
  CHECK(is_stratified(load_tree("order321.json")).ok);
  CHECK(is_stratified(load_tree("culture.json")).ok);

  StratifiedCheck check = is_stratified(load_tree("culture_contracted.json"));
  CHECK_FALSE(check.ok);
  CHECK_THAT(check.witness, Catch::Matchers::ContainsSubstring("level"));

  // A stage spanning two levels: chain with equal label sets at both ends.
  StagedTree t = parse_tree_text(R"({"root": "r", "edges": [
      {"from": "r", "to": "x", "label": "a"},
      {"from": "r", "to": "y", "label": "b"},
      {"from": "x", "to": "x0", "label": "a"},
      {"from": "x", "to": "x1", "label": "b"},
      {"from": "x0", "to": "q", "label": "c"},
      {"from": "x1", "to": "w", "label": "d"}]})");
  StratifiedCheck spanning = is_stratified(t);
  CHECK_FALSE(spanning.ok);
}

TEST_CASE("sublevel truncation") {
  StagedTree t = load_tree("binary4.json");

  StagedTree level3 = sublevel_tree(t, 3);
  CHECK(level3.depth == 3);
  CHECK(level3.leaves.size() == 8);
  CHECK(level3.labels.size() == 10);  // s0..s9 survive
  CHECK(level3.name == "binary4^3");

  StagedTree level1 = sublevel_tree(t, 1);
  CHECK(is_one_level(level1));
  CHECK(level1.leaves.size() == 2);

  CHECK(strip_name(render_tree(sublevel_tree(t, t.depth))) == strip_name(render_tree(t)));
  CHECK(sublevel_tree(t, 0).vertex_count() == 1);

  // Composition: the lower cut wins.
  CHECK(strip_name(render_tree(sublevel_tree(level3, 2))) ==
        strip_name(render_tree(sublevel_tree(t, 2))));
  CHECK_THROWS_AS(sublevel_tree(t, -1), input_error);
}

TEST_CASE("contraction of only-child edges") {
  StagedTree t = load_tree("culture.json");
  CHECK(only_child_edges(t).size() == 6);

  ContractionResult res = contract_only_child_edges(t);
  CHECK(res.contracted.size() == 6);
  CHECK(res.leaf_map.size() == 8);
  CHECK(strip_name(render_tree(res.tree)) ==
        strip_name(render_tree(load_tree("culture_contracted.json"))));

  // The bijection sends each deep leaf to the survivor of its merge chain.
  auto mapped = [&](const std::string& from) {
    for (auto& [a, b] : res.leaf_map)
      if (t.id[a] == from) return res.tree.id[b];
    return std::string("?");
  };
  CHECK(mapped("0000") == "000");
  CHECK(mapped("1000") == "10");
  CHECK(mapped("1100") == "11");
  CHECK(mapped("0011") == "0011");

  // Idempotent: contracting again changes nothing.
  ContractionResult again = contract_only_child_edges(res.tree);
  CHECK(again.contracted.empty());
  CHECK(strip_name(render_tree(again.tree)) == strip_name(render_tree(res.tree)));
}

TEST_CASE("contraction collapses chains to a point") {
  StagedTree chain = parse_tree_text(R"({"root": "r", "edges": [
      {"from": "r", "to": "a", "label": "u"},
      {"from": "a", "to": "b", "label": "v"}]})");
  ContractionResult res = contract_only_child_edges(chain);
  CHECK(res.tree.vertex_count() == 1);
  CHECK(res.leaf_map == std::vector<std::pair<int, int>>{{2, 0}});
  CHECK(res.tree.index[0].empty());
}

TEST_CASE("contraction is the identity without only-child edges") {
  for (const char* name : {"binary4.json", "order321.json", "order312.json", "fan3a.json"}) {
    StagedTree t = load_tree(name);
    CHECK(only_child_edges(t).empty());
    ContractionResult res = contract_only_child_edges(t);
    CHECK(strip_name(render_tree(res.tree)) == strip_name(render_tree(t)));
  }
}

TEST_CASE("render and reparse is stable") {
  for (const char* name : {"binary4.json", "fan3a.json", "fan3b.json", "order321.json",
                           "order312.json", "culture.json", "culture_contracted.json"}) {
    StagedTree t = load_tree(name);
    json doc = render_tree(t);
    CHECK(render_tree(parse_tree(doc)) == doc);
  }
}

TEST_CASE("random balanced trees parse and are stratified") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    StagedTree t = parse_tree(testutil::random_balanced_tree_doc(seed));
    CHECK(is_stratified(t).ok);
    CHECK(t.leaves.size() >= 2);
    CHECK(t.depth >= 2);
    json doc = render_tree(t);
    CHECK(render_tree(parse_tree(doc)) == doc);
  }
}
