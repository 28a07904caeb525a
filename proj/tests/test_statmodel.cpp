#include <catch2/catch_amalgamated.hpp>

#include <set>
#include <vector>

#include <treetoric/treetoric.hpp>

#include "testutil.hpp"

using namespace treetoric;
using testutil::binomial_set;
using testutil::load_system;
using testutil::parse_binomial;

TEST_CASE("seed derivation") {
  CHECK(mix64(1) != mix64(2));
  CHECK(mix64(1) == mix64(1));

  // Within one master seed the mixer input is injective in the trial number,
  // so a hundred trials give a hundred distinct seeds.  (Across masters the
  // inputs can coincide, so no cross-master claim is made.)
  for (std::uint64_t master : {1ull, 2ull, 99ull}) {
    std::set<std::uint64_t> seeds;
    for (int trial = 0; trial < 100; ++trial) seeds.insert(trial_seed(master, trial));
    CHECK(seeds.size() == 100);
  }
  CHECK(trial_seed(1, 0) != trial_seed(2, 0));
}

TEST_CASE("parameter sampling sums to one per stage") {
  TreeSystem sys = load_system("binary4.json");
  for (std::uint64_t seed : {1ull, 7ull, 123456789ull}) {
    ParameterPoint point = sample_parameters(sys, seed);
    CHECK(point.value.size() == 14);
    for (std::size_t s = 0; s < sys.tree.stages.size(); ++s) {
      const auto& labels = sys.tree.stage_labels[s];
      if (labels.empty()) continue;
      Rat total = 0;
      for (int lab : labels) {
        const Rat& value = point.of(sys.label_var[lab]);
        CHECK(value > 0);
        CHECK(value <= 1);
        total += value;
      }
      CHECK(total == 1);
    }
  }

  // Pure function of (tree, seed).
  CHECK(sample_parameters(sys, 7).value == sample_parameters(sys, 7).value);
  CHECK(sample_parameters(sys, 7).value != sample_parameters(sys, 8).value);
}

TEST_CASE("stages with a single label get probability one") {
  TreeSystem sys = load_system("culture.json");
  ParameterPoint point = sample_parameters(sys, 5);
  const StagedTree& t = sys.tree;
  auto label_id = [&](const std::string& name) {
    for (std::size_t i = 0; i < t.labels.size(); ++i)
      if (t.labels[i] == name) return static_cast<int>(i);
    FAIL("no label " + name);
    return -1;
  };
  CHECK(point.of(sys.label_var[label_id("u0")]) == 1);
  CHECK(point.of(sys.label_var[label_id("o0")]) == 1);
  CHECK(point.of(sys.label_var[label_id("w0")]) == 1);
  CHECK(point.of(sys.label_var[label_id("g0")]) < 1);
}

TEST_CASE("leaf distributions are exact probability vectors") {
  for (const char* name : {"binary4.json", "culture.json", "order321.json"}) {
    TreeSystem sys = load_system(name);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      std::vector<Rat> dist = leaf_distribution(sys, sample_parameters(sys, seed));
      REQUIRE(dist.size() == sys.tree.leaves.size());
      Rat total = 0;
      for (const Rat& p : dist) {
        CHECK(p > 0);
        total += p;
      }
      CHECK(total == 1);
    }
  }
}

TEST_CASE("assembled basis vanishes on sampled distributions") {
  TreeSystem sys = load_system("binary4.json");
  std::vector<MarkedBinomial> basis = binomials_of(assemble_basis(sys));
  VanishReport report = vanishing_check(basis, sys, 25, 1);
  CHECK(report.all_vanish);
  CHECK(report.trials == 25);
  CHECK(report.failed_trial == -1);
}

TEST_CASE("non-kernel binomials are caught immediately") {
  TreeSystem sys = load_system("binary4.json");
  std::vector<MarkedBinomial> bogus = {
      parse_binomial(sys.ring, "p[0000]*p[0001]", "p[0010]*p[0011]")};
  VanishReport report = vanishing_check(bogus, sys, 25, 1);
  CHECK_FALSE(report.all_vanish);
  CHECK(report.failed_trial == 0);
  CHECK(report.failed_element == 0);
}

TEST_CASE("independence quadrics without conditioning or marginalization") {
  CIQuadrics ci = ci_quadrics({{2, 2, 2}, {2}, {1, 3}, {}});
  REQUIRE(ci.atoms.size() == 8);
  REQUIRE(ci.quadrics.size() == 6);
  CHECK(ci.quadrics[0] == parse_polynomial("p[000]*p[011] - p[001]*p[010]", ci.ring));
  for (const Polynomial& q : ci.quadrics) {
    REQUIRE(q.term_count() == 2);
    for (auto& [m, c] : q.terms()) {
      CHECK(m.degree() == 2);
      CHECK(m.is_squarefree());
    }
  }
}

TEST_CASE("independence quadrics with conditioning") {
  CIQuadrics ci = ci_quadrics({{2, 2, 2}, {1}, {2}, {3}});
  REQUIRE(ci.quadrics.size() == 2);
  CHECK(ci.quadrics[0] == parse_polynomial("p[000]*p[110] - p[010]*p[100]", ci.ring));
  CHECK(ci.quadrics[1] == parse_polynomial("p[001]*p[111] - p[011]*p[101]", ci.ring));
}

TEST_CASE("independence quadrics with marginalization") {
  CIQuadrics ci = ci_quadrics({{2, 2, 2}, {1}, {2}, {}});
  REQUIRE(ci.quadrics.size() == 1);
  Polynomial expected =
      (parse_polynomial("p[000] + p[001]", ci.ring) * parse_polynomial("p[110] + p[111]", ci.ring)) -
      (parse_polynomial("p[010] + p[011]", ci.ring) * parse_polynomial("p[100] + p[101]", ci.ring));
  CHECK(ci.quadrics[0] == expected);
}

TEST_CASE("independence statement validation") {
  CHECK_THROWS_AS(ci_quadrics({{}, {1}, {2}, {}}), input_error);
  CHECK_THROWS_AS(ci_quadrics({{2, 0}, {1}, {2}, {}}), input_error);
  CHECK_THROWS_AS(ci_quadrics({{2, 2}, {1}, {1}, {}}), input_error);      // overlap
  CHECK_THROWS_AS(ci_quadrics({{2, 2}, {1}, {3}, {}}), input_error);      // out of range
  CHECK_THROWS_AS(ci_quadrics({{2, 2}, {}, {2}, {}}), input_error);       // empty A
  CHECK_THROWS_AS(ci_quadrics({{2, 2, 2}, {0}, {2}, {}}), input_error);   // 1-based
}

TEST_CASE("contraction report for the cell-culture tree") {
  TreeSystem sys = load_system("culture.json");
  ContractionReport report = contraction_report(sys);

  CHECK(report.contraction.contracted.size() == 6);
  CHECK(report.original_stratified);
  CHECK(report.original_balanced);
  CHECK(report.contracted_balanced);
  REQUIRE(report.basis_transports.has_value());
  CHECK(*report.basis_transports);
  CHECK(report.degree2_spans_match);

  // The transported basis, written in the contracted tree's variables.
  TreeSystem contracted = make_system(report.contraction.tree);
  REQUIRE(report.transported_basis.has_value());
  CHECK(binomial_set(*report.transported_basis) ==
        binomial_set(std::vector<MarkedBinomial>{
            parse_binomial(contracted.ring, "p[000]*p[11]", "p[010]*p[10]"),
            parse_binomial(contracted.ring, "p[0010]*p[11]", "p[0110]*p[10]"),
            parse_binomial(contracted.ring, "p[0011]*p[11]", "p[0111]*p[10]"),
            parse_binomial(contracted.ring, "p[000]*p[0110]", "p[0010]*p[010]"),
            parse_binomial(contracted.ring, "p[000]*p[0111]", "p[0011]*p[010]"),
            parse_binomial(contracted.ring, "p[0010]*p[0111]", "p[0011]*p[0110]")}));
}

TEST_CASE("contraction report is trivial without only-child edges") {
  TreeSystem sys = load_system("order321.json");
  ContractionReport report = contraction_report(sys);
  CHECK(report.contraction.contracted.empty());
  CHECK(report.original_balanced);
  REQUIRE(report.basis_transports.has_value());
  CHECK(*report.basis_transports);
  CHECK(report.degree2_spans_match);
  CHECK(binomial_set(*report.transported_basis) == binomial_set(assemble_basis(sys)));
}

TEST_CASE("contraction report on a tree that is not stratified") {
  TreeSystem sys = load_system("culture_contracted.json");
  ContractionReport report = contraction_report(sys);
  CHECK(report.contraction.contracted.empty());
  CHECK_FALSE(report.original_stratified);
  CHECK_FALSE(report.basis_transports.has_value());
  CHECK(report.degree2_spans_match);  // both sides are the same tree
}
