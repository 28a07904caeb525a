#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "testutil.hpp"

namespace {

struct CliResult {
  int exit_code = -1;
  std::string output;  // stdout and stderr, merged

  std::vector<std::string> lines() const {
    std::vector<std::string> out;
    std::istringstream in(output);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
  }

  bool contains(const std::string& needle) const {
    return output.find(needle) != std::string::npos;
  }
};

CliResult run_cli(const std::string& args) {
  const std::string exe = TREETORIC_CLI;  // tool path baked in by the build

  static int counter = 0;
  std::filesystem::path capture =
      std::filesystem::temp_directory_path() / ("treetoric_cli_" + std::to_string(++counter));
  std::string command = "\"" + exe + "\" " + args + " > " + capture.string() + " 2>&1";

  int status = std::system(command.c_str());
  REQUIRE(status != -1);

  CliResult result;
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(capture);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  result.output = buffer.str();
  std::filesystem::remove(capture);
  return result;
}

std::string fixture(const std::string& name) { return testutil::fixture_path(name); }

}  // namespace

TEST_CASE("validate reports the tree summary") {
  CliResult r = run_cli("validate --input " + fixture("binary4.json"));
  CHECK(r.exit_code == 0);
  REQUIRE_FALSE(r.lines().empty());
  CHECK(r.lines()[0] == "ok: binary4 (31 vertices, 30 edges, 16 leaves, depth 4, 14 labels, 8 stages)");
  CHECK(r.contains("stage: members [00 10] labels [s6 s7]"));
  CHECK(r.contains("stage: members [001 011 101 111] labels [s12 s13]"));
}

TEST_CASE("validate rejects bad input with exit code 2") {
  CliResult missing = run_cli("validate --input /nonexistent/tree.json");
  CHECK(missing.exit_code == 2);
  CHECK(missing.contains("cannot read input file"));

  std::filesystem::path bad = std::filesystem::temp_directory_path() / "treetoric_bad_input.json";
  {
    std::ofstream out(bad);
    out << "{ this is not json";
  }
  CliResult malformed = run_cli("validate --input " + bad.string());
  std::filesystem::remove(bad);
  CHECK(malformed.exit_code == 2);
  CHECK(malformed.contains("input error"));
}

TEST_CASE("analyze prints balance verdicts and witnesses") {
  CliResult balanced = run_cli("analyze --input " + fixture("binary4.json"));
  CHECK(balanced.exit_code == 0);
  CHECK(balanced.contains("stratified: yes"));
  CHECK(balanced.contains("one-level: no"));
  CHECK(balanced.contains("balanced: yes (same-position shortcut)"));

  CliResult unbalanced = run_cli("analyze --input " + fixture("fan3a.json"));
  CHECK(unbalanced.exit_code == 0);
  CHECK(unbalanced.contains("balanced: no"));
  CHECK(unbalanced.contains("witness: stage pair ('0', '1'), labels #0,#1"));

  CliResult no_shortcut = run_cli("analyze --input " + fixture("order321.json"));
  CHECK(no_shortcut.exit_code == 0);
  CHECK(no_shortcut.contains("balanced: yes\n"));
  CHECK(no_shortcut.contains("position-classes 2"));
}

TEST_CASE("groebner emits the assembled basis") {
  CliResult r = run_cli("groebner --input " + fixture("binary4.json"));
  CHECK(r.exit_code == 0);
  std::vector<std::string> lines = r.lines();
  REQUIRE(lines.size() == 21);
  CHECK(lines[0] == "basis: 20 elements");
  CHECK(r.contains("p[0000]*p[1011] - p[0011]*p[1000]"));

  // Byte-identical across runs.
  CliResult again = run_cli("groebner --input " + fixture("binary4.json"));
  CHECK(again.output == r.output);
}

TEST_CASE("groebner refuses unbalanced trees with exit code 1") {
  CliResult r = run_cli("groebner --input " + fixture("fan3a.json"));
  CHECK(r.exit_code == 1);
  CHECK(r.contains("domain error"));
  CHECK(r.contains("balanced"));
}

TEST_CASE("verify runs the full check list") {
  CliResult r = run_cli("verify --input " + fixture("binary4.json") + " --deep --degree 3");
  CHECK(r.exit_code == 0);
  CHECK(r.contains("membership: PASS"));
  CHECK(r.contains("marking: PASS"));
  CHECK(r.contains("buchberger: PASS"));
  CHECK(r.contains("initial-quadratic: PASS"));
  CHECK(r.contains("initial-squarefree: PASS"));
  CHECK(r.contains("coverage degree 3: PASS"));
  CHECK(r.contains("counts degree 2: PASS (116 fibers, 116 standard monomials)"));
  CHECK(r.contains("verdict: PASS"));
}

TEST_CASE("oracle reports fibers and kernels per degree") {
  CliResult r = run_cli("oracle --input " + fixture("fan3b.json") + " --degree 2");
  CHECK(r.exit_code == 0);
  CHECK(r.contains("degree 1: monomials 16, fibers 16, kernel 0"));
  CHECK(r.contains("degree 2: monomials 136, fibers 124, kernel 12"));
  CHECK(r.contains("p[200]*p[211] - p[201]*p[210]"));

  CliResult against =
      run_cli("oracle --input " + fixture("binary4.json") + " --degree 2 --against-groebner");
  CHECK(against.exit_code == 0);
  CHECK(against.contains("covered: yes, standard monomials 116"));
}

TEST_CASE("model checks sampled distributions") {
  CliResult r = run_cli("model --input " + fixture("binary4.json") + " --sample 10 --seed 3");
  CHECK(r.exit_code == 0);
  CHECK(r.contains("basis: 20 elements"));
  CHECK(r.contains("trials: 10 (seed 3)"));
  CHECK(r.contains("vanishing: PASS"));
  CHECK(r.contains("distribution-sums: PASS"));
}

TEST_CASE("ci emits independence quadrics") {
  CliResult r = run_cli("ci --sizes 2,2,2 --A 2 --B 1,3");
  CHECK(r.exit_code == 0);
  std::vector<std::string> lines = r.lines();
  REQUIRE(lines.size() == 7);
  CHECK(lines[0] == "quadrics: 6");
  CHECK(lines[1] == "p[000]*p[011] - p[001]*p[010]");

  CliResult overlap = run_cli("ci --sizes 2,2 --A 1 --B 1");
  CHECK(overlap.exit_code == 2);
}

TEST_CASE("contract reports the leaf bijection and span comparison") {
  CliResult r = run_cli("contract --input " + fixture("culture.json"));
  CHECK(r.exit_code == 0);
  CHECK(r.contains("only-child edges: 6"));
  CHECK(r.contains("leaf map: 0000->000 0010->0010 0011->0011 0100->010 "
                   "0110->0110 0111->0111 1000->10 1100->11"));
  CHECK(r.contains("original: stratified yes, balanced yes"));
  CHECK(r.contains("basis-transport: PASS"));
  CHECK(r.contains("degree2-span-match: PASS"));
}

TEST_CASE("json reports are machine readable") {
  CliResult validate = run_cli("validate --input " + fixture("binary4.json") + " --json");
  CHECK(validate.exit_code == 0);
  nlohmann::json doc = nlohmann::json::parse(validate.output);
  CHECK(doc["command"] == "validate");
  CHECK(doc["input"]["vertices"] == 31);
  CHECK(doc["results"]["valid"] == true);

  CliResult groebner = run_cli("groebner --input " + fixture("binary4.json") + " --json");
  nlohmann::json basis = nlohmann::json::parse(groebner.output);
  CHECK(basis["results"]["count"] == 20);
  REQUIRE(basis["results"]["basis"].size() == 20);
  CHECK(basis["results"]["basis"][0].contains("provenance"));

  CliResult verify = run_cli("verify --input " + fixture("order312.json") + " --json");
  nlohmann::json report = nlohmann::json::parse(verify.output);
  CHECK(report["results"]["verdict"] == true);
  CHECK(report["results"]["count"] == 6);
}

TEST_CASE("usage errors do not look like successes") {
  CHECK(run_cli("").exit_code != 0);
  CHECK(run_cli("frobnicate").exit_code != 0);
  CHECK(run_cli("validate").exit_code != 0);  // --input is required
}
