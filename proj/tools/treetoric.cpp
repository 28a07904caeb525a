// Command line front end: validation, stage analysis, basis assembly and
// verification, the brute-force kernel oracle, model sampling, conditional
// independence quadrics, and only-child-edge contraction.  All output is a
// pure function of the arguments; exit code 0 = success, 1 = domain failure,
// 2 = bad input.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <treetoric/treetoric.hpp>

namespace tt = treetoric;

namespace {

struct Options {
  std::string input;
  bool json = false;
  int degree = 4;
  bool deep = false;
  bool against_groebner = false;
  int sample = 100;
  std::uint64_t seed = 1;
  std::vector<int> sizes, A, B, C;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw tt::input_error("cannot read input file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

tt::TreeSystem load_system(const Options& opt) {
  return tt::make_system(tt::parse_tree_text(read_file(opt.input)));
}

tt::json input_summary(const Options& opt, const tt::TreeSystem& sys) {
  return {{"file", opt.input},
          {"name", sys.tree.name},
          {"vertices", sys.tree.vertex_count()},
          {"edges", sys.tree.edge_count()},
          {"leaves", sys.tree.leaves.size()},
          {"depth", sys.tree.depth}};
}

void emit(const tt::json& doc) { std::cout << doc.dump(2) << "\n"; }

std::string id_list(const tt::StagedTree& t, const std::vector<int>& vertices) {
  std::string out = "[";
  for (std::size_t i = 0; i < vertices.size(); ++i)
    out += (i ? " " : "") + t.id[vertices[i]];
  return out + "]";
}

std::string label_list(const tt::StagedTree& t, const std::vector<int>& labels) {
  std::string out = "[";
  for (std::size_t i = 0; i < labels.size(); ++i) out += (i ? " " : "") + t.labels[labels[i]];
  return out + "]";
}

// --- validate ----------------------------------------------------------------

int cmd_validate(const Options& opt) {
  tt::TreeSystem sys = load_system(opt);
  const tt::StagedTree& t = sys.tree;
  if (opt.json) {
    tt::json stages = tt::json::array();
    for (std::size_t s = 0; s < t.stages.size(); ++s) {
      tt::json members = tt::json::array(), labels = tt::json::array();
      for (int v : t.stages[s]) members.push_back(t.id[v]);
      for (int lab : t.stage_labels[s]) labels.push_back(t.labels[lab]);
      stages.push_back({{"members", members}, {"labels", labels}});
    }
    emit({{"command", "validate"},
          {"input", input_summary(opt, sys)},
          {"results", {{"valid", true}, {"labels", t.labels.size()}, {"stages", stages}}},
          {"witnesses", tt::json::array()}});
    return 0;
  }
  std::cout << "ok: " << t.name << " (" << t.vertex_count() << " vertices, " << t.edge_count()
            << " edges, " << t.leaves.size() << " leaves, depth " << t.depth << ", "
            << t.labels.size() << " labels, " << t.stages.size() << " stages)\n";
  for (std::size_t s = 0; s < t.stages.size(); ++s)
    if (t.stages[s].size() >= 2 && !t.stage_labels[s].empty())
      std::cout << "stage: members " << id_list(t, t.stages[s]) << " labels "
                << label_list(t, t.stage_labels[s]) << "\n";
  return 0;
}

// --- analyze -----------------------------------------------------------------

int cmd_analyze(const Options& opt) {
  tt::TreeSystem sys = load_system(opt);
  const tt::StagedTree& t = sys.tree;
  tt::StratifiedCheck strat = tt::is_stratified(t);
  tt::BalanceCheck balance = tt::is_balanced(sys);
  std::vector<tt::Polynomial> interp = tt::interpolating_polys(sys);

  // Position classes within each stage: members with equal interpolating
  // polynomial.
  auto position_classes = [&](const std::vector<int>& members) {
    std::vector<std::vector<int>> classes;
    for (int v : members) {
      bool placed = false;
      for (auto& cls : classes)
        if (interp[cls.front()] == interp[v]) {
          cls.push_back(v);
          placed = true;
          break;
        }
      if (!placed) classes.push_back({v});
    }
    return classes;
  };

  if (opt.json) {
    tt::json stages = tt::json::array();
    for (std::size_t s = 0; s < t.stages.size(); ++s) {
      tt::json classes = tt::json::array();
      for (const auto& cls : position_classes(t.stages[s])) {
        tt::json ids = tt::json::array();
        for (int v : cls) ids.push_back(t.id[v]);
        classes.push_back(ids);
      }
      tt::json labels = tt::json::array();
      for (int lab : t.stage_labels[s]) labels.push_back(t.labels[lab]);
      stages.push_back({{"labels", labels}, {"position_classes", classes}});
    }
    tt::json witnesses = tt::json::array();
    if (!strat.ok) witnesses.push_back(strat.witness);
    if (!balance.balanced) witnesses.push_back(tt::describe(*balance.witness, sys));
    emit({{"command", "analyze"},
          {"input", input_summary(opt, sys)},
          {"results",
           {{"stratified", strat.ok},
            {"one_level", tt::is_one_level(t)},
            {"balanced", balance.balanced},
            {"same_position_shortcut", balance.same_position_shortcut},
            {"stages", stages}}},
          {"witnesses", witnesses}});
    return 0;
  }

  std::cout << "tree: " << t.name << "\n";
  std::cout << "stratified: " << (strat.ok ? "yes" : "no") << "\n";
  if (!strat.ok) std::cout << "witness: " << strat.witness << "\n";
  std::cout << "one-level: " << (tt::is_one_level(t) ? "yes" : "no") << "\n";
  std::cout << "balanced: " << (balance.balanced ? "yes" : "no")
            << (balance.same_position_shortcut ? " (same-position shortcut)" : "") << "\n";
  if (!balance.balanced) std::cout << "witness: " << tt::describe(*balance.witness, sys) << "\n";
  for (std::size_t s = 0; s < t.stages.size(); ++s) {
    if (t.stages[s].size() < 2 || t.stage_labels[s].empty()) continue;
    auto classes = position_classes(t.stages[s]);
    std::cout << "stage: members " << id_list(t, t.stages[s]) << " labels "
              << label_list(t, t.stage_labels[s]) << " position-classes " << classes.size()
              << "\n";
  }
  return 0;
}

// --- groebner ----------------------------------------------------------------

tt::json provenance_json(const tt::Provenance& p) {
  tt::json lifts = tt::json::array();
  for (auto& [k1, k2] : p.lifts) lifts.push_back({k1, k2});
  return {{"level", p.quad_level}, {"block", p.block},   {"pair", {p.a, p.b}},
          {"columns", {p.k1, p.k2}}, {"lifts", lifts}};
}

int cmd_groebner(const Options& opt) {
  tt::TreeSystem sys = load_system(opt);
  std::vector<tt::BasisElement> basis = tt::assemble_basis(sys);
  if (opt.json) {
    tt::json list = tt::json::array();
    for (const auto& e : basis)
      list.push_back({{"lead", to_string(e.binomial.lead, sys.ring)},
                      {"trail", to_string(e.binomial.trail, sys.ring)},
                      {"provenance", provenance_json(e.provenance)}});
    emit({{"command", "groebner"},
          {"input", input_summary(opt, sys)},
          {"results", {{"count", basis.size()}, {"basis", list}}},
          {"witnesses", tt::json::array()}});
    return 0;
  }
  std::cout << "basis: " << basis.size() << " elements\n";
  for (const auto& e : basis) std::cout << to_string(e.binomial, sys.ring) << "\n";
  return 0;
}

// --- verify ------------------------------------------------------------------

int cmd_verify(const Options& opt) {
  tt::TreeSystem sys = load_system(opt);
  std::vector<tt::BasisElement> basis = tt::assemble_basis(sys);
  std::vector<tt::MarkedBinomial> binomials = tt::binomials_of(basis);
  tt::TermOrder ord = tt::path_order(sys);
  tt::MonomialMap mm = tt::monomial_map(sys);

  bool membership = true;
  for (const auto& b : binomials)
    if (mm.apply(b.lead) != mm.apply(b.trail)) membership = false;
  tt::MarkingCheck marking = tt::verify_marking(binomials, ord);
  tt::BuchbergerResult buchberger =
      marking.ok ? tt::buchberger_check(binomials, ord) : tt::BuchbergerResult{false, -1, -1, {}};
  tt::LeadProfile profile = tt::initial_ideal_profile(binomials, ord);

  struct Line {
    std::string name;
    bool pass;
    std::string detail;
  };
  std::vector<Line> lines{{"membership", membership, ""},
                          {"marking", marking.ok, ""},
                          {"buchberger", buchberger.ok, ""},
                          {"initial-quadratic", profile.all_quadratic, ""},
                          {"initial-squarefree", profile.all_squarefree, ""}};
  if (opt.deep) {
    for (int d = 1; d <= opt.degree; ++d) {
      tt::FiberPartition fp = tt::fiber_partition(mm, d);
      tt::CoverageResult cover = tt::kernel_covered_by(fp, binomials, ord);
      std::size_t standard = tt::standard_monomial_count(mm.vars, binomials, d);
      lines.push_back({"coverage degree " + std::to_string(d), cover.covered, ""});
      lines.push_back({"counts degree " + std::to_string(d), standard == fp.fiber_count(),
                       std::to_string(fp.fiber_count()) + " fibers, " + std::to_string(standard) +
                           " standard monomials"});
    }
  }
  bool all = true;
  for (const auto& line : lines) all = all && line.pass;

  if (opt.json) {
    tt::json checks = tt::json::array();
    for (const auto& line : lines)
      checks.push_back({{"check", line.name}, {"pass", line.pass}, {"detail", line.detail}});
    emit({{"command", "verify"},
          {"input", input_summary(opt, sys)},
          {"results", {{"count", basis.size()}, {"checks", checks}, {"verdict", all}}},
          {"witnesses", tt::json::array()}});
  } else {
    std::cout << "basis: " << basis.size() << " elements\n";
    for (const auto& line : lines) {
      std::cout << line.name << ": " << (line.pass ? "PASS" : "FAIL");
      if (!line.detail.empty()) std::cout << " (" << line.detail << ")";
      std::cout << "\n";
    }
    std::cout << "verdict: " << (all ? "PASS" : "FAIL") << "\n";
  }
  return all ? 0 : 1;
}

// --- oracle ------------------------------------------------------------------

int cmd_oracle(const Options& opt) {
  tt::TreeSystem sys = load_system(opt);
  tt::MonomialMap mm = tt::monomial_map(sys);
  tt::TermOrder ord = tt::path_order(sys);

  std::vector<tt::MarkedBinomial> basis;
  if (opt.against_groebner) basis = tt::binomials_of(tt::assemble_basis(sys));

  tt::json degrees = tt::json::array();
  std::ostringstream text;
  for (int d = 1; d <= opt.degree; ++d) {
    tt::FiberPartition fp = tt::fiber_partition(mm, d);
    std::vector<tt::MarkedBinomial> kernel = tt::kernel_binomials(fp, ord);
    tt::json entry{{"degree", d},
                   {"monomials", fp.monomial_count},
                   {"fibers", fp.fiber_count()},
                   {"kernel", kernel.size()}};
    text << "degree " << d << ": monomials " << fp.monomial_count << ", fibers "
         << fp.fiber_count() << ", kernel " << kernel.size() << "\n";
    if (kernel.size() <= 200) {
      tt::json list = tt::json::array();
      for (const auto& k : kernel) {
        list.push_back(to_string(k, sys.ring));
        text << "  " << to_string(k, sys.ring) << "\n";
      }
      entry["kernel_binomials"] = list;
    }
    if (opt.against_groebner) {
      tt::CoverageResult cover = tt::kernel_covered_by(fp, basis, ord);
      std::size_t standard = tt::standard_monomial_count(mm.vars, basis, d);
      entry["covered"] = cover.covered;
      entry["standard_monomials"] = standard;
      text << "  covered: " << (cover.covered ? "yes" : "no") << ", standard monomials "
           << standard << "\n";
      if (!cover.covered)
        text << "  counterexample: " << to_string(*cover.counterexample, sys.ring) << "\n";
    }
    degrees.push_back(entry);
  }

  if (opt.json) {
    emit({{"command", "oracle"},
          {"input", input_summary(opt, sys)},
          {"results", {{"degrees", degrees}}},
          {"witnesses", tt::json::array()}});
  } else {
    std::cout << "tree: " << sys.tree.name << "\n" << text.str();
  }
  return 0;
}

// --- model -------------------------------------------------------------------

int cmd_model(const Options& opt) {
  tt::TreeSystem sys = load_system(opt);
  std::vector<tt::MarkedBinomial> binomials = tt::binomials_of(tt::assemble_basis(sys));
  tt::VanishReport vanish = tt::vanishing_check(binomials, sys, opt.sample, opt.seed);
  bool sums = true;
  for (int trial = 0; trial < opt.sample; ++trial) {
    tt::ParameterPoint point = tt::sample_parameters(sys, tt::trial_seed(opt.seed, trial));
    tt::Rat total = 0;
    for (const tt::Rat& p : tt::leaf_distribution(sys, point)) total += p;
    if (total != 1) sums = false;
  }
  bool all = vanish.all_vanish && sums;
  if (opt.json) {
    emit({{"command", "model"},
          {"input", input_summary(opt, sys)},
          {"results",
           {{"basis", binomials.size()},
            {"trials", opt.sample},
            {"seed", opt.seed},
            {"vanishing", vanish.all_vanish},
            {"distribution_sums", sums},
            {"verdict", all}}},
          {"witnesses", tt::json::array()}});
  } else {
    std::cout << "tree: " << sys.tree.name << "\n";
    std::cout << "basis: " << binomials.size() << " elements\n";
    std::cout << "trials: " << opt.sample << " (seed " << opt.seed << ")\n";
    std::cout << "vanishing: " << (vanish.all_vanish ? "PASS" : "FAIL") << "\n";
    std::cout << "distribution-sums: " << (sums ? "PASS" : "FAIL") << "\n";
  }
  return all ? 0 : 1;
}

// --- ci ----------------------------------------------------------------------

int cmd_ci(const Options& opt) {
  tt::CIStatement stmt{opt.sizes, opt.A, opt.B, opt.C};
  tt::CIQuadrics ci = tt::ci_quadrics(stmt);
  if (opt.json) {
    tt::json list = tt::json::array();
    for (const auto& q : ci.quadrics) list.push_back(to_string(q, ci.ring));
    emit({{"command", "ci"},
          {"input", {{"sizes", opt.sizes}, {"A", opt.A}, {"B", opt.B}, {"C", opt.C}}},
          {"results", {{"count", ci.quadrics.size()}, {"quadrics", list}}},
          {"witnesses", tt::json::array()}});
    return 0;
  }
  std::cout << "quadrics: " << ci.quadrics.size() << "\n";
  for (const auto& q : ci.quadrics) std::cout << to_string(q, ci.ring) << "\n";
  return 0;
}

// --- contract ----------------------------------------------------------------

int cmd_contract(const Options& opt) {
  tt::TreeSystem sys = load_system(opt);
  tt::ContractionReport report = tt::contraction_report(sys);
  const tt::StagedTree& t = sys.tree;
  const tt::StagedTree& c = report.contraction.tree;
  if (opt.json) {
    tt::json leaf_map = tt::json::array();
    for (auto& [from, to] : report.contraction.leaf_map)
      leaf_map.push_back({{"from", t.id[from]}, {"to", c.id[to]}});
    tt::json results{{"only_child_edges", report.contraction.contracted.size()},
                     {"contracted_tree", tt::render_tree(c)},
                     {"leaf_map", leaf_map},
                     {"original_stratified", report.original_stratified},
                     {"original_balanced", report.original_balanced},
                     {"contracted_balanced", report.contracted_balanced},
                     {"degree2_spans_match", report.degree2_spans_match}};
    if (report.basis_transports) results["basis_transports"] = *report.basis_transports;
    emit({{"command", "contract"},
          {"input", input_summary(opt, sys)},
          {"results", results},
          {"witnesses", tt::json::array()}});
    return 0;
  }
  std::cout << "tree: " << t.name << "\n";
  std::cout << "only-child edges: " << report.contraction.contracted.size() << "\n";
  std::cout << "contracted: " << c.name << " (" << c.vertex_count() << " vertices, "
            << c.leaves.size() << " leaves, depth " << c.depth << ")\n";
  std::cout << "leaf map:";
  for (auto& [from, to] : report.contraction.leaf_map)
    std::cout << " " << t.id[from] << "->" << c.id[to];
  std::cout << "\n";
  std::cout << "original: stratified " << (report.original_stratified ? "yes" : "no")
            << ", balanced " << (report.original_balanced ? "yes" : "no") << "\n";
  std::cout << "contracted: balanced " << (report.contracted_balanced ? "yes" : "no") << "\n";
  if (report.basis_transports)
    std::cout << "basis-transport: " << (*report.basis_transports ? "PASS" : "FAIL") << "\n";
  std::cout << "degree2-span-match: " << (report.degree2_spans_match ? "PASS" : "FAIL") << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact toric algebra for staged tree models"};
  app.require_subcommand(1);
  Options opt;

  auto add_input = [&](CLI::App* sub) {
    sub->add_option("--input", opt.input, "tree document (JSON)")->required();
    sub->add_flag("--json", opt.json, "emit a JSON report");
  };

  CLI::App* validate = app.add_subcommand("validate", "parse and validate a tree document");
  add_input(validate);
  CLI::App* analyze = app.add_subcommand("analyze", "stages, positions, balance");
  add_input(analyze);
  CLI::App* groebner = app.add_subcommand("groebner", "assemble the lifted quadric basis");
  add_input(groebner);
  CLI::App* verify = app.add_subcommand("verify", "check the assembled basis");
  add_input(verify);
  verify->add_flag("--deep", opt.deep, "also run the kernel oracle");
  verify->add_option("--degree", opt.degree, "oracle degree bound (default 4)");
  CLI::App* oracle = app.add_subcommand("oracle", "brute-force kernel by fiber enumeration");
  add_input(oracle);
  oracle->add_option("--degree", opt.degree, "degree bound (default 4)");
  oracle->add_flag("--against-groebner", opt.against_groebner,
                   "check the assembled basis against the oracle");
  CLI::App* model = app.add_subcommand("model", "sampled vanishing and distribution checks");
  add_input(model);
  model->add_option("--sample", opt.sample, "number of sampled points (default 100)");
  model->add_option("--seed", opt.seed, "master seed (default 1)");
  CLI::App* ci = app.add_subcommand("ci", "conditional independence quadrics");
  ci->add_flag("--json", opt.json, "emit a JSON report");
  ci->add_option("--sizes", opt.sizes, "state counts, comma separated")
      ->delimiter(',')
      ->required();
  ci->add_option("--A", opt.A, "first block, comma separated")->delimiter(',')->required();
  ci->add_option("--B", opt.B, "second block, comma separated")->delimiter(',')->required();
  ci->add_option("--C", opt.C, "conditioning block, comma separated")->delimiter(',');
  CLI::App* contract = app.add_subcommand("contract", "contract only-child edges");
  add_input(contract);

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) return cmd_validate(opt);
    if (analyze->parsed()) return cmd_analyze(opt);
    if (groebner->parsed()) return cmd_groebner(opt);
    if (verify->parsed()) return cmd_verify(opt);
    if (oracle->parsed()) return cmd_oracle(opt);
    if (model->parsed()) return cmd_model(opt);
    if (ci->parsed()) return cmd_ci(opt);
    if (contract->parsed()) return cmd_contract(opt);
  } catch (const tt::input_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const tt::domain_error& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
