#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "interpolation.hpp"
#include "oracle.hpp"
#include "ring.hpp"
#include "span.hpp"
#include "system.hpp"
#include "tfp.hpp"
#include "tree.hpp"

namespace treetoric {

// Mixes a 64-bit value; used to derive independent per-trial seeds from a
// master seed without coupling nearby seeds.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// An exact rational parameter assignment: one value per label, the values of
// each stage's label set summing to 1.
struct ParameterPoint {
  std::map<VarId, Rat> value;

  const Rat& of(VarId label) const {
    auto it = value.find(label);
    if (it == value.end()) throw internal_error("label has no sampled value");
    return it->second;
  }
};

// Samples an interior point of the parameter space: for every stage with k
// labels, k positive numerators are drawn and normalized exactly, so the
// values are rationals summing to 1 and shared across the stage's vertices.
// Draws happen in stage order, labels in stage label order, making the point
// a pure function of (tree, seed).
inline ParameterPoint sample_parameters(const TreeSystem& sys, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  ParameterPoint point;
  for (std::size_t s = 0; s < sys.tree.stages.size(); ++s) {
    const auto& labels = sys.tree.stage_labels[s];
    if (labels.empty()) continue;  // the leaf stage carries no labels
    if (labels.size() == 1) {
      point.value[sys.label_var[labels.front()]] = 1;
      continue;
    }
    // Numerators in [1, cap]; cap keeps denominators modest and printable.
    std::uint64_t cap = std::max<std::uint64_t>(2, 1000 / labels.size());
    std::vector<std::uint64_t> numerators;
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      numerators.push_back(1 + rng() % cap);
      total += numerators.back();
    }
    for (std::size_t i = 0; i < labels.size(); ++i)
      point.value[sys.label_var[labels[i]]] = Rat(numerators[i], total);
  }
  return point;
}

// The outcome distribution: per leaf, the product of the sampled label values
// along its path.  For any valid parameter point these sum to exactly 1.
inline std::vector<Rat> leaf_distribution(const TreeSystem& sys, const ParameterPoint& point) {
  std::vector<Rat> out;
  for (int leaf : sys.tree.leaves) {
    Rat p = 1;
    for (int v = leaf; v != 0; v = sys.tree.parent[v])
      p *= point.of(sys.label_var[sys.tree.parent_label[v]]);
    out.push_back(std::move(p));
  }
  return out;
}

struct VanishReport {
  bool all_vanish = true;
  int trials = 0;
  int failed_trial = -1;
  int failed_element = -1;
};

// Per-trial seed derived from a master seed; shared by every sampler so that
// a (seed, trial) pair always names the same parameter point.
inline std::uint64_t trial_seed(std::uint64_t master, int trial) {
  return mix64(master ^ (0x5eedull + trial));
}

// Evaluates each binomial at the outcome distributions of sampled parameter
// points (path variable -> leaf probability) and demands exact zero.  Trial
// seeds derive deterministically from the master seed.
inline VanishReport vanishing_check(const std::vector<MarkedBinomial>& binomials,
                                    const TreeSystem& sys, int trials, std::uint64_t seed) {
  VanishReport report;
  report.trials = trials;
  for (int trial = 0; trial < trials; ++trial) {
    ParameterPoint point = sample_parameters(sys, trial_seed(seed, trial));
    std::vector<Rat> dist = leaf_distribution(sys, point);
    std::map<VarId, Rat> leaf_value;
    for (std::size_t i = 0; i < sys.tree.leaves.size(); ++i)
      leaf_value[sys.leaf_var(sys.tree.leaves[i])] = dist[i];
    auto eval = [&](const Monomial& m) {
      Rat out = 1;
      for (auto& [v, e] : m.factors()) {
        auto it = leaf_value.find(v);
        if (it == leaf_value.end()) throw internal_error("binomial variable is not a leaf variable");
        for (int k = 0; k < e; ++k) out *= it->second;
      }
      return out;
    };
    for (std::size_t i = 0; i < binomials.size(); ++i)
      if (eval(binomials[i].lead) != eval(binomials[i].trail))
        return {false, trials, trial, static_cast<int>(i)};
  }
  return report;
}

// --- conditional independence quadrics --------------------------------------

// A conditional independence statement X_A independent of X_B given X_C for a
// discrete vector (X_1 .. X_n) with the given state counts.  Indices are
// 1-based; C may be empty; variables outside A, B, C are marginalized.
struct CIStatement {
  std::vector<int> sizes;
  std::vector<int> A, B, C;
};

struct CIQuadrics {
  Ring ring;                  // one variable per joint outcome
  std::vector<VarId> atoms;   // row-major over outcomes
  std::vector<Polynomial> quadrics;
};

namespace detail {

// Row-major enumeration of all tuples with the given sizes.
inline std::vector<std::vector<int>> tuples(const std::vector<int>& sizes) {
  std::vector<std::vector<int>> out{{}};
  for (int size : sizes) {
    std::vector<std::vector<int>> next;
    for (const auto& prefix : out)
      for (int v = 0; v < size; ++v) {
        auto tuple = prefix;
        tuple.push_back(v);
        next.push_back(std::move(tuple));
      }
    out = std::move(next);
  }
  return out;
}

}  // namespace detail

// The 2x2 exchange quadrics of the statement on marginalized outcome sums:
// for outcomes a1 < a2 of X_A, b1 < b2 of X_B and each outcome c of X_C,
//     P(a1 b1 c) P(a2 b2 c) - P(a1 b2 c) P(a2 b1 c)
// expanded over atoms, where P(a b c) sums the atoms agreeing with a, b, c on
// A, B, C and running over everything else.
inline CIQuadrics ci_quadrics(const CIStatement& stmt) {
  int n = static_cast<int>(stmt.sizes.size());
  if (n == 0) throw input_error("ci_quadrics: empty variable list");
  for (int size : stmt.sizes)
    if (size < 1) throw input_error("ci_quadrics: state counts must be positive");
  std::set<int> seen;
  for (const auto* part : {&stmt.A, &stmt.B, &stmt.C})
    for (int i : *part) {
      if (i < 1 || i > n) throw input_error("ci_quadrics: variable index out of range");
      if (!seen.insert(i).second) throw input_error("ci_quadrics: A, B, C must be disjoint");
    }
  if (stmt.A.empty() || stmt.B.empty()) throw input_error("ci_quadrics: A and B must be nonempty");

  CIQuadrics out;
  std::map<std::vector<int>, VarId> atom_of;
  for (auto& tuple : detail::tuples(stmt.sizes)) {
    VarId v = out.ring.add_path_var(tuple);
    atom_of[tuple] = v;
    out.atoms.push_back(v);
  }

  auto part_sizes = [&](const std::vector<int>& part) {
    std::vector<int> sizes;
    for (int i : part) sizes.push_back(stmt.sizes[i - 1]);
    return sizes;
  };
  std::vector<int> rest;
  for (int i = 1; i <= n; ++i)
    if (!seen.count(i)) rest.push_back(i);

  // P(a, b, c): sum of atoms with the A, B, C coordinates fixed.
  auto marginal = [&](const std::vector<int>& a, const std::vector<int>& b,
                      const std::vector<int>& c) {
    Polynomial sum;
    for (const auto& r : detail::tuples(part_sizes(rest))) {
      std::vector<int> tuple(n, 0);
      for (std::size_t i = 0; i < stmt.A.size(); ++i) tuple[stmt.A[i] - 1] = a[i];
      for (std::size_t i = 0; i < stmt.B.size(); ++i) tuple[stmt.B[i] - 1] = b[i];
      for (std::size_t i = 0; i < stmt.C.size(); ++i) tuple[stmt.C[i] - 1] = c[i];
      for (std::size_t i = 0; i < rest.size(); ++i) tuple[rest[i] - 1] = r[i];
      sum += Polynomial::variable(atom_of.at(tuple));
    }
    return sum;
  };

  std::vector<std::vector<int>> xa = detail::tuples(part_sizes(stmt.A));
  std::vector<std::vector<int>> xb = detail::tuples(part_sizes(stmt.B));
  std::vector<std::vector<int>> xc = detail::tuples(part_sizes(stmt.C));
  for (const auto& c : xc)
    for (std::size_t a1 = 0; a1 < xa.size(); ++a1)
      for (std::size_t a2 = a1 + 1; a2 < xa.size(); ++a2)
        for (std::size_t b1 = 0; b1 < xb.size(); ++b1)
          for (std::size_t b2 = b1 + 1; b2 < xb.size(); ++b2)
            out.quadrics.push_back(marginal(xa[a1], xb[b1], c) * marginal(xa[a2], xb[b2], c) -
                                   marginal(xa[a1], xb[b2], c) * marginal(xa[a2], xb[b1], c));
  return out;
}

// --- contraction equivalence -------------------------------------------------

// What survives contraction of only-child edges: the leaf bijection, balance,
// transport of the assembled basis, and the degree-2 kernel span.
struct ContractionReport {
  ContractionResult contraction;
  bool original_stratified = false;
  bool original_balanced = false;
  bool contracted_balanced = false;
  // Set when the original tree admits a basis: does the transported basis
  // vanish under the contracted tree's monomial map?
  std::optional<bool> basis_transports;
  std::optional<std::vector<MarkedBinomial>> transported_basis;
  // Do the degree-2 kernels correspond under the leaf bijection?
  bool degree2_spans_match = false;
};

inline ContractionReport contraction_report(const TreeSystem& sys) {
  ContractionReport report;
  report.contraction = contract_only_child_edges(sys.tree);
  TreeSystem contracted = make_system(report.contraction.tree);

  report.original_stratified = is_stratified(sys.tree).ok;
  report.original_balanced = is_balanced(sys).balanced;
  report.contracted_balanced = is_balanced(contracted).balanced;

  // Path variable transport along the leaf bijection.
  std::map<VarId, VarId> var_map;
  for (auto& [from, to] : report.contraction.leaf_map)
    var_map[sys.leaf_var(from)] = contracted.leaf_var(to);

  if (report.original_stratified && report.original_balanced) {
    std::vector<BasisElement> basis = assemble_basis(sys);
    MonomialMap contracted_map = monomial_map(contracted);
    std::vector<MarkedBinomial> transported;
    bool vanish = true;
    for (const BasisElement& e : basis) {
      MarkedBinomial moved{e.binomial.lead.rename(var_map), e.binomial.trail.rename(var_map)};
      if (contracted_map.apply(moved.lead) != contracted_map.apply(moved.trail)) vanish = false;
      transported.push_back(std::move(moved));
    }
    report.basis_transports = vanish;
    report.transported_basis = std::move(transported);
  }

  // Degree-2 kernels on both sides, compared inside the contracted ring.
  TermOrder ord = path_order(contracted);
  FiberPartition fp_original = fiber_partition(monomial_map(sys), 2);
  FiberPartition fp_contracted = fiber_partition(monomial_map(contracted), 2);
  std::vector<Polynomial> moved, target;
  for (const MarkedBinomial& k : kernel_binomials(fp_original, path_order(sys)))
    moved.push_back(Polynomial::term(k.lead.rename(var_map), 1) -
                    Polynomial::term(k.trail.rename(var_map), 1));
  for (const MarkedBinomial& k : kernel_binomials(fp_contracted, ord))
    target.push_back(k.to_polynomial());
  report.degree2_spans_match = same_span(moved, target);
  return report;
}

}  // namespace treetoric
