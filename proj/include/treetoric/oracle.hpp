#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "groebner.hpp"
#include "order.hpp"
#include "ring.hpp"
#include "tfp.hpp"

namespace treetoric {

inline Int binomial_coefficient(Int n, Int k) {
  if (k < 0 || k > n) return 0;
  Int out = 1;
  for (Int i = 0; i < k; ++i) {
    out *= n - i;
    out /= i + 1;
  }
  return out;
}

// All monomials of the given total degree in the listed variables, in
// lexicographic order of their non-decreasing index sequences.  The count is
// C(N + d - 1, d); callers guard it.
inline std::vector<Monomial> monomials_of_degree(const std::vector<VarId>& vars, int degree) {
  std::vector<Monomial> out;
  if (vars.empty()) {
    if (degree == 0) out.push_back(Monomial::one());
    return out;
  }
  std::vector<std::size_t> pick(degree, 0);  // non-decreasing positions into vars
  while (true) {
    Monomial::Factors factors;
    for (std::size_t p : pick) factors.push_back({vars[p], 1});
    out.push_back(Monomial::from_factors(std::move(factors)));
    // Advance the odometer.
    int i = degree - 1;
    while (i >= 0 && pick[i] == vars.size() - 1) --i;
    if (i < 0) break;
    std::size_t next = pick[i] + 1;
    for (int j = i; j < degree; ++j) pick[j] = next;
  }
  return out;
}

// Groups all degree-d monomials in the map's source variables by their image.
// Two monomials in one fiber differ by a kernel element; the kernel in that
// degree is spanned by in-fiber differences.  This is the brute-force side
// everything else is checked against, so it depends only on the map itself.
struct FiberPartition {
  int degree = 0;
  std::vector<VarId> vars;
  // image -> members in enumeration order; fibers sorted by image.
  std::vector<std::pair<Monomial, std::vector<Monomial>>> fibers;
  std::size_t monomial_count = 0;

  std::size_t fiber_count() const { return fibers.size(); }
};

inline const Int kEnumerationGuard = 1000000;

inline FiberPartition fiber_partition(const MonomialMap& mm, int degree) {
  if (degree < 0) throw input_error("fiber_partition: negative degree");
  Int size = binomial_coefficient(Int(mm.vars.size()) + degree - 1, degree);
  if (size > kEnumerationGuard)
    throw domain_error("fiber_partition: " + size.str() + " monomials of degree " +
                       std::to_string(degree) + " exceed the enumeration guard");
  FiberPartition fp;
  fp.degree = degree;
  fp.vars = mm.vars;
  std::map<Monomial, std::vector<Monomial>> fibers;
  for (Monomial& m : monomials_of_degree(mm.vars, degree)) {
    fibers[mm.apply(m)].push_back(std::move(m));
  }
  fp.monomial_count = 0;
  for (auto& [image, members] : fibers) {
    fp.monomial_count += members.size();
    fp.fibers.push_back({image, std::move(members)});
  }
  return fp;
}

// A spanning set for the kernel in the partition's degree: each fiber member
// minus the fiber's first member, marked by the order.
inline std::vector<MarkedBinomial> kernel_binomials(const FiberPartition& fp,
                                                    const TermOrder& ord) {
  std::vector<MarkedBinomial> out;
  for (const auto& [image, members] : fp.fibers)
    for (std::size_t i = 1; i < members.size(); ++i) {
      const Monomial& rep = members.front();
      if (ord.greater(members[i], rep))
        out.push_back({members[i], rep});
      else
        out.push_back({rep, members[i]});
    }
  return out;
}

struct CoverageResult {
  bool covered = true;
  std::optional<MarkedBinomial> counterexample;  // kernel element that survives
  Polynomial normal_form;
};

// Does the marked basis reduce every kernel element of this degree to zero?
// This is the acid test for basis candidates: coverage in all degrees up to a
// bound, plus the Buchberger test, certifies the basis on those degrees.
inline CoverageResult kernel_covered_by(const FiberPartition& fp,
                                        const std::vector<MarkedBinomial>& basis,
                                        const TermOrder& ord) {
  for (const MarkedBinomial& k : kernel_binomials(fp, ord)) {
    Polynomial nf = reduce(k.to_polynomial(), basis, ord);
    if (!nf.is_zero()) return {false, k, std::move(nf)};
  }
  return {true, std::nullopt, {}};
}

// Number of degree-d monomials not divisible by any marked lead.  For a basis
// whose ideal is the full kernel this matches the fiber count in the same
// degree (one standard monomial per image).
inline std::size_t standard_monomial_count(const std::vector<VarId>& vars,
                                           const std::vector<MarkedBinomial>& basis,
                                           int degree) {
  if (degree < 0) throw input_error("standard_monomial_count: negative degree");
  Int size = binomial_coefficient(Int(vars.size()) + degree - 1, degree);
  if (size > kEnumerationGuard)
    throw domain_error("standard_monomial_count: enumeration guard exceeded");
  std::size_t count = 0;
  for (const Monomial& m : monomials_of_degree(vars, degree)) {
    bool standard = true;
    for (const MarkedBinomial& g : basis)
      if (g.lead.divides(m)) {
        standard = false;
        break;
      }
    if (standard) ++count;
  }
  return count;
}

}  // namespace treetoric
