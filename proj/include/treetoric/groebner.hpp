#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "order.hpp"
#include "ring.hpp"

namespace treetoric {

struct MarkingCheck {
  bool ok = true;
  int index = -1;  // first basis element whose marked lead is not the order's lead
};

// A marked basis is usable for reduction only when every marked lead really
// is the greater term under the order.
inline MarkingCheck verify_marking(const std::vector<MarkedBinomial>& basis,
                                   const TermOrder& ord) {
  for (std::size_t i = 0; i < basis.size(); ++i)
    if (!ord.greater(basis[i].lead, basis[i].trail)) return {false, static_cast<int>(i)};
  return {true, -1};
}

// Reduces p modulo the marked basis: repeatedly take the greatest monomial of
// p divisible by some marked lead (basis scanned in order) and replace that
// occurrence of the lead by the trail.  Deterministic; terminates because the
// replaced term strictly drops in the order.  Fails fast on a bad marking.
inline Polynomial reduce(Polynomial p, const std::vector<MarkedBinomial>& basis,
                         const TermOrder& ord) {
  MarkingCheck marking = verify_marking(basis, ord);
  if (!marking.ok)
    throw domain_error("reduce: marked lead #" + std::to_string(marking.index) +
                       " is not the greater term under the order");
  bool reduced = true;
  while (reduced && !p.is_zero()) {
    reduced = false;
    for (const Monomial& m : ord.sorted_monomials(p)) {
      for (const MarkedBinomial& g : basis) {
        if (!g.lead.divides(m)) continue;
        Int c = p.terms().at(m);
        Monomial q = m.divide_by(g.lead);
        p.add_term(m, -c);
        p.add_term(q * g.trail, c);
        reduced = true;
        break;
      }
      if (reduced) break;
    }
  }
  return p;
}

// S-polynomial of two marked binomials f = Lf - Tf, g = Lg - Tg:
//     S = (lcm / Lf) f  -  (lcm / Lg) g,   lcm = lcm(Lf, Lg);
// the lead terms cancel by construction.
inline Polynomial s_polynomial(const MarkedBinomial& f, const MarkedBinomial& g) {
  Monomial l = Monomial::lcm(f.lead, g.lead);
  Polynomial s = Polynomial::term(l.divide_by(f.lead), 1) * f.to_polynomial();
  s -= Polynomial::term(l.divide_by(g.lead), 1) * g.to_polynomial();
  return s;
}

struct BuchbergerResult {
  bool ok = true;
  int i = -1, j = -1;       // first failing pair
  Polynomial normal_form;   // its nonzero normal form
};

// The pairwise S-polynomial test: every S-polynomial of a basis pair must
// reduce to zero.  Pairs with coprime leads are skipped (their S-polynomial
// always reduces to zero); no other pair criterion is applied.
inline BuchbergerResult buchberger_check(const std::vector<MarkedBinomial>& basis,
                                         const TermOrder& ord) {
  MarkingCheck marking = verify_marking(basis, ord);
  if (!marking.ok)
    throw domain_error("buchberger_check: marked lead #" + std::to_string(marking.index) +
                       " is not the greater term under the order");
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = i + 1; j < basis.size(); ++j) {
      if (Monomial::gcd(basis[i].lead, basis[j].lead).is_one()) continue;
      Polynomial nf = reduce(s_polynomial(basis[i], basis[j]), basis, ord);
      if (!nf.is_zero())
        return {false, static_cast<int>(i), static_cast<int>(j), std::move(nf)};
    }
  return {true, -1, -1, {}};
}

struct LeadProfile {
  bool all_quadratic = true;
  bool all_squarefree = true;
  std::map<int, int> degree_histogram;
  std::vector<Monomial> leads;  // descending under the order
};

// Shape of the initial ideal the marked basis generates.
inline LeadProfile initial_ideal_profile(const std::vector<MarkedBinomial>& basis,
                                         const TermOrder& ord) {
  LeadProfile profile;
  for (const auto& g : basis) {
    profile.degree_histogram[g.lead.degree()]++;
    if (g.lead.degree() != 2) profile.all_quadratic = false;
    if (!g.lead.is_squarefree()) profile.all_squarefree = false;
    profile.leads.push_back(g.lead);
  }
  std::sort(profile.leads.begin(), profile.leads.end(),
            [&](const Monomial& a, const Monomial& b) { return ord.greater(a, b); });
  return profile;
}

}  // namespace treetoric
