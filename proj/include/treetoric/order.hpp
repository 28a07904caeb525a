#pragma once

#include <algorithm>
#include <compare>
#include <limits>
#include <string>
#include <vector>

#include "errors.hpp"
#include "ring.hpp"

namespace treetoric {

// Total monomial order: pure lexicographic with respect to a variable ranking
// (rank 0 is the greatest variable).  Two rankings are provided:
//
//  * path_lex — path variables first, ordered by lexicographic comparison of
//    their index sequences (a shorter or lexicographically smaller sequence
//    gives a *greater* variable), then the homogenizer, then the labels in
//    registration order.  This is the order under which the assembled bases
//    are expected to be marked consistently.
//
//  * lex_blocks — pure lex over caller-chosen blocks of variables, earlier
//    blocks greater; an elimination order.
class TermOrder {
 public:
  static TermOrder path_lex(const Ring& ring) {
    struct Entry {
      int group;  // 0 = path, 1 = homogenizer, 2 = label
      std::vector<int> path;
      VarId v;
    };
    std::vector<Entry> entries;
    for (VarId v = 0; v < ring.size(); ++v) {
      const auto& info = ring.var(v);
      int group = info.kind == VarKind::path ? 0 : info.kind == VarKind::homogenizer ? 1 : 2;
      entries.push_back({group, info.path, v});
    }
    std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
      if (a.group != b.group) return a.group < b.group;
      if (a.group == 0) return a.path < b.path;
      return a.v < b.v;  // homogenizer / labels: registration order
    });
    TermOrder ord(ring.size());
    for (std::size_t r = 0; r < entries.size(); ++r) ord.rank_[entries[r].v] = static_cast<VarId>(r);
    return ord;
  }

  static TermOrder lex_blocks(const Ring& ring, const std::vector<std::vector<VarId>>& blocks) {
    TermOrder ord(ring.size());
    const VarId unset = std::numeric_limits<VarId>::max();
    std::fill(ord.rank_.begin(), ord.rank_.end(), unset);
    VarId r = 0;
    for (const auto& block : blocks)
      for (VarId v : block) {
        if (v >= ring.size()) throw input_error("lex_blocks: unknown variable id");
        if (ord.rank_[v] != unset) throw input_error("lex_blocks: variable listed twice");
        ord.rank_[v] = r++;
      }
    // Variables not named by any block come last, in registration order.
    for (VarId v = 0; v < ord.rank_.size(); ++v)
      if (ord.rank_[v] == unset) ord.rank_[v] = r++;
    return ord;
  }

  // Pure lex: the monomial with the higher power of the greatest
  // distinguishing variable is the greater one.  The empty monomial is the
  // global minimum among monomials dividing any fixed monomial, and degree
  // bounds make every descending chain finite.
  std::strong_ordering compare(const Monomial& a, const Monomial& b) const {
    auto ra = ranked(a), rb = ranked(b);
    auto i = ra.begin();
    auto j = rb.begin();
    while (i != ra.end() || j != rb.end()) {
      if (j == rb.end()) return std::strong_ordering::greater;  // a has an extra variable
      if (i == ra.end()) return std::strong_ordering::less;
      if (i->first != j->first)
        // The more significant variable appears in only one monomial.
        return i->first < j->first ? std::strong_ordering::greater : std::strong_ordering::less;
      if (i->second != j->second)
        return i->second > j->second ? std::strong_ordering::greater : std::strong_ordering::less;
      ++i, ++j;
    }
    return std::strong_ordering::equal;
  }

  bool greater(const Monomial& a, const Monomial& b) const {
    return compare(a, b) == std::strong_ordering::greater;
  }

  bool less(const Monomial& a, const Monomial& b) const {
    return compare(a, b) == std::strong_ordering::less;
  }

  // Greatest monomial of p; p must be nonzero.
  const Monomial& lead_monomial(const Polynomial& p) const {
    if (p.is_zero()) throw internal_error("lead of zero polynomial");
    const Monomial* best = nullptr;
    for (auto& [m, c] : p.terms())
      if (!best || greater(m, *best)) best = &m;
    return *best;
  }

  // All monomials of p in descending order.
  std::vector<Monomial> sorted_monomials(const Polynomial& p) const {
    std::vector<Monomial> out;
    out.reserve(p.term_count());
    for (auto& [m, c] : p.terms()) out.push_back(m);
    std::sort(out.begin(), out.end(),
              [this](const Monomial& x, const Monomial& y) { return greater(x, y); });
    return out;
  }

 private:
  explicit TermOrder(std::size_t n) : rank_(n, 0) {}

  // (rank, exponent) pairs sorted by rank ascending (most significant first).
  std::vector<std::pair<VarId, int>> ranked(const Monomial& m) const {
    std::vector<std::pair<VarId, int>> out;
    out.reserve(m.factors().size());
    for (auto& [v, e] : m.factors()) {
      if (v >= rank_.size()) throw internal_error("monomial variable outside order's ring");
      out.push_back({rank_[v], e});
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  std::vector<VarId> rank_;  // rank_[v] = position, 0 greatest
};

// Binomial lead - trail with the lead chosen by construction (marked), not by
// a term order.  Marking consistency against an order is a separate check.
struct MarkedBinomial {
  Monomial lead;
  Monomial trail;

  Polynomial to_polynomial() const {
    Polynomial p = Polynomial::term(lead, 1);
    p += Polynomial::term(trail, -1);
    return p;
  }

  bool operator==(const MarkedBinomial&) const = default;
  auto operator<=>(const MarkedBinomial&) const = default;
};

inline std::string to_string(const MarkedBinomial& b, const Ring& ring) {
  return to_string(b.lead, ring) + " - " + to_string(b.trail, ring);
}

// Terms in descending order under ord, lead first.
inline std::string to_string(const Polynomial& p, const Ring& ring, const TermOrder& ord) {
  if (p.is_zero()) return "0";
  std::string out;
  for (const Monomial& m : ord.sorted_monomials(p))
    detail::append_term(out, m, p.terms().at(m), ring);
  return out;
}

}  // namespace treetoric
