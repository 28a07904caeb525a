#pragma once

#include <map>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "ring.hpp"

namespace treetoric {

using Rat = boost::multiprecision::cpp_rational;

// Exact rank of a list of polynomials viewed as vectors over their monomial
// support, by incremental Gaussian elimination over the rationals.
class SpanBasis {
 public:
  // Returns true if p enlarged the span (was independent of what came before).
  bool insert(const Polynomial& p) {
    std::map<Monomial, Rat> row;
    for (auto& [m, c] : p.terms()) row[m] = Rat(c);
    eliminate(row);
    if (row.empty()) return false;
    normalize(row);
    rows_.push_back(std::move(row));
    return true;
  }

  bool contains(const Polynomial& p) const {
    std::map<Monomial, Rat> row;
    for (auto& [m, c] : p.terms()) row[m] = Rat(c);
    eliminate(row);
    return row.empty();
  }

  std::size_t rank() const { return rows_.size(); }

 private:
  void eliminate(std::map<Monomial, Rat>& row) const {
    for (const auto& pivot_row : rows_) {
      const auto& [pm, pc] = *pivot_row.begin();
      auto it = row.find(pm);
      if (it == row.end()) continue;
      Rat factor = it->second / pc;
      for (const auto& [m, c] : pivot_row) {
        Rat& entry = row[m];
        entry -= factor * c;
        if (entry == 0) row.erase(m);
      }
    }
  }

  static void normalize(std::map<Monomial, Rat>& row) {
    Rat head = row.begin()->second;
    for (auto& [m, c] : row) c /= head;
  }

  // Each row is reduced against all earlier rows; its first monomial (in the
  // structural order) is its pivot.
  std::vector<std::map<Monomial, Rat>> rows_;
};

inline std::size_t span_rank(const std::vector<Polynomial>& polys) {
  SpanBasis basis;
  for (const auto& p : polys) basis.insert(p);
  return basis.rank();
}

// Equality of linear spans, decided exactly: each side must lie in the other.
inline bool same_span(const std::vector<Polynomial>& a, const std::vector<Polynomial>& b) {
  SpanBasis sa, sb;
  for (const auto& p : a) sa.insert(p);
  for (const auto& p : b) sb.insert(p);
  for (const auto& p : a)
    if (!sb.contains(p)) return false;
  for (const auto& p : b)
    if (!sa.contains(p)) return false;
  return true;
}

}  // namespace treetoric
