#pragma once

#include <algorithm>
#include <cctype>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "errors.hpp"

namespace treetoric {

// Exact arbitrary-precision integer; all coefficient arithmetic is exact.
using Int = boost::multiprecision::cpp_int;

using VarId = std::uint32_t;

enum class VarKind {
  label,        // edge label of a tree (a model parameter)
  homogenizer,  // the extra degree variable adjoined to the parameter ring
  path          // one variable per root-to-leaf path (an outcome probability)
};

// Renders a path index sequence as a variable name: digits are concatenated
// when every component is a single digit ("p[0110]"), otherwise separated by
// commas ("p[0,12,3]").  The empty sequence names the empty path: "p[]".
inline std::string path_var_name(const std::vector<int>& index) {
  bool digits = std::all_of(index.begin(), index.end(),
                            [](int k) { return 0 <= k && k <= 9; });
  std::string out = "p[";
  for (std::size_t i = 0; i < index.size(); ++i) {
    if (!digits && i > 0) out += ',';
    out += std::to_string(index[i]);
  }
  out += ']';
  return out;
}

// Variable registry.  A Ring fixes the ambient polynomial ring: which
// variables exist, their names, kinds, and (for path variables) index
// sequences.  Monomials and polynomials store VarIds, so they are only
// meaningful together with the Ring they were built against.
class Ring {
 public:
  struct VarInfo {
    std::string name;
    VarKind kind;
    std::vector<int> path;  // index sequence; empty unless kind == path
  };

  VarId add_var(std::string name, VarKind kind) {
    return insert({std::move(name), kind, {}});
  }

  VarId add_path_var(std::vector<int> index) {
    return insert({path_var_name(index), VarKind::path, std::move(index)});
  }

  const VarInfo& var(VarId v) const { return vars_.at(v); }
  const std::string& name(VarId v) const { return vars_.at(v).name; }
  std::size_t size() const { return vars_.size(); }

  std::optional<VarId> find(const std::string& name) const {
    auto it = by_name_.find(name);
    if (it == by_name_.end()) return std::nullopt;
    return it->second;
  }

  std::vector<VarId> vars_of_kind(VarKind kind) const {
    std::vector<VarId> out;
    for (VarId v = 0; v < vars_.size(); ++v)
      if (vars_[v].kind == kind) out.push_back(v);
    return out;
  }

 private:
  VarId insert(VarInfo info) {
    if (by_name_.count(info.name))
      throw internal_error("duplicate variable name: " + info.name);
    VarId v = static_cast<VarId>(vars_.size());
    by_name_.emplace(info.name, v);
    vars_.push_back(std::move(info));
    return v;
  }

  std::vector<VarInfo> vars_;
  std::map<std::string, VarId> by_name_;
};

// Sparse monomial: factors sorted by VarId, exponents strictly positive.
// operator<=> is the structural (container) order, not a term order; term
// comparisons go through TermOrder.
class Monomial {
 public:
  using Factors = std::vector<std::pair<VarId, int>>;

  Monomial() = default;

  static Monomial one() { return {}; }

  static Monomial var(VarId v, int exponent = 1) {
    Monomial m;
    if (exponent < 0) throw internal_error("negative exponent");
    if (exponent > 0) m.factors_.push_back({v, exponent});
    return m;
  }

  static Monomial from_factors(Factors factors) {
    std::sort(factors.begin(), factors.end());
    Monomial m;
    for (auto& [v, e] : factors) {
      if (e < 0) throw internal_error("negative exponent");
      if (e == 0) continue;
      if (!m.factors_.empty() && m.factors_.back().first == v)
        m.factors_.back().second += e;
      else
        m.factors_.push_back({v, e});
    }
    return m;
  }

  const Factors& factors() const { return factors_; }
  bool is_one() const { return factors_.empty(); }

  int degree() const {
    int d = 0;
    for (auto& [v, e] : factors_) d += e;
    return d;
  }

  int exponent(VarId v) const {
    for (auto& [w, e] : factors_)
      if (w == v) return e;
    return 0;
  }

  bool is_squarefree() const {
    return std::all_of(factors_.begin(), factors_.end(),
                       [](auto& f) { return f.second == 1; });
  }

  Monomial operator*(const Monomial& o) const {
    Monomial out;
    auto a = factors_.begin(), b = o.factors_.begin();
    while (a != factors_.end() || b != o.factors_.end()) {
      if (b == o.factors_.end() || (a != factors_.end() && a->first < b->first))
        out.factors_.push_back(*a++);
      else if (a == factors_.end() || b->first < a->first)
        out.factors_.push_back(*b++);
      else {
        out.factors_.push_back({a->first, a->second + b->second});
        ++a, ++b;
      }
    }
    return out;
  }

  bool divides(const Monomial& o) const {
    auto b = o.factors_.begin();
    for (auto& [v, e] : factors_) {
      while (b != o.factors_.end() && b->first < v) ++b;
      if (b == o.factors_.end() || b->first != v || b->second < e) return false;
    }
    return true;
  }

  // Quotient this / d.  Requires d.divides(*this).
  Monomial divide_by(const Monomial& d) const {
    if (!d.divides(*this)) throw internal_error("monomial division failure");
    Monomial out;
    auto b = d.factors_.begin();
    for (auto& [v, e] : factors_) {
      int sub = 0;
      while (b != d.factors_.end() && b->first < v) ++b;
      if (b != d.factors_.end() && b->first == v) sub = b->second;
      if (e - sub > 0) out.factors_.push_back({v, e - sub});
    }
    return out;
  }

  static Monomial lcm(const Monomial& a, const Monomial& b) {
    Monomial out;
    auto i = a.factors_.begin(), j = b.factors_.begin();
    while (i != a.factors_.end() || j != b.factors_.end()) {
      if (j == b.factors_.end() || (i != a.factors_.end() && i->first < j->first))
        out.factors_.push_back(*i++);
      else if (i == a.factors_.end() || j->first < i->first)
        out.factors_.push_back(*j++);
      else {
        out.factors_.push_back({i->first, std::max(i->second, j->second)});
        ++i, ++j;
      }
    }
    return out;
  }

  static Monomial gcd(const Monomial& a, const Monomial& b) {
    Monomial out;
    auto i = a.factors_.begin(), j = b.factors_.begin();
    while (i != a.factors_.end() && j != b.factors_.end()) {
      if (i->first < j->first)
        ++i;
      else if (j->first < i->first)
        ++j;
      else {
        out.factors_.push_back({i->first, std::min(i->second, j->second)});
        ++i, ++j;
      }
    }
    return out;
  }

  // Substitutes every variable according to the map; unmapped variables stay.
  Monomial rename(const std::map<VarId, VarId>& sub) const {
    Factors out;
    for (auto& [v, e] : factors_) {
      auto it = sub.find(v);
      out.push_back({it == sub.end() ? v : it->second, e});
    }
    return from_factors(std::move(out));
  }

  bool operator==(const Monomial&) const = default;
  auto operator<=>(const Monomial&) const = default;

 private:
  Factors factors_;
};

// Polynomial with exact integer coefficients over a Ring's variables.
// Terms are keyed by the structural monomial order; zero coefficients are
// never stored, so equality is structural equality.
class Polynomial {
 public:
  using Terms = std::map<Monomial, Int>;

  Polynomial() = default;
  explicit Polynomial(Int constant) { add_term(Monomial::one(), std::move(constant)); }

  static Polynomial term(Monomial m, Int c) {
    Polynomial p;
    p.add_term(std::move(m), std::move(c));
    return p;
  }

  static Polynomial variable(VarId v) { return term(Monomial::var(v), 1); }

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }

  void add_term(Monomial m, Int c) {
    if (c == 0) return;
    // try_emplace leaves c untouched when the key already exists.
    auto [it, fresh] = terms_.try_emplace(std::move(m), std::move(c));
    if (!fresh) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  Polynomial& operator+=(const Polynomial& o) {
    for (auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }

  Polynomial& operator-=(const Polynomial& o) {
    for (auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }

  Polynomial operator+(const Polynomial& o) const {
    Polynomial p = *this;
    return p += o;
  }

  Polynomial operator-(const Polynomial& o) const {
    Polynomial p = *this;
    return p -= o;
  }

  Polynomial operator-() const {
    Polynomial p;
    for (auto& [m, c] : terms_) p.terms_.emplace(m, -c);
    return p;
  }

  Polynomial operator*(const Polynomial& o) const {
    Polynomial p;
    for (auto& [m1, c1] : terms_)
      for (auto& [m2, c2] : o.terms_) p.add_term(m1 * m2, c1 * c2);
    return p;
  }

  bool operator==(const Polynomial&) const = default;

 private:
  Terms terms_;
};

inline Polynomial operator*(const Monomial& m, const Polynomial& p) {
  return Polynomial::term(m, 1) * p;
}

inline Polynomial operator*(const Int& c, const Polynomial& p) {
  return Polynomial::term(Monomial::one(), c) * p;
}

// Sets every listed variable to 1: its factors are dropped and coinciding
// terms merge.  Used to evaluate interpolating polynomials at partial data.
inline Polynomial specialize_ones(const Polynomial& p, const std::vector<VarId>& vars) {
  std::vector<VarId> sorted = vars;
  std::sort(sorted.begin(), sorted.end());
  Polynomial out;
  for (auto& [m, c] : p.terms()) {
    Monomial::Factors keep;
    for (auto& [v, e] : m.factors())
      if (!std::binary_search(sorted.begin(), sorted.end(), v))
        keep.push_back({v, e});
    out.add_term(Monomial::from_factors(std::move(keep)), c);
  }
  return out;
}

// --- text rendering ---------------------------------------------------------

// Factors are printed in ascending VarId order, which is registration order:
// for a tree ring that reads homogenizer, then labels, then path variables.
inline std::string to_string(const Monomial& m, const Ring& ring) {
  if (m.is_one()) return "1";
  std::string out;
  for (auto& [v, e] : m.factors()) {
    if (!out.empty()) out += '*';
    out += ring.name(v);
    if (e > 1) out += '^' + std::to_string(e);
  }
  return out;
}

namespace detail {

inline void append_term(std::string& out, const Monomial& m, const Int& c,
                        const Ring& ring) {
  Int a = c < 0 ? Int(-c) : c;
  if (out.empty()) {
    if (c < 0) out += '-';
  } else {
    out += c < 0 ? " - " : " + ";
  }
  if (m.is_one()) {
    out += a.str();
  } else {
    if (a != 1) out += a.str() + "*";
    out += to_string(m, ring);
  }
}

}  // namespace detail

// Terms in ascending structural order (stable, readable for label products).
inline std::string to_string(const Polynomial& p, const Ring& ring) {
  if (p.is_zero()) return "0";
  std::string out;
  for (auto& [m, c] : p.terms()) detail::append_term(out, m, c, ring);
  return out;
}

// --- text parsing -----------------------------------------------------------

// Parses what to_string produces: signed sums of integer-coefficient products
// `c*x^e*y*...` with whitespace allowed between tokens.  Variable names are
// resolved against the ring; unknown names raise input_error.
inline Polynomial parse_polynomial(const std::string& text, const Ring& ring) {
  std::size_t pos = 0;
  auto skip = [&] { while (pos < text.size() && std::isspace((unsigned char)text[pos])) ++pos; };
  auto peek = [&]() -> int { return pos < text.size() ? text[pos] : -1; };
  auto name_char = [](int ch) {
    return std::isalnum(ch) || ch == '[' || ch == ']' || ch == ',' || ch == '_';
  };

  auto parse_uint = [&]() -> Int {
    std::string digits;
    while (pos < text.size() && std::isdigit((unsigned char)text[pos]))
      digits += text[pos++];
    if (digits.empty()) throw input_error("expected number at position " + std::to_string(pos));
    return Int(digits);
  };

  auto parse_factor = [&](Monomial& mono, Int& coef) {
    skip();
    if (std::isdigit(peek())) {
      coef *= parse_uint();
      return;
    }
    std::string name;
    while (pos < text.size() && name_char((unsigned char)text[pos])) name += text[pos++];
    if (name.empty())
      throw input_error("expected factor at position " + std::to_string(pos));
    auto v = ring.find(name);
    if (!v) throw input_error("unknown variable: " + name);
    int e = 1;
    skip();
    if (peek() == '^') {
      ++pos;
      skip();
      Int big = parse_uint();
      if (big > 1000) throw input_error("exponent too large");
      e = static_cast<int>(big);
    }
    mono = mono * Monomial::var(*v, e);
  };

  Polynomial out;
  skip();
  if (pos == text.size()) throw input_error("empty polynomial text");
  bool first = true;
  while (true) {
    skip();
    Int sign = 1;
    if (peek() == '+' || peek() == '-') {
      if (text[pos] == '-') sign = -1;
      ++pos;
    } else if (!first) {
      break;
    }
    Monomial mono;
    Int coef = sign;
    parse_factor(mono, coef);
    skip();
    while (peek() == '*') {
      ++pos;
      parse_factor(mono, coef);
      skip();
    }
    out.add_term(std::move(mono), std::move(coef));
    first = false;
    if (pos == text.size()) break;
  }
  skip();
  if (pos != text.size())
    throw input_error("trailing characters in polynomial text at position " + std::to_string(pos));
  return out;
}

}  // namespace treetoric
