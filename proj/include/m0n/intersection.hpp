#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "m0n/errors.hpp"
#include "m0n/monomial.hpp"
#include "m0n/rational.hpp"
#include "m0n/trees.hpp"

namespace m0n {

/// Splitting of m(e) - 1 over the two flags of every edge e_S.
/// lower[i] sits on the flag of e_S at v_S (the flag f_S pointing to the
/// root); upper[i] on the flag of e_S at the parent vertex. Indices follow
/// tree.sets().
struct MultiplicityOrientation {
  std::vector<int> lower;
  std::vector<int> upper;

  bool operator==(const MultiplicityOrientation&) const = default;
};

/// Flag multiplicities at vertex v: upper values of child edges, then the lower
/// value of its own edge (absent at the root).
inline std::vector<int> vertex_flag_mults(const StableTree& t, const MultiplicityOrientation& o, int v) {
  std::vector<int> out;
  for (int c : t.vertex(v).children) out.push_back(o.upper[c - 1]);
  if (v != 0) out.push_back(o.lower[v - 1]);
  return out;
}

/// Nonnegative, splits m(e)-1 on every edge, and sums to |v|-3 at every vertex.
inline bool is_good_orientation(const MultiplicityTree& tm, const MultiplicityOrientation& o) {
  const StableTree& t = tm.tree;
  const std::size_t e = t.sets().size();
  if (o.lower.size() != e || o.upper.size() != e) return false;
  for (std::size_t i = 0; i < e; ++i)
    if (o.lower[i] < 0 || o.upper[i] < 0 || o.lower[i] + o.upper[i] != tm.mult[i] - 1) return false;
  for (int v = 0; v < static_cast<int>(t.vertices().size()); ++v) {
    int sum = 0;
    for (int x : vertex_flag_mults(t, o, v)) sum += x;
    if (sum != t.vertex(v).valency() - 3) return false;
  }
  return true;
}

inline void check_top_degree(const MultiplicityTree& tm) {
  if (tm.degree() != tm.tree.n() - 3)
    throw input_error("orientation requested for degree " + std::to_string(tm.degree()) + ", expected n-3 = " + std::to_string(tm.tree.n() - 3));
}

/// The unique good orientation of a top-degree tree with multiplicity, if any.
/// mult(f_S) = |S| - 2 - sum of m(T) over edge sets T ⊊ S.
inline std::optional<MultiplicityOrientation> good_orientation(const MultiplicityTree& tm) {
  check_top_degree(tm);
  const Family& sets = tm.tree.sets();
  MultiplicityOrientation o;
  o.lower.resize(sets.size());
  o.upper.resize(sets.size());
  for (std::size_t i = 0; i < sets.size(); ++i) {
    int below = 0;
    for (std::size_t j = 0; j < sets.size(); ++j)
      if (sets[j].is_proper_subset_of(sets[i])) below += tm.mult[j];
    o.lower[i] = sets[i].size() - 2 - below;
    o.upper[i] = tm.mult[i] - 1 - o.lower[i];
  }
  if (!is_good_orientation(tm, o)) return std::nullopt;
  return o;
}

/// Every orientation that splits m(e)-1 over each edge, good or not.
inline std::vector<MultiplicityOrientation> enumerate_orientations(const MultiplicityTree& tm) {
  const std::size_t e = tm.mult.size();
  std::vector<MultiplicityOrientation> out;
  MultiplicityOrientation cur;
  cur.lower.assign(e, 0);
  cur.upper.assign(e, 0);
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == e) {
      out.push_back(cur);
      return;
    }
    for (int x = 0; x < tm.mult[i]; ++x) {
      cur.lower[i] = x;
      cur.upper[i] = tm.mult[i] - 1 - x;
      rec(i + 1);
    }
  };
  rec(0);
  return out;
}

/// Integral of mon(tau, m) over M_{0,n} for a top-degree tree with multiplicity:
///   prod_v (-1)^{|v|-3} (|v|-3)! / prod_{f in F(v)} mult(f)!^2  *  prod_e (m(e)-1)!
/// and 0 without a good orientation.
inline Rational top_degree_value(const MultiplicityTree& tm) {
  const auto o = good_orientation(tm);
  if (!o) return 0;
  const StableTree& t = tm.tree;
  Rational value = 1;
  for (int v = 0; v < static_cast<int>(t.vertices().size()); ++v) {
    const int k = t.vertex(v).valency() - 3;
    Integer den = 1;
    for (int x : vertex_flag_mults(t, *o, v)) {
      const Integer f = factorial(x);
      den *= f * f;
    }
    Rational term(factorial(k), den);
    term.canonicalize();
    if (k % 2) term = -term;
    value *= term;
  }
  for (int m : tm.mult) value *= Rational(factorial(m - 1));
  if (!is_integer(value)) throw verification_error("non-integral intersection number " + to_string(value));
  return value;
}

/// Intersection pairing of two divisor monomials.
inline Rational pairing(const DivisorMonomial& a, const DivisorMonomial& b) {
  if (a.n() != b.n()) throw input_error("monomials live on different moduli spaces");
  if (a.degree() + b.degree() != a.n() - 3) return 0;
  const auto p = a.times(b);
  if (!p) return 0;
  return top_degree_value(p->to_tree());
}

/// Bilinear extension of pairing.
inline Rational pairing_bilinear(const RingElement& x, const RingElement& y) {
  if (x.n() != y.n()) throw input_error("elements live on different moduli spaces");
  Rational total = 0;
  for (const auto& [a, ca] : x.terms())
    for (const auto& [b, cb] : y.terms()) {
      if (a.degree() + b.degree() != x.n() - 3) continue;
      const Rational v = pairing(a, b);
      if (v != 0) total += ca * cb * v;
    }
  return total;
}

}  // namespace m0n
