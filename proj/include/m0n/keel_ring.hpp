#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "m0n/errors.hpp"
#include "m0n/linalg.hpp"
#include "m0n/monomial.hpp"
#include "m0n/rational.hpp"
#include "m0n/trees.hpp"

namespace m0n {

/// Largest n for which the graded relation spaces and Gram data are built.
inline constexpr int kGradedMaxPoints = 7;

/// Labels i, j in S and k outside S used to rewrite D_S^2.
struct SquareChoice {
  int i = 0;
  int j = 0;
  int k = 0;
};

/// The sets T of the two sums expressing D_S^2 through D_S D_T:
///   D_S^2 = - sum_{ {i,j} ⊆ T ⊊ S } D_S D_T - sum_{ S ⊊ T ⊊ {1..n-1}, k ∉ T } D_S D_T.
inline std::vector<Subset> square_rewrite_sets(int n, Subset s, SquareChoice c) {
  check_divisor_subset(n, s);
  const Subset all = Subset::range(n - 1);
  if (c.i == c.j || !s.contains(c.i) || !s.contains(c.j))
    throw input_error("choice needs two distinct labels i, j inside " + s.to_string());
  if (c.k < 1 || c.k > n - 1 || s.contains(c.k))
    throw input_error("choice needs a label k in {1..n-1} outside " + s.to_string());
  std::vector<Subset> out;
  const Subset ij = Subset::singleton(c.i) | Subset::singleton(c.j);
  const std::uint32_t inner = (s - ij).bits();
  for (std::uint32_t x = inner;; x = (x - 1) & inner) {
    if (x != inner) out.push_back(ij | Subset(x));
    if (x == 0) break;
  }
  const std::uint32_t outer = (all - s - Subset::singleton(c.k)).bits();
  for (std::uint32_t x = outer; x != 0; x = (x - 1) & outer) out.push_back(s | Subset(x));
  return out;
}

/// The deterministic choice used by normal forms. With the branches of v_S
/// ordered by their smallest label, i and j are the smallest labels of the
/// first two branches and k is the smallest label of parent(S) \ S. Every
/// divisor produced is then new to the monomial, so each rewrite lowers the
/// total exponent excess by one.
inline SquareChoice branch_choice(const DivisorMonomial& m, Subset s) {
  const StableTree t = StableTree::from_nice_family(m.n(), m.family());
  const auto& v = t.vertex(t.vertex_of(s));
  std::vector<int> mins;
  for (int c : v.children) mins.push_back(t.vertex(c).set.min());
  for (int label : v.tails) mins.push_back(label);
  std::sort(mins.begin(), mins.end());
  const Subset above = t.vertex(v.parent).set - s;
  return {mins[0], mins[1], above.min()};
}

/// Arithmetic in Keel's presentation of H*(M_{0,n}), used as an independent
/// reference for the closed intersection formulas. Normal forms are memoized
/// per instance; an instance must not be shared between threads.
class KeelRing {
 public:
  using Chooser = std::function<SquareChoice(const DivisorMonomial&, Subset)>;

  explicit KeelRing(int n) : n_(n) { check_point_count(n); }
  int n() const { return n_; }

  /// Lowers the exponent of D_S by one in every monomial where it is >= 2,
  /// substituting the square relation for the given choice. Crossing
  /// products are dropped.
  RingElement rewrite_square(const RingElement& e, Subset s, SquareChoice c) const {
    check_same(e);
    const std::vector<Subset> sets = square_rewrite_sets(n_, s, c);
    RingElement out(n_);
    for (const auto& [m, coef] : e.terms()) {
      if (m.exponent(s) < 2) {
        out.add(m, coef);
        continue;
      }
      const DivisorMonomial lowered = m.adjusted(s, -1);
      for (Subset t : sets)
        if (auto p = lowered.times(DivisorMonomial(n_, {{t, 1}}))) out.add(*p, -coef);
    }
    return out;
  }

  /// An equal element supported on good monomials, reached with branch_choice.
  RingElement normal_form(const RingElement& e) {
    check_same(e);
    RingElement out(n_);
    for (const auto& [m, coef] : e.terms()) out += normal_form(m) * coef;
    return out;
  }

  const RingElement& normal_form(const DivisorMonomial& m) {
    if (auto it = cache_.find(m); it != cache_.end()) return it->second;
    RingElement result(n_);
    if (!m.is_nice()) {
      // A crossing pair is zero.
    } else if (m.is_good()) {
      result.add(m, 1);
    } else {
      Subset s;
      for (const auto& f : m.factors())
        if (f.exp >= 2) {
          s = f.set;
          break;
        }
      const RingElement step = rewrite_square(RingElement(m), s, branch_choice(m, s));
      for (const auto& [m2, c2] : step.terms()) result += normal_form(m2) * c2;
    }
    return cache_.emplace(m, std::move(result)).first->second;
  }

  /// Normal form with an arbitrary choice rule, bounded by max_rewrites steps.
  /// Throws verification_error when the bound is hit (the rule may cycle).
  RingElement normal_form_with(const RingElement& e, const Chooser& choose, int max_rewrites = 100000) const {
    check_same(e);
    RingElement done(n_);
    RingElement work = e;
    int steps = 0;
    while (!work.is_zero()) {
      RingElement next(n_);
      for (const auto& [m, c] : work.terms()) {
        if (!m.is_nice()) continue;
        if (m.is_good()) {
          done.add(m, c);
          continue;
        }
        if (++steps > max_rewrites) throw verification_error("square rewriting did not terminate within the step bound");
        Subset s;
        for (const auto& f : m.factors())
          if (f.exp >= 2) {
            s = f.set;
            break;
          }
        next += rewrite_square(RingElement(m, c), s, choose(m, s));
      }
      work = std::move(next);
    }
    return done;
  }

  /// The degree n-3 functional: each good top-degree monomial integrates to 1.
  Rational integral(const RingElement& e) {
    check_same(e);
    if (e.is_zero()) return 0;
    const auto d = e.homogeneous_degree();
    if (!d) throw input_error("integral of a non-homogeneous element");
    if (*d != n_ - 3) return 0;
    Rational total = 0;
    for (const auto& [m, c] : e.terms())
      for (const auto& [m2, c2] : normal_form(m).terms()) total += c * c2;
    return total;
  }

  Rational integral(const DivisorMonomial& m) { return integral(RingElement(m)); }

  /// integral(m1 * m2); 0 when the degrees are not complementary.
  Rational oracle_pairing(const DivisorMonomial& a, const DivisorMonomial& b) {
    if (a.n() != n_ || b.n() != n_) throw input_error("monomials live on a different moduli space");
    if (a.degree() + b.degree() != n_ - 3) return 0;
    auto p = a.times(b);
    if (!p) return 0;
    return integral(*p);
  }

  std::size_t cache_size() const { return cache_.size(); }

 private:
  void check_same(const RingElement& e) const {
    if (e.n() != n_) throw input_error("element lives on a different moduli space");
  }

  int n_;
  std::map<DivisorMonomial, RingElement> cache_;
};

/// Degree-d part of the ring: good monomials (trees with d edges) and the
/// linear relations among them coming from the four-point relation at every
/// vertex of every tree with d-1 edges.
struct GradedPiece {
  int n = 0;
  int degree = 0;
  std::vector<DivisorMonomial> monomials;
  std::map<DivisorMonomial, int> column;
  std::vector<SparseRow> relations;
  SparseEchelon echelon;

  int rank() const { return echelon.rank(); }
  int dimension() const { return static_cast<int>(monomials.size()) - rank(); }

  /// Coordinates of a combination of good monomials of this degree.
  SparseRow coordinates(const RingElement& e) const {
    SparseRow row;
    for (const auto& [m, c] : e.terms()) {
      auto it = column.find(m);
      if (it == column.end()) throw input_error("monomial " + m.to_string() + " is not a good monomial of degree " + std::to_string(degree));
      row[it->second] += c;
    }
    std::erase_if(row, [](const auto& kv) { return kv.second == 0; });
    return row;
  }
};

/// Flags at vertex v of t as blocks of labels below it; the flag towards the
/// root (tail n at the root) is reported separately.
inline std::vector<Subset> outgoing_blocks(const StableTree& t, int v) {
  std::vector<Subset> out;
  for (int c : t.vertex(v).children) out.push_back(t.vertex(c).set);
  for (int label : t.vertex(v).tails)
    if (label != t.n()) out.push_back(Subset::singleton(label));
  std::sort(out.begin(), out.end(), [](Subset a, Subset b) { return a.min() < b.min(); });
  return out;
}

inline GradedPiece graded_piece(int n, int d) {
  check_point_count(n);
  if (n > kGradedMaxPoints) throw capability_error("graded linear algebra is limited to n <= " + std::to_string(kGradedMaxPoints));
  if (d < 0 || d > n - 3) throw input_error("degree " + std::to_string(d) + " outside [0, n-3]");
  GradedPiece g;
  g.n = n;
  g.degree = d;
  for (const auto& t : enumerate_stable_trees(n, d)) {
    g.column.emplace(DivisorMonomial::from_family(n, t.sets()), static_cast<int>(g.monomials.size()));
    g.monomials.push_back(DivisorMonomial::from_family(n, t.sets()));
  }
  if (d == 0) return g;
  for (const auto& t : enumerate_stable_trees(n, d - 1)) {
    for (int v = 0; v < static_cast<int>(t.vertices().size()); ++v) {
      // Flags: the outgoing blocks, then the root-side flag as index m.
      const std::vector<Subset> blocks = outgoing_blocks(t, v);
      const int m = static_cast<int>(blocks.size());
      const int flags = m + 1;
      if (flags < 4) continue;
      // Sum of D_tau D_U over splits of the flags with {a,b} on one side and {c,e} on the other.
      auto split_sum = [&](int a, int b, int c, int e, const Rational& sign, SparseRow& row) {
        const std::uint32_t fixed_in = (1u << a) | (1u << b);
        const std::uint32_t fixed_out = (1u << c) | (1u << e);
        const std::uint32_t free = ((1u << flags) - 1) & ~fixed_in & ~fixed_out;
        for (std::uint32_t x = free;; x = (x - 1) & free) {
          const std::uint32_t side = fixed_in | x;
          // U collects the blocks on the side away from the root flag.
          const std::uint32_t away = (side >> m) & 1u ? (((1u << flags) - 1) & ~side) : side;
          Subset u;
          for (int f = 0; f < m; ++f)
            if ((away >> f) & 1u) u = u | blocks[f];
          Family fam = t.sets();
          fam.push_back(u);
          row[g.column.at(DivisorMonomial::from_family(n, fam))] += sign;
          if (x == 0) break;
        }
      };
      for (int f1 = 0; f1 < flags; ++f1)
        for (int f2 = f1 + 1; f2 < flags; ++f2)
          for (int f3 = f2 + 1; f3 < flags; ++f3)
            for (int f4 = f3 + 1; f4 < flags; ++f4) {
              SparseRow r1, r2;
              split_sum(f1, f2, f3, f4, 1, r1);
              split_sum(f1, f3, f2, f4, -1, r1);
              split_sum(f1, f2, f3, f4, 1, r2);
              split_sum(f1, f4, f2, f3, -1, r2);
              for (SparseRow* r : {&r1, &r2}) {
                std::erase_if(*r, [](const auto& kv) { return kv.second == 0; });
                if (r->empty()) continue;
                g.relations.push_back(*r);
                g.echelon.insert(*r);
              }
            }
    }
  }
  return g;
}

/// dim H^{2d}(M_{0,n}) for d = 0..n-3 from good monomials modulo relations.
inline std::vector<int> graded_dimensions(int n) {
  check_point_count(n);
  if (n > kGradedMaxPoints) throw capability_error("graded linear algebra is limited to n <= " + std::to_string(kGradedMaxPoints));
  std::vector<int> out;
  for (int d = 0; d <= n - 3; ++d) out.push_back(graded_piece(n, d).dimension());
  return out;
}

}  // namespace m0n
