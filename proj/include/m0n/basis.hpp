#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "m0n/errors.hpp"
#include "m0n/intersection.hpp"
#include "m0n/keel_ring.hpp"
#include "m0n/linalg.hpp"
#include "m0n/monomial.hpp"
#include "m0n/trees.hpp"

namespace m0n {

/// An element of the tree basis: a nice family whose interior vertices have
/// at least four flags, with an x-exponent at every vertex.
///
/// The class is prod_S D_S * prod_v x_v^{m(v)}, where x_v = -psi of the flag of
/// v pointing to the root (psi of tail n at the root). Bounds:
/// 0 <= m(S) <= |v_S| - 4 and 0 <= m(root) <= |v_root| - 3.
class BasisElement {
 public:
  BasisElement(StableTree tree, std::vector<int> exps, int root_exp)
      : tree_(std::move(tree)), exps_(std::move(exps)), root_exp_(root_exp) {
    if (exps_.size() != tree_.sets().size()) throw input_error("exponent list does not match the edge sets");
    for (std::size_t i = 0; i < exps_.size(); ++i) {
      const int val = tree_.vertex(static_cast<int>(i) + 1).valency();
      if (val < 4) throw input_error("basis element needs |v_S| >= 4 at " + tree_.sets()[i].to_string());
      if (exps_[i] < 0 || exps_[i] > val - 4) throw input_error("x-exponent out of range at " + tree_.sets()[i].to_string());
    }
    if (root_exp_ < 0 || root_exp_ > tree_.root().valency() - 3) throw input_error("x-exponent out of range at the root");
  }

  static BasisElement unit(int n) { return BasisElement(StableTree::star(n), {}, 0); }

  int n() const { return tree_.n(); }
  const StableTree& tree() const { return tree_; }
  const Family& sets() const { return tree_.sets(); }
  const std::vector<int>& exponents() const { return exps_; }
  int root_exponent() const { return root_exp_; }

  /// m(v) for vertex index v of tree() (0 is the root).
  int vertex_exponent(int v) const { return v == 0 ? root_exp_ : exps_[v - 1]; }
  /// m(S) with S one of the sets or {1..n-1}; 0 for any other set.
  int exponent_of(Subset s) const {
    if (s == Subset::range(n() - 1)) return root_exp_;
    const int e = tree_.edge_index(s);
    return e < 0 ? 0 : exps_[e];
  }

  int degree() const {
    int d = static_cast<int>(exps_.size()) + root_exp_;
    for (int m : exps_) d += m;
    return d;
  }

  /// (-1)^{n-3-|E|}, equal to prod_v (-1)^{|v|-3}.
  int star_sign() const { return (n() - 3 - tree_.edge_count()) % 2 ? -1 : 1; }

  /// Readable encoding, e.g. "D{1,2,3}" or "D{1,2,3}*x{1,2,3,4,5}^2"; "1" for the unit.
  std::string to_string() const {
    std::string s;
    auto put = [&](const std::string& part) { s += (s.empty() ? "" : "*") + part; };
    for (std::size_t i = 0; i < exps_.size(); ++i) {
      put("D" + tree_.sets()[i].to_string());
      if (exps_[i] > 0) put("x" + tree_.sets()[i].to_string() + (exps_[i] > 1 ? "^" + std::to_string(exps_[i]) : ""));
    }
    if (root_exp_ > 0) put("x" + Subset::range(n() - 1).to_string() + (root_exp_ > 1 ? "^" + std::to_string(root_exp_) : ""));
    return s.empty() ? "1" : s;
  }

  bool operator==(const BasisElement& o) const {
    return tree_ == o.tree_ && exps_ == o.exps_ && root_exp_ == o.root_exp_;
  }

 private:
  StableTree tree_;
  std::vector<int> exps_;
  int root_exp_;
};

/// Canonical key order: degree, family, exponents, root exponent.
inline bool canonical_less(const BasisElement& a, const BasisElement& b) {
  if (a.n() != b.n()) return a.n() < b.n();
  if (a.degree() != b.degree()) return a.degree() < b.degree();
  const Family& fa = a.sets();
  const Family& fb = b.sets();
  if (fa != fb) return std::lexicographical_compare(fa.begin(), fa.end(), fb.begin(), fb.end(), CanonicalLess{});
  if (a.exponents() != b.exponents()) return a.exponents() < b.exponents();
  return a.root_exponent() < b.root_exponent();
}

struct StarredElement {
  BasisElement element;
  int sign;
};

/// m*(S) = |v_S| - 4 - m(S), m*(root) = |v_root| - 3 - m(root), with sign prod_v (-1)^{|v|-3}.
inline StarredElement star(const BasisElement& mu) {
  const StableTree& t = mu.tree();
  std::vector<int> e(mu.exponents().size());
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = t.vertex(static_cast<int>(i) + 1).valency() - 4 - mu.exponents()[i];
  const int r = t.root().valency() - 3 - mu.root_exponent();
  return {BasisElement(t, std::move(e), r), mu.star_sign()};
}

/// Picks the two flags (indices into blocks, which are sorted by smallest label)
/// that are kept on one side when expanding a psi class.
using FlagChooser = std::function<std::pair<int, int>(const std::vector<Subset>& blocks)>;

inline std::pair<int, int> smallest_flags(const std::vector<Subset>&) { return {0, 1}; }

namespace detail {

struct PsiTerm {
  Family sets;
};

/// psi^k of the root-side flag of a vertex whose other flags are the given
/// blocks, as a sum of boundary strata (each with coefficient +1):
/// psi = sum_{U ⊇ {a,b}, U ≠ all blocks} D_U, continued on the root-side vertex.
inline void psi_power(std::vector<Subset> blocks, int k, const FlagChooser& choose, Family& acc, std::vector<PsiTerm>& out) {
  if (k == 0) {
    out.push_back({acc});
    return;
  }
  const int m = static_cast<int>(blocks.size());
  if (m < k + 2) return;
  std::sort(blocks.begin(), blocks.end(), [](Subset x, Subset y) { return x.min() < y.min(); });
  const auto [a, b] = choose(blocks);
  if (a == b || a < 0 || b < 0 || a >= m || b >= m) throw input_error("flag chooser returned an invalid pair");
  std::vector<int> others;
  for (int i = 0; i < m; ++i)
    if (i != a && i != b) others.push_back(i);
  const int r = static_cast<int>(others.size());
  for (std::uint32_t pick = 0; pick < (1u << r); ++pick) {
    if (pick == (1u << r) - 1) continue;
    Subset u = blocks[a] | blocks[b];
    std::vector<Subset> next;
    for (int q = 0; q < r; ++q) {
      if ((pick >> q) & 1u)
        u = u | blocks[others[q]];
      else
        next.push_back(blocks[others[q]]);
    }
    next.push_back(u);
    acc.push_back(u);
    psi_power(std::move(next), k - 1, choose, acc, out);
    acc.pop_back();
  }
}

}  // namespace detail

/// The class of mu as a combination of good monomials.
inline RingElement tree_expansion(const BasisElement& mu, const FlagChooser& choose = smallest_flags) {
  const StableTree& t = mu.tree();
  const int n = t.n();
  std::vector<std::pair<Rational, Family>> terms{{Rational(1), t.sets()}};
  for (int v = 0; v < static_cast<int>(t.vertices().size()); ++v) {
    const int k = mu.vertex_exponent(v);
    if (k == 0) continue;
    std::vector<detail::PsiTerm> psi;
    Family acc;
    detail::psi_power(outgoing_blocks(t, v), k, choose, acc, psi);
    const Rational sign = (k % 2) ? -1 : 1;
    std::vector<std::pair<Rational, Family>> next;
    for (const auto& [c, fam] : terms)
      for (const auto& p : psi) {
        Family f = fam;
        f.insert(f.end(), p.sets.begin(), p.sets.end());
        next.emplace_back(c * sign, std::move(f));
      }
    terms = std::move(next);
  }
  RingElement out(n);
  for (const auto& [c, fam] : terms) out.add(DivisorMonomial::from_family(n, fam), c);
  return out;
}

/// t_{mu nu} = sign(nu) * integral(mu * nu*), through expansions and the closed pairing.
inline Rational t_entry_by_expansion(const BasisElement& mu, const BasisElement& nu) {
  if (mu.n() != nu.n()) throw input_error("basis elements live on different moduli spaces");
  if (mu.degree() != nu.degree()) return 0;
  const StarredElement s = star(nu);
  return s.sign * pairing_bilinear(tree_expansion(mu), tree_expansion(s.element));
}

/// t_{mu nu} directly on the union tree of mu and nu*: the x-exponents add up on
/// the lower flag of each edge, a shared edge contributes its self-intersection
/// to either of its flags, and each good choice contributes
/// (-1)^{n-3-|E|} prod_v (|v|-3)! / prod_f d(f)!.
inline Rational t_entry_by_formula(const BasisElement& mu, const BasisElement& nu) {
  if (mu.n() != nu.n()) throw input_error("basis elements live on different moduli spaces");
  if (mu.degree() != nu.degree()) return 0;
  const int n = mu.n();
  const StarredElement s = star(nu);
  Family fam = mu.sets();
  fam.insert(fam.end(), s.element.sets().begin(), s.element.sets().end());
  fam = canonical_family(std::move(fam));
  if (!is_nice_family(fam)) return 0;
  const StableTree t = StableTree::from_nice_family(n, fam);
  const std::size_t e = fam.size();
  std::vector<int> a(e);
  std::vector<int> shared;
  for (std::size_t i = 0; i < e; ++i) {
    a[i] = mu.exponent_of(fam[i]) + s.element.exponent_of(fam[i]);
    if (mu.tree().edge_index(fam[i]) >= 0 && s.element.tree().edge_index(fam[i]) >= 0) shared.push_back(static_cast<int>(i));
  }
  const int a_root = mu.root_exponent() + s.element.root_exponent();
  const int sign = (n - 3 - static_cast<int>(e)) % 2 ? -1 : 1;
  Rational total = 0;
  int good = 0;
  for (std::uint32_t pick = 0; pick < (1u << shared.size()); ++pick) {
    std::vector<int> low = a;
    std::vector<int> up(e, 0);
    for (std::size_t q = 0; q < shared.size(); ++q) ((pick >> q) & 1u ? up : low)[shared[q]] += 1;
    Rational value = 1;
    bool ok = true;
    for (int v = 0; v < static_cast<int>(t.vertices().size()) && ok; ++v) {
      std::vector<int> d;
      for (int c : t.vertex(v).children) d.push_back(up[c - 1]);
      d.push_back(v == 0 ? a_root : low[v - 1]);
      int sum = 0;
      Integer den = 1;
      for (int x : d) {
        sum += x;
        den *= factorial(x);
      }
      const int k = t.vertex(v).valency() - 3;
      if (sum != k) {
        ok = false;
        break;
      }
      value *= Rational(factorial(k), den);
    }
    if (!ok) continue;
    ++good;
    value.canonicalize();
    total += sign * value;
  }
  if (good > 1) throw verification_error("more than one admissible flag splitting for " + mu.to_string() + " vs " + nu.to_string());
  return s.sign * total;
}

/// The half order on basis elements of equal degree. Depth counts the sets
/// containing S, so {1..n-1} has depth 1. With k maximal such that the sets of
/// depth <= k agree and the exponents of depth < k agree, mu precedes nu when
/// on the depth-k sets (a) the exponents of mu are <= those of nu with at least
/// one strict, or (b) they agree and the valencies of mu are <= those of nu
/// with at least one strict.
inline bool precedes(const BasisElement& mu, const BasisElement& nu) {
  if (mu.n() != nu.n()) throw input_error("basis elements live on different moduli spaces");
  if (mu.degree() != nu.degree()) throw input_error("the half order compares elements of equal degree only");
  struct Level {
    Subset set;
    int exp;
    int valency;
  };
  auto levels = [](const BasisElement& b) {
    const StableTree& t = b.tree();
    std::map<int, std::vector<Level>> out;
    for (int v = 0; v < static_cast<int>(t.vertices().size()); ++v) {
      int depth = 1;
      for (int u = v; u != 0; u = t.vertex(u).parent) ++depth;
      out[depth].push_back({t.vertex(v).set, b.vertex_exponent(v), t.vertex(v).valency()});
    }
    for (auto& [d, l] : out) std::sort(l.begin(), l.end(), [](const Level& x, const Level& y) { return CanonicalLess{}(x.set, y.set); });
    return out;
  };
  const auto lm = levels(mu);
  const auto ln = levels(nu);
  auto at = [](const std::map<int, std::vector<Level>>& l, int k) {
    auto it = l.find(k);
    return it == l.end() ? std::vector<Level>{} : it->second;
  };
  auto same_sets = [](const std::vector<Level>& x, const std::vector<Level>& y) {
    if (x.size() != y.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (x[i].set != y[i].set) return false;
    return true;
  };
  const int max_depth = std::max(lm.rbegin()->first, ln.rbegin()->first);
  int k = 1;
  while (k <= max_depth) {
    if (!same_sets(at(lm, k + 1), at(ln, k + 1))) break;
    const auto x = at(lm, k);
    const auto y = at(ln, k);
    bool exps_equal = true;
    for (std::size_t i = 0; i < x.size(); ++i) exps_equal = exps_equal && x[i].exp == y[i].exp;
    if (!exps_equal) break;
    ++k;
  }
  const auto x = at(lm, k);
  const auto y = at(ln, k);
  if (x.empty()) return false;
  bool le = true, lt = false, eq = true, vle = true, vlt = false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    le = le && x[i].exp <= y[i].exp;
    lt = lt || x[i].exp < y[i].exp;
    eq = eq && x[i].exp == y[i].exp;
    vle = vle && x[i].valency <= y[i].valency;
    vlt = vlt || x[i].valency < y[i].valency;
  }
  return (le && lt) || (eq && vle && vlt);
}

/// Sorts elements by degree and, within a degree, topologically for the half
/// order, breaking ties by the canonical key. Throws verification_error if the
/// relation has a cycle.
inline std::vector<BasisElement> order_basis(std::vector<BasisElement> elems) {
  std::sort(elems.begin(), elems.end(), canonical_less);
  std::vector<BasisElement> out;
  std::size_t start = 0;
  while (start < elems.size()) {
    std::size_t end = start;
    while (end < elems.size() && elems[end].degree() == elems[start].degree()) ++end;
    const int g = static_cast<int>(end - start);
    std::vector<std::vector<int>> succ(g);
    std::vector<int> indeg(g, 0);
    for (int i = 0; i < g; ++i)
      for (int j = 0; j < g; ++j)
        if (i != j && precedes(elems[start + i], elems[start + j])) {
          succ[i].push_back(j);
          ++indeg[j];
        }
    std::vector<bool> used(g, false);
    for (int step = 0; step < g; ++step) {
      int pick = -1;
      // Candidates are scanned in canonical order, so the first free one is the smallest key.
      for (int i = 0; i < g; ++i)
        if (!used[i] && indeg[i] == 0) {
          pick = i;
          break;
        }
      if (pick < 0) throw verification_error("the half order on basis elements has a cycle");
      used[pick] = true;
      for (int j : succ[pick]) --indeg[j];
      out.push_back(elems[start + pick]);
    }
    start = end;
  }
  return out;
}

/// The basis B_n in a total order extending the half order within each degree.
inline std::vector<BasisElement> enumerate_basis(int n) {
  check_point_count(n);
  std::vector<BasisElement> all;
  for_each_nice_family(n, n - 3, [&](const Family& fam) {
    const StableTree t = StableTree::from_nice_family(n, fam);
    std::vector<int> bound;
    for (int v = 1; v < static_cast<int>(t.vertices().size()); ++v) {
      const int val = t.vertex(v).valency();
      if (val < 4) return;
      bound.push_back(val - 4);
    }
    const int root_bound = t.root().valency() - 3;
    std::vector<int> e(bound.size(), 0);
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
      if (i == e.size()) {
        for (int r = 0; r <= root_bound; ++r) all.emplace_back(t, e, r);
        return;
      }
      for (int x = 0; x <= bound[i]; ++x) {
        e[i] = x;
        rec(i + 1);
      }
    };
    rec(0);
  });
  return order_basis(std::move(all));
}

enum class TRoute { formula, expansion };

/// Gram data of B_n: T (t-entries), P (signed permutation of the *-operation),
/// M = T P (the Gram matrix) and its inverse, computed twice.
struct PairingMatrices {
  int n = 0;
  std::vector<BasisElement> order;
  Matrix T;
  Matrix P;
  Matrix M;
  Matrix Minv;
  Matrix Minv_series;
  Matrix Minv_elimination;

  int index_of(const BasisElement& b) const {
    for (std::size_t i = 0; i < order.size(); ++i)
      if (order[i] == b) return static_cast<int>(i);
    throw input_error("element " + b.to_string() + " is not in the basis");
  }
  int size() const { return static_cast<int>(order.size()); }
};

inline PairingMatrices gram(int n, TRoute route = TRoute::formula) {
  check_point_count(n);
  if (n > kGradedMaxPoints) throw capability_error("Gram data is limited to n <= " + std::to_string(kGradedMaxPoints));
  PairingMatrices pm;
  pm.n = n;
  pm.order = enumerate_basis(n);
  const int b = pm.size();
  pm.T = Matrix(b, b);
  pm.P = Matrix(b, b);
  for (int i = 0; i < b; ++i)
    for (int j = 0; j < b; ++j) {
      if (pm.order[i].degree() != pm.order[j].degree()) continue;
      pm.T(i, j) = route == TRoute::formula ? t_entry_by_formula(pm.order[i], pm.order[j])
                                            : t_entry_by_expansion(pm.order[i], pm.order[j]);
    }
  for (int i = 0; i < b; ++i) {
    const StarredElement s = star(pm.order[i]);
    pm.P(i, pm.index_of(s.element)) = s.sign;
  }
  if (!pm.T.is_upper_unitriangular()) throw verification_error("T is not unipotent upper triangular in the chosen order");
  pm.M = pm.T * pm.P;
  if (!pm.M.is_symmetric()) throw verification_error("Gram matrix is not symmetric");

  // T^{-1} = I + N + N^2 + ... with N = I - T nilpotent, so M^{-1} = P T^{-1}.
  const Matrix id = Matrix::identity(b);
  const Matrix nil = id - pm.T;
  Matrix series = id;
  Matrix power = nil;
  for (int k = 1; k <= b && !power.is_zero(); ++k) {
    series = series + power;
    power = power * nil;
  }
  pm.Minv_series = pm.P * series;
  pm.Minv_elimination = inverse(pm.M);
  if (!(pm.Minv_series == pm.Minv_elimination)) throw verification_error("the two inverse routes disagree");
  pm.Minv = pm.Minv_elimination;
  if (!(pm.M * pm.Minv).is_identity()) throw verification_error("M * Minv is not the identity");
  return pm;
}

/// Class of the dual element mu-check = sum_nu m^{mu nu} nu as good monomials.
inline RingElement dual_expansion(const PairingMatrices& pm, int i) {
  RingElement out(pm.n);
  for (int j = 0; j < pm.size(); ++j)
    if (pm.Minv(i, j) != 0) out += tree_expansion(pm.order[j]) * pm.Minv(i, j);
  return out;
}

/// Row i holds the coefficients of mu_i-check in the basis.
inline Matrix dual_basis_coeffs(const PairingMatrices& pm) { return pm.Minv; }

}  // namespace m0n
