#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "m0n/errors.hpp"
#include "m0n/subset.hpp"

namespace m0n {

/// Edge sets of an n-tree. Canonical when sorted by CanonicalLess without repeats.
using Family = std::vector<Subset>;

/// Number of non-empty sets among S_i ∩ T_j for the 2-partitions {S, S^c} and
/// {T, T^c} of {1..n}, where S, T ⊆ {1..n-1} are the parts avoiding n.
/// 2: equal, 3: nested or disjoint, 4: crossing (the product D_S D_T vanishes).
inline int partition_profile(Subset s, Subset t) {
  if (s == t) return 2;
  const Subset common = s & t;
  if (common.empty() || common == s || common == t) return 3;
  return 4;
}

inline bool is_nice_family(const Family& sets) {
  for (std::size_t i = 0; i < sets.size(); ++i)
    for (std::size_t j = i + 1; j < sets.size(); ++j)
      if (partition_profile(sets[i], sets[j]) == 4) return false;
  return true;
}

inline Family canonical_family(Family sets) {
  std::sort(sets.begin(), sets.end(), CanonicalLess{});
  sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
  return sets;
}

inline std::string to_string(const Family& sets) {
  std::string s = "[";
  for (std::size_t i = 0; i < sets.size(); ++i) s += (i ? "," : "") + sets[i].to_string();
  return s + "]";
}

/// A stable n-tree, stored through its nice family of edge sets and rooted at
/// the vertex carrying tail n.
///
/// Vertex 0 is the root; vertex i+1 is v_S for S = sets()[i], reached from the
/// root through the edge e_S. Each vertex records the set of labels of
/// {1..n-1} on its branch (the root records {1..n-1}).
class StableTree {
 public:
  struct Vertex {
    Subset set;
    int parent = -1;
    std::vector<int> children;
    std::vector<int> tails;

    /// |F(v)|: tails, child edges, and the edge towards the root.
    int valency() const {
      return static_cast<int>(tails.size() + children.size()) + (parent >= 0 ? 1 : 0);
    }
  };

  /// The one-vertex tree with n tails.
  static StableTree star(int n) { return StableTree(n, {}); }

  /// Builds the tree of a nice family; throws input_error on invalid or crossing sets.
  static StableTree from_nice_family(int n, Family sets) {
    check_point_count(n);
    for (Subset s : sets) check_divisor_subset(n, s);
    sets = canonical_family(std::move(sets));
    if (!is_nice_family(sets)) throw input_error("family " + m0n::to_string(sets) + " is not nice");
    return StableTree(n, std::move(sets));
  }

  int n() const { return n_; }
  const Family& sets() const { return sets_; }
  int edge_count() const { return static_cast<int>(sets_.size()); }
  const std::vector<Vertex>& vertices() const { return vertices_; }
  const Vertex& vertex(int v) const { return vertices_[v]; }
  const Vertex& root() const { return vertices_[0]; }

  /// Index into sets() of S, or -1 when S is not an edge set.
  int edge_index(Subset s) const {
    auto it = std::lower_bound(sets_.begin(), sets_.end(), s, CanonicalLess{});
    return (it != sets_.end() && *it == s) ? static_cast<int>(it - sets_.begin()) : -1;
  }
  /// Vertex v_S; throws input_error when S is not an edge set.
  int vertex_of(Subset s) const {
    int e = edge_index(s);
    if (e < 0) throw input_error(s.to_string() + " is not an edge set of " + m0n::to_string(sets_));
    return e + 1;
  }

  bool operator==(const StableTree& o) const { return n_ == o.n_ && sets_ == o.sets_; }

 private:
  StableTree(int n, Family sets) : n_(n), sets_(std::move(sets)) {
    vertices_.resize(sets_.size() + 1);
    vertices_[0].set = Subset::range(n_ - 1);
    for (std::size_t i = 0; i < sets_.size(); ++i) {
      Vertex& v = vertices_[i + 1];
      v.set = sets_[i];
      // Sets are sorted by size, so the first later superset is the smallest one.
      v.parent = 0;
      for (std::size_t j = i + 1; j < sets_.size(); ++j) {
        if (sets_[i].is_proper_subset_of(sets_[j])) {
          v.parent = static_cast<int>(j + 1);
          break;
        }
      }
      vertices_[v.parent].children.push_back(static_cast<int>(i + 1));
    }
    for (int label = 1; label < n_; ++label) {
      int owner = 0;
      for (std::size_t i = 0; i < sets_.size(); ++i) {
        if (sets_[i].contains(label)) {
          owner = static_cast<int>(i + 1);
          break;
        }
      }
      vertices_[owner].tails.push_back(label);
    }
    vertices_[0].tails.push_back(n_);
  }

  int n_ = 0;
  Family sets_;
  std::vector<Vertex> vertices_;
};

/// Nice family -> tree; std::nullopt stands for the zero class (some pair crosses).
inline std::optional<StableTree> tree_from_family(int n, Family sets) {
  check_point_count(n);
  for (Subset s : sets) check_divisor_subset(n, s);
  sets = canonical_family(std::move(sets));
  if (!is_nice_family(sets)) return std::nullopt;
  return StableTree::from_nice_family(n, std::move(sets));
}

inline Family family_from_tree(const StableTree& t) { return t.sets(); }

/// All boundary-divisor subsets for n points in canonical order.
inline std::vector<Subset> divisor_subsets(int n) {
  check_point_count(n);
  std::vector<Subset> out;
  const std::uint32_t top = std::uint32_t{1} << n;
  for (std::uint32_t b = 2; b < top; b += 2) {
    Subset s(b);
    if (s.size() >= 2 && s.size() <= n - 2) out.push_back(s);
  }
  std::sort(out.begin(), out.end(), CanonicalLess{});
  return out;
}

/// Calls visit(family) for every nice family of pairwise distinct divisor sets
/// with at most max_size members, in lexicographic order of canonical families.
/// The families handed to visit are canonical.
inline void for_each_nice_family(int n, int max_size, const std::function<void(const Family&)>& visit) {
  const std::vector<Subset> pool = divisor_subsets(n);
  Family current;
  std::function<void(std::size_t)> extend = [&](std::size_t start) {
    visit(current);
    if (static_cast<int>(current.size()) >= max_size) return;
    for (std::size_t i = start; i < pool.size(); ++i) {
      Subset s = pool[i];
      bool ok = true;
      for (Subset t : current) {
        if (partition_profile(s, t) == 4) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      current.push_back(s);
      extend(i + 1);
      current.pop_back();
    }
  };
  extend(0);
}

/// Every isomorphism class of stable n-trees with exactly r edges, once each.
inline std::vector<StableTree> enumerate_stable_trees(int n, int r) {
  check_point_count(n);
  if (r < 0 || r > n - 3)
    throw input_error("edge count " + std::to_string(r) + " outside [0, " + std::to_string(n - 3) + "] for n=" + std::to_string(n));
  std::vector<Family> families;
  for_each_nice_family(n, r, [&](const Family& f) {
    if (static_cast<int>(f.size()) == r) families.push_back(f);
  });
  // The pool is canonically ordered and sets are appended in pool order, so
  // each family is already sorted; order the list of families lexicographically.
  std::sort(families.begin(), families.end(), [](const Family& a, const Family& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), CanonicalLess{});
  });
  std::vector<StableTree> out;
  out.reserve(families.size());
  for (auto& f : families) out.push_back(StableTree::from_nice_family(n, std::move(f)));
  return out;
}

struct DepthOmega {
  int depth = 0;
  Family omega;
};

/// depth: edges on the path from v_S to the root; omega: the maximal edge sets
/// strictly inside S (the outgoing edges of v_S).
inline DepthOmega depth_and_omega(const StableTree& t, Subset s) {
  const int v = t.vertex_of(s);
  DepthOmega out;
  for (int u = v; u != 0; u = t.vertex(u).parent) ++out.depth;
  for (int c : t.vertex(v).children) out.omega.push_back(t.vertex(c).set);
  out.omega = canonical_family(std::move(out.omega));
  return out;
}

inline StableTree contract_edge(const StableTree& t, Subset s) {
  const int e = t.edge_index(s);
  if (e < 0) throw input_error(s.to_string() + " is not an edge set");
  Family rest = t.sets();
  rest.erase(rest.begin() + e);
  return StableTree::from_nice_family(t.n(), std::move(rest));
}

/// A stable tree with edge multiplicities m(e) >= 1, aligned with tree.sets().
struct MultiplicityTree {
  StableTree tree;
  std::vector<int> mult;

  MultiplicityTree(StableTree t, std::vector<int> m) : tree(std::move(t)), mult(std::move(m)) {
    if (mult.size() != tree.sets().size()) throw input_error("multiplicity list does not match the edge sets");
    for (int x : mult)
      if (x < 1) throw input_error("edge multiplicities must be >= 1");
  }
  explicit MultiplicityTree(StableTree t) : tree(std::move(t)), mult(tree.sets().size(), 1) {}

  int degree() const {
    int d = 0;
    for (int x : mult) d += x;
    return d;
  }
};

}  // namespace m0n
