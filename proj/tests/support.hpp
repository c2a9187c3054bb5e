#pragma once

// Shared generators and hand-written reference formulas for the test binaries.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "m0n/m0n.hpp"

namespace m0n::testing {

using Rng = std::mt19937_64;

inline int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

/// Small random rational p/q with |p| <= range, 1 <= q <= 3.
inline Rational random_rational(Rng& rng, int range = 3, bool nonzero = false) {
  for (;;) {
    Rational q(uniform(rng, -range, range), uniform(rng, 1, 3));
    q.canonicalize();
    if (!nonzero || q != 0) return q;
  }
}

inline Vector random_vector(Rng& rng, int dim) {
  Vector v(dim);
  for (auto& x : v) x = random_rational(rng);
  return v;
}

inline Matrix random_symmetric_nondegenerate(Rng& rng, int dim) {
  for (;;) {
    Matrix m(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = i; j < dim; ++j) m(i, j) = m(j, i) = random_rational(rng);
    if (determinant(m) != 0) return m;
  }
}

inline Matrix random_invertible(Rng& rng, int dim) {
  for (;;) {
    Matrix m(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) m(i, j) = random_rational(rng, 2);
    if (determinant(m) != 0) return m;
  }
}

/// Random symmetric correlators of every arity 3..max_arity on a random metric.
inline FrobeniusData random_frobenius(Rng& rng, int dim, int max_arity) {
  FrobeniusData f(random_symmetric_nondegenerate(rng, dim), max_arity);
  for (int k = 3; k <= max_arity; ++k)
    detail::for_each_multiset(dim, k, [&](const std::vector<int>& idx) { f.set(idx, random_rational(rng)); });
  return f;
}

/// Semisimple algebra with idempotents e_i, (e_i, e_i) = lambda_i, written in a
/// random basis f_a = sum_i A_{ia} e_i. Only Y_3 is nonzero; WDVV holds.
inline FrobeniusData semisimple_seed(Rng& rng, int dim, int max_arity) {
  std::vector<Rational> lambda(dim);
  for (auto& l : lambda) l = random_rational(rng, 3, true);
  const Matrix a = random_invertible(rng, dim);
  Matrix g(dim, dim);
  for (int p = 0; p < dim; ++p)
    for (int q = 0; q < dim; ++q)
      for (int i = 0; i < dim; ++i) g(p, q) += lambda[i] * a(i, p) * a(i, q);
  FrobeniusData f(g, max_arity);
  detail::for_each_multiset(dim, 3, [&](const std::vector<int>& idx) {
    Rational y = 0;
    for (int i = 0; i < dim; ++i) y += lambda[i] * a(i, idx[0]) * a(i, idx[1]) * a(i, idx[2]);
    f.set(idx, y);
  });
  return f;
}

/// Phi = x0^2 x1 / 2 + sum_{k=3..order} r_k x1^k on the metric [[0,1],[1,0]]. WDVV holds.
inline FrobeniusData two_dim_seed(Rng& rng, int order) {
  FormalPotential phi;
  phi.dim = 2;
  phi.order = order;
  phi.coeffs[{2, 1}] = Rational(1, 2);
  for (int k = 3; k <= order; ++k) phi.coeffs[{0, k}] = random_rational(rng);
  return correlators_from_potential(phi, Matrix{{0, 1}, {1, 0}});
}

// ---------------------------------------------------------------------------
// Reference evaluations written directly from the metric and correlators.

/// sum_{a,b} g^{ba} Y(args, Delta_a) Delta_b.
inline Vector raise(const FrobeniusData& f, std::vector<Vector> args) {
  const int d = f.dim();
  Vector lowered(d), out(d);
  args.push_back({});
  for (int a = 0; a < d; ++a) {
    args.back() = unit_vector(d, a);
    lowered[a] = f.evaluate(args);
  }
  const Matrix& gi = f.metric_inverse();
  for (int b = 0; b < d; ++b)
    for (int a = 0; a < d; ++a) out[b] += gi(b, a) * lowered[a];
  return out;
}

/// sum_{a,b} Y(left, Delta_a) g^{ab} Y(Delta_b, right).
inline Rational propagate(const FrobeniusData& f, const std::vector<Vector>& left, std::vector<Vector> right) {
  right.insert(right.begin(), raise(f, left));
  return f.evaluate(right);
}

/// Y_3(g1 g2 D) g Y_3(D g3 D) g Y_3(D g4 g5).
inline Rational chain3(const FrobeniusData& f, const std::vector<Vector>& g) {
  const Vector u = raise(f, {g[0], g[1]});
  const Vector w = raise(f, {u, g[2]});
  return f.evaluate({w, g[3], g[4]});
}

inline std::vector<Vector> pick(const std::vector<Vector>& g, std::initializer_list<int> one_based) {
  std::vector<Vector> out;
  for (int i : one_based) out.push_back(g[i - 1]);
  return out;
}

inline std::vector<Vector> pick(const std::vector<Vector>& g, const std::vector<int>& one_based) {
  std::vector<Vector> out;
  for (int i : one_based) out.push_back(g[i - 1]);
  return out;
}

inline Rational kunneth3(const FrobeniusData& f1, const FrobeniusData& f2, const std::vector<Vector>& a, const std::vector<Vector>& b) {
  return f1.evaluate(a) * f2.evaluate(b);
}

inline Rational kunneth4(const FrobeniusData& f1, const FrobeniusData& f2, const std::vector<Vector>& a, const std::vector<Vector>& b) {
  return f1.evaluate(a) * propagate(f2, pick(b, {1, 2}), pick(b, {3, 4})) +
         propagate(f1, pick(a, {1, 2}), pick(a, {3, 4})) * f2.evaluate(b);
}

inline Rational kunneth5(const FrobeniusData& f1, const FrobeniusData& f2, const std::vector<Vector>& a, const std::vector<Vector>& b) {
  Rational total = f1.evaluate(a) * chain3(f2, b) + chain3(f1, a) * f2.evaluate(b);
  for (int l = 1; l <= 4; ++l) {
    std::vector<int> rest;
    for (int i = 1; i <= 4; ++i)
      if (i != l) rest.push_back(i);
    total -= propagate(f1, pick(a, rest), pick(a, {l, 5})) * propagate(f2, pick(b, rest), pick(b, {l, 5}));
  }
  auto split_sum = [](const FrobeniusData& f, const std::vector<Vector>& g) {
    const std::vector<std::vector<int>> is{{1, 2}, {1, 2, 3}, {1, 2, 4}};
    Rational s = 0;
    for (const auto& in : is) {
      std::vector<int> out;
      for (int j = 1; j <= 4; ++j)
        if (std::find(in.begin(), in.end(), j) == in.end()) out.push_back(j);
      out.push_back(5);
      s += propagate(f, pick(g, in), pick(g, out));
    }
    return s;
  };
  total += split_sum(f1, a) * split_sum(f2, b);
  return total;
}

/// The tensor correlator on pure tensors a_i (x) b_i in the given slot order.
inline Rational ordered_tensor_correlator(const FrobeniusData& f1, const FrobeniusData& f2, const std::vector<Vector>& a,
                                          const std::vector<Vector>& b, GramCache& cache) {
  const int n = static_cast<int>(a.size());
  return detail::dual_contraction(cache.matrices(n), detail::basis_correlators(f1, cache.expansions(n), a),
                                  detail::basis_correlators(f2, cache.expansions(n), b));
}

inline void add_scaled(Vector& acc, const Vector& v, const Rational& c = 1) {
  for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += c * v[i];
}

inline Vector product2(const FrobeniusData& f1, const FrobeniusData& f2, const std::vector<Vector>& a, const std::vector<Vector>& b) {
  return kron(raise(f1, a), raise(f2, b));
}

inline Vector product3(const FrobeniusData& f1, const FrobeniusData& f2, const std::vector<Vector>& a, const std::vector<Vector>& b) {
  auto nested = [](const FrobeniusData& f, const std::vector<Vector>& g) { return raise(f, {raise(f, {g[0], g[1]}), g[2]}); };
  Vector out = kron(raise(f1, a), nested(f2, b));
  add_scaled(out, kron(nested(f1, a), raise(f2, b)));
  return out;
}

inline Vector product4(const FrobeniusData& f1, const FrobeniusData& f2, const std::vector<Vector>& a, const std::vector<Vector>& b) {
  auto nested = [](const FrobeniusData& f, const std::vector<Vector>& g) {
    return raise(f, {raise(f, {raise(f, {g[0], g[1]}), g[2]}), g[3]});
  };
  Vector out = kron(raise(f1, a), nested(f2, b));
  add_scaled(out, kron(nested(f1, a), raise(f2, b)));
  for (int l = 1; l <= 4; ++l) {
    std::vector<int> rest;
    for (int i = 1; i <= 4; ++i)
      if (i != l) rest.push_back(i);
    add_scaled(out, kron(raise(f1, {raise(f1, pick(a, rest)), a[l - 1]}), raise(f2, {raise(f2, pick(b, rest)), b[l - 1]})), -1);
  }
  auto split_sum = [](const FrobeniusData& f, const std::vector<Vector>& g) {
    Vector s(f.dim());
    add_scaled(s, raise(f, {raise(f, {g[0], g[1]}), g[2], g[3]}));
    add_scaled(s, raise(f, {raise(f, {g[0], g[1], g[2]}), g[3]}));
    add_scaled(s, raise(f, {raise(f, {g[0], g[1], g[3]}), g[2]}));
    return s;
  };
  add_scaled(out, kron(split_sum(f1, a), split_sum(f2, b)));
  return out;
}

/// Relabels points 1..n-1 by a permutation perm (perm[i-1] is the image of i).
inline Subset relabel(Subset s, const std::vector<int>& perm) {
  Subset out;
  for (int i : s.labels()) out.insert(perm[i - 1]);
  return out;
}

inline DivisorMonomial relabel(const DivisorMonomial& m, const std::vector<int>& perm) {
  std::vector<Factor> f;
  for (const auto& x : m.factors()) f.push_back({relabel(x.set, perm), x.exp});
  return DivisorMonomial(m.n(), f);
}

inline std::vector<int> random_permutation(Rng& rng, int k) {
  std::vector<int> p(k);
  std::iota(p.begin(), p.end(), 1);
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

/// Brute force: compatible families of r divisor subsets, counted without the
/// library's enumeration. Two subsets are compatible when nested or disjoint.
inline long count_compatible_families(int n, int r) {
  std::vector<std::uint32_t> all;
  const std::uint32_t full = (1u << n) - 2;  // bits 1..n-1
  for (std::uint32_t s = 2; s <= full; s += 2) {
    const int c = __builtin_popcount(s);
    if (c >= 2 && c <= n - 2) all.push_back(s);
  }
  long count = 0;
  std::vector<std::uint32_t> chosen;
  std::function<void(std::size_t)> rec = [&](std::size_t from) {
    if (static_cast<int>(chosen.size()) == r) {
      ++count;
      return;
    }
    for (std::size_t i = from; i < all.size(); ++i) {
      bool ok = true;
      for (auto t : chosen) {
        const auto s = all[i];
        if (!((s & t) == 0 || (s & t) == s || (s & t) == t)) ok = false;
      }
      if (!ok) continue;
      chosen.push_back(all[i]);
      rec(i + 1);
      chosen.pop_back();
    }
  };
  rec(0);
  return count;
}

}  // namespace m0n::testing
