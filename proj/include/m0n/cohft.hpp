#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "m0n/basis.hpp"
#include "m0n/errors.hpp"
#include "m0n/linalg.hpp"
#include "m0n/monomial.hpp"
#include "m0n/rational.hpp"
#include "m0n/trees.hpp"

namespace m0n {

using Vector = std::vector<Rational>;

inline Vector unit_vector(int dim, int a) {
  Vector v(dim);
  v[a] = 1;
  return v;
}

/// Tensor of two vectors in the basis Delta'_a (x) Delta''_b, index a * dim'' + b.
inline Vector kron(const Vector& x, const Vector& y) {
  Vector out(x.size() * y.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < y.size(); ++j) out[i * y.size() + j] = x[i] * y[j];
  return out;
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      for (int k = 0; k < b.rows(); ++k)
        for (int l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

/// A metric vector space with symmetric correlators Y_n for 3 <= n <= max_arity.
/// Indices are 0-based; Y_n is stored on sorted index tuples.
class FrobeniusData {
 public:
  using Table = std::map<std::vector<int>, Rational>;

  FrobeniusData(Matrix metric, int max_arity) : metric_(std::move(metric)), max_arity_(max_arity) {
    if (metric_.rows() != metric_.cols() || metric_.rows() == 0) throw input_error("metric must be a non-empty square matrix");
    if (!metric_.is_symmetric()) throw input_error("metric must be symmetric");
    if (max_arity_ < 3) throw input_error("truncation arity must be at least 3");
    try {
      metric_inv_ = inverse(metric_);
    } catch (const input_error&) {
      throw input_error("metric is degenerate");
    }
  }

  int dim() const { return metric_.rows(); }
  int max_arity() const { return max_arity_; }
  const Matrix& metric() const { return metric_; }
  const Matrix& metric_inverse() const { return metric_inv_; }
  const std::map<int, Table>& tables() const { return tables_; }

  void set(std::vector<int> idx, const Rational& value) {
    check_indices(idx);
    std::sort(idx.begin(), idx.end());
    const int arity = static_cast<int>(idx.size());
    if (value == 0)
      tables_[arity].erase(idx);
    else
      tables_[arity][idx] = value;
  }

  Rational get(std::vector<int> idx) const {
    check_indices(idx);
    std::sort(idx.begin(), idx.end());
    auto t = tables_.find(static_cast<int>(idx.size()));
    if (t == tables_.end()) return 0;
    auto it = t->second.find(idx);
    return it == t->second.end() ? Rational(0) : it->second;
  }

  /// Y_n(v_1, ..., v_n) extended multilinearly.
  Rational evaluate(const std::vector<Vector>& args) const {
    const int arity = static_cast<int>(args.size());
    check_arity(arity);
    auto t = tables_.find(arity);
    if (t == tables_.end() || t->second.empty()) return 0;
    for (const auto& v : args)
      if (static_cast<int>(v.size()) != dim()) throw input_error("argument has the wrong dimension");
    std::vector<int> idx(arity);
    Rational total = 0;
    std::function<void(int, const Rational&)> rec = [&](int pos, const Rational& weight) {
      if (pos == arity) {
        std::vector<int> key = idx;
        std::sort(key.begin(), key.end());
        auto it = t->second.find(key);
        if (it != t->second.end()) total += weight * it->second;
        return;
      }
      for (int a = 0; a < dim(); ++a) {
        if (args[pos][a] == 0) continue;
        idx[pos] = a;
        rec(pos + 1, weight * args[pos][a]);
      }
    };
    rec(0, Rational(1));
    return total;
  }

  /// The vector g^{-1} y with y_a = Y_{n+1}(args, Delta_a): args contracted into the last slot.
  Vector contract_out(std::vector<Vector> args) const {
    Vector y(dim());
    args.emplace_back();
    for (int a = 0; a < dim(); ++a) {
      args.back() = unit_vector(dim(), a);
      y[a] = evaluate(args);
    }
    return metric_inv_.apply(y);
  }

  void check_arity(int arity) const {
    if (arity < 3) throw input_error("correlators have arity >= 3");
    if (arity > max_arity_)
      throw capability_error("arity " + std::to_string(arity) + " exceeds the truncation arity " + std::to_string(max_arity_));
  }

 private:
  void check_indices(const std::vector<int>& idx) const {
    check_arity(static_cast<int>(idx.size()));
    for (int a : idx)
      if (a < 0 || a >= dim()) throw input_error("basis index out of range");
  }

  Matrix metric_;
  Matrix metric_inv_;
  int max_arity_;
  std::map<int, Table> tables_;
};

/// Y_3(Delta_a, Delta_a, Delta_a) = 1 on a one-dimensional space, all higher correlators zero.
inline FrobeniusData point_theory(int max_arity) {
  FrobeniusData f(Matrix{{1}}, max_arity);
  f.set({0, 0, 0}, 1);
  return f;
}

/// Coefficients of Phi in the coordinates x^a, keyed by exponent vectors.
struct FormalPotential {
  int dim = 0;
  int order = 0;
  std::map<std::vector<int>, Rational> coeffs;

  bool operator==(const FormalPotential&) const = default;
};

namespace detail {

inline void for_each_multiset(int dim, int size, const std::function<void(const std::vector<int>&)>& visit) {
  std::vector<int> idx(size, 0);
  std::function<void(int, int)> rec = [&](int pos, int from) {
    if (pos == size) {
      visit(idx);
      return;
    }
    for (int a = from; a < dim; ++a) {
      idx[pos] = a;
      rec(pos + 1, a);
    }
  };
  rec(0, 0);
}

inline Integer multi_factorial(const std::vector<int>& exps) {
  Integer r = 1;
  for (int e : exps) r *= factorial(e);
  return r;
}

}  // namespace detail

/// Phi = sum_n 1/n! sum Y_n(Delta_{a_1}..Delta_{a_n}) x^{a_1}..x^{a_n}; the
/// coefficient of x^alpha is Y_{|alpha|}(Delta^alpha) / alpha!.
inline FormalPotential potential_from_correlators(const FrobeniusData& f, int order) {
  if (order < 3) throw input_error("potential order must be at least 3");
  if (order > f.max_arity()) throw capability_error("potential order exceeds the truncation arity");
  FormalPotential phi;
  phi.dim = f.dim();
  phi.order = order;
  for (const auto& [arity, table] : f.tables()) {
    if (arity > order) continue;
    for (const auto& [idx, val] : table) {
      std::vector<int> alpha(f.dim(), 0);
      for (int a : idx) ++alpha[a];
      Rational c = val / Rational(detail::multi_factorial(alpha));
      phi.coeffs[alpha] = c;
    }
  }
  return phi;
}

inline FrobeniusData correlators_from_potential(const FormalPotential& phi, const Matrix& metric) {
  FrobeniusData f(metric, phi.order);
  if (f.dim() != phi.dim) throw input_error("metric and potential dimensions differ");
  for (const auto& [alpha, c] : phi.coeffs) {
    if (static_cast<int>(alpha.size()) != phi.dim) throw input_error("exponent vector has the wrong length");
    int total = 0;
    std::vector<int> idx;
    for (int a = 0; a < phi.dim; ++a) {
      if (alpha[a] < 0) throw input_error("negative exponent in potential");
      total += alpha[a];
      idx.insert(idx.end(), alpha[a], a);
    }
    if (total < 3) throw input_error("potential terms must have degree >= 3");
    if (total > phi.order) continue;
    f.set(idx, c * Rational(detail::multi_factorial(alpha)));
  }
  return f;
}

/// Y(tau)(args): one correlator per vertex, the Casimir element contracted along
/// every edge. args[i] is the argument on tail i+1.
inline Rational operadic_correlator(const FrobeniusData& f, const StableTree& t, const std::vector<Vector>& args) {
  if (static_cast<int>(args.size()) != t.n()) throw input_error("one argument per tail is required");
  const int nv = static_cast<int>(t.vertices().size());
  std::vector<Vector> out(nv);
  // Children precede parents in vertex order (smaller sets first); the root is 0.
  for (int v = 1; v <= nv; ++v) {
    const int u = v % nv;
    std::vector<Vector> in;
    for (int c : t.vertex(u).children) in.push_back(out[c]);
    for (int label : t.vertex(u).tails) in.push_back(args[label - 1]);
    if (u == 0) return f.evaluate(in);
    out[u] = f.contract_out(std::move(in));
  }
  return 0;
}

inline Rational operadic_correlator(const FrobeniusData& f, const StableTree& t, const std::vector<int>& idx) {
  std::vector<Vector> args;
  for (int a : idx) {
    if (a < 0 || a >= f.dim()) throw input_error("basis index out of range");
    args.push_back(unit_vector(f.dim(), a));
  }
  return operadic_correlator(f, t, args);
}

/// Linear extension to combinations of good monomials.
inline Rational operadic_correlator(const FrobeniusData& f, const RingElement& e, const std::vector<Vector>& args) {
  Rational total = 0;
  for (const auto& [m, c] : e.terms()) {
    if (!m.is_good()) throw input_error("operadic correlators need good monomials, got " + m.to_string());
    total += c * operadic_correlator(f, StableTree::from_nice_family(e.n(), m.family()), args);
  }
  return total;
}

/// circ_n(args) = sum_{a,b} Y_{n+1}(args, Delta_a) g^{ab} Delta_b.
inline Vector higher_product(const FrobeniusData& f, const std::vector<Vector>& args) {
  if (args.size() < 2) throw input_error("higher products take at least two arguments");
  return f.contract_out(args);
}

/// circ(tau): the composed higher product of an n-tree, with inputs on tails
/// 1..n-1 and the output on tail n.
inline Vector tree_composite(const FrobeniusData& f, const StableTree& t, const std::vector<Vector>& inputs) {
  if (static_cast<int>(inputs.size()) != t.n() - 1) throw input_error("one input per tail 1..n-1 is required");
  const int nv = static_cast<int>(t.vertices().size());
  std::vector<Vector> out(nv);
  for (int v = 1; v <= nv; ++v) {
    const int u = v % nv;
    std::vector<Vector> in;
    for (int c : t.vertex(u).children) in.push_back(out[c]);
    for (int label : t.vertex(u).tails)
      if (label != t.n()) in.push_back(inputs[label - 1]);
    out[u] = f.contract_out(std::move(in));
  }
  return out[0];
}

inline Vector tree_composite(const FrobeniusData& f, const RingElement& e, const std::vector<Vector>& inputs) {
  Vector total(f.dim());
  for (const auto& [m, c] : e.terms()) {
    if (!m.is_good()) throw input_error("tree composites need good monomials, got " + m.to_string());
    const Vector v = tree_composite(f, StableTree::from_nice_family(e.n(), m.family()), inputs);
    for (int a = 0; a < f.dim(); ++a) total[a] += c * v[a];
  }
  return total;
}

/// Gram data and basis expansions per n, computed once.
/// Not synchronized; use one cache per thread.
class GramCache {
 public:
  const PairingMatrices& matrices(int n) { return entry(n).pm; }
  const std::vector<RingElement>& expansions(int n) { return entry(n).expansions; }

 private:
  struct Entry {
    PairingMatrices pm;
    std::vector<RingElement> expansions;
  };
  Entry& entry(int n) {
    auto it = entries_.find(n);
    if (it != entries_.end()) return *it->second;
    auto e = std::make_unique<Entry>();
    e->pm = gram(n);
    for (const auto& b : e->pm.order) e->expansions.push_back(tree_expansion(b));
    return *entries_.emplace(n, std::move(e)).first->second;
  }
  std::map<int, std::unique_ptr<Entry>> entries_;
};

namespace detail {

/// sum_{mu,nu} a_mu m_{mu nu} b_nu with a = Minv y', b = Minv y''.
inline Rational dual_contraction(const PairingMatrices& pm, const Vector& y1, const Vector& y2) {
  const Vector a = pm.Minv.apply(y1);
  const Vector b = pm.Minv.apply(y2);
  const Vector mb = pm.M.apply(b);
  Rational total = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != 0) total += a[i] * mb[i];
  return total;
}

inline Vector basis_correlators(const FrobeniusData& f, const std::vector<RingElement>& expansions, const std::vector<Vector>& args) {
  Vector y;
  y.reserve(expansions.size());
  for (const auto& e : expansions) y.push_back(operadic_correlator(f, e, args));
  return y;
}

}  // namespace detail

/// (Y' (x) Y'')_n on all sorted index tuples of the tensor space, where the
/// tensor index of (a', a'') is a' * dim'' + a''.
inline FrobeniusData::Table tensor_correlators(const FrobeniusData& f1, const FrobeniusData& f2, int n, GramCache& cache) {
  if (n < 3) throw input_error("tensor correlators have arity >= 3");
  if (n > kGradedMaxPoints) throw capability_error("tensor correlators need Gram data, limited to n <= " + std::to_string(kGradedMaxPoints));
  f1.check_arity(n);
  f2.check_arity(n);
  const PairingMatrices& pm = cache.matrices(n);
  const auto& exps = cache.expansions(n);
  const int d2 = f2.dim();
  std::map<std::vector<int>, Vector> memo1, memo2;
  auto ys = [&](const FrobeniusData& f, std::map<std::vector<int>, Vector>& memo, const std::vector<int>& idx) -> const Vector& {
    auto it = memo.find(idx);
    if (it != memo.end()) return it->second;
    std::vector<Vector> args;
    for (int a : idx) args.push_back(unit_vector(f.dim(), a));
    return memo.emplace(idx, detail::basis_correlators(f, exps, args)).first->second;
  };
  FrobeniusData::Table out;
  detail::for_each_multiset(f1.dim() * d2, n, [&](const std::vector<int>& idx) {
    std::vector<int> i1, i2;
    for (int a : idx) {
      i1.push_back(a / d2);
      i2.push_back(a % d2);
    }
    const Rational v = detail::dual_contraction(pm, ys(f1, memo1, i1), ys(f2, memo2, i2));
    if (v != 0) out[idx] = v;
  });
  return out;
}

/// The tensor theory on H' (x) H'' with metric g' (x) g'' up to arity max_arity.
inline FrobeniusData tensor_product(const FrobeniusData& f1, const FrobeniusData& f2, int max_arity, GramCache& cache) {
  FrobeniusData out(kron(f1.metric(), f2.metric()), max_arity);
  for (int n = 3; n <= max_arity; ++n)
    for (const auto& [idx, v] : tensor_correlators(f1, f2, n, cache)) out.set(idx, v);
  return out;
}

inline FormalPotential kunneth_potential(const FrobeniusData& f1, const FrobeniusData& f2, int order, GramCache& cache) {
  if (order < 3) throw input_error("potential order must be at least 3");
  return potential_from_correlators(tensor_product(f1, f2, order, cache), order);
}

/// Higher product of the tensor theory on pure tensors, summed over B_{n+1}:
/// sum_{mu,nu} circ'(mu-check)(args1) m_{mu nu} (x) circ''(nu-check)(args2).
inline Vector tensor_higher_product(const FrobeniusData& f1, const FrobeniusData& f2, const std::vector<Vector>& args1,
                                    const std::vector<Vector>& args2, GramCache& cache) {
  if (args1.size() != args2.size() || args1.size() < 2) throw input_error("tensor higher products need matching argument lists");
  const int n = static_cast<int>(args1.size()) + 1;
  if (n > kGradedMaxPoints) throw capability_error("tensor higher products need Gram data, limited to n <= " + std::to_string(kGradedMaxPoints));
  f1.check_arity(n);
  f2.check_arity(n);
  const PairingMatrices& pm = cache.matrices(n);
  const auto& exps = cache.expansions(n);
  const int b = pm.size();
  std::vector<Vector> c1, c2;
  for (const auto& e : exps) {
    c1.push_back(tree_composite(f1, e, args1));
    c2.push_back(tree_composite(f2, e, args2));
  }
  // Dual composites: circ(mu-check) = sum_rho m^{mu rho} circ(rho).
  auto dual = [&](const std::vector<Vector>& c, int dim) {
    std::vector<Vector> out(b, Vector(dim));
    for (int i = 0; i < b; ++i)
      for (int j = 0; j < b; ++j)
        if (pm.Minv(i, j) != 0)
          for (int a = 0; a < dim; ++a) out[i][a] += pm.Minv(i, j) * c[j][a];
    return out;
  };
  const auto h1 = dual(c1, f1.dim());
  const auto h2 = dual(c2, f2.dim());
  Vector total(static_cast<std::size_t>(f1.dim()) * f2.dim());
  for (int i = 0; i < b; ++i)
    for (int j = 0; j < b; ++j) {
      if (pm.M(i, j) == 0) continue;
      const Vector k = kron(h1[i], h2[j]);
      for (std::size_t a = 0; a < k.size(); ++a) total[a] += pm.M(i, j) * k[a];
    }
  return total;
}

/// First coefficient where the associativity equations fail, if any.
struct WdvvReport {
  bool ok = true;
  int a = 0, b = 0, c = 0, d = 0;
  std::vector<int> monomial;
  Rational lhs, rhs;

  std::string to_string() const {
    if (ok) return "WDVV holds";
    std::string m;
    for (std::size_t i = 0; i < monomial.size(); ++i) m += (i ? "," : "") + std::to_string(monomial[i]);
    return "WDVV fails at (a,b,c,d)=(" + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) + "," +
           std::to_string(d) + "), coefficient of x^[" + m + "]: " + m0n::to_string(lhs) + " != " + m0n::to_string(rhs);
  }
};

namespace detail {

using Poly = std::map<std::vector<int>, Rational>;

inline Poly derivative(const Poly& p, int var) {
  Poly out;
  for (const auto& [alpha, c] : p) {
    if (alpha[var] == 0) continue;
    std::vector<int> beta = alpha;
    --beta[var];
    out[beta] += c * alpha[var];
  }
  std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
  return out;
}

inline int total_degree(const std::vector<int>& alpha) {
  int d = 0;
  for (int x : alpha) d += x;
  return d;
}

inline void add_product(Poly& acc, const Poly& x, const Poly& y, const Rational& scale, int max_degree) {
  if (scale == 0) return;
  for (const auto& [a, ca] : x) {
    const int da = total_degree(a);
    if (da > max_degree) continue;
    for (const auto& [b, cb] : y) {
      if (da + total_degree(b) > max_degree) continue;
      std::vector<int> ab(a.size());
      for (std::size_t i = 0; i < a.size(); ++i) ab[i] = a[i] + b[i];
      acc[ab] += scale * ca * cb;
    }
  }
}

}  // namespace detail

/// Checks sum_{e,f} Phi_{abe} g^{ef} Phi_{fcd} = sum_{e,f} Phi_{bce} g^{ef} Phi_{fad}
/// for all a,b,c,d on every coefficient of total degree <= order - 3, the range
/// fully determined by a potential truncated at the given order.
inline WdvvReport wdvv_check(const FormalPotential& phi, const Matrix& metric) {
  const int dim = phi.dim;
  if (metric.rows() != dim) throw input_error("metric and potential dimensions differ");
  const Matrix ginv = inverse(metric);
  const int max_degree = phi.order - 3;
  detail::Poly base;
  for (const auto& [alpha, c] : phi.coeffs)
    if (detail::total_degree(alpha) <= phi.order) base[alpha] = c;
  // third[a][b][e] = Phi_{abe}; first[a] = Phi_a, second[a][b] = Phi_{ab}.
  std::vector<detail::Poly> first(dim);
  std::vector<std::vector<detail::Poly>> second(dim, std::vector<detail::Poly>(dim));
  std::vector<std::vector<std::vector<detail::Poly>>> third(dim, std::vector<std::vector<detail::Poly>>(dim, std::vector<detail::Poly>(dim)));
  for (int a = 0; a < dim; ++a) first[a] = detail::derivative(base, a);
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b) second[a][b] = detail::derivative(first[a], b);
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b)
      for (int e = 0; e < dim; ++e) third[a][b][e] = detail::derivative(second[a][b], e);
  // raised[a][b][f] = sum_e Phi_{abe} g^{ef}
  std::vector<std::vector<std::vector<detail::Poly>>> raised(dim, std::vector<std::vector<detail::Poly>>(dim, std::vector<detail::Poly>(dim)));
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b)
      for (int f = 0; f < dim; ++f) {
        detail::Poly& r = raised[a][b][f];
        for (int e = 0; e < dim; ++e)
          if (ginv(e, f) != 0)
            for (const auto& [alpha, c] : third[a][b][e]) r[alpha] += c * ginv(e, f);
        std::erase_if(r, [](const auto& kv) { return kv.second == 0; });
      }
  std::map<std::vector<int>, detail::Poly> quad;
  auto side = [&](int a, int b, int c, int d) -> const detail::Poly& {
    const std::vector<int> key{std::min(a, b), std::max(a, b), std::min(c, d), std::max(c, d)};
    auto it = quad.find(key);
    if (it != quad.end()) return it->second;
    detail::Poly acc;
    for (int f = 0; f < dim; ++f) detail::add_product(acc, raised[key[0]][key[1]][f], third[f][key[2]][key[3]], Rational(1), max_degree);
    std::erase_if(acc, [](const auto& kv) { return kv.second == 0; });
    return quad.emplace(key, std::move(acc)).first->second;
  };
  WdvvReport report;
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b)
      for (int c = 0; c < dim; ++c)
        for (int d = 0; d < dim; ++d) {
          const detail::Poly& l = side(a, b, c, d);
          const detail::Poly& r = side(b, c, a, d);
          if (l == r) continue;
          std::map<std::vector<int>, bool> keys;
          for (const auto& [k, v] : l) keys[k] = true;
          for (const auto& [k, v] : r) keys[k] = true;
          for (const auto& [k, unused] : keys) {
            const Rational lv = l.count(k) ? l.at(k) : Rational(0);
            const Rational rv = r.count(k) ? r.at(k) : Rational(0);
            if (lv != rv) {
              report.ok = false;
              report.a = a;
              report.b = b;
              report.c = c;
              report.d = d;
              report.monomial = k;
              report.lhs = lv;
              report.rhs = rv;
              return report;
            }
          }
        }
  return report;
}

inline WdvvReport wdvv_check(const FrobeniusData& f, int order) {
  return wdvv_check(potential_from_correlators(f, order), f.metric());
}

}  // namespace m0n
