#pragma once

#include <algorithm>
#include <compare>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "m0n/errors.hpp"
#include "m0n/rational.hpp"
#include "m0n/subset.hpp"
#include "m0n/trees.hpp"

namespace m0n {

struct Factor {
  Subset set;
  int exp = 1;

  bool operator==(const Factor&) const = default;
};

/// A product of boundary divisors D_S^e for n points. Factors are kept sorted
/// in canonical subset order with exponents >= 1.
class DivisorMonomial {
 public:
  /// The unit monomial.
  explicit DivisorMonomial(int n) : n_(n) { check_point_count(n); }

  DivisorMonomial(int n, std::vector<Factor> factors) : n_(n), factors_(std::move(factors)) {
    check_point_count(n);
    normalize();
  }

  static DivisorMonomial from_family(int n, const Family& sets) {
    std::vector<Factor> f;
    for (Subset s : sets) f.push_back({s, 1});
    return DivisorMonomial(n, std::move(f));
  }

  static DivisorMonomial from_tree(const MultiplicityTree& tm) {
    std::vector<Factor> f;
    for (std::size_t i = 0; i < tm.mult.size(); ++i) f.push_back({tm.tree.sets()[i], tm.mult[i]});
    return DivisorMonomial(tm.tree.n(), std::move(f));
  }

  int n() const { return n_; }
  const std::vector<Factor>& factors() const { return factors_; }
  bool is_unit() const { return factors_.empty(); }

  int degree() const {
    int d = 0;
    for (const auto& f : factors_) d += f.exp;
    return d;
  }

  Family family() const {
    Family out;
    for (const auto& f : factors_) out.push_back(f.set);
    return out;
  }

  int exponent(Subset s) const {
    for (const auto& f : factors_)
      if (f.set == s) return f.exp;
    return 0;
  }

  bool is_nice() const { return is_nice_family(family()); }
  bool is_good() const {
    return is_nice() && std::all_of(factors_.begin(), factors_.end(), [](const Factor& f) { return f.exp == 1; });
  }

  /// The tree with multiplicity of a nice monomial.
  MultiplicityTree to_tree() const {
    std::vector<int> mult;
    for (const auto& f : factors_) mult.push_back(f.exp);
    return MultiplicityTree(StableTree::from_nice_family(n_, family()), std::move(mult));
  }

  /// Product; std::nullopt when a crossing pair appears (the product is zero).
  std::optional<DivisorMonomial> times(const DivisorMonomial& o) const {
    if (o.n_ != n_) throw input_error("monomials live on different moduli spaces");
    std::vector<Factor> merged = factors_;
    merged.insert(merged.end(), o.factors_.begin(), o.factors_.end());
    DivisorMonomial out(n_, std::move(merged));
    if (!out.is_nice()) return std::nullopt;
    return out;
  }

  /// Same monomial with the exponent of D_S changed by delta (removed at 0).
  DivisorMonomial adjusted(Subset s, int delta) const {
    std::vector<Factor> f = factors_;
    f.push_back({s, delta});
    return DivisorMonomial(n_, std::move(f), /*allow_nonpositive=*/true);
  }

  std::string to_string() const {
    if (factors_.empty()) return "1";
    std::string s;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      if (i) s += '*';
      s += "D" + factors_[i].set.to_string();
      if (factors_[i].exp != 1) s += "^" + std::to_string(factors_[i].exp);
    }
    return s;
  }

  bool operator==(const DivisorMonomial& o) const { return n_ == o.n_ && factors_ == o.factors_; }
  std::strong_ordering operator<=>(const DivisorMonomial& o) const {
    if (auto c = n_ <=> o.n_; c != 0) return c;
    const std::size_t k = std::min(factors_.size(), o.factors_.size());
    for (std::size_t i = 0; i < k; ++i) {
      if (auto c = canonical_compare(factors_[i].set, o.factors_[i].set); c != 0) return c;
      if (auto c = factors_[i].exp <=> o.factors_[i].exp; c != 0) return c;
    }
    return factors_.size() <=> o.factors_.size();
  }

 private:
  DivisorMonomial(int n, std::vector<Factor> factors, bool allow_nonpositive) : n_(n), factors_(std::move(factors)) {
    normalize(allow_nonpositive);
  }

  void normalize(bool allow_nonpositive = false) {
    for (const auto& f : factors_) {
      check_divisor_subset(n_, f.set);
      if (!allow_nonpositive && f.exp < 1) throw input_error("divisor exponents must be >= 1");
    }
    std::sort(factors_.begin(), factors_.end(), [](const Factor& a, const Factor& b) { return CanonicalLess{}(a.set, b.set); });
    std::vector<Factor> out;
    for (const auto& f : factors_) {
      if (!out.empty() && out.back().set == f.set)
        out.back().exp += f.exp;
      else
        out.push_back(f);
    }
    std::erase_if(out, [](const Factor& f) { return f.exp == 0; });
    for (const auto& f : out)
      if (f.exp < 0) throw input_error("negative divisor exponent");
    factors_ = std::move(out);
  }

  int n_;
  std::vector<Factor> factors_;
};

/// A finite rational combination of divisor monomials for a fixed n.
class RingElement {
 public:
  explicit RingElement(int n) : n_(n) { check_point_count(n); }
  RingElement(const DivisorMonomial& m, Rational c = 1) : n_(m.n()) { add(m, c); }

  static RingElement one(int n) { return RingElement(DivisorMonomial(n)); }

  int n() const { return n_; }
  const std::map<DivisorMonomial, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  Rational coefficient(const DivisorMonomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  void add(const DivisorMonomial& m, const Rational& c) {
    if (m.n() != n_) throw input_error("ring elements live on different moduli spaces");
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  RingElement& operator+=(const RingElement& o) {
    for (const auto& [m, c] : o.terms_) add(m, c);
    return *this;
  }
  RingElement& operator-=(const RingElement& o) {
    for (const auto& [m, c] : o.terms_) add(m, -c);
    return *this;
  }
  RingElement& operator*=(const Rational& s) {
    if (s == 0) {
      terms_.clear();
      return *this;
    }
    for (auto& [m, c] : terms_) c *= s;
    return *this;
  }
  friend RingElement operator+(RingElement a, const RingElement& b) { return a += b; }
  friend RingElement operator-(RingElement a, const RingElement& b) { return a -= b; }
  friend RingElement operator*(RingElement a, const Rational& s) { return a *= s; }
  friend RingElement operator*(const Rational& s, RingElement a) { return a *= s; }

  /// Product in the polynomial ring modulo the crossing relations.
  friend RingElement operator*(const RingElement& a, const RingElement& b) {
    if (a.n_ != b.n_) throw input_error("ring elements live on different moduli spaces");
    RingElement out(a.n_);
    for (const auto& [m1, c1] : a.terms_)
      for (const auto& [m2, c2] : b.terms_)
        if (auto p = m1.times(m2)) out.add(*p, c1 * c2);
    return out;
  }

  /// Common degree of all terms; std::nullopt when zero or not homogeneous.
  std::optional<int> homogeneous_degree() const {
    std::optional<int> d;
    for (const auto& [m, c] : terms_) {
      if (d && *d != m.degree()) return std::nullopt;
      d = m.degree();
    }
    return d;
  }
  bool is_homogeneous() const { return is_zero() || homogeneous_degree().has_value(); }

  bool operator==(const RingElement& o) const { return n_ == o.n_ && terms_ == o.terms_; }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string s;
    bool first = true;
    for (const auto& [m, c] : terms_) {
      if (!first) s += " + ";
      s += "(" + m0n::to_string(c) + ")*" + m.to_string();
      first = false;
    }
    return s;
  }

 private:
  int n_;
  std::map<DivisorMonomial, Rational> terms_;
};

/// All nice monomials of total degree d for n points.
inline std::vector<DivisorMonomial> enumerate_nice_monomials(int n, int d) {
  check_point_count(n);
  std::vector<DivisorMonomial> out;
  if (d < 0) return out;
  if (d == 0) {
    out.emplace_back(n);
    return out;
  }
  for_each_nice_family(n, d, [&](const Family& fam) {
    const int k = static_cast<int>(fam.size());
    if (k == 0) return;
    std::vector<int> ex(k, 1);
    // Compositions of d into k positive parts.
    std::function<void(int, int)> place = [&](int pos, int left) {
      if (pos == k - 1) {
        ex[pos] = left;
        std::vector<Factor> f;
        for (int i = 0; i < k; ++i) f.push_back({fam[i], ex[i]});
        out.emplace_back(n, std::move(f));
        return;
      }
      for (int x = 1; x <= left - (k - 1 - pos); ++x) {
        ex[pos] = x;
        place(pos + 1, left - x);
      }
    };
    place(0, d);
  });
  return out;
}

}  // namespace m0n
