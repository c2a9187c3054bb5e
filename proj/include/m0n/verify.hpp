#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "m0n/basis.hpp"
#include "m0n/errors.hpp"
#include "m0n/intersection.hpp"
#include "m0n/keel_ring.hpp"
#include "m0n/linalg.hpp"
#include "m0n/monomial.hpp"

namespace m0n {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct SuiteOptions {
  std::uint64_t seed = 20240601;
  int samples = 500;
  /// Exhaustive oracle comparison up to this n; random sampling above.
  int exhaustive_up_to = 6;
};

inline void check_suite_bound(int n) {
  check_point_count(n);
  if (n > kGradedMaxPoints) throw capability_error("verification suites are limited to n <= " + std::to_string(kGradedMaxPoints));
}

/// Random pair of nice monomials of complementary degree. Half of the draws
/// split a random top-degree nice monomial into two factors, so that most
/// sampled pairings are not forced to vanish.
inline std::pair<DivisorMonomial, DivisorMonomial> sample_complementary_pair(int n, std::mt19937_64& rng,
                                                                             const std::vector<std::vector<DivisorMonomial>>& by_degree) {
  const int top = n - 3;
  if (rng() % 2 == 0) {
    const auto& tops = by_degree[top];
    const DivisorMonomial& p = tops[rng() % tops.size()];
    std::vector<Factor> a, b;
    for (const auto& f : p.factors()) {
      const int k = static_cast<int>(rng() % (f.exp + 1));
      if (k > 0) a.push_back({f.set, k});
      if (f.exp - k > 0) b.push_back({f.set, f.exp - k});
    }
    return {DivisorMonomial(n, a), DivisorMonomial(n, b)};
  }
  const int d = static_cast<int>(rng() % (top + 1));
  const auto& x = by_degree[d];
  const auto& y = by_degree[top - d];
  return {x[rng() % x.size()], y[rng() % y.size()]};
}

/// The closed pairing against the ring-rewriting reference on nice monomial pairs.
inline CheckResult check_oracle_equivalence(int n, const SuiteOptions& opt = {}) {
  check_suite_bound(n);
  CheckResult r{"oracle-equivalence", true, ""};
  KeelRing ring(n);
  std::vector<std::vector<DivisorMonomial>> by_degree;
  for (int d = 0; d <= n - 3; ++d) by_degree.push_back(enumerate_nice_monomials(n, d));
  long compared = 0, nonzero = 0;
  auto compare = [&](const DivisorMonomial& a, const DivisorMonomial& b) {
    ++compared;
    const Rational x = pairing(a, b);
    const Rational y = ring.oracle_pairing(a, b);
    if (x != 0) ++nonzero;
    if (x != y && r.passed) {
      r.passed = false;
      r.detail = "mismatch on " + a.to_string() + " x " + b.to_string() + ": formula " + to_string(x) + ", oracle " + to_string(y);
    }
  };
  if (n <= opt.exhaustive_up_to) {
    for (int d = 0; d <= n - 3; ++d)
      for (const auto& a : by_degree[d])
        for (const auto& b : by_degree[n - 3 - d]) compare(a, b);
  } else {
    std::mt19937_64 rng(opt.seed);
    for (int s = 0; s < opt.samples; ++s) {
      const auto [a, b] = sample_complementary_pair(n, rng, by_degree);
      compare(a, b);
    }
  }
  if (r.passed)
    r.detail = std::to_string(compared) + (n <= opt.exhaustive_up_to ? " pairs (exhaustive)" : " sampled pairs") + ", " +
               std::to_string(nonzero) + " nonzero";
  return r;
}

/// At most one good orientation per top-degree tree with multiplicity, equal
/// to the closed formula when it exists.
inline CheckResult check_orientation_uniqueness(int n) {
  check_suite_bound(n);
  CheckResult r{"orientation-uniqueness", true, ""};
  long trees = 0, with_good = 0;
  for (const auto& m : enumerate_nice_monomials(n, n - 3)) {
    const MultiplicityTree tm = m.to_tree();
    ++trees;
    int good = 0;
    MultiplicityOrientation found;
    for (const auto& o : enumerate_orientations(tm))
      if (is_good_orientation(tm, o)) {
        ++good;
        found = o;
      }
    const auto formula = good_orientation(tm);
    const bool ok = good <= 1 && (good == 1) == formula.has_value() && (!formula || *formula == found);
    with_good += good;
    if (!ok && r.passed) {
      r.passed = false;
      r.detail = m.to_string() + ": " + std::to_string(good) + " good orientations, formula " + (formula ? "found one" : "found none");
    }
  }
  if (r.passed) r.detail = std::to_string(trees) + " trees, " + std::to_string(with_good) + " with a good orientation";
  return r;
}

/// T unipotent upper triangular with det 1, both inverse routes equal, M Minv = I,
/// and (for n <= 6) both t-entry routes equal.
inline CheckResult check_unipotency(int n) {
  check_suite_bound(n);
  CheckResult r{"unipotency", true, ""};
  const PairingMatrices pm = gram(n);
  std::vector<std::string> bad;
  if (!pm.T.is_upper_unitriangular()) bad.push_back("T not upper unitriangular");
  if (determinant(pm.T) != 1) bad.push_back("det T != 1");
  if (!(pm.Minv_series == pm.Minv_elimination)) bad.push_back("inverse routes differ");
  if (!(pm.M * pm.Minv).is_identity()) bad.push_back("M * Minv != I");
  if (n <= 6) {
    for (int i = 0; i < pm.size(); ++i)
      for (int j = 0; j < pm.size(); ++j)
        if (pm.order[i].degree() == pm.order[j].degree() && t_entry_by_expansion(pm.order[i], pm.order[j]) != pm.T(i, j)) {
          bad.push_back("t-entry routes differ at (" + pm.order[i].to_string() + ", " + pm.order[j].to_string() + ")");
          i = j = pm.size();
        }
  }
  r.passed = bad.empty();
  r.detail = r.passed ? "|B_n| = " + std::to_string(pm.size()) + ", det T = 1" : bad.front();
  return r;
}

/// Basis counts per degree against the ranks of good monomials modulo relations.
inline CheckResult check_betti(int n) {
  check_suite_bound(n);
  CheckResult r{"betti", true, ""};
  const std::vector<int> dims = graded_dimensions(n);
  std::vector<int> counts(n - 2, 0);
  for (const auto& b : enumerate_basis(n)) ++counts[b.degree()];
  std::string ds, cs;
  for (std::size_t d = 0; d < dims.size(); ++d) {
    ds += (d ? "," : "") + std::to_string(dims[d]);
    cs += (d ? "," : "") + std::to_string(counts[d]);
  }
  bool symmetric = true;
  for (std::size_t d = 0; d < dims.size(); ++d) symmetric = symmetric && dims[d] == dims[dims.size() - 1 - d];
  r.passed = dims == counts && symmetric && dims.back() == 1;
  r.detail = "ranks [" + ds + "], basis [" + cs + "]";
  return r;
}

/// T = I and the Gram matrix is supported on (mu, mu*) with value (-1)^{n-3-|E(mu)|}.
inline CheckResult check_t_diagonal(int n) {
  check_suite_bound(n);
  CheckResult r{"t-diagonal", true, ""};
  const PairingMatrices pm = gram(n);
  if (!pm.T.is_identity()) {
    r.passed = false;
    r.detail = std::to_string(pm.T.nonzero_count() - pm.size()) + " nonzero off-diagonal T entries";
    return r;
  }
  for (int i = 0; i < pm.size(); ++i) {
    const StarredElement s = star(pm.order[i]);
    const int j = pm.index_of(s.element);
    for (int k = 0; k < pm.size(); ++k) {
      const Rational expect = k == j ? Rational(pm.order[i].star_sign()) : Rational(0);
      if (pm.M(i, k) != expect) {
        r.passed = false;
        r.detail = "unexpected Gram entry at (" + pm.order[i].to_string() + ", " + pm.order[k].to_string() + ")";
        return r;
      }
    }
  }
  r.detail = "T = I on " + std::to_string(pm.size()) + " basis elements";
  return r;
}

/// Some off-diagonal T entry is nonzero. The first one (in basis order) is
/// reported and recomputed through the ring-rewriting reference.
inline CheckResult check_pd_failure(int n) {
  check_suite_bound(n);
  CheckResult r{"pd-failure", false, ""};
  const PairingMatrices pm = gram(n);
  int count = 0;
  for (int i = 0; i < pm.size(); ++i)
    for (int j = 0; j < pm.size(); ++j) {
      if (i == j || pm.T(i, j) == 0) continue;
      if (count++ > 0) continue;
      const StarredElement s = star(pm.order[j]);
      KeelRing ring(n);
      const Rational oracle = s.sign * ring.integral(tree_expansion(pm.order[i]) * tree_expansion(s.element));
      r.detail = "t(" + pm.order[i].to_string() + ", " + pm.order[j].to_string() + ") = " + to_string(pm.T(i, j)) +
                 ", reference " + to_string(oracle);
      if (oracle != pm.T(i, j)) throw verification_error("reference disagrees on " + r.detail);
    }
  r.passed = count > 0;
  r.detail = r.passed ? std::to_string(count) + " nonzero off-diagonal entries; first " + r.detail : "T is the identity";
  return r;
}

inline std::vector<std::string> suite_names() {
  return {"all", "oracle-equivalence", "orientation-uniqueness", "unipotency", "betti", "t-diagonal", "pd-failure"};
}

/// "all" runs the first four suites plus t-diagonal (n <= 6) or pd-failure (n >= 7).
inline std::vector<CheckResult> run_suite(int n, const std::string& suite, const SuiteOptions& opt = {}) {
  check_suite_bound(n);
  std::vector<CheckResult> out;
  const bool all = suite == "all";
  if (all || suite == "oracle-equivalence") out.push_back(check_oracle_equivalence(n, opt));
  if (all || suite == "orientation-uniqueness") out.push_back(check_orientation_uniqueness(n));
  if (all || suite == "unipotency") out.push_back(check_unipotency(n));
  if (all || suite == "betti") out.push_back(check_betti(n));
  if ((all && n <= 6) || suite == "t-diagonal") out.push_back(check_t_diagonal(n));
  if ((all && n >= 7) || suite == "pd-failure") out.push_back(check_pd_failure(n));
  if (out.empty()) throw input_error("unknown suite '" + suite + "'");
  return out;
}

}  // namespace m0n
