#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

#include "m0n/errors.hpp"

namespace m0n {

using Rational = mpq_class;
using Integer = mpz_class;

/// Serializes as "p/q", or "p" when the denominator is 1.
inline std::string to_string(const Rational& q) { return q.get_str(); }

/// p/q in lowest terms with a positive denominator.
inline Rational make_rational(long p, long q) {
  if (q == 0) throw input_error("zero denominator");
  Rational r(p, q);
  r.canonicalize();
  return r;
}

inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  if (!s.empty() && s[0] == '+') s.erase(0, 1);
  const std::size_t start = (!s.empty() && s[0] == '-') ? 1 : 0;
  if (s.size() == start) throw input_error("malformed rational literal: '" + std::string(text) + "'");
  bool slash = false;
  for (std::size_t i = start; i < s.size(); ++i) {
    const char c = s[i];
    if (c == '/' && !slash && i > start && i + 1 < s.size()) {
      slash = true;
      continue;
    }
    if (c < '0' || c > '9') throw input_error("malformed rational literal: '" + std::string(text) + "'");
  }
  Rational q;
  if (q.set_str(s, 10) != 0 || q.get_den() == 0)
    throw input_error("malformed rational literal: '" + std::string(text) + "'");
  q.canonicalize();
  return q;
}

inline Integer factorial(int k) {
  Integer r = 1;
  for (int i = 2; i <= k; ++i) r *= i;
  return r;
}

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

}  // namespace m0n
