#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "m0n/errors.hpp"

namespace m0n {

/// Largest supported number of marked points; labels live in bits 1..kMaxPoints-1.
inline constexpr int kMaxPoints = 31;

/// A subset of the labels {1,...,n-1}. Bit i encodes label i; bit 0 is unused.
///
/// With n as the distinguished root label, a subset S with 2 <= |S| <= n-2
/// indexes the boundary divisor D_S separating S from its complement (which
/// contains n).
class Subset {
 public:
  constexpr Subset() = default;
  constexpr explicit Subset(std::uint32_t bits) : bits_(bits) {}
  Subset(std::initializer_list<int> labels) {
    for (int i : labels) insert(i);
  }
  static Subset from_labels(std::span<const int> labels) {
    Subset s;
    for (int i : labels) s.insert(i);
    return s;
  }
  /// {1,...,m}
  static constexpr Subset range(int m) {
    return Subset(m <= 0 ? 0u : ((std::uint32_t{1} << (m + 1)) - 2u));
  }
  static constexpr Subset singleton(int i) { return Subset(std::uint32_t{1} << i); }

  constexpr std::uint32_t bits() const { return bits_; }
  constexpr int size() const { return std::popcount(bits_); }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr bool contains(int i) const { return (bits_ >> i) & 1u; }
  /// Smallest label; undefined on the empty set.
  constexpr int min() const { return std::countr_zero(bits_); }

  void insert(int i) {
    if (i < 1 || i >= kMaxPoints) throw input_error("label out of range: " + std::to_string(i));
    bits_ |= std::uint32_t{1} << i;
  }

  constexpr bool is_subset_of(Subset o) const { return (bits_ & ~o.bits_) == 0; }
  constexpr bool is_proper_subset_of(Subset o) const { return is_subset_of(o) && bits_ != o.bits_; }
  constexpr bool intersects(Subset o) const { return (bits_ & o.bits_) != 0; }

  constexpr Subset operator|(Subset o) const { return Subset(bits_ | o.bits_); }
  constexpr Subset operator&(Subset o) const { return Subset(bits_ & o.bits_); }
  /// Set difference.
  constexpr Subset operator-(Subset o) const { return Subset(bits_ & ~o.bits_); }

  std::vector<int> labels() const {
    std::vector<int> out;
    for (std::uint32_t b = bits_; b != 0; b &= b - 1) out.push_back(std::countr_zero(b));
    return out;
  }

  std::string to_string() const {
    std::string s = "{";
    bool first = true;
    for (int i : labels()) {
      if (!first) s += ',';
      s += std::to_string(i);
      first = false;
    }
    return s + "}";
  }

  constexpr bool operator==(const Subset&) const = default;

 private:
  std::uint32_t bits_ = 0;
};

/// Canonical order: by size, then lexicographically on the ascending label lists.
struct CanonicalLess {
  bool operator()(Subset a, Subset b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    // Lexicographic on ascending labels: the first differing label decides.
    std::uint32_t diff = a.bits() ^ b.bits();
    if (diff == 0) return false;
    int first = std::countr_zero(diff);
    return a.contains(first);
  }
};

inline std::strong_ordering canonical_compare(Subset a, Subset b) {
  if (a == b) return std::strong_ordering::equal;
  return CanonicalLess{}(a, b) ? std::strong_ordering::less : std::strong_ordering::greater;
}

/// Throws unless S is a boundary-divisor index for n points: S ⊆ {1..n-1}, 2 <= |S| <= n-2.
inline void check_divisor_subset(int n, Subset s) {
  if (!s.is_subset_of(Subset::range(n - 1)))
    throw input_error("subset " + s.to_string() + " is not contained in {1,...," + std::to_string(n - 1) + "}");
  if (s.size() < 2 || s.size() > n - 2)
    throw input_error("subset " + s.to_string() + " violates 2 <= |S| <= n-2 for n=" + std::to_string(n));
}

inline void check_point_count(int n) {
  if (n < 3 || n > kMaxPoints) throw input_error("n must lie in [3, " + std::to_string(kMaxPoints) + "], got " + std::to_string(n));
}

}  // namespace m0n
