#pragma once

#include <cstdint>
#include <functional>

namespace robust {

// Fixed 128-bit set over point indices. Candidate sets handled by the
// combinatorial modules are capped at 128 points (enforced by callers).
struct Bitset128 {
  std::uint64_t lo = 0, hi = 0;

  static Bitset128 single(int i) {
    Bitset128 b;
    b.set(i);
    return b;
  }

  void set(int i) { (i < 64 ? lo : hi) |= (std::uint64_t{1} << (i & 63)); }
  void reset(int i) { (i < 64 ? lo : hi) &= ~(std::uint64_t{1} << (i & 63)); }
  bool test(int i) const {
    return ((i < 64 ? lo : hi) >> (i & 63)) & 1u;
  }
  bool empty() const { return lo == 0 && hi == 0; }
  int count() const { return __builtin_popcountll(lo) + __builtin_popcountll(hi); }

  bool subset_of(const Bitset128& o) const {
    return (lo & ~o.lo) == 0 && (hi & ~o.hi) == 0;
  }
  bool intersects(const Bitset128& o) const {
    return (lo & o.lo) != 0 || (hi & o.hi) != 0;
  }

  friend Bitset128 operator|(Bitset128 a, const Bitset128& b) {
    a.lo |= b.lo;
    a.hi |= b.hi;
    return a;
  }
  friend Bitset128 operator&(Bitset128 a, const Bitset128& b) {
    a.lo &= b.lo;
    a.hi &= b.hi;
    return a;
  }
  friend bool operator==(const Bitset128& a, const Bitset128& b) {
    return a.lo == b.lo && a.hi == b.hi;
  }
  friend bool operator<(const Bitset128& a, const Bitset128& b) {
    return a.hi != b.hi ? a.hi < b.hi : a.lo < b.lo;
  }
};

struct Bitset128Hash {
  std::size_t operator()(const Bitset128& b) const {
    std::uint64_t x = b.lo * 0x9E3779B97F4A7C15ull;
    x ^= b.hi + 0x9E3779B97F4A7C15ull + (x << 6) + (x >> 2);
    return static_cast<std::size_t>(x);
  }
};

}  // namespace robust
