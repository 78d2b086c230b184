#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <iosfwd>
#include <string>

#include <Eigen/Core>

namespace robust {

namespace bmp = boost::multiprecision;

// Arbitrary-precision signed integer scalar for Eigen matrices.
//
// Thin strong typedef over boost cpp_int: cpp_int's converting constructors
// make Eigen's overload SFINAE probe arbitrary expression types (hard error
// in boost 1.74's is_byte_container), so only the operations the elimination
// kernels and Eigen actually need are exposed here.
class Bigint {
 public:
  Bigint() = default;
  Bigint(long long v) : v_(v) {}  // implicit: literals in expressions
  Bigint(long v) : v_(v) {}
  Bigint(int v) : v_(v) {}
  explicit Bigint(const bmp::cpp_int& v) : v_(v) {}
  explicit Bigint(bmp::cpp_int&& v) : v_(std::move(v)) {}
  explicit Bigint(const std::string& decimal) : v_(decimal) {}

  const bmp::cpp_int& raw() const { return v_; }

  bool is_zero() const { return v_.is_zero(); }
  int sign() const { return v_.sign(); }
  std::string str() const { return v_.str(); }

  // Exact conversion; throws std::overflow_error when out of range.
  std::int64_t to_int64() const { return v_.convert_to<std::int64_t>(); }
  bool fits_int64() const {
    static const bmp::cpp_int lo = std::numeric_limits<std::int64_t>::min();
    static const bmp::cpp_int hi = std::numeric_limits<std::int64_t>::max();
    return v_ >= lo && v_ <= hi;
  }
  double to_double() const { return v_.convert_to<double>(); }

  friend Bigint operator+(const Bigint& a, const Bigint& b) { return Bigint(a.v_ + b.v_); }
  friend Bigint operator-(const Bigint& a, const Bigint& b) { return Bigint(a.v_ - b.v_); }
  friend Bigint operator*(const Bigint& a, const Bigint& b) { return Bigint(a.v_ * b.v_); }
  friend Bigint operator/(const Bigint& a, const Bigint& b) { return Bigint(a.v_ / b.v_); }
  friend Bigint operator%(const Bigint& a, const Bigint& b) { return Bigint(a.v_ % b.v_); }
  Bigint operator-() const { return Bigint(-v_); }
  Bigint& operator+=(const Bigint& o) { v_ += o.v_; return *this; }
  Bigint& operator-=(const Bigint& o) { v_ -= o.v_; return *this; }
  Bigint& operator*=(const Bigint& o) { v_ *= o.v_; return *this; }
  Bigint& operator/=(const Bigint& o) { v_ /= o.v_; return *this; }

  friend bool operator==(const Bigint& a, const Bigint& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Bigint& a, const Bigint& b) { return a.v_ != b.v_; }
  friend bool operator<(const Bigint& a, const Bigint& b) { return a.v_ < b.v_; }
  friend bool operator>(const Bigint& a, const Bigint& b) { return a.v_ > b.v_; }
  friend bool operator<=(const Bigint& a, const Bigint& b) { return a.v_ <= b.v_; }
  friend bool operator>=(const Bigint& a, const Bigint& b) { return a.v_ >= b.v_; }

  friend Bigint abs(const Bigint& a) { return Bigint(bmp::abs(a.v_)); }
  friend Bigint gcd(const Bigint& a, const Bigint& b) { return Bigint(bmp::gcd(a.v_, b.v_)); }

  friend std::ostream& operator<<(std::ostream& os, const Bigint& a) { return os << a.v_; }

 private:
  bmp::cpp_int v_;
};

using Rational = bmp::cpp_rational;

inline Rational make_rational(const Bigint& num, const Bigint& den) {
  return Rational(num.raw(), den.raw());
}

// Fixed-point decimal rendering of a rational, round-half-away-from-zero.
std::string decimal_string(const Rational& r, int digits);

}  // namespace robust

namespace Eigen {

template <>
struct NumTraits<robust::Bigint> {
  using Real = robust::Bigint;
  using NonInteger = robust::Bigint;
  using Nested = robust::Bigint;
  using Literal = long long;
  enum {
    IsComplex = 0,
    IsInteger = 1,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 6,
    AddCost = 60,
    MulCost = 60
  };
  static inline Real epsilon() { return 0; }
  static inline Real dummy_precision() { return 0; }
  static inline int digits10() { return 0; }
};

}  // namespace Eigen
