#include "robust/bigint.hpp"

#include <sstream>

namespace robust {

std::string decimal_string(const Rational& r, int digits) {
  bmp::cpp_int num = bmp::numerator(r);
  const bmp::cpp_int den = bmp::denominator(r);
  const bool neg = num < 0;
  if (neg) num = -num;
  bmp::cpp_int scale = 1;
  for (int i = 0; i < digits; ++i) scale *= 10;
  // round half away from zero
  bmp::cpp_int scaled = (num * scale * 2 + den) / (den * 2);
  const bmp::cpp_int whole = scaled / scale;
  const bmp::cpp_int frac = scaled % scale;
  std::ostringstream os;
  if (neg && (whole != 0 || frac != 0)) os << '-';
  os << whole;
  if (digits > 0) {
    std::string f = frac.str();
    os << '.' << std::string(digits - f.size(), '0') << f;
  }
  return os.str();
}

}  // namespace robust
