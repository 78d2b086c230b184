#include "robust/matrix_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace robust {

std::string matrix_to_text(const MatZ& m) {
  std::ostringstream os;
  os << m.rows() << " " << m.cols() << "\n";
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) os << (j ? " " : "") << m(i, j);
    os << "\n";
  }
  return os.str();
}

MatZ matrix_from_text(const std::string& text) {
  std::istringstream is(text);
  long long rows, cols;
  if (!(is >> rows >> cols) || rows < 0 || cols < 0)
    throw std::invalid_argument("matrix text: bad header");
  MatZ m(rows, cols);
  std::string tok;
  for (long long i = 0; i < rows; ++i)
    for (long long j = 0; j < cols; ++j) {
      if (!(is >> tok)) throw std::invalid_argument("matrix text: too few entries");
      m(i, j) = Bigint(tok);
    }
  return m;
}

void write_matrix_file(const MatZ& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write matrix file: " + path);
  out << matrix_to_text(m);
}

MatZ read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open matrix file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return matrix_from_text(ss.str());
}

std::uint64_t matrix_fingerprint(const MatZ& m) {
  const std::string text = matrix_to_text(m);
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return h;
}

std::string fingerprint_hex(std::uint64_t fp) {
  static const char* digits = "0123456789abcdef";
  std::string s = "0x";
  for (int shift = 60; shift >= 0; shift -= 4) s += digits[(fp >> shift) & 0xF];
  return s;
}

}  // namespace robust
