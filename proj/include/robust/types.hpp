#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "robust/bigint.hpp"

namespace robust {

using Index = Eigen::Index;

template <class Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <class Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using MatZ = Mat<Bigint>;
using VecZ = Vec<Bigint>;
using Mat64 = Mat<std::int64_t>;
using Vec64 = Vec<std::int64_t>;
using MatInt = Mat<int>;  // small entries: level tables and the like

// Raised when a requested enumeration exceeds its configured budget.
// The CLI maps it to exit code 2.
class CapacityError : public std::runtime_error {
 public:
  CapacityError(const std::string& what, double predicted, double budget)
      : std::runtime_error(what), predicted_(predicted), budget_(budget) {}
  double predicted() const { return predicted_; }
  double budget() const { return budget_; }

 private:
  double predicted_;
  double budget_;
};

// Internal signal: a checked int64 kernel overflowed; callers retry with Bigint.
struct Int64Overflow {};

inline Mat64 to_int64(const MatZ& m) {
  Mat64 out(m.rows(), m.cols());
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) {
      if (!m(i, j).fits_int64()) throw Int64Overflow{};
      out(i, j) = m(i, j).to_int64();
    }
  return out;
}

inline MatZ to_bigint(const Mat64& m) {
  MatZ out(m.rows(), m.cols());
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) out(i, j) = Bigint(m(i, j));
  return out;
}

inline MatZ to_bigint(const MatInt& m) {
  MatZ out(m.rows(), m.cols());
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) out(i, j) = Bigint(m(i, j));
  return out;
}

}  // namespace robust
