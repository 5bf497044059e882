#ifndef CONTRACTS_SCALAR_HPP
#define CONTRACTS_SCALAR_HPP

#include <cmath>
#include <cstdlib>

#include "contracts/rational.hpp"

namespace contracts {

/// Comparison policy for the numeric kernels.  The exact specialization
/// compares rationals exactly; the floating specialization compares doubles
/// up to an absolute tolerance.  Every algorithm in this library is written
/// against this interface so the exact and floating evaluation modes share
/// one implementation.
template <class S>
struct Num;

template <>
struct Num<Rat> {
  static constexpr bool exact = true;

  int sgn(const Rat& a) const { return rat_sgn(a); }
  // cmp, not operator==: mpq_equal assumes canonical operands, cmp does not.
  bool eq(const Rat& a, const Rat& b) const { return cmp(a, b) == 0; }
  bool lt(const Rat& a, const Rat& b) const { return a < b; }
  bool le(const Rat& a, const Rat& b) const { return a <= b; }
  bool is_zero(const Rat& a) const { return rat_sgn(a) == 0; }
};

template <>
struct Num<double> {
  static constexpr bool exact = false;
  double tol = 1e-9;

  Num() = default;
  explicit Num(double tolerance) : tol(tolerance) {}

  int sgn(double a) const { return a > tol ? 1 : (a < -tol ? -1 : 0); }
  bool eq(double a, double b) const { return std::abs(a - b) <= tol; }
  bool lt(double a, double b) const { return a < b - tol; }
  bool le(double a, double b) const { return a <= b + tol; }
  bool is_zero(double a) const { return std::abs(a) <= tol; }
};

/// Converts an exact rational to the scalar type of a kernel instantiation.
template <class S>
S scalar_cast(const Rat& value);

template <>
inline Rat scalar_cast<Rat>(const Rat& value) {
  return value;
}

template <>
inline double scalar_cast<double>(const Rat& value) {
  return value.get_d();
}

}  // namespace contracts

#endif  // CONTRACTS_SCALAR_HPP
