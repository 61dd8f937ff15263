#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <string>

#include "bary/errors.hpp"

namespace bary {

// Exact scalar used by the rational code paths. Header-only backend, values of
// unbounded size; fine for the instance sizes the exact mode is meant for.
using Rational = boost::multiprecision::cpp_rational;

template <class T>
inline constexpr bool is_exact_v = false;
template <>
inline constexpr bool is_exact_v<Rational> = true;

// Tolerances collapse to zero in exact mode so the same comparisons serve both.
template <class T>
constexpr T feas_tol() {
  if constexpr (is_exact_v<T>) return T(0);
  else return T(1e-9);
}
template <class T>
constexpr T opt_tol() {
  if constexpr (is_exact_v<T>) return T(0);
  else return T(1e-9);
}
template <class T>
constexpr T comp_tol() {
  if constexpr (is_exact_v<T>) return T(0);
  else return T(1e-9);
}
template <class T>
constexpr T strict_tol() {
  if constexpr (is_exact_v<T>) return T(0);
  else return T(1e-10);
}
template <class T>
constexpr T support_tol() {
  if constexpr (is_exact_v<T>) return T(0);
  else return T(1e-12);
}

inline double to_double(double x) { return x; }
inline double to_double(const Rational& x) { return x.template convert_to<double>(); }

template <class T>
T abs_val(const T& x) {
  if constexpr (is_exact_v<T>) return x < 0 ? T(-x) : x;
  else return std::abs(x);
}

// Accepts "p/q" or a bare integer "p". Exact decimal strings are not accepted;
// callers that start from a double should convert it exactly instead.
inline Rational parse_fraction(const std::string& s) {
  auto bad = [&] { throw ParseError("bad fraction: '" + s + "'"); };
  if (s.empty()) bad();
  auto slash = s.find('/');
  try {
    using Int = boost::multiprecision::cpp_int;
    if (slash == std::string::npos) return Rational(Int(s));
    Int num(s.substr(0, slash));
    Int den(s.substr(slash + 1));
    if (den == 0) bad();
    return Rational(num, den);
  } catch (const std::runtime_error&) {
    bad();
  }
  return Rational(0);  // unreachable
}

inline std::string format_fraction(const Rational& x) {
  return x.str();
}

// Doubles are dyadic rationals, so this conversion is exact.
inline Rational rational_from_double(double x) {
  if (!std::isfinite(x)) throw ValidationError("non-finite value");
  return Rational(x);
}

// Scalar ingestion from a double input coordinate, exact when T is Rational.
template <class T>
T scalar_from_double(double x) {
  if constexpr (is_exact_v<T>) return rational_from_double(x);
  else {
    if (!std::isfinite(x)) throw ValidationError("non-finite value");
    return x;
  }
}

}  // namespace bary
