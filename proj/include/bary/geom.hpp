#pragma once

#include <vector>

#include "bary/scalar.hpp"

namespace bary {

template <class T>
using Point = std::vector<T>;

template <class T>
T dot(const Point<T>& a, const Point<T>& b) {
  T s(0);
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

template <class T>
T sq_norm(const Point<T>& a) {
  return dot(a, a);
}

template <class T>
T sq_dist(const Point<T>& a, const Point<T>& b) {
  T s(0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    T d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

template <class T>
bool lex_less(const Point<T>& a, const Point<T>& b) {
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
    if (a[i] < b[i]) return true;
    if (b[i] < a[i]) return false;
  }
  return a.size() < b.size();
}

// Chebyshev (max-coordinate) distance, the metric the dedup tolerances use.
template <class T>
T linf_dist(const Point<T>& a, const Point<T>& b) {
  T m(0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    T d = abs_val(T(a[i] - b[i]));
    if (d > m) m = d;
  }
  return m;
}

template <class T>
Point<double> point_to_double(const Point<T>& p) {
  Point<double> out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) out[i] = to_double(p[i]);
  return out;
}

}  // namespace bary
