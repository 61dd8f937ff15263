#pragma once

#include <algorithm>
#include <cstddef>
#include <ostream>
#include <string>
#include <vector>

#include "bary/errors.hpp"
#include "bary/geom.hpp"
#include "bary/scalar.hpp"

namespace bary {

// Finitely supported probability measure. After canonicalize() the points are
// pairwise distinct, every mass is positive and the masses sum to one.
template <class T>
struct DiscreteMeasure {
  int dim = 0;
  std::vector<Point<T>> points;
  std::vector<T> masses;

  int size() const { return static_cast<int>(points.size()); }
};

template <class T>
struct MeasureSet {
  std::vector<DiscreteMeasure<T>> measures;

  int size() const { return static_cast<int>(measures.size()); }
  int dim() const { return measures.empty() ? 0 : measures.front().dim; }
};

// 1 + max |coordinate|, the scale that relative point tolerances hang off.
template <class T>
double coord_scale(const DiscreteMeasure<T>& m) {
  double mx = 0;
  for (const auto& p : m.points)
    for (const auto& c : p) mx = std::max(mx, std::abs(to_double(c)));
  return 1.0 + mx;
}

template <class T>
double coord_scale(const MeasureSet<T>& ms) {
  double s = 1.0;
  for (const auto& m : ms.measures) s = std::max(s, coord_scale(m));
  return s;
}

// Enforces the measure invariants in place: consistent dimensions, no negative
// masses, zero-mass atoms dropped (reported via `warn` when given), duplicate
// points merged, masses renormalized to sum exactly to one. Throws
// ValidationError when the input is not a probability measure to begin with
// (mass sum off by more than 1e-9).
template <class T>
void canonicalize(DiscreteMeasure<T>& m, std::ostream* warn = nullptr) {
  if (m.points.empty()) throw ValidationError("measure has no support points");
  if (m.points.size() != m.masses.size())
    throw ValidationError("points/masses length mismatch");
  if (m.dim == 0) m.dim = static_cast<int>(m.points.front().size());
  for (const auto& p : m.points)
    if (static_cast<int>(p.size()) != m.dim)
      throw ValidationError("point dimension mismatch");
  for (const auto& w : m.masses)
    if (w < T(0)) throw ValidationError("negative mass");

  // Drop exact zeros first so they do not create phantom support points.
  {
    std::size_t kept = 0;
    for (std::size_t i = 0; i < m.points.size(); ++i) {
      if (m.masses[i] == T(0)) {
        if (warn) *warn << "warning: dropped zero-mass point\n";
        continue;
      }
      m.points[kept] = m.points[i];
      m.masses[kept] = m.masses[i];
      ++kept;
    }
    m.points.resize(kept);
    m.masses.resize(kept);
  }
  if (m.points.empty()) throw ValidationError("measure has only zero-mass points");

  // Merge duplicates; first occurrence keeps its coordinates and position.
  const T tol = is_exact_v<T> ? T(0) : T(1e-9 * coord_scale(m));
  std::vector<Point<T>> pts;
  std::vector<T> ws;
  for (std::size_t i = 0; i < m.points.size(); ++i) {
    bool merged = false;
    for (std::size_t j = 0; j < pts.size(); ++j) {
      if (linf_dist(m.points[i], pts[j]) <= tol) {
        ws[j] += m.masses[i];
        merged = true;
        break;
      }
    }
    if (!merged) {
      pts.push_back(m.points[i]);
      ws.push_back(m.masses[i]);
    }
  }
  m.points = std::move(pts);
  m.masses = std::move(ws);

  T sum(0);
  for (const auto& w : m.masses) sum += w;
  if (abs_val(T(sum - T(1))) > T(1e-9)) throw ValidationError("masses do not sum to 1");
  for (auto& w : m.masses) w = w / sum;
  if constexpr (!is_exact_v<T>) {
    // Float division leaves ulp dust; park the residual on the largest mass so
    // the stored masses sum to one exactly.
    double s = 0;
    for (const auto& w : m.masses) s += w;
    auto it = std::max_element(m.masses.begin(), m.masses.end());
    *it += 1.0 - s;
  }
}

template <class T>
T second_moment(const DiscreteMeasure<T>& m) {
  T s(0);
  for (std::size_t i = 0; i < m.points.size(); ++i) s += m.masses[i] * sq_norm(m.points[i]);
  return s;
}

// All measures of a set must live in the same dimension.
template <class T>
void validate_set(const MeasureSet<T>& ms) {
  if (ms.measures.empty()) throw ValidationError("empty measure set");
  int d = ms.measures.front().dim;
  for (const auto& m : ms.measures)
    if (m.dim != d) throw ValidationError("measures have mixed dimensions");
}

}  // namespace bary
