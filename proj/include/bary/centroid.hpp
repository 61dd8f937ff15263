#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "bary/errors.hpp"
#include "bary/measure.hpp"

namespace bary {

// All candidate barycenter locations: coordinatewise averages of one support
// point per measure. Canonically ordered (lexicographic by coordinates); each
// location keeps the lexicographically smallest generating tuple as witness.
template <class T>
struct CentroidSet {
  int dim = 0;
  std::vector<Point<T>> points;
  std::vector<std::vector<int>> witness;

  int size() const { return static_cast<int>(points.size()); }
};

namespace detail {

inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Open-addressing map from quantized coordinate keys to entry indices. The
// entry payloads live in flat arenas owned by the caller; this just resolves
// key equality and slots.
struct QuantTable {
  std::vector<std::uint64_t> hash;
  std::vector<std::int32_t> slot;  // -1 = empty
  std::uint64_t mask = 0;

  explicit QuantTable(std::size_t expect) {
    std::size_t cap = 64;
    while (cap < expect * 2) cap <<= 1;
    hash.assign(cap, 0);
    slot.assign(cap, -1);
    mask = cap - 1;
  }

  void grow() {
    QuantTable bigger(slot.size());  // ctor doubles: first pow2 >= 2 * expect
    for (std::size_t s = 0; s < slot.size(); ++s)
      if (slot[s] >= 0) bigger.insert_raw(hash[s], slot[s]);
    *this = std::move(bigger);
  }

  void insert_raw(std::uint64_t h, std::int32_t idx) {
    std::uint64_t p = h & mask;
    while (slot[p] >= 0) p = (p + 1) & mask;
    slot[p] = idx;
    hash[p] = h;
  }

  // Returns the entry index (existing or newly claimed = next_idx).
  template <class Eq>
  std::int32_t find_or_insert(std::uint64_t h, std::int32_t next_idx, Eq&& same) {
    std::uint64_t p = h & mask;
    while (true) {
      if (slot[p] < 0) {
        slot[p] = next_idx;
        hash[p] = h;
        return next_idx;
      }
      if (hash[p] == h && same(slot[p])) return slot[p];
      p = (p + 1) & mask;
    }
  }

  std::size_t capacity() const { return slot.size(); }
};

}  // namespace detail

namespace detail {

// True when every measure lists exactly the same support points, in the same
// order. Means then depend only on the index multiset, so enumeration can
// walk non-decreasing tuples instead of the full product.
template <class T>
bool shared_support(const MeasureSet<T>& ms) {
  for (std::size_t i = 1; i < ms.measures.size(); ++i)
    if (ms.measures[i].points != ms.measures[0].points) return false;
  return true;
}

inline long long combination_count(long long options, long long picks, long long cap) {
  // C(options + picks - 1, picks), saturating just above cap
  long long num = 1;
  for (long long t = 1; t <= picks; ++t) {
    num = num * (options - 1 + t) / t;  // exact: product of t consecutive ints
    if (num > 4 * cap) return num;
  }
  return num;
}

}  // namespace detail

// Enumerates generating tuples (the full product, or index multisets when all
// measures share one support), deduplicates locations, and produces the
// canonical ordering. Pre-dedup tuple count above `cap` raises SizeError.
template <class T>
CentroidSet<T> build_centroids(const MeasureSet<T>& ms, long long cap = 100000000LL) {
  validate_set(ms);
  const int n = ms.size();
  const int d = ms.dim();

  const bool shared = detail::shared_support(ms);
  if (shared) {
    if (detail::combination_count(ms.measures[0].size(), n, cap) > cap)
      throw SizeError("centroid tuple count exceeds cap");
  } else {
    long long tuples = 1;
    for (const auto& m : ms.measures) {
      tuples *= m.size();
      if (tuples > cap || tuples <= 0)
        throw SizeError("centroid tuple count exceeds cap");
    }
  }

  CentroidSet<T> cs;
  cs.dim = d;

  std::vector<int> k(n, 0);
  auto bump = [&]() -> int {
    if (shared) {
      int i = n - 1;
      while (i >= 0 && k[i] == ms.measures[i].size() - 1) --i;
      if (i < 0) return -1;
      const int v = ++k[i];
      for (int j = i + 1; j < n; ++j) k[j] = v;
      return i;
    }
    int i = n - 1;
    while (i >= 0 && ++k[i] == ms.measures[i].size()) k[i--] = 0;
    return i;
  };

  if constexpr (is_exact_v<T>) {
    // Exact mode sees small instances; a tree map keeps this simple and the
    // map order is already the canonical lexicographic order.
    std::map<Point<T>, std::vector<int>> seen;
    const T invn = T(1) / T(n);
    while (true) {
      Point<T> c(d, T(0));
      for (int i = 0; i < n; ++i)
        for (int s = 0; s < d; ++s) c[s] += ms.measures[i].points[k[i]][s];
      for (int s = 0; s < d; ++s) c[s] *= invn;
      seen.emplace(std::move(c), k);  // keeps first (lex-min) witness
      if (bump() < 0) break;
    }
    for (auto& [p, w] : seen) {
      cs.points.push_back(p);
      cs.witness.push_back(w);
    }
    return cs;
  } else {
    const double tol = 1e-9 * coord_scale(ms);
    const double inv_tol = 1.0 / tol;
    const double invn = 1.0 / n;

    std::vector<double> pts;        // d per entry
    std::vector<std::int64_t> keys; // d per entry
    std::vector<int> wit;           // n per entry
    detail::QuantTable table(1 << 14);

    // Prefix sums over the tuple make odometer bumps cheap.
    std::vector<double> prefix((n + 1) * d, 0.0);
    auto refresh_from = [&](int level) {
      for (int i = level; i < n; ++i) {
        const auto& p = ms.measures[i].points[k[i]];
        for (int s = 0; s < d; ++s) prefix[(i + 1) * d + s] = prefix[i * d + s] + p[s];
      }
    };
    refresh_from(0);

    std::vector<std::int64_t> key(d);
    while (true) {
      std::uint64_t h = 0;
      for (int s = 0; s < d; ++s) {
        double c = prefix[n * d + s] * invn;
        key[s] = static_cast<std::int64_t>(std::llround(c * inv_tol));
        h = detail::mix64(h ^ static_cast<std::uint64_t>(key[s]));
      }
      const std::int32_t next = static_cast<std::int32_t>(keys.size() / d);
      std::int32_t got = table.find_or_insert(h, next, [&](std::int32_t idx) {
        for (int s = 0; s < d; ++s)
          if (keys[static_cast<std::size_t>(idx) * d + s] != key[s]) return false;
        return true;
      });
      if (got == next) {
        for (int s = 0; s < d; ++s) {
          keys.push_back(key[s]);
          pts.push_back(prefix[n * d + s] * invn);
        }
        wit.insert(wit.end(), k.begin(), k.end());
        if (static_cast<std::size_t>(next) * 2 + 2 > table.capacity()) table.grow();
      }
      const int i = bump();
      if (i < 0) break;
      refresh_from(i);
    }

    // Quantization can split a true duplicate across neighboring cells; a
    // tolerance clustering pass over the (small) survivor list repairs that,
    // then yields the canonical ordering.
    const std::size_t m = keys.size() / d;
    std::vector<std::int32_t> order(m);
    for (std::size_t i = 0; i < m; ++i) order[i] = static_cast<std::int32_t>(i);
    auto lex_cmp = [&](std::int32_t a, std::int32_t b) {
      const double* pa = &pts[static_cast<std::size_t>(a) * d];
      const double* pb = &pts[static_cast<std::size_t>(b) * d];
      for (int s = 0; s < d; ++s) {
        if (pa[s] < pb[s]) return true;
        if (pb[s] < pa[s]) return false;
      }
      return false;
    };
    std::sort(order.begin(), order.end(), lex_cmp);

    std::vector<std::int32_t> cluster_of(m);
    std::int32_t nclusters = 0;
    // Recursive split: indices sorted lexicographically; a gap > tol in the
    // current coordinate separates clusters for good.
    auto assign = [&](auto&& self, std::size_t lo, std::size_t hi, int s) -> void {
      if (s == d) {
        for (std::size_t t = lo; t < hi; ++t) cluster_of[order[t]] = nclusters;
        ++nclusters;
        return;
      }
      if (s > 0)
        std::sort(order.begin() + lo, order.begin() + hi, [&](std::int32_t a, std::int32_t b) {
          return pts[static_cast<std::size_t>(a) * d + s] < pts[static_cast<std::size_t>(b) * d + s];
        });
      std::size_t start = lo;
      for (std::size_t t = lo + 1; t < hi; ++t) {
        double gap = pts[static_cast<std::size_t>(order[t]) * d + s] -
                     pts[static_cast<std::size_t>(order[t - 1]) * d + s];
        if (gap > tol) {
          self(self, start, t, s + 1);
          start = t;
        }
      }
      self(self, start, hi, s + 1);
    };
    if (m > 0) assign(assign, 0, m, 0);

    // Representative per cluster: the entry with the lex-min witness tuple.
    std::vector<std::int32_t> rep(nclusters, -1);
    for (std::size_t i = 0; i < m; ++i) {
      std::int32_t c = cluster_of[i];
      if (rep[c] < 0 ||
          std::lexicographical_compare(wit.begin() + static_cast<std::size_t>(i) * n,
                                       wit.begin() + static_cast<std::size_t>(i + 1) * n,
                                       wit.begin() + static_cast<std::size_t>(rep[c]) * n,
                                       wit.begin() + static_cast<std::size_t>(rep[c] + 1) * n))
        rep[c] = static_cast<std::int32_t>(i);
    }
    std::vector<std::int32_t> final_order(rep.begin(), rep.end());
    std::sort(final_order.begin(), final_order.end(), lex_cmp);

    cs.points.reserve(nclusters);
    cs.witness.reserve(nclusters);
    for (std::int32_t idx : final_order) {
      cs.points.emplace_back(pts.begin() + static_cast<std::size_t>(idx) * d,
                             pts.begin() + static_cast<std::size_t>(idx + 1) * d);
      cs.witness.emplace_back(wit.begin() + static_cast<std::size_t>(idx) * n,
                              wit.begin() + static_cast<std::size_t>(idx + 1) * n);
    }
    return cs;
  }
}

// Axis-aligned uniform grid. Axis vectors span the full extent, so grid nodes
// are origin + sum_s (l_s / (extents_s - 1)) * axes_s with l_s in [0, extents_s).
struct GridSpec {
  Point<double> origin;
  std::vector<Point<double>> axes;
  std::vector<int> extents;

  int dim() const { return static_cast<int>(extents.size()); }
  double step(int s) const { return axes[s][s] / (extents[s] - 1); }
  long long nodes() const {
    long long n = 1;
    for (int e : extents) n *= e;
    return n;
  }
};

namespace detail {

// Euclidean float gcd; values inside `tol` of zero (or of the divisor) count
// as dividing evenly. Returns 0 when the inputs look incommensurable.
inline double float_gcd(double a, double b, double tol) {
  a = std::abs(a);
  b = std::abs(b);
  if (a < b) std::swap(a, b);
  int guard = 0;
  while (b > tol) {
    double r = std::fmod(a, b);
    if (r < tol || b - r < tol) r = 0;
    a = b;
    b = r;
    if (++guard > 128) return 0;
  }
  return a;
}

}  // namespace detail

inline bool on_grid(const GridSpec& g, const Point<double>& p, double tol) {
  for (int s = 0; s < g.dim(); ++s) {
    double step = g.step(s);
    double rel = (p[s] - g.origin[s]) / step;
    double n = std::round(rel);
    if (n < -0.5 || n > g.extents[s] - 0.5) return false;
    if (std::abs(p[s] - (g.origin[s] + n * step)) > tol) return false;
  }
  return true;
}

// Fits the minimal axis-aligned uniform grid carrying every support point of
// every measure. Absent when an axis is flat or the spacings do not share a
// common step (inference tolerance 1e-6 relative, membership 1e-9 relative).
inline std::optional<GridSpec> detect_grid(const MeasureSet<double>& ms) {
  validate_set(ms);
  const int d = ms.dim();
  const double scale = coord_scale(ms);
  const double member_tol = 1e-9 * scale;

  GridSpec g;
  g.origin.assign(d, 0.0);
  g.axes.assign(d, Point<double>(d, 0.0));
  g.extents.assign(d, 0);

  for (int s = 0; s < d; ++s) {
    std::vector<double> vals;
    for (const auto& m : ms.measures)
      for (const auto& p : m.points) vals.push_back(p[s]);
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end(),
                           [&](double a, double b) { return b - a <= member_tol; }),
               vals.end());
    if (vals.size() < 2) return std::nullopt;

    const double lo = vals.front(), span = vals.back() - vals.front();
    double step = 0;
    for (std::size_t t = 1; t < vals.size(); ++t) {
      double diff = vals[t] - lo;
      step = step == 0 ? diff : detail::float_gcd(step, diff, 1e-6 * span);
      if (step == 0) return std::nullopt;
    }
    double count = span / step;
    if (count > 65535.0) return std::nullopt;
    int segments = static_cast<int>(std::llround(count));
    for (double v : vals) {
      double rel = (v - lo) / step;
      if (std::abs(v - (lo + std::round(rel) * step)) > member_tol) return std::nullopt;
    }
    g.origin[s] = lo;
    g.axes[s][s] = span;
    g.extents[s] = segments + 1;
  }
  return g;
}

// The candidate-location grid for n measures on this grid: same box, each
// axis refined to n * (extent - 1) + 1 nodes.
inline GridSpec refined_grid(const GridSpec& g, int n) {
  GridSpec r = g;
  for (auto& e : r.extents) e = n * (e - 1) + 1;
  return r;
}

struct GridBound {
  double density;            // fraction of refined-grid nodes a barycenter can use
  long long support_points;  // absolute cap on barycenter support size
};

inline GridBound grid_density_bound(const GridSpec& g, int n) {
  GridBound b{1.0, 1};
  long long prod = 1;
  for (int e : g.extents) {
    b.density *= static_cast<double>(e) / (e - 1);
    prod *= e;
  }
  for (int s = 1; s < g.dim(); ++s) b.density /= n;
  b.support_points = n * (prod - 1) + 1;
  return b;
}

}  // namespace bary
