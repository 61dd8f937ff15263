#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "bary/barycenter.hpp"
#include "bary/errors.hpp"
#include "bary/geom.hpp"
#include "bary/lp/refine.hpp"
#include "bary/measure.hpp"
#include "bary/scalar.hpp"

namespace bary {

// Piecewise-linear convex potential per measure, assembled from the marginal
// duals: the piece of support point p with dual t is  <x, p> - |p|^2/2 + t/2.
// Its maximum over pieces links back to transport costs through the identity
//   |x|^2 - 2 * value(i, x) = min_k ( |x - p_ik|^2 - tau_ik ).
template <class T>
struct Potentials {
  std::vector<std::vector<Point<T>>> grads;  // piece gradients per measure
  std::vector<std::vector<T>> offsets;       // piece offsets per measure

  T piece_value(int i, int k, const Point<T>& x) const {
    return dot(x, grads[i][k]) + offsets[i][k];
  }
  T value(int i, const Point<T>& x) const {
    T best = piece_value(i, 0, x);
    for (std::size_t k = 1; k < grads[i].size(); ++k) {
      T v = piece_value(i, static_cast<int>(k), x);
      if (v > best) best = v;
    }
    return best;
  }
  // lowest piece index attaining the maximum
  int argmax(int i, const Point<T>& x) const {
    int best = 0;
    T bv = piece_value(i, 0, x);
    for (std::size_t k = 1; k < grads[i].size(); ++k) {
      T v = piece_value(i, static_cast<int>(k), x);
      if (v > bv) {
        bv = v;
        best = static_cast<int>(k);
      }
    }
    return best;
  }
};

template <class T>
Potentials<T> build_potentials(const MeasureSet<T>& input, const BarycenterResult<T>& r) {
  MeasureSet<T> ms = input;
  for (auto& m : ms.measures) canonicalize(m);
  validate_set(ms);
  Potentials<T> pot;
  pot.grads.resize(ms.measures.size());
  pot.offsets.resize(ms.measures.size());
  for (std::size_t i = 0; i < ms.measures.size(); ++i) {
    const auto& m = ms.measures[i];
    pot.grads[i] = m.points;
    pot.offsets[i].resize(m.size());
    for (std::size_t k = 0; k < m.size(); ++k)
      pot.offsets[i][k] = (r.tau[i][k] - sq_norm(m.points[k])) / T(2);
  }
  return pot;
}

// Certificate that the solved point is optimal, phrased through potentials.
// The four checked properties, each within tolerance * scale:
//   1. attainment: every transported pair lands on a maximizing piece
//   2. inequality: sum_i psi_i(x) <= (N/2)|x|^2 at every candidate point
//   3. equality of property 2 at every support point
//   4. per-measure strong duality: transport cost i equals its dual value
// Separately reported, without affecting the certificate:
//   - strict complementarity: candidates outside the support keep a strictly
//     positive slack in property 2 (refinement can repair a false report)
//   - argmax uniqueness: no transported pair sits on a tie between pieces
struct CertifyReport {
  bool optimal_certified = false;
  bool strictly_complementary = true;
  bool argmax_unique = true;
  double attainment_gap = 0;
  double inequality_violation = 0;
  double support_equality_gap = 0;
  double duality_gap = 0;
  double tolerance = 0;
  double scale = 1;
};

template <class T>
CertifyReport certify_potentials(const MeasureSet<T>& input, const BarycenterResult<T>& r,
                                 double tol = 1e-7) {
  MeasureSet<T> ms = input;
  for (auto& m : ms.measures) canonicalize(m);
  validate_set(ms);
  const PrimalLayout& lay = r.layout;
  const int n_meas = lay.num_measures;
  Potentials<T> pot = build_potentials(ms, r);

  CertifyReport rep;
  rep.tolerance = tol;
  double cs = to_double(coord_scale(ms));
  rep.scale = 1.0 + cs * cs + std::abs(to_double(r.total_cost));
  const double allow = tol * rep.scale;

  // property 1 + argmax uniqueness on transported pairs
  for (int i = 0; i < n_meas; ++i) {
    for (const auto& e : r.transports[i]) {
      const Point<T>& xj = r.candidates.points[e.from];
      T best = pot.value(i, xj);
      double gap = to_double(best - pot.piece_value(i, e.to, xj));
      rep.attainment_gap = std::max(rep.attainment_gap, gap);
      int ties = 0;
      for (int k = 0; k < lay.sizes[i]; ++k) {
        double d = to_double(best - pot.piece_value(i, k, xj));
        if constexpr (is_exact_v<T>) {
          if (d == 0) ++ties;
        } else {
          if (d <= allow) ++ties;
        }
      }
      if (ties > 1) rep.argmax_unique = false;
    }
  }

  // properties 2 and 3, plus strict complementarity on the off-support side
  std::vector<char> in_support(lay.num_candidates, 0);
  for (int j : r.support) in_support[j] = 1;
  for (int j = 0; j < lay.num_candidates; ++j) {
    const Point<T>& xj = r.candidates.points[j];
    T lhs{};
    for (int i = 0; i < n_meas; ++i) lhs += pot.value(i, xj);
    double slack = to_double(T(n_meas) * sq_norm(xj) / T(2) - lhs);
    if (in_support[j]) {
      rep.support_equality_gap = std::max(rep.support_equality_gap, std::abs(slack));
    } else {
      rep.inequality_violation = std::max(rep.inequality_violation, -slack);
      bool strict;
      if constexpr (is_exact_v<T>) {
        strict = slack > 0;
      } else {
        strict = slack > allow;
      }
      if (!strict) rep.strictly_complementary = false;
    }
  }

  // property 4: cost of each transport equals its dual value
  for (int i = 0; i < n_meas; ++i) {
    T dual{};
    for (int k = 0; k < lay.sizes[i]; ++k) dual += ms.measures[i].masses[k] * r.tau[i][k];
    for (int j = 0; j < lay.num_candidates; ++j)
      if (r.weights[j] != T(0)) dual += r.weights[j] * r.theta[i][j];
    rep.duality_gap =
        std::max(rep.duality_gap, std::abs(to_double(dual - r.per_measure_cost[i])));
  }

  if constexpr (is_exact_v<T>) {
    rep.optimal_certified = rep.attainment_gap == 0 && rep.inequality_violation <= 0 &&
                            rep.support_equality_gap == 0 && rep.duality_gap == 0;
  } else {
    rep.optimal_certified =
        rep.attainment_gap <= allow && rep.inequality_violation <= allow &&
        rep.support_equality_gap <= allow && rep.duality_gap <= allow;
  }
  return rep;
}

template <class T>
struct CertifiedSolve {
  BarycenterResult<T> result;
  CertifyReport report;
  bool refined = false;
};

// Certify the vertex solution; when that fails to be strictly complementary
// (or to certify at all), move to the relative interior of the optimal face
// and certify there instead.
template <class T>
CertifiedSolve<T> certify_or_refine(const MeasureSet<T>& input, BarycenterResult<T> r,
                                    double tol = 1e-7,
                                    const lp::Options& opt = lp::Options{}) {
  MeasureSet<T> ms = input;
  for (auto& m : ms.measures) canonicalize(m);
  CertifiedSolve<T> out;
  out.report = certify_potentials(ms, r, tol);
  if (out.report.optimal_certified && out.report.strictly_complementary) {
    out.result = std::move(r);
    return out;
  }
  lp::Solution<T> refined = lp::optimal_face_refine(r.problem, r.solution, opt);
  PrimalLp<T> built{r.problem, r.layout};
  out.result = extract_barycenter(ms, r.candidates, std::move(built), std::move(refined));
  out.report = certify_potentials(ms, out.result, tol);
  out.refined = true;
  return out;
}

// Verdict on the single-target structure of the transports: no barycenter
// support point may split its mass over several points of one measure, and
// each support point must be the mean of its N matched points.
struct SplitReport {
  bool no_splitting = true;
  bool means_match = true;
  double max_mean_deviation = 0;
};

template <class T>
SplitReport check_no_mass_splitting(const MeasureSet<T>& input,
                                    const BarycenterResult<T>& r, double tol = 1e-7) {
  MeasureSet<T> ms = input;
  for (auto& m : ms.measures) canonicalize(m);
  validate_set(ms);
  const PrimalLayout& lay = r.layout;
  const int n_meas = lay.num_measures;
  SplitReport rep;
  const double allow = tol * to_double(coord_scale(ms));
  // Aggregate carried-mass entries per (measure, source); entry order in the
  // document must not matter.
  std::vector<std::vector<int>> times_used(n_meas, std::vector<int>(lay.num_candidates, 0));
  std::vector<std::vector<int>> last_target(n_meas, std::vector<int>(lay.num_candidates, -1));
  for (int i = 0; i < n_meas; ++i)
    for (const auto& e : r.transports[i])
      if (mass_positive(e.mass)) {
        ++times_used[i][e.from];
        last_target[i][e.from] = e.to;
      }
  for (int i = 0; i < n_meas; ++i)
    for (int j = 0; j < lay.num_candidates; ++j)
      if (times_used[i][j] > 1) rep.no_splitting = false;
  for (int j : r.support) {
    std::vector<int> target(n_meas, -1);
    bool single = true;
    for (int i = 0; i < n_meas; ++i) {
      if (times_used[i][j] != 1) single = false;
      target[i] = last_target[i][j];
    }
    if (!single) {
      rep.no_splitting = false;
      continue;
    }
    Point<T> mean(r.candidates.dim, T(0));
    for (int i = 0; i < n_meas; ++i) {
      const Point<T>& p = ms.measures[i].points[target[i]];
      for (int s = 0; s < r.candidates.dim; ++s) mean[s] += p[s];
    }
    double dev = 0;
    for (int s = 0; s < r.candidates.dim; ++s) {
      mean[s] /= T(n_meas);
      dev = std::max(dev,
                     std::abs(to_double(mean[s] - r.candidates.points[j][s])));
    }
    rep.max_mean_deviation = std::max(rep.max_mean_deviation, dev);
    if constexpr (is_exact_v<T>) {
      if (mean != r.candidates.points[j]) rep.means_match = false;
    } else {
      if (dev > allow) rep.means_match = false;
    }
  }
  return rep;
}

}  // namespace bary
