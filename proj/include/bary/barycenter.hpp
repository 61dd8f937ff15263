#pragma once

#include <utility>
#include <vector>

#include "bary/centroid.hpp"
#include "bary/errors.hpp"
#include "bary/geom.hpp"
#include "bary/lp/problem.hpp"
#include "bary/lp/refine.hpp"
#include "bary/lp/simplex.hpp"
#include "bary/measure.hpp"
#include "bary/parallel.hpp"
#include "bary/scalar.hpp"

namespace bary {

// Row/column bookkeeping of the linked transportation program:
//   variables  y[i][j][k]  mass sent from candidate point j to point k of
//              measure i, and z[j], the barycenter weight of candidate j
//   link rows      sum_k y[i][j][k] - z[j] = 0        for every (i, j)
//   marginal rows  sum_j y[i][j][k]        = d[i][k]  for every (i, k)
// Costs are squared euclidean distances on the y variables only.
struct PrimalLayout {
  int num_measures = 0;
  int num_candidates = 0;
  std::vector<int> sizes;      // support size per measure
  std::vector<int> ycol_base;  // first y column of each measure
  std::vector<int> marg_base;  // first marginal row of each measure (relative)
  int zcol_base = 0;
  int link_rows = 0;
  int rows = 0;
  int cols = 0;

  int ycol(int i, int j, int k) const { return ycol_base[i] + j * sizes[i] + k; }
  int zcol(int j) const { return zcol_base + j; }
  int link_row(int i, int j) const { return i * num_candidates + j; }
  int marg_row(int i, int k) const { return link_rows + marg_base[i] + k; }
};

template <class T>
struct PrimalLp {
  lp::Problem<T> problem;
  PrimalLayout layout;
};

template <class T>
PrimalLp<T> build_primal(const MeasureSet<T>& ms, const CentroidSet<T>& cs,
                         long long max_cols = 5000000) {
  validate_set(ms);
  const int n_meas = static_cast<int>(ms.measures.size());
  const int n_cand = static_cast<int>(cs.size());
  PrimalLayout lay;
  lay.num_measures = n_meas;
  lay.num_candidates = n_cand;
  long long ycols = 0, marg = 0;
  for (const auto& m : ms.measures) {
    lay.sizes.push_back(static_cast<int>(m.size()));
    lay.ycol_base.push_back(static_cast<int>(ycols));
    lay.marg_base.push_back(static_cast<int>(marg));
    ycols += static_cast<long long>(n_cand) * static_cast<long long>(m.size());
    marg += static_cast<long long>(m.size());
  }
  long long cols = ycols + n_cand;
  if (cols > max_cols)
    throw SizeError("linked transportation program needs " + std::to_string(cols) +
                    " variables, above the limit of " + std::to_string(max_cols));
  lay.zcol_base = static_cast<int>(ycols);
  lay.link_rows = n_meas * n_cand;
  lay.rows = lay.link_rows + static_cast<int>(marg);
  lay.cols = static_cast<int>(cols);

  PrimalLp<T> out;
  out.layout = lay;
  lp::Problem<T>& p = out.problem;
  p.rows = lay.rows;
  p.cols = lay.cols;
  p.obj.assign(p.cols, T(0));
  p.rhs.assign(p.rows, T(0));
  p.entries.reserve(2 * static_cast<std::size_t>(ycols) +
                    static_cast<std::size_t>(n_meas) * n_cand);
  for (int i = 0; i < n_meas; ++i) {
    const auto& m = ms.measures[i];
    for (int j = 0; j < n_cand; ++j) {
      for (int k = 0; k < lay.sizes[i]; ++k) {
        int col = lay.ycol(i, j, k);
        p.entries.push_back({lay.link_row(i, j), col, T(1)});
        p.entries.push_back({lay.marg_row(i, k), col, T(1)});
      }
    }
    for (int k = 0; k < lay.sizes[i]; ++k) p.rhs[lay.marg_row(i, k)] = m.masses[k];
  }
  for (int j = 0; j < n_cand; ++j)
    for (int i = 0; i < n_meas; ++i)
      p.entries.push_back({lay.link_row(i, j), lay.zcol(j), T(-1)});

  // transport costs: independent entries, filled in parallel
  for (int i = 0; i < n_meas; ++i) {
    const auto& m = ms.measures[i];
    const int sz = lay.sizes[i];
    parallel_for(static_cast<long long>(n_cand) * sz, [&](long long lo, long long hi) {
      for (long long t = lo; t < hi; ++t) {
        const int j = static_cast<int>(t / sz);
        const int k = static_cast<int>(t % sz);
        p.obj[lay.ycol(i, j, k)] = sq_dist(cs.points[j], m.points[k]);
      }
    });
  }
  return out;
}

struct SolveConfig {
  lp::Options lp{};
  long long max_tuples = 100000000;   // candidate enumeration budget
  long long max_lp_cols = 5000000;    // linked program size budget
  long long max_mm_tuples = 1000000;  // multimarginal program size budget
  bool refine = false;  // move to the relative interior of the optimal face
};

template <class T>
struct TransportEntry {
  int from = 0;  // candidate index
  int to = 0;    // support point index within the measure
  T mass{};
};

template <class T>
struct BarycenterResult {
  CentroidSet<T> candidates;
  std::vector<T> weights;     // per candidate, most of them zero
  std::vector<int> support;   // candidate ids with positive weight, ascending
  DiscreteMeasure<T> barycenter;
  std::vector<std::vector<TransportEntry<T>>> transports;  // per measure
  std::vector<std::vector<T>> tau;    // marginal-row duals per measure
  std::vector<std::vector<T>> theta;  // link-row duals per measure
  // total_cost is the sum of the per-measure squared transport costs, i.e.
  // the raw program optimum.
  T total_cost{};
  std::vector<T> per_measure_cost;
  long long iterations = 0;
  PrimalLayout layout;
  lp::Problem<T> problem;
  lp::Solution<T> solution;
};

template <class T>
bool mass_positive(const T& v) {
  if constexpr (is_exact_v<T>) return v > T(0);
  return to_double(v) > support_tol<T>();
}

// Extraction shared by the fresh-solve and refine paths.
template <class T>
BarycenterResult<T> extract_barycenter(const MeasureSet<T>& ms, CentroidSet<T> cs,
                                       PrimalLp<T> built, lp::Solution<T> sol) {
  const PrimalLayout& lay = built.layout;
  BarycenterResult<T> out;
  out.layout = lay;
  out.candidates = std::move(cs);
  out.total_cost = sol.objective;
  out.iterations = sol.iterations;

  out.weights.assign(lay.num_candidates, T(0));
  for (int j = 0; j < lay.num_candidates; ++j) out.weights[j] = sol.x[lay.zcol(j)];
  DiscreteMeasure<T> nu;
  nu.dim = out.candidates.dim;
  for (int j = 0; j < lay.num_candidates; ++j) {
    if (!mass_positive(out.weights[j])) continue;
    out.support.push_back(j);
    nu.points.push_back(out.candidates.points[j]);
    nu.masses.push_back(out.weights[j]);
  }
  canonicalize(nu);
  out.barycenter = std::move(nu);

  out.transports.resize(lay.num_measures);
  out.per_measure_cost.assign(lay.num_measures, T(0));
  out.tau.resize(lay.num_measures);
  out.theta.resize(lay.num_measures);
  for (int i = 0; i < lay.num_measures; ++i) {
    const auto& m = ms.measures[i];
    for (int j = 0; j < lay.num_candidates; ++j) {
      for (int k = 0; k < lay.sizes[i]; ++k) {
        const T& y = sol.x[lay.ycol(i, j, k)];
        if (!mass_positive(y)) continue;
        out.transports[i].push_back({j, k, y});
        out.per_measure_cost[i] +=
            sq_dist(out.candidates.points[j], m.points[k]) * y;
      }
    }
    out.tau[i].resize(lay.sizes[i]);
    for (int k = 0; k < lay.sizes[i]; ++k) out.tau[i][k] = sol.dual[lay.marg_row(i, k)];
    out.theta[i].resize(lay.num_candidates);
    for (int j = 0; j < lay.num_candidates; ++j)
      out.theta[i][j] = sol.dual[lay.link_row(i, j)];
  }
  out.problem = std::move(built.problem);
  out.solution = std::move(sol);
  return out;
}

// Full pipeline: canonicalize, enumerate candidates, assemble and solve the
// linked program, unpack primal and dual data.
template <class T>
BarycenterResult<T> solve_barycenter(const MeasureSet<T>& input,
                                     const SolveConfig& cfg = SolveConfig{}) {
  MeasureSet<T> ms = input;
  for (auto& m : ms.measures) canonicalize(m);
  validate_set(ms);
  CentroidSet<T> cs = build_centroids(ms, cfg.max_tuples);

  if (ms.measures.size() == 1) {
    // the measure is its own barycenter; no program needs solving
    const auto& m = ms.measures[0];
    BarycenterResult<T> out;
    out.layout.num_measures = 1;
    out.layout.num_candidates = cs.size();
    out.layout.sizes = {m.size()};
    out.layout.ycol_base = {0};
    out.layout.marg_base = {0};
    out.layout.zcol_base = cs.size() * m.size();
    out.layout.link_rows = cs.size();
    out.layout.rows = cs.size() + m.size();
    out.layout.cols = cs.size() * m.size() + cs.size();
    out.weights.assign(cs.size(), T(0));
    out.transports.resize(1);
    for (int j = 0; j < cs.size(); ++j) {
      const int k = cs.witness[j][0];
      out.weights[j] = m.masses[k];
      out.support.push_back(j);
      out.transports[0].push_back({j, k, m.masses[k]});
    }
    DiscreteMeasure<T> nu;
    nu.dim = cs.dim;
    nu.points = cs.points;
    nu.masses = out.weights;
    canonicalize(nu);
    out.barycenter = std::move(nu);
    out.tau = {std::vector<T>(m.size(), T(0))};
    out.theta = {std::vector<T>(cs.size(), T(0))};
    out.per_measure_cost = {T(0)};
    out.candidates = std::move(cs);
    return out;
  }

  PrimalLp<T> built = build_primal(ms, cs, cfg.max_lp_cols);
  lp::Solution<T> sol = lp::solve_lp(built.problem, cfg.lp);
  if (sol.status == lp::Status::Infeasible)
    throw NumericalError("linked transportation program reported infeasible");
  if (sol.status == lp::Status::Unbounded)
    throw NumericalError("linked transportation program reported unbounded");
  if (cfg.refine) sol = lp::optimal_face_refine(built.problem, sol, cfg.lp);
  return extract_barycenter(ms, std::move(cs), std::move(built), std::move(sol));
}

template <class T>
struct MultimarginalResult {
  T coupling_value{};   // maximized mass-weighted squared norm of tuple means
  T barycenter_cost{};  // implied objective value of the barycenter problem
  DiscreteMeasure<T> barycenter;  // pushforward of the coupling by tuple means
  std::vector<std::pair<std::vector<int>, T>> coupling;  // positive tuples
  long long iterations = 0;
};

// Independent formulation over full support tuples: one variable per tuple,
// marginal constraints only. Used to cross-check the linked program.
template <class T>
MultimarginalResult<T> solve_multimarginal(const MeasureSet<T>& input,
                                           const SolveConfig& cfg = SolveConfig{}) {
  MeasureSet<T> ms = input;
  for (auto& m : ms.measures) canonicalize(m);
  validate_set(ms);
  const int n_meas = static_cast<int>(ms.measures.size());
  const int dim = ms.measures[0].dim;
  long long tuples = 1;
  for (const auto& m : ms.measures) {
    tuples *= static_cast<long long>(m.size());
    if (tuples > cfg.max_mm_tuples)
      throw SizeError("multimarginal program needs more than " +
                      std::to_string(cfg.max_mm_tuples) + " tuple variables");
  }
  std::vector<int> marg_base(n_meas, 0);
  int rows = 0;
  for (int i = 0; i < n_meas; ++i) {
    marg_base[i] = rows;
    rows += static_cast<int>(ms.measures[i].size());
  }

  lp::Problem<T> p;
  p.rows = rows;
  p.cols = static_cast<int>(tuples);
  p.obj.assign(p.cols, T(0));
  p.rhs.assign(p.rows, T(0));
  for (int i = 0; i < n_meas; ++i)
    for (std::size_t k = 0; k < ms.measures[i].size(); ++k)
      p.rhs[marg_base[i] + static_cast<int>(k)] = ms.measures[i].masses[k];
  p.entries.reserve(static_cast<std::size_t>(tuples) * n_meas);

  std::vector<int> digit(n_meas, 0);
  Point<T> mean(dim, T(0));
  for (int t = 0; t < static_cast<int>(tuples); ++t) {
    for (int s = 0; s < dim; ++s) mean[s] = T(0);
    for (int i = 0; i < n_meas; ++i) {
      const auto& pt = ms.measures[i].points[digit[i]];
      for (int s = 0; s < dim; ++s) mean[s] += pt[s];
      p.entries.push_back({marg_base[i] + digit[i], t, T(1)});
    }
    for (int s = 0; s < dim; ++s) mean[s] /= T(n_meas);
    p.obj[t] = -sq_norm(mean);  // maximize via minimizing the negation
    for (int i = n_meas - 1; i >= 0; --i) {
      if (++digit[i] < static_cast<int>(ms.measures[i].size())) break;
      digit[i] = 0;
    }
  }

  lp::Solution<T> sol = lp::solve_lp(p, cfg.lp);
  if (sol.status != lp::Status::Optimal)
    throw NumericalError("multimarginal program did not reach an optimum");

  MultimarginalResult<T> out;
  out.iterations = sol.iterations;
  out.coupling_value = -sol.objective;
  T moments{};
  for (const auto& m : ms.measures) moments += second_moment(m);
  out.barycenter_cost = moments - T(n_meas) * out.coupling_value;

  DiscreteMeasure<T> nu;
  nu.dim = dim;
  std::fill(digit.begin(), digit.end(), 0);
  for (int t = 0; t < static_cast<int>(tuples); ++t) {
    if (mass_positive(sol.x[t])) {
      for (int s = 0; s < dim; ++s) mean[s] = T(0);
      for (int i = 0; i < n_meas; ++i) {
        const auto& pt = ms.measures[i].points[digit[i]];
        for (int s = 0; s < dim; ++s) mean[s] += pt[s];
      }
      for (int s = 0; s < dim; ++s) mean[s] /= T(n_meas);
      nu.points.push_back(mean);
      nu.masses.push_back(sol.x[t]);
      out.coupling.emplace_back(digit, sol.x[t]);
    }
    for (int i = n_meas - 1; i >= 0; --i) {
      if (++digit[i] < static_cast<int>(ms.measures[i].size())) break;
      digit[i] = 0;
    }
  }
  canonicalize(nu);
  out.barycenter = std::move(nu);
  return out;
}

}  // namespace bary
