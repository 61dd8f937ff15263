#pragma once

#include <algorithm>
#include <vector>

#include "bary/barycenter.hpp"
#include "bary/errors.hpp"
#include "bary/geom.hpp"
#include "bary/lp/problem.hpp"
#include "bary/lp/simplex.hpp"
#include "bary/measure.hpp"
#include "bary/scalar.hpp"

namespace bary {

// One atom of a location-fixed scheme: `weight` units of mass sit at candidate
// point `candidate` and are matched with support point `targets[i]` of every
// measure i simultaneously.
template <class T>
struct SchemeAtom {
  int candidate = 0;
  std::vector<int> targets;
  T weight{};
};

template <class T>
struct Scheme {
  std::vector<SchemeAtom<T>> atoms;
};

// Decomposes the per-measure transports of a solution into a common
// refinement. For each positive candidate the N conditional plans are peeled
// together: each round removes the globally smallest positive residual from
// the lowest-index positive target of every measure, so every round zeroes at
// least one residual and an atom count of (sum of conditional supports) - N + 1
// per candidate is guaranteed. The result carries the same mass and cost as
// the input transports.
template <class T>
Scheme<T> scheme_from_transport(const BarycenterResult<T>& r) {
  const PrimalLayout& lay = r.layout;
  const int n_meas = lay.num_measures;
  Scheme<T> out;
  // conditional masses per (measure, candidate): transports are emitted in
  // ascending (candidate, target) order, so a sweep per measure suffices
  std::vector<std::size_t> cursor(n_meas, 0);
  for (int j : r.support) {
    std::vector<std::vector<std::pair<int, T>>> resid(n_meas);
    for (int i = 0; i < n_meas; ++i) {
      const auto& list = r.transports[i];
      while (cursor[i] < list.size() && list[cursor[i]].from == j) {
        resid[i].emplace_back(list[cursor[i]].to, list[cursor[i]].mass);
        ++cursor[i];
      }
      if (resid[i].empty())
        throw NumericalError("transport plan misses a positive candidate");
    }
    const double scale = 1.0 + std::abs(to_double(r.weights[j]));
    auto alive = [&](const std::pair<int, T>& e) {
      if constexpr (is_exact_v<T>) return e.second > T(0);
      return to_double(e.second) > 1e-14 * scale;
    };
    std::size_t guard = 0, guard_max = 2;
    for (int i = 0; i < n_meas; ++i) guard_max += resid[i].size();
    for (;;) {
      bool any = false;
      T mu{};
      for (int i = 0; i < n_meas; ++i)
        for (const auto& e : resid[i])
          if (alive(e) && (!any || e.second < mu)) {
            mu = e.second;
            any = true;
          }
      if (!any) break;
      if (++guard > guard_max)
        throw NumericalError("conditional transport peeling failed to terminate");
      SchemeAtom<T> atom;
      atom.candidate = j;
      atom.weight = mu;
      atom.targets.resize(n_meas);
      for (int i = 0; i < n_meas; ++i) {
        bool found = false;
        for (auto& e : resid[i]) {
          if (!alive(e)) continue;
          atom.targets[i] = e.first;
          e.second -= mu;  // the global minimum fits inside every residual
          found = true;
          break;
        }
        if (!found)
          throw NumericalError("conditional transport masses fell out of balance");
      }
      out.atoms.push_back(std::move(atom));
    }
  }
  return out;
}

// Rebuilds per-measure transports from scheme atoms (inverse of the peel up
// to merging). Atom weights below the support threshold are dropped.
template <class T>
std::vector<std::vector<TransportEntry<T>>> transport_from_scheme(
    const Scheme<T>& s, const PrimalLayout& lay) {
  std::vector<std::vector<TransportEntry<T>>> out(lay.num_measures);
  for (int i = 0; i < lay.num_measures; ++i) {
    std::vector<std::pair<std::pair<int, int>, T>> acc;
    for (const auto& a : s.atoms) {
      if (!mass_positive(a.weight)) continue;
      acc.push_back({{a.candidate, a.targets[i]}, a.weight});
    }
    std::sort(acc.begin(), acc.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    for (std::size_t t = 0; t < acc.size();) {
      T m = acc[t].second;
      std::size_t u = t + 1;
      while (u < acc.size() && acc[u].first == acc[t].first) m += acc[u++].second;
      out[i].push_back({acc[t].first.first, acc[t].first.second, m});
      t = u;
    }
  }
  return out;
}

template <class T>
struct SparsifyResult {
  Scheme<T> scheme;        // positive atoms of the rebalanced scheme
  std::vector<T> weights;  // per candidate
  std::vector<int> support;
  DiscreteMeasure<T> barycenter;
  std::vector<std::vector<TransportEntry<T>>> transports;
  T total_cost{};
  int support_bound = 0;  // sum of measure support sizes - N + 1
  long long iterations = 0;
};

// Rebalances the peeled scheme by a small transportation program over its
// atoms (marginal rows only, candidate locations held fixed). Any basic
// optimal point of that program has at most (sum of support sizes) - N + 1
// positive atoms — the marginal system loses one rank per measure beyond the
// first — which caps the barycenter support at the same number. The cost
// cannot move: the peel is feasible for the atom program at the optimal cost,
// and every atom solution maps back to a solution of the linked program.
template <class T>
SparsifyResult<T> sparsify(const MeasureSet<T>& input, const BarycenterResult<T>& r,
                           const lp::Options& opt = lp::Options{}) {
  MeasureSet<T> ms = input;  // align indices with the solve that produced r
  for (auto& m : ms.measures) canonicalize(m);
  const PrimalLayout& lay = r.layout;
  const int n_meas = lay.num_measures;
  Scheme<T> peeled = scheme_from_transport(r);

  int rows = 0;
  std::vector<int> base(n_meas, 0);
  for (int i = 0; i < n_meas; ++i) {
    base[i] = rows;
    rows += lay.sizes[i];
  }
  lp::Problem<T> p;
  p.rows = rows;
  p.cols = static_cast<int>(peeled.atoms.size());
  p.rhs.assign(rows, T(0));
  for (int i = 0; i < n_meas; ++i)
    for (int k = 0; k < lay.sizes[i]; ++k)
      p.rhs[base[i] + k] = ms.measures[i].masses[k];
  p.obj.assign(p.cols, T(0));
  for (int a = 0; a < p.cols; ++a) {
    const auto& atom = peeled.atoms[a];
    T c{};
    for (int i = 0; i < n_meas; ++i) {
      c += sq_dist(r.candidates.points[atom.candidate],
                   ms.measures[i].points[atom.targets[i]]);
      p.entries.push_back({base[i] + atom.targets[i], a, T(1)});
    }
    p.obj[a] = c;
  }

  lp::Solution<T> sol = lp::solve_lp(p, opt);
  if (sol.status != lp::Status::Optimal)
    throw NumericalError("atom rebalancing program did not reach an optimum");

  SparsifyResult<T> out;
  out.iterations = sol.iterations;
  out.total_cost = sol.objective;
  out.support_bound = rows - n_meas + 1;
  for (int a = 0; a < p.cols; ++a) {
    if (!mass_positive(sol.x[a])) continue;
    SchemeAtom<T> atom = peeled.atoms[a];
    atom.weight = sol.x[a];
    out.scheme.atoms.push_back(std::move(atom));
  }
  out.weights.assign(lay.num_candidates, T(0));
  for (const auto& a : out.scheme.atoms) out.weights[a.candidate] += a.weight;
  DiscreteMeasure<T> nu;
  nu.dim = r.candidates.dim;
  for (int j = 0; j < lay.num_candidates; ++j) {
    if (!mass_positive(out.weights[j])) continue;
    out.support.push_back(j);
    nu.points.push_back(r.candidates.points[j]);
    nu.masses.push_back(out.weights[j]);
  }
  canonicalize(nu);
  out.barycenter = std::move(nu);
  out.transports = transport_from_scheme(out.scheme, lay);
  return out;
}

}  // namespace bary
