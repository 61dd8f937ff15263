#pragma once

#include <vector>

#include "bary/errors.hpp"
#include "bary/lp/problem.hpp"
#include "bary/lp/simplex.hpp"
#include "bary/scalar.hpp"

namespace bary::lp {

// Moves an optimal vertex to a point in the relative interior of the optimal
// face, together with a dual point that is strictly complementary to it where
// the face permits: every column is either positive in the refined primal or
// has positive reduced cost under the refined dual.
//
// Method: for each column that is zero with zero reduced cost, solve a small
// auxiliary program maximizing that column over the optimal face (objective
// pinned to its optimal value, the column capped to dodge unbounded faces),
// and average the solutions; columns the face provably keeps at zero get the
// same treatment on the dual side, maximizing their dual slack. Averages of
// feasible points stay feasible, so the result is optimal by construction.
// The returned solution is generally not a vertex; its basis is left empty.
template <class T>
Solution<T> optimal_face_refine(const Problem<T>& p, const Solution<T>& s,
                                const Options& opt = Options{}) {
  if (s.status != Status::Optimal)
    throw ValidationError("optimal_face_refine requires an optimal solution");
  const int m = p.rows, n = p.cols;
  const double tol = strict_tol<T>();
  auto positive = [&](const T& v, double scale) {
    if constexpr (is_exact_v<T>) return v > T(0);
    return to_double(v) > tol * scale;
  };

  // objective value recomputed from the point itself, so the pinning row below
  // is exactly feasible at x*
  T zstar{};
  for (int j = 0; j < n; ++j)
    if (s.x[j] != T(0)) zstar += p.obj[j] * s.x[j];

  std::vector<int> candidates;
  for (int j = 0; j < n; ++j)
    if (!positive(s.x[j], 1.0) && !positive(s.reduced_cost[j], 1.0))
      candidates.push_back(j);

  // --- primal side: push candidates off zero where the face allows ---------
  std::vector<T> xsum = s.x;
  int xcount = 1;
  std::vector<int> stuck;  // provably zero on the whole face
  for (int cand : candidates) {
    if (positive(xsum[cand], static_cast<double>(xcount))) continue;
    Problem<T> aux;
    aux.rows = m + 2;
    aux.cols = n + 1;
    aux.entries = p.entries;
    aux.rhs = p.rhs;
    for (int j = 0; j < n; ++j)
      if (p.obj[j] != T(0)) aux.entries.push_back({m, j, p.obj[j]});
    aux.rhs.push_back(zstar);
    aux.entries.push_back({m + 1, cand, T(1)});
    aux.entries.push_back({m + 1, n, T(1)});  // slack for the cap
    aux.rhs.push_back(T(1));
    aux.obj.assign(n + 1, T(0));
    aux.obj[cand] = T(-1);  // maximize the candidate
    Solution<T> r = solve_lp(aux, opt);
    if (r.status != Status::Optimal)
      throw NumericalError("face exploration subproblem failed to solve");
    if (positive(r.x[cand], 1.0)) {
      for (int j = 0; j < n; ++j) xsum[j] += r.x[j];
      ++xcount;
    } else {
      stuck.push_back(cand);
    }
  }

  // --- dual side: positive reduced costs for columns stuck at zero ---------
  // Feasible dual points form  A^T y + w = c,  b^T y = z*,  w >= 0  with y
  // free, encoded as y = u - v.
  std::vector<T> ysum = s.dual;
  int ycount = 1;
  auto slack_avg = [&](int j) {
    T w = p.obj[j] * T(ycount);
    for (const auto& e : p.entries)
      if (e.col == j) w -= ysum[e.row] * e.val;
    return w;  // ycount * average slack
  };
  for (int cand : stuck) {
    if (positive(slack_avg(cand), static_cast<double>(ycount))) continue;
    Problem<T> aux;
    aux.rows = n + 2;
    aux.cols = 2 * m + n + 1;
    for (const auto& e : p.entries) {
      aux.entries.push_back({e.col, e.row, e.val});          // u
      aux.entries.push_back({e.col, m + e.row, T(-e.val)});  // v
    }
    for (int j = 0; j < n; ++j) aux.entries.push_back({j, 2 * m + j, T(1)});  // w
    aux.rhs = p.obj;
    for (int r = 0; r < m; ++r) {
      if (p.rhs[r] != T(0)) {
        aux.entries.push_back({n, r, p.rhs[r]});
        aux.entries.push_back({n, m + r, T(-p.rhs[r])});
      }
    }
    aux.rhs.push_back(zstar);
    aux.entries.push_back({n + 1, 2 * m + cand, T(1)});
    aux.entries.push_back({n + 1, 2 * m + n, T(1)});  // cap slack
    aux.rhs.push_back(T(1));
    aux.obj.assign(2 * m + n + 1, T(0));
    aux.obj[2 * m + cand] = T(-1);  // maximize the dual slack
    Solution<T> r = solve_lp(aux, opt);
    if (r.status != Status::Optimal)
      throw NumericalError("dual face exploration subproblem failed to solve");
    for (int i = 0; i < m; ++i) ysum[i] += r.x[i] - r.x[m + i];
    ++ycount;
  }

  Solution<T> out;
  out.status = Status::Optimal;
  out.iterations = s.iterations;
  out.objective = zstar;
  out.x.assign(n, T(0));
  for (int j = 0; j < n; ++j) out.x[j] = xsum[j] / T(xcount);
  out.dual.assign(m, T(0));
  for (int i = 0; i < m; ++i) out.dual[i] = ysum[i] / T(ycount);
  out.reduced_cost.assign(n, T(0));
  for (int j = 0; j < n; ++j) out.reduced_cost[j] = p.obj[j];
  for (const auto& e : p.entries) out.reduced_cost[e.col] -= out.dual[e.row] * e.val;
  return out;
}

}  // namespace bary::lp
