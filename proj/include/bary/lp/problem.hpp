#pragma once

#include <ostream>
#include <vector>

#include "bary/scalar.hpp"

namespace bary::lp {

// Standard form: min obj . x  subject to  A x = rhs, x >= 0.
template <class T>
struct Entry {
  int row;
  int col;
  T val;
};

template <class T>
struct Problem {
  int rows = 0;
  int cols = 0;
  std::vector<Entry<T>> entries;
  std::vector<T> rhs;
  std::vector<T> obj;
};

enum class Status { Optimal, Infeasible, Unbounded };

inline const char* status_name(Status s) {
  switch (s) {
    case Status::Optimal: return "optimal";
    case Status::Infeasible: return "infeasible";
    case Status::Unbounded: return "unbounded";
  }
  return "?";
}

// x is a vertex when `basis` is non-empty: at most one positive entry per
// basic column, every nonbasic entry exactly zero. optimal_face_refine returns
// interior points of the optimal face instead; those carry an empty basis.
template <class T>
struct Solution {
  Status status = Status::Optimal;
  std::vector<T> x;
  std::vector<T> dual;          // one multiplier per row
  std::vector<T> reduced_cost;  // obj - A^T dual, per column
  std::vector<int> basis;       // sorted structural basic columns
  T objective{};
  long long iterations = 0;
};

struct Options {
  double feas_tol = 1e-9;
  double opt_tol = 1e-9;
  double pivot_tol = 1e-9;   // smallest pivot magnitude the ratio test accepts
  int refactor_every = 100;  // pivots between basis refactorizations
  bool bland_only = false;   // exact mode forces this on
  long long max_iters = -1;  // -1: scale with problem size
};

// Plain-text sparse dump, one record per line. Deterministic ordering.
template <class T>
void dump(const Problem<T>& p, std::ostream& out) {
  out << "lp " << p.rows << ' ' << p.cols << ' ' << p.entries.size() << '\n';
  for (int j = 0; j < p.cols; ++j)
    if (!(p.obj[j] == T(0))) out << "c " << j << ' ' << to_double(p.obj[j]) << '\n';
  for (int i = 0; i < p.rows; ++i)
    if (!(p.rhs[i] == T(0))) out << "b " << i << ' ' << to_double(p.rhs[i]) << '\n';
  for (const auto& e : p.entries)
    out << "a " << e.row << ' ' << e.col << ' ' << to_double(e.val) << '\n';
}

}  // namespace bary::lp
