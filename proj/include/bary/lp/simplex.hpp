#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "bary/errors.hpp"
#include "bary/lp/lu.hpp"
#include "bary/lp/problem.hpp"
#include "bary/scalar.hpp"

namespace bary::lp {

namespace detail {

// Compressed sparse columns with per-column sorted rows, duplicates summed.
template <class T>
struct Csc {
  int m = 0, n = 0;
  std::vector<int> ptr, idx;
  std::vector<T> val;

  static Csc build(const Problem<T>& p) {
    if (p.rows < 0 || p.cols < 0) throw ValidationError("negative LP dimensions");
    if (static_cast<int>(p.rhs.size()) != p.rows)
      throw ValidationError("rhs length does not match row count");
    if (static_cast<int>(p.obj.size()) != p.cols)
      throw ValidationError("objective length does not match column count");
    Csc a;
    a.m = p.rows;
    a.n = p.cols;
    std::vector<int> count(p.cols, 0);
    for (const auto& e : p.entries) {
      if (e.row < 0 || e.row >= p.rows || e.col < 0 || e.col >= p.cols)
        throw ValidationError("matrix entry out of range");
      ++count[e.col];
    }
    std::vector<int> raw_ptr(p.cols + 1, 0);
    for (int j = 0; j < p.cols; ++j) raw_ptr[j + 1] = raw_ptr[j] + count[j];
    std::vector<int> raw_idx(p.entries.size());
    std::vector<T> raw_val(p.entries.size());
    std::vector<int> cur(raw_ptr.begin(), raw_ptr.end() - 1);
    for (const auto& e : p.entries) {
      int t = cur[e.col]++;
      raw_idx[t] = e.row;
      raw_val[t] = e.val;
    }
    a.ptr.assign(p.cols + 1, 0);
    a.idx.reserve(p.entries.size());
    a.val.reserve(p.entries.size());
    std::vector<std::pair<int, T>> colbuf;
    for (int j = 0; j < p.cols; ++j) {
      colbuf.clear();
      for (int t = raw_ptr[j]; t < raw_ptr[j + 1]; ++t)
        colbuf.emplace_back(raw_idx[t], raw_val[t]);
      std::sort(colbuf.begin(), colbuf.end(),
                [](const auto& x, const auto& y) { return x.first < y.first; });
      for (std::size_t i = 0; i < colbuf.size();) {
        int r = colbuf[i].first;
        T s = colbuf[i].second;
        std::size_t k = i + 1;
        while (k < colbuf.size() && colbuf[k].first == r) s += colbuf[k++].second;
        if (s != T(0)) {
          a.idx.push_back(r);
          a.val.push_back(s);
        }
        i = k;
      }
      a.ptr[j + 1] = static_cast<int>(a.idx.size());
    }
    return a;
  }
};

template <class T>
struct Eta {
  int r = 0;           // pivot slot
  T dr{};              // pivot element of the entering direction
  std::vector<std::pair<int, T>> rest;  // other nonzeros of the direction
};

}  // namespace detail

// Two-phase revised simplex:
//  * signed unit artificial columns, so phase 1 starts feasible from any rhs
//  * cost-aware greedy triangular crash picks a cheap structural start
//  * product-form eta updates over a peeled sparse LU, refactored periodically
//  * segmented partial pricing on norm-scaled reduced costs, with Bland's rule
//    as the anti-cycling fallback (and always, in exact arithmetic)
//  * artificials are barred from entering; in phase 2 any still basic are
//    pinned at zero by the ratio test, then driven out along zero-reduced-cost
//    columns after optimality. Artificials stuck after that sit on redundant
//    rows and force those rows' duals to zero.
template <class T>
class Simplex {
 public:
  Simplex(const Problem<T>& p, const Options& opt)
      : a_(detail::Csc<T>::build(p)), obj_(p.obj), b_(p.rhs), opt_(opt) {
    m_ = a_.m;
    n_ = a_.n;
    if constexpr (is_exact_v<T>) {
      feas_ = 0;
      rc_tol_ = 0;
      piv_ = 0;
      bland_forced_ = true;
    } else {
      feas_ = opt_.feas_tol;
      rc_tol_ = opt_.opt_tol;
      piv_ = opt_.pivot_tol;
      bland_forced_ = opt_.bland_only;
    }
    bnorm1_ = 0;
    for (const auto& v : b_) bnorm1_ += std::abs(to_double(v));
    colnorm_.assign(n_, 1.0);
    cscale_.assign(n_, 1.0);
    for (int j = 0; j < n_; ++j) {
      double s = 1.0;
      for (int t = a_.ptr[j]; t < a_.ptr[j + 1]; ++t) {
        double v = to_double(a_.val[t]);
        s += v * v;
      }
      colnorm_[j] = std::sqrt(s);
      cscale_[j] = 1.0 + std::abs(to_double(obj_[j]));
    }
    seg_count_ = std::clamp(n_ / 16384, 1, 64);
    seg_len_ = (n_ + seg_count_ - 1) / seg_count_;
    max_iters_ = opt_.max_iters > 0 ? opt_.max_iters : 200000000LL;
  }

  Solution<T> solve() {
    crash();
    refactor(true);
    phase_ = 1;
    refresh_duals();
    if (!run_phase()) throw NumericalError("phase 1 claims an unbounded direction");
    if (!phase1_feasible()) {
      Solution<T> sol;
      sol.status = Status::Infeasible;
      sol.iterations = iter_count_;
      return sol;
    }
    phase_ = 2;
    degen_run_ = 0;
    bland_active_ = false;
    seg_cursor_ = 0;
    refresh_duals();
    if (!run_phase()) {
      Solution<T> sol;
      sol.status = Status::Unbounded;
      sol.iterations = iter_count_;
      return sol;
    }
    drive_out_artificials();
    return extract();
  }

 private:
  detail::Csc<T> a_;
  std::vector<T> obj_, b_;
  Options opt_;
  int m_ = 0, n_ = 0;
  double feas_ = 0, rc_tol_ = 0, piv_ = 0, bnorm1_ = 0;
  bool bland_forced_ = false;
  std::vector<double> colnorm_, cscale_;
  int seg_count_ = 1, seg_len_ = 1, seg_cursor_ = 0;
  long long max_iters_ = 0;

  std::vector<int> basis_var_;    // slot -> variable (>= n_ means artificial)
  std::vector<int> slot_of_var_;  // variable -> slot or -1
  std::vector<T> xb_;             // slot -> basic value
  std::vector<T> y_;              // row -> dual for the current phase costs
  std::vector<T> art_sign_;       // row -> +-1 artificial coefficient
  BasisLu<T> lu_;
  std::vector<detail::Eta<T>> etas_;
  int pivots_since_refactor_ = 0;
  long long iter_count_ = 0;
  int phase_ = 1;
  bool bland_active_ = false;
  int degen_run_ = 0;
  bool have_xb_ = false;

  T phase_cost(int v) const {
    if (v < n_) return phase_ == 1 ? T(0) : obj_[v];
    return phase_ == 1 ? T(1) : T(0);
  }

  double rc_scale(int v) const { return phase_ == 1 ? 1.0 : cscale_[v]; }

  bool rc_negative(const T& d, double scale) const {
    if constexpr (is_exact_v<T>) return d < T(0);
    return to_double(d) < -rc_tol_ * scale;
  }

  bool pivotal(const T& d) const {
    if constexpr (is_exact_v<T>) return d > T(0);
    return to_double(d) > piv_;
  }

  bool pivotal_abs(const T& d) const {
    if constexpr (is_exact_v<T>) return d != T(0);
    return std::abs(to_double(d)) > piv_;
  }

  // --- initial basis ------------------------------------------------------

  void crash() {
    basis_var_.assign(m_, -1);
    slot_of_var_.assign(n_ + m_, -1);
    xb_.assign(m_, T(0));
    art_sign_.assign(m_, T(1));

    // rows -> structural columns adjacency
    std::vector<int> rptr(m_ + 1, 0);
    for (int j = 0; j < n_; ++j)
      for (int t = a_.ptr[j]; t < a_.ptr[j + 1]; ++t) ++rptr[a_.idx[t] + 1];
    for (int r = 0; r < m_; ++r) rptr[r + 1] += rptr[r];
    std::vector<int> rcol(a_.idx.size());
    {
      std::vector<int> cur(rptr.begin(), rptr.end() - 1);
      for (int j = 0; j < n_; ++j)
        for (int t = a_.ptr[j]; t < a_.ptr[j + 1]; ++t) rcol[cur[a_.idx[t]]++] = j;
    }

    std::vector<char> taken_row(m_, 0), used_col(n_, 0);
    std::vector<std::pair<int, int>> picks;  // (row, col) in assignment order
    picks.reserve(m_);
    for (int u = 0; u < m_; ++u) {
      int best = -1;
      double best_cost = 0;
      for (int t = rptr[u]; t < rptr[u + 1]; ++t) {
        int j = rcol[t];
        if (used_col[j]) continue;
        double colmax = 0, diag = 0;
        bool ok = true;
        for (int e = a_.ptr[j]; e < a_.ptr[j + 1]; ++e) {
          if (taken_row[a_.idx[e]]) {
            ok = false;
            break;
          }
          double av = std::abs(to_double(a_.val[e]));
          colmax = std::max(colmax, av);
          if (a_.idx[e] == u) diag = av;
        }
        if (!ok || diag <= 1e-6 * colmax) continue;
        double cj = to_double(obj_[j]);
        if (best < 0 || cj < best_cost) {
          best = j;
          best_cost = cj;
        }
      }
      if (best >= 0) {
        used_col[best] = 1;
        taken_row[u] = 1;
        picks.emplace_back(u, best);
      }
    }

    // forward triangular solve; columns that would go negative revert to
    // artificial coverage of their row
    std::vector<T> resid = b_;
    for (const auto& [u, j] : picks) {
      T diag{};
      for (int e = a_.ptr[j]; e < a_.ptr[j + 1]; ++e)
        if (a_.idx[e] == u) diag = a_.val[e];
      T val = resid[u] / diag;
      if (val < T(0)) continue;  // leave row u to its artificial
      basis_var_[u] = j;
      slot_of_var_[j] = u;
      xb_[u] = val;
      if (val != T(0))
        for (int e = a_.ptr[j]; e < a_.ptr[j + 1]; ++e)
          resid[a_.idx[e]] -= a_.val[e] * val;
    }
    for (int r = 0; r < m_; ++r) {
      if (basis_var_[r] >= 0) continue;
      art_sign_[r] = resid[r] < T(0) ? T(-1) : T(1);
      basis_var_[r] = n_ + r;
      slot_of_var_[n_ + r] = r;
      xb_[r] = resid[r] < T(0) ? T(-resid[r]) : resid[r];
    }
    have_xb_ = true;
  }

  // --- factorization and solves -------------------------------------------

  void gather_basis(std::vector<int>& start, std::vector<int>& rows,
                    std::vector<T>& vals) const {
    start.assign(m_ + 1, 0);
    rows.clear();
    vals.clear();
    for (int s = 0; s < m_; ++s) {
      int v = basis_var_[s];
      if (v < n_) {
        for (int t = a_.ptr[v]; t < a_.ptr[v + 1]; ++t) {
          rows.push_back(a_.idx[t]);
          vals.push_back(a_.val[t]);
        }
      } else {
        rows.push_back(v - n_);
        vals.push_back(art_sign_[v - n_]);
      }
      start[s + 1] = static_cast<int>(rows.size());
    }
  }

  void refactor(bool initial = false) {
    std::vector<int> start, rows;
    std::vector<T> vals;
    gather_basis(start, rows, vals);
    bool ok = false;
    try {
      lu_.factor(m_, start, rows, vals, 0.01);
      ok = true;
      if constexpr (!is_exact_v<T>) ok = lu_.cond_estimate() < 1e14;
    } catch (const SingularBasis&) {
      ok = false;
    }
    if (!ok) {
      try {
        lu_.factor(m_, start, rows, vals, 1.0);
      } catch (const SingularBasis&) {
        throw NumericalError("basis factorization failed: singular basis");
      }
      if constexpr (!is_exact_v<T>) {
        if (lu_.cond_estimate() >= 1e16)
          throw NumericalError("basis factorization failed: condition estimate too large");
      }
    }
    etas_.clear();
    pivots_since_refactor_ = 0;

    std::vector<T> fresh = b_;
    if (m_ > 0) lu_.ftran(fresh);
    if constexpr (is_exact_v<T>) {
      for (const T& v : fresh)
        if (v < T(0)) throw NumericalError("negative basic value in exact mode");
    } else {
      double allow = feas_ * (1.0 + bnorm1_);
      double drift_allow = 1e-4;
      double xmax = 0;
      for (const T& v : fresh) xmax = std::max(xmax, std::abs(to_double(v)));
      for (int s = 0; s < m_; ++s) {
        double v = to_double(fresh[s]);
        if (v < 0) {
          if (v < -std::max(allow, 1e-7 * (1 + xmax)))
            throw NumericalError("lost primal feasibility during refactorization");
          fresh[s] = T(0);
        }
        if (!initial && have_xb_) {
          double dv = std::abs(v - to_double(xb_[s]));
          if (dv > drift_allow * (1 + xmax))
            throw NumericalError("basic solution drifted beyond tolerance");
        }
      }
    }
    xb_ = std::move(fresh);
    have_xb_ = true;
  }

  void ftran_full(std::vector<T>& w) const {
    if (m_ == 0) return;
    lu_.ftran(w);
    for (const auto& e : etas_) {
      T t = w[e.r] / e.dr;
      if (t != T(0))
        for (const auto& [i, v] : e.rest) w[i] -= v * t;
      w[e.r] = t;
    }
  }

  void btran_full(std::vector<T>& w) const {
    if (m_ == 0) return;
    for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
      T s = w[it->r];
      for (const auto& [i, v] : it->rest) s -= v * w[i];
      w[it->r] = s / it->dr;
    }
    lu_.btran(w);
  }

  void refresh_duals() {
    y_.assign(m_, T(0));
    if (m_ == 0) return;
    for (int s = 0; s < m_; ++s) y_[s] = phase_cost(basis_var_[s]);
    btran_full(y_);
  }

  T reduced_cost_of(int j) const {
    T d = phase_cost(j);
    for (int t = a_.ptr[j]; t < a_.ptr[j + 1]; ++t) d -= y_[a_.idx[t]] * a_.val[t];
    return d;
  }

  // --- pricing --------------------------------------------------------------

  std::optional<int> price_segment(int g) const {
    int lo = g * seg_len_, hi = std::min(n_, (g + 1) * seg_len_);
    int best = -1;
    double best_score = 0;
    for (int j = lo; j < hi; ++j) {
      if (slot_of_var_[j] >= 0) continue;
      T d = reduced_cost_of(j);
      if (!rc_negative(d, rc_scale(j))) continue;
      double score = to_double(d) / colnorm_[j];
      if (best < 0 || score < best_score) {
        best = j;
        best_score = score;
      }
    }
    if (best < 0) return std::nullopt;
    return best;
  }

  std::optional<int> price_bland() const {
    for (int j = 0; j < n_; ++j) {
      if (slot_of_var_[j] >= 0) continue;
      if (rc_negative(reduced_cost_of(j), rc_scale(j))) return j;
    }
    return std::nullopt;
  }

  std::optional<int> price() {
    if (bland_forced_ || bland_active_) return price_bland();
    for (int k = 0; k < seg_count_; ++k) {
      int g = (seg_cursor_ + k) % seg_count_;
      if (auto q = price_segment(g)) {
        seg_cursor_ = g;
        return q;
      }
    }
    return std::nullopt;
  }

  // Full fresh-factorization scan before trusting "no candidate".
  std::optional<int> verify_optimal() {
    if constexpr (is_exact_v<T>) return std::nullopt;  // scan was exact already
    if (pivots_since_refactor_ > 0) {
      refactor();
      refresh_duals();
    }
    int best = -1;
    double best_score = 0;
    for (int j = 0; j < n_; ++j) {
      if (slot_of_var_[j] >= 0) continue;
      T d = reduced_cost_of(j);
      if (!rc_negative(d, rc_scale(j))) continue;
      double score = to_double(d) / colnorm_[j];
      if (best < 0 || score < best_score) {
        best = j;
        best_score = score;
      }
    }
    if (best < 0) return std::nullopt;
    return best;
  }

  // --- ratio test and pivoting ----------------------------------------------

  struct Leave {
    int slot = -1;
    T theta{};
  };

  std::optional<Leave> ratio_test(const std::vector<T>& d) const {
    bool bland = bland_forced_ || bland_active_;
    int best_slot = -1, best_var = 0;
    T best_theta{};
    double best_mag = 0;
    for (int s = 0; s < m_; ++s) {
      int v = basis_var_[s];
      T theta{};
      if (phase_ == 2 && v >= n_) {
        if (!pivotal_abs(d[s])) continue;
        theta = T(0);
      } else {
        if (!pivotal(d[s])) continue;
        theta = xb_[s] > T(0) ? T(xb_[s] / d[s]) : T(0);
      }
      double mag = std::abs(to_double(d[s]));
      bool take = false;
      if (best_slot < 0) {
        take = true;
      } else if (theta < best_theta) {
        take = true;
      } else if (theta == best_theta) {
        if (bland) {
          take = v < best_var;
        } else {
          take = mag > best_mag || (mag == best_mag && v < best_var);
        }
      }
      if (take) {
        best_slot = s;
        best_var = v;
        best_theta = theta;
        best_mag = mag;
      }
    }
    if (best_slot < 0) return std::nullopt;
    return Leave{best_slot, best_theta};
  }

  std::vector<T> direction_of(int q) const {
    std::vector<T> d(m_, T(0));
    if (q < n_) {
      for (int t = a_.ptr[q]; t < a_.ptr[q + 1]; ++t) d[a_.idx[t]] = a_.val[t];
    } else {
      d[q - n_] = art_sign_[q - n_];
    }
    ftran_full(d);
    return d;
  }

  void pivot(int q, int slot, const T& theta, const std::vector<T>& d) {
    if (++iter_count_ > max_iters_) throw NumericalError("simplex iteration limit exceeded");
    if (theta != T(0)) {
      for (int s = 0; s < m_; ++s) {
        if (s == slot || d[s] == T(0)) continue;
        xb_[s] -= theta * d[s];
        if constexpr (!is_exact_v<T>) {
          if (to_double(xb_[s]) < 0 && to_double(xb_[s]) > -feas_ * (1 + bnorm1_))
            xb_[s] = T(0);
        }
      }
    }
    int leaving = basis_var_[slot];
    slot_of_var_[leaving] = -1;
    basis_var_[slot] = q;
    slot_of_var_[q] = slot;
    xb_[slot] = theta;

    detail::Eta<T> e;
    e.r = slot;
    e.dr = d[slot];
    for (int s = 0; s < m_; ++s)
      if (s != slot && d[s] != T(0)) e.rest.emplace_back(s, d[s]);
    etas_.push_back(std::move(e));
    ++pivots_since_refactor_;

    if (pivots_since_refactor_ >= opt_.refactor_every) refactor();
    refresh_duals();

    bool degenerate;
    if constexpr (is_exact_v<T>) {
      degenerate = theta == T(0);
    } else {
      degenerate = to_double(theta) <= 1e-12;
    }
    if (degenerate) {
      if (++degen_run_ > 60) bland_active_ = true;
    } else {
      degen_run_ = 0;
      bland_active_ = false;
    }
  }

  // Returns false on an unbounded direction.
  bool run_phase() {
    for (;;) {
      std::optional<int> q = price();
      if (!q) {
        q = verify_optimal();
        if (!q) return true;
      }
      std::vector<T> d = direction_of(*q);
      auto leave = ratio_test(d);
      if (!leave) return false;
      pivot(*q, leave->slot, leave->theta, d);
    }
  }

  bool phase1_feasible() const {
    T sum{};
    for (int s = 0; s < m_; ++s)
      if (basis_var_[s] >= n_) sum += xb_[s];
    if constexpr (is_exact_v<T>) return sum == T(0);
    return to_double(sum) <= feas_ * (1.0 + bnorm1_);
  }

  // --- cleanup and extraction ------------------------------------------------

  void drive_out_artificials() {
    for (;;) {
      bool have_art = false;
      for (int s = 0; s < m_; ++s)
        if (basis_var_[s] >= n_) have_art = true;
      if (!have_art) return;
      bool progressed = false;
      for (int j = 0; j < n_ && !progressed; ++j) {
        if (slot_of_var_[j] >= 0) continue;
        T d = reduced_cost_of(j);
        bool zero_rc;
        if constexpr (is_exact_v<T>) {
          zero_rc = d == T(0);
        } else {
          zero_rc = std::abs(to_double(d)) <= rc_tol_ * cscale_[j];
        }
        if (!zero_rc) continue;
        std::vector<T> dir = direction_of(j);
        for (int s = 0; s < m_; ++s) {
          if (basis_var_[s] < n_ || !pivotal_abs(dir[s])) continue;
          pivot(j, s, T(0), dir);
          progressed = true;
          break;
        }
      }
      if (!progressed) return;  // leftovers sit on redundant rows
    }
  }

  Solution<T> extract() {
    Solution<T> sol;
    sol.status = Status::Optimal;
    sol.iterations = iter_count_;
    sol.x.assign(n_, T(0));
    for (int s = 0; s < m_; ++s) {
      int v = basis_var_[s];
      if (v >= n_) continue;
      T xv = xb_[s];
      if constexpr (!is_exact_v<T>) {
        if (to_double(xv) < 0) xv = T(0);
      }
      sol.x[v] = xv;
    }
    sol.dual = y_;
    sol.reduced_cost.resize(n_);
    for (int j = 0; j < n_; ++j) sol.reduced_cost[j] = reduced_cost_of(j);
    for (int s = 0; s < m_; ++s)
      if (basis_var_[s] < n_) sol.basis.push_back(basis_var_[s]);
    std::sort(sol.basis.begin(), sol.basis.end());
    T z{};
    for (int j = 0; j < n_; ++j)
      if (sol.x[j] != T(0)) z += obj_[j] * sol.x[j];
    sol.objective = z;
    return sol;
  }
};

template <class T>
Solution<T> solve_lp(const Problem<T>& p, const Options& opt = Options{}) {
  return Simplex<T>(p, opt).solve();
}

}  // namespace bary::lp
