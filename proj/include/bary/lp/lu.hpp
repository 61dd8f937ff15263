#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "bary/errors.hpp"
#include "bary/scalar.hpp"

namespace bary::lp {

struct SingularBasis : NumericalError {
  SingularBasis() : NumericalError("structurally singular basis") {}
};

// Sparse LU of a basis matrix, built for the bases revised simplex produces:
// mostly near-triangular, so singleton peeling does almost all the work and a
// Markowitz-style elimination handles the small remaining bump. Solves are
// exposed in the two orientations the simplex needs (column space "slots" on
// one side, constraint rows on the other).
template <class T>
class BasisLu {
 public:
  // Column `s` of the basis owns entries [start[s], start[s+1]). Threshold is
  // the relative pivot magnitude floor for the bump (ignored in exact mode).
  void factor(int m, const std::vector<int>& start, const std::vector<int>& rowidx,
              const std::vector<T>& values, double rel_threshold = 0.01) {
    m_ = m;
    prepare(m);
    for (int c = 0; c < m; ++c) {
      for (int t = start[c]; t < start[c + 1]; ++t) {
        if (values[t] == T(0)) continue;
        wcols_[c].emplace_back(rowidx[t], values[t]);
        row_cols_[rowidx[t]].push_back(c);
        ++row_count_[rowidx[t]];
      }
      col_count_[c] = static_cast<int>(wcols_[c].size());
      if (col_count_[c] == 0) throw SingularBasis();
      if (col_count_[c] == 1) cs_stack_.push_back(c);
    }
    for (int r = 0; r < m; ++r)
      if (row_count_[r] == 1) rs_stack_.push_back(r);

    int pos = 0;
    while (pos < m) {
      int pr = -1, pc = -1;
      // cheapest first: singleton columns, then singleton rows, then bump
      while (!cs_stack_.empty()) {
        int c = cs_stack_.back();
        cs_stack_.pop_back();
        if (alive_col_[c] && col_count_[c] == 1) {
          pr = wcols_[c].front().first;
          pc = c;
          break;
        }
      }
      if (pc < 0) {
        while (!rs_stack_.empty()) {
          int r = rs_stack_.back();
          rs_stack_.pop_back();
          if (!alive_row_[r] || row_count_[r] != 1) continue;
          for (int c : row_cols_[r]) {
            if (!alive_col_[c]) continue;
            if (find_entry(c, r) >= 0) {
              pr = r;
              pc = c;
              break;
            }
          }
          if (pc >= 0) break;
        }
      }
      if (pc < 0) pick_bump_pivot(pr, pc, rel_threshold);
      if (pc < 0) throw SingularBasis();
      eliminate(pos, pr, pc);
      ++pos;
    }
    finalize();
  }

  int size() const { return m_; }

  // In: indexed by row. Out: indexed by basis slot. Solves B x = v.
  void ftran(std::vector<T>& w) const {
    std::vector<T>& t = scratch_;
    t.assign(m_, T(0));
    for (int p = 0; p < m_; ++p) t[p] = w[rowof_[p]];
    for (int p = 0; p < m_; ++p) {
      if (t[p] == T(0)) continue;
      for (int e = lptr_[p]; e < lptr_[p + 1]; ++e) t[lpos_[e]] -= lval_[e] * t[p];
    }
    for (int p = m_ - 1; p >= 0; --p) {
      if (t[p] == T(0)) continue;
      T v = t[p] / udiag_[p];
      t[p] = v;
      for (int e = uptr_[p]; e < uptr_[p + 1]; ++e) t[upos_[e]] -= uval_[e] * v;
    }
    for (int p = 0; p < m_; ++p) w[slotof_[p]] = t[p];
  }

  // In: indexed by basis slot. Out: indexed by row. Solves B^T y = v.
  void btran(std::vector<T>& w) const {
    std::vector<T>& t = scratch_;
    t.assign(m_, T(0));
    for (int p = 0; p < m_; ++p) t[p] = w[slotof_[p]];
    for (int p = 0; p < m_; ++p) {
      T s = t[p];
      for (int e = uptr_[p]; e < uptr_[p + 1]; ++e) s -= uval_[e] * t[upos_[e]];
      t[p] = s / udiag_[p];
    }
    for (int p = m_ - 1; p >= 0; --p) {
      T s = t[p];
      for (int e = lptr_[p]; e < lptr_[p + 1]; ++e) s -= lval_[e] * t[lpos_[e]];
      t[p] = s;
    }
    for (int p = 0; p < m_; ++p) w[rowof_[p]] = t[p];
  }

  // Crude but serviceable: diagonal growth of U.
  double cond_estimate() const {
    if (m_ == 0) return 1.0;
    double mx = 0, mn = 0;
    for (int p = 0; p < m_; ++p) {
      double a = std::abs(to_double(udiag_[p]));
      mx = std::max(mx, a);
      mn = p == 0 ? a : std::min(mn, a);
    }
    if (mn == 0) return 1e300;
    return mx / mn;
  }

 private:
  int m_ = 0;

  // active submatrix
  std::vector<std::vector<std::pair<int, T>>> wcols_;
  std::vector<std::vector<int>> row_cols_;  // may hold stale column ids
  std::vector<int> row_count_, col_count_;
  std::vector<char> alive_row_, alive_col_;
  std::vector<int> rs_stack_, cs_stack_;

  // factor accumulation (by elimination position)
  std::vector<std::vector<std::pair<int, T>>> lraw_;  // (row, value/pivot)
  std::vector<std::vector<std::pair<int, T>>> uraw_;  // (col slot, value)
  std::vector<int> pivot_row_, pivot_col_;
  std::vector<T> udiag_;

  // final position-space factors
  std::vector<int> lptr_, lpos_, uptr_, upos_;
  std::vector<T> lval_, uval_;
  std::vector<int> rowof_, slotof_, posofrow_, posofslot_;

  mutable std::vector<T> scratch_;
  std::vector<T> acc_;
  std::vector<int> acc_stamp_;
  int stamp_ = 0;

  void prepare(int m) {
    wcols_.resize(m);
    row_cols_.resize(m);
    for (int i = 0; i < m; ++i) {
      wcols_[i].clear();
      row_cols_[i].clear();
    }
    row_count_.assign(m, 0);
    col_count_.assign(m, 0);
    alive_row_.assign(m, 1);
    alive_col_.assign(m, 1);
    rs_stack_.clear();
    cs_stack_.clear();
    lraw_.resize(m);
    uraw_.resize(m);
    for (int i = 0; i < m; ++i) {
      lraw_[i].clear();
      uraw_[i].clear();
    }
    pivot_row_.assign(m, -1);
    pivot_col_.assign(m, -1);
    udiag_.assign(m, T(0));
    acc_.assign(m, T(0));
    acc_stamp_.assign(m, -1);
    stamp_ = 0;
  }

  int find_entry(int c, int r) const {
    const auto& col = wcols_[c];
    for (std::size_t i = 0; i < col.size(); ++i)
      if (col[i].first == r) return static_cast<int>(i);
    return -1;
  }

  void drop_entry(int c, int idx) {
    auto& col = wcols_[c];
    col[idx] = col.back();
    col.pop_back();
    col_count_[c] = static_cast<int>(col.size());
  }

  void pick_bump_pivot(int& pr, int& pc, double rel_threshold) {
    long long best_score = -1;
    double best_mag = 0;
    for (int c = 0; c < m_; ++c) {
      if (!alive_col_[c] || wcols_[c].empty()) continue;
      double colmax = 0;
      if constexpr (!is_exact_v<T>) {
        for (const auto& [r, v] : wcols_[c]) colmax = std::max(colmax, std::abs(v));
      }
      for (const auto& [r, v] : wcols_[c]) {
        double mag = std::abs(to_double(v));
        if constexpr (!is_exact_v<T>) {
          if (mag < rel_threshold * colmax) continue;
        }
        long long score = static_cast<long long>(row_count_[r] - 1) * (col_count_[c] - 1);
        bool better = best_score < 0 || score < best_score ||
                      (score == best_score && mag > best_mag);
        if (better) {
          best_score = score;
          best_mag = mag;
          pr = r;
          pc = c;
        }
      }
    }
  }

  void eliminate(int pos, int r, int c) {
    // pull the pivot value and the L column out of column c
    T pv{};
    auto& col = wcols_[c];
    for (const auto& [rr, v] : col) {
      if (rr == r) {
        pv = v;
      } else {
        lraw_[pos].emplace_back(rr, v);
      }
    }
    if (pv == T(0)) throw SingularBasis();
    for (auto& [rr, v] : lraw_[pos]) v = v / pv;
    for (const auto& [rr, v] : col) --row_count_[rr];
    col.clear();
    col_count_[c] = 0;
    alive_col_[c] = 0;

    // strip row r from the remaining columns into the U row
    for (int c2 : row_cols_[r]) {
      if (!alive_col_[c2]) continue;
      int idx = find_entry(c2, r);
      if (idx < 0) continue;
      uraw_[pos].emplace_back(c2, wcols_[c2][idx].second);
      drop_entry(c2, idx);
    }
    row_cols_[r].clear();
    alive_row_[r] = 0;

    // Schur complement update (only the bump reaches here with both sides
    // non-empty; peeled pivots have an empty L column or empty U row)
    if (!lraw_[pos].empty() && !uraw_[pos].empty()) {
      for (const auto& [c2, uv] : uraw_[pos]) {
        auto& target = wcols_[c2];
        ++stamp_;
        for (const auto& [rr, v] : target) {
          acc_[rr] = v;
          acc_stamp_[rr] = stamp_;
        }
        for (const auto& [rr, lv] : lraw_[pos]) {
          if (acc_stamp_[rr] != stamp_) {
            acc_[rr] = T(0);
            acc_stamp_[rr] = stamp_;
            target.emplace_back(rr, T(0));  // placeholder; fixed in rebuild
            ++row_count_[rr];
            row_cols_[rr].push_back(c2);
          }
          acc_[rr] -= lv * uv;
        }
        std::size_t kept = 0;
        for (std::size_t i = 0; i < target.size(); ++i) {
          int rr = target[i].first;
          if (acc_[rr] == T(0)) {
            --row_count_[rr];
            if (row_count_[rr] == 1 && alive_row_[rr]) rs_stack_.push_back(rr);
            continue;
          }
          target[kept++] = {rr, acc_[rr]};
        }
        target.resize(kept);
        col_count_[c2] = static_cast<int>(kept);
        if (kept == 0) throw SingularBasis();
        if (kept == 1) cs_stack_.push_back(c2);
      }
    }

    // count changes from the column removal can create new singletons
    for (const auto& [rr, v] : lraw_[pos])
      if (alive_row_[rr] && row_count_[rr] == 1) rs_stack_.push_back(rr);
    for (const auto& [c2, uv] : uraw_[pos])
      if (alive_col_[c2] && col_count_[c2] == 1) cs_stack_.push_back(c2);

    pivot_row_[pos] = r;
    pivot_col_[pos] = c;
    udiag_[pos] = pv;
  }

  void finalize() {
    rowof_.assign(m_, 0);
    slotof_.assign(m_, 0);
    posofrow_.assign(m_, 0);
    posofslot_.assign(m_, 0);
    for (int p = 0; p < m_; ++p) {
      rowof_[p] = pivot_row_[p];
      slotof_[p] = pivot_col_[p];
      posofrow_[pivot_row_[p]] = p;
      posofslot_[pivot_col_[p]] = p;
    }
    lptr_.assign(m_ + 1, 0);
    uptr_.assign(m_ + 1, 0);
    for (int p = 0; p < m_; ++p) {
      lptr_[p + 1] = lptr_[p] + static_cast<int>(lraw_[p].size());
      // U stored by columns: uraw_[p] lists row-p entries per column
    }
    std::vector<int> ucount(m_, 0);
    for (int p = 0; p < m_; ++p)
      for (const auto& [c2, v] : uraw_[p]) ++ucount[posofslot_[c2]];
    for (int p = 0; p < m_; ++p) uptr_[p + 1] = uptr_[p] + ucount[p];

    lpos_.resize(lptr_[m_]);
    lval_.resize(lptr_[m_]);
    upos_.resize(uptr_[m_]);
    uval_.resize(uptr_[m_]);
    for (int p = 0, e = 0; p < m_; ++p)
      for (const auto& [rr, v] : lraw_[p]) {
        lpos_[e] = posofrow_[rr];
        lval_[e] = v;
        ++e;
      }
    std::vector<int> cursor(m_);
    for (int p = 0; p < m_; ++p) cursor[p] = uptr_[p];
    for (int p = 0; p < m_; ++p)
      for (const auto& [c2, v] : uraw_[p]) {
        int tp = posofslot_[c2];
        upos_[cursor[tp]] = p;
        uval_[cursor[tp]] = v;
        ++cursor[tp];
      }
    scratch_.assign(m_, T(0));
  }
};

}  // namespace bary::lp
