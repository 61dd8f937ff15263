#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <vector>

#include "bary/lp/lu.hpp"
#include "bary/lp/problem.hpp"
#include "bary/lp/refine.hpp"
#include "bary/lp/simplex.hpp"
#include "bary/scalar.hpp"

using bary::Rational;
using bary::lp::BasisLu;
using bary::lp::Options;
using bary::lp::Problem;
using bary::lp::SingularBasis;
using bary::lp::Solution;
using bary::lp::Status;
using bary::lp::solve_lp;

namespace {

template <class T>
void add_entry(Problem<T>& p, int r, int c, T v) {
  p.entries.push_back({r, c, v});
}

// dense -> CSC arrays for the LU tests
template <class T>
void dense_to_csc(const std::vector<std::vector<T>>& B, std::vector<int>& start,
                  std::vector<int>& rows, std::vector<T>& vals) {
  int m = static_cast<int>(B.size());
  start.assign(m + 1, 0);
  rows.clear();
  vals.clear();
  for (int c = 0; c < m; ++c) {
    for (int r = 0; r < m; ++r) {
      if (B[r][c] != T(0)) {
        rows.push_back(r);
        vals.push_back(B[r][c]);
      }
    }
    start[c + 1] = static_cast<int>(rows.size());
  }
}

// random permuted L*U product with integer entries, nonsingular by construction
template <class T>
std::vector<std::vector<T>> random_lu_product(int m, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> coin(0, 9), smallv(1, 3), diagv(1, 4);
  std::vector<std::vector<long long>> L(m, std::vector<long long>(m, 0)),
      U(m, std::vector<long long>(m, 0));
  for (int i = 0; i < m; ++i) {
    L[i][i] = 1;
    U[i][i] = diagv(rng);
    for (int j = 0; j < i; ++j)
      if (coin(rng) < 3) L[i][j] = coin(rng) < 5 ? smallv(rng) : -smallv(rng);
    for (int j = i + 1; j < m; ++j)
      if (coin(rng) < 3) U[i][j] = coin(rng) < 5 ? smallv(rng) : -smallv(rng);
  }
  std::vector<int> pr(m), pc(m);
  for (int i = 0; i < m; ++i) pr[i] = pc[i] = i;
  std::shuffle(pr.begin(), pr.end(), rng);
  std::shuffle(pc.begin(), pc.end(), rng);
  std::vector<std::vector<T>> B(m, std::vector<T>(m, T(0)));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      long long s = 0;
      for (int k = 0; k < m; ++k) s += L[i][k] * U[k][j];
      B[pr[i]][pc[j]] = T(s);
    }
  return B;
}

// Gaussian elimination over the rationals; returns false when singular.
bool rat_solve(std::vector<std::vector<Rational>> A, std::vector<Rational> b,
               std::vector<Rational>& out) {
  int m = static_cast<int>(A.size());
  std::vector<int> perm(m);
  for (int i = 0; i < m; ++i) perm[i] = i;
  for (int k = 0; k < m; ++k) {
    int piv = -1;
    for (int r = k; r < m; ++r)
      if (A[r][k] != 0) {
        piv = r;
        break;
      }
    if (piv < 0) return false;
    std::swap(A[k], A[piv]);
    std::swap(b[k], b[piv]);
    for (int r = k + 1; r < m; ++r) {
      if (A[r][k] == 0) continue;
      Rational f = A[r][k] / A[k][k];
      for (int c = k; c < m; ++c) A[r][c] -= f * A[k][c];
      b[r] -= f * b[k];
    }
  }
  out.assign(m, Rational(0));
  for (int k = m - 1; k >= 0; --k) {
    Rational s = b[k];
    for (int c = k + 1; c < m; ++c) s -= A[k][c] * out[c];
    out[k] = s / A[k][k];
  }
  return true;
}

// Independent check: enumerate every basic feasible point of Ax = b, x >= 0.
// Returns the minimum objective; requires a bounded, feasible, full-row-rank
// instance (which the fuzz generator guarantees).
Rational enumerate_lp_min(const Problem<Rational>& p, bool& found) {
  int m = p.rows, n = p.cols;
  std::vector<std::vector<Rational>> A(m, std::vector<Rational>(n, Rational(0)));
  for (const auto& e : p.entries) A[e.row][e.col] += e.val;
  std::vector<int> pick(m);
  for (int i = 0; i < m; ++i) pick[i] = i;
  found = false;
  Rational best(0);
  for (;;) {
    std::vector<std::vector<Rational>> B(m, std::vector<Rational>(m));
    for (int r = 0; r < m; ++r)
      for (int s = 0; s < m; ++s) B[r][s] = A[r][pick[s]];
    std::vector<Rational> xb;
    if (rat_solve(B, p.rhs, xb)) {
      bool feas = true;
      for (const Rational& v : xb)
        if (v < 0) feas = false;
      if (feas) {
        Rational z(0);
        for (int s = 0; s < m; ++s) z += p.obj[pick[s]] * xb[s];
        if (!found || z < best) best = z;
        found = true;
      }
    }
    // next m-combination of {0..n-1}
    int i = m - 1;
    while (i >= 0 && pick[i] == n - m + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (int k = i + 1; k < m; ++k) pick[k] = pick[k - 1] + 1;
  }
  return best;
}

template <class T>
void check_kkt(const Problem<T>& p, const Solution<T>& s, double tol) {
  REQUIRE(s.status == Status::Optimal);
  std::vector<double> resid(p.rows, 0.0);
  for (int r = 0; r < p.rows; ++r) resid[r] = -bary::to_double(p.rhs[r]);
  for (const auto& e : p.entries)
    resid[e.row] += bary::to_double(e.val) * bary::to_double(s.x[e.col]);
  for (int r = 0; r < p.rows; ++r) REQUIRE(std::abs(resid[r]) <= tol);
  double zx = 0, zy = 0;
  for (int j = 0; j < p.cols; ++j) {
    double xj = bary::to_double(s.x[j]);
    double rc = bary::to_double(s.reduced_cost[j]);
    REQUIRE(xj >= -tol);
    REQUIRE(rc >= -tol);                  // dual feasibility
    REQUIRE(std::abs(xj * rc) <= tol * 10);  // complementary slackness
    zx += bary::to_double(p.obj[j]) * xj;
  }
  for (int r = 0; r < p.rows; ++r)
    zy += bary::to_double(p.rhs[r]) * bary::to_double(s.dual[r]);
  REQUIRE(std::abs(zx - bary::to_double(s.objective)) <= tol * 10);
  REQUIRE(std::abs(zy - zx) <= tol * 10);  // strong duality
  REQUIRE(static_cast<int>(s.basis.size()) <= p.rows);
  for (int j = 0; j < p.cols; ++j) {
    if (bary::to_double(s.x[j]) > tol)
      REQUIRE(std::binary_search(s.basis.begin(), s.basis.end(), j));
  }
}

}  // namespace

TEST_CASE("sparse LU solves in both orientations") {
  std::mt19937_64 rng(12345);
  for (int trial = 0; trial < 20; ++trial) {
    int m = 1 + static_cast<int>(rng() % 40);
    auto B = random_lu_product<double>(m, rng);
    std::vector<int> start, rows;
    std::vector<double> vals;
    dense_to_csc(B, start, rows, vals);
    BasisLu<double> lu;
    lu.factor(m, start, rows, vals);

    std::uniform_int_distribution<int> xv(-5, 5);
    std::vector<double> xt(m), v(m, 0.0);
    for (int i = 0; i < m; ++i) xt[i] = xv(rng);
    for (int c = 0; c < m; ++c)
      for (int r = 0; r < m; ++r) v[r] += B[r][c] * xt[c];
    lu.ftran(v);
    for (int c = 0; c < m; ++c) REQUIRE(v[c] == Catch::Approx(xt[c]).margin(1e-8));

    std::vector<double> yt(m), w(m, 0.0);
    for (int i = 0; i < m; ++i) yt[i] = xv(rng);
    for (int c = 0; c < m; ++c)
      for (int r = 0; r < m; ++r) w[c] += B[r][c] * yt[r];
    lu.btran(w);
    for (int r = 0; r < m; ++r) REQUIRE(w[r] == Catch::Approx(yt[r]).margin(1e-8));
  }
}

TEST_CASE("sparse LU is exact over the rationals") {
  std::mt19937_64 rng(777);
  for (int trial = 0; trial < 6; ++trial) {
    int m = 1 + static_cast<int>(rng() % 12);
    auto B = random_lu_product<Rational>(m, rng);
    std::vector<int> start, rows;
    std::vector<Rational> vals;
    dense_to_csc(B, start, rows, vals);
    BasisLu<Rational> lu;
    lu.factor(m, start, rows, vals);
    std::vector<Rational> xt(m), v(m, Rational(0));
    for (int i = 0; i < m; ++i) xt[i] = Rational(static_cast<int>(rng() % 11) - 5, 3);
    for (int c = 0; c < m; ++c)
      for (int r = 0; r < m; ++r) v[r] += B[r][c] * xt[c];
    lu.ftran(v);
    for (int c = 0; c < m; ++c) REQUIRE(v[c] == xt[c]);
  }
}

TEST_CASE("sparse LU rejects singular bases") {
  // empty column
  {
    BasisLu<double> lu;
    std::vector<int> start = {0, 1, 1};
    std::vector<int> rows = {0};
    std::vector<double> vals = {1.0};
    REQUIRE_THROWS_AS(lu.factor(2, start, rows, vals), SingularBasis);
  }
  // duplicate columns, caught by exact cancellation
  {
    BasisLu<Rational> lu;
    std::vector<std::vector<Rational>> B = {
        {Rational(1), Rational(1), Rational(0)},
        {Rational(2), Rational(2), Rational(1)},
        {Rational(3), Rational(3), Rational(5)}};
    std::vector<int> start, rows;
    std::vector<Rational> vals;
    dense_to_csc(B, start, rows, vals);
    REQUIRE_THROWS_AS(lu.factor(3, start, rows, vals), SingularBasis);
  }
}

TEST_CASE("simplex solves a classic small program") {
  // min -3x - 5y  s.t.  x + s1 = 4,  2y + s2 = 12,  3x + 2y + s3 = 18
  Problem<double> p;
  p.rows = 3;
  p.cols = 5;
  p.rhs = {4, 12, 18};
  p.obj = {-3, -5, 0, 0, 0};
  add_entry(p, 0, 0, 1.0);
  add_entry(p, 0, 2, 1.0);
  add_entry(p, 1, 1, 2.0);
  add_entry(p, 1, 3, 1.0);
  add_entry(p, 2, 0, 3.0);
  add_entry(p, 2, 1, 2.0);
  add_entry(p, 2, 4, 1.0);
  auto s = solve_lp(p);
  REQUIRE(s.status == Status::Optimal);
  REQUIRE(s.objective == Catch::Approx(-36.0).margin(1e-9));
  REQUIRE(s.x[0] == Catch::Approx(2.0).margin(1e-9));
  REQUIRE(s.x[1] == Catch::Approx(6.0).margin(1e-9));
  check_kkt(p, s, 1e-8);
}

template <class T>
Problem<T> transportation_problem() {
  // 2 supplies, 3 demands; the five balance rows have rank 4, so one
  // artificial must stay stuck on a redundant row.
  Problem<T> p;
  p.rows = 5;
  p.cols = 6;
  p.rhs = {T(1) / 2, T(1) / 2, T(1) / 3, T(1) / 3, T(1) / 3};
  p.obj = {T(0), T(1), T(4), T(2), T(1), T(0)};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 3; ++j) {
      add_entry(p, i, i * 3 + j, T(1));
      add_entry(p, 2 + j, i * 3 + j, T(1));
    }
  return p;
}

TEST_CASE("simplex handles redundant rows in a transportation program") {
  auto pd = transportation_problem<double>();
  auto sd = solve_lp(pd);
  REQUIRE(sd.status == Status::Optimal);
  REQUIRE(sd.objective == Catch::Approx(1.0 / 3.0).margin(1e-9));
  check_kkt(pd, sd, 1e-8);
  REQUIRE(static_cast<int>(sd.basis.size()) <= 4);  // rank, not row count

  auto pr = transportation_problem<Rational>();
  auto sr = solve_lp(pr);
  REQUIRE(sr.status == Status::Optimal);
  REQUIRE(sr.objective == Rational(1, 3));
  Rational mass(0);
  for (int j = 0; j < 6; ++j) {
    REQUIRE(sr.x[j] >= 0);
    mass += sr.x[j];
  }
  REQUIRE(mass == 1);
}

TEST_CASE("simplex detects infeasibility") {
  Problem<double> p;
  p.rows = 2;
  p.cols = 2;
  p.rhs = {1, 2};
  p.obj = {1, 1};
  add_entry(p, 0, 0, 1.0);
  add_entry(p, 0, 1, 1.0);
  add_entry(p, 1, 0, 1.0);
  add_entry(p, 1, 1, 1.0);
  REQUIRE(solve_lp(p).status == Status::Infeasible);

  Problem<Rational> q;
  q.rows = 2;
  q.cols = 2;
  q.rhs = {Rational(1), Rational(2)};
  q.obj = {Rational(1), Rational(1)};
  add_entry(q, 0, 0, Rational(1));
  add_entry(q, 0, 1, Rational(1));
  add_entry(q, 1, 0, Rational(1));
  add_entry(q, 1, 1, Rational(1));
  REQUIRE(solve_lp(q).status == Status::Infeasible);
}

TEST_CASE("simplex detects unboundedness") {
  Problem<double> p;  // min -x1 with x1 - x2 = 0
  p.rows = 1;
  p.cols = 2;
  p.rhs = {0};
  p.obj = {-1, 0};
  add_entry(p, 0, 0, 1.0);
  add_entry(p, 0, 1, -1.0);
  REQUIRE(solve_lp(p).status == Status::Unbounded);

  Problem<double> q;  // no constraints at all
  q.rows = 0;
  q.cols = 1;
  q.obj = {-1};
  REQUIRE(solve_lp(q).status == Status::Unbounded);

  Problem<double> r;  // bounded cousin
  r.rows = 0;
  r.cols = 1;
  r.obj = {1};
  auto s = solve_lp(r);
  REQUIRE(s.status == Status::Optimal);
  REQUIRE(s.objective == 0.0);
}

TEST_CASE("simplex accepts negative right-hand sides") {
  Problem<Rational> p;  // -x1 = -3  =>  x1 = 3
  p.rows = 1;
  p.cols = 1;
  p.rhs = {Rational(-3)};
  p.obj = {Rational(1)};
  add_entry(p, 0, 0, Rational(-1));
  auto s = solve_lp(p);
  REQUIRE(s.status == Status::Optimal);
  REQUIRE(s.x[0] == Rational(3));
  REQUIRE(s.objective == Rational(3));
}

TEST_CASE("simplex survives a classic cycling example") {
  // Degenerate program known to cycle under naive pricing.
  auto build = [](auto zero) {
    using T = decltype(zero);
    Problem<T> p;
    p.rows = 3;
    p.cols = 7;
    p.rhs = {T(0), T(0), T(1)};
    p.obj = {T(0), T(0), T(0), T(-3) / 4, T(150), T(-1) / 50, T(6)};
    add_entry(p, 0, 0, T(1));
    add_entry(p, 0, 3, T(1) / 4);
    add_entry(p, 0, 4, T(-60));
    add_entry(p, 0, 5, T(-1) / 25);
    add_entry(p, 0, 6, T(9));
    add_entry(p, 1, 1, T(1));
    add_entry(p, 1, 3, T(1) / 2);
    add_entry(p, 1, 4, T(-90));
    add_entry(p, 1, 5, T(-1) / 50);
    add_entry(p, 1, 6, T(3));
    add_entry(p, 2, 2, T(1));
    add_entry(p, 2, 5, T(1));
    return p;
  };
  auto pd = build(0.0);
  auto sd = solve_lp(pd);
  REQUIRE(sd.status == Status::Optimal);
  REQUIRE(sd.objective == Catch::Approx(-0.05).margin(1e-9));

  Options bland;
  bland.bland_only = true;
  auto sb = solve_lp(pd, bland);
  REQUIRE(sb.status == Status::Optimal);
  REQUIRE(sb.objective == Catch::Approx(-0.05).margin(1e-9));

  auto pr = build(Rational(0));
  auto sr = solve_lp(pr);
  REQUIRE(sr.status == Status::Optimal);
  REQUIRE(sr.objective == Rational(-1, 20));
}

TEST_CASE("random programs match exhaustive vertex enumeration") {
  std::mt19937_64 rng(20240803);
  int solved = 0;
  while (solved < 40) {
    int m = 2 + static_cast<int>(rng() % 3);   // 2..4
    int n = m + 2 + static_cast<int>(rng() % 4);  // up to 8
    Problem<Rational> p;
    p.rows = m;
    p.cols = n;
    p.obj.assign(n, Rational(0));
    p.rhs.assign(m, Rational(0));
    std::uniform_int_distribution<int> av(-2, 2), cv(1, 9), xv(0, 3);
    for (int r = 0; r < m; ++r)
      for (int c = 0; c < n; ++c) {
        int v = av(rng);
        if (v != 0) add_entry(p, r, c, Rational(v));
      }
    for (int c = 0; c < n; ++c) p.obj[c] = Rational(cv(rng), 4);
    std::vector<Rational> x0(n);
    for (int c = 0; c < n; ++c) x0[c] = Rational(xv(rng), 2);
    for (const auto& e : p.entries) p.rhs[e.row] += e.val * x0[e.col];

    // require full row rank so plain basis enumeration is exhaustive
    {
      std::vector<std::vector<Rational>> A(m, std::vector<Rational>(n, Rational(0)));
      for (const auto& e : p.entries) A[e.row][e.col] += e.val;
      int rank = 0;
      for (int c = 0; c < n && rank < m; ++c) {
        int piv = -1;
        for (int r = rank; r < m; ++r)
          if (A[r][c] != 0) {
            piv = r;
            break;
          }
        if (piv < 0) continue;
        std::swap(A[rank], A[piv]);
        for (int r = rank + 1; r < m; ++r) {
          if (A[r][c] == 0) continue;
          Rational f = A[r][c] / A[rank][c];
          for (int cc = c; cc < n; ++cc) A[r][cc] -= f * A[rank][cc];
        }
        ++rank;
      }
      if (rank < m) continue;
    }

    bool found = false;
    Rational best = enumerate_lp_min(p, found);
    REQUIRE(found);  // feasible by construction

    auto sr = solve_lp(p);
    REQUIRE(sr.status == Status::Optimal);
    REQUIRE(sr.objective == best);

    Problem<double> pd;
    pd.rows = m;
    pd.cols = n;
    for (const auto& e : p.entries) add_entry(pd, e.row, e.col, bary::to_double(e.val));
    for (const auto& v : p.obj) pd.obj.push_back(bary::to_double(v));
    for (const auto& v : p.rhs) pd.rhs.push_back(bary::to_double(v));
    auto sd = solve_lp(pd);
    REQUIRE(sd.status == Status::Optimal);
    REQUIRE(sd.objective == Catch::Approx(bary::to_double(best)).margin(1e-7));
    check_kkt(pd, sd, 1e-7);

    ++solved;
  }
}

TEST_CASE("long pivot sequences stay accurate across refactorizations") {
  // A 12x14 transportation instance with clustered costs takes well over the
  // refactorization interval set here, exercising eta resets and drift checks.
  std::mt19937_64 rng(97);
  int ns = 12, nd = 14;
  Problem<double> p;
  p.rows = ns + nd;
  p.cols = ns * nd;
  p.obj.assign(p.cols, 0.0);
  p.rhs.assign(p.rows, 0.0);
  std::vector<double> supply(ns), demand(nd);
  long long tot = 0;
  for (int i = 0; i < ns; ++i) {
    supply[i] = static_cast<double>(1 + rng() % 7);
    tot += static_cast<long long>(supply[i]);
  }
  // integral demands with the same exact total, so the rational copy below is
  // balanced to the last digit
  for (int j = 0; j < nd; ++j)
    demand[j] = static_cast<double>(tot / nd + (j < tot % nd ? 1 : 0));
  for (int i = 0; i < ns; ++i) p.rhs[i] = supply[i];
  for (int j = 0; j < nd; ++j) p.rhs[ns + j] = demand[j];
  for (int i = 0; i < ns; ++i)
    for (int j = 0; j < nd; ++j) {
      int c = i * nd + j;
      p.obj[c] = static_cast<double>((i * 7 + j * 13) % 19) + 0.25 * ((i + j) % 4);
      add_entry(p, i, c, 1.0);
      add_entry(p, ns + j, c, 1.0);
    }
  Options opt;
  opt.refactor_every = 7;  // force many refactorizations
  auto s = solve_lp(p, opt);
  REQUIRE(s.status == Status::Optimal);
  check_kkt(p, s, 1e-7);

  // exact duplicate of the run gives bit-identical output
  auto s2 = solve_lp(p, opt);
  REQUIRE(s2.iterations == s.iterations);
  REQUIRE(s2.basis == s.basis);
  for (int j = 0; j < p.cols; ++j) REQUIRE(s2.x[j] == s.x[j]);

  // rational reference on the same data
  Problem<Rational> pr;
  pr.rows = p.rows;
  pr.cols = p.cols;
  for (const auto& e : p.entries)
    add_entry(pr, e.row, e.col, bary::rational_from_double(e.val));
  for (double v : p.obj) pr.obj.push_back(bary::rational_from_double(v));
  for (double v : p.rhs) pr.rhs.push_back(bary::rational_from_double(v));
  auto sr = solve_lp(pr);
  REQUIRE(sr.status == Status::Optimal);
  REQUIRE(bary::to_double(sr.objective) == Catch::Approx(s.objective).margin(1e-6));
}

TEST_CASE("face refinement keeps a unique optimum in place") {
  Problem<double> p;  // min x1 + 2 x2 with x1 + x2 = 1: unique optimum (1, 0)
  p.rows = 1;
  p.cols = 2;
  p.rhs = {1.0};
  p.obj = {1.0, 2.0};
  add_entry(p, 0, 0, 1.0);
  add_entry(p, 0, 1, 1.0);
  auto s = solve_lp(p);
  auto r = bary::lp::optimal_face_refine(p, s);
  REQUIRE(r.status == Status::Optimal);
  REQUIRE(r.basis.empty());
  REQUIRE(r.x[0] == Catch::Approx(1.0).margin(1e-9));
  REQUIRE(r.x[1] == Catch::Approx(0.0).margin(1e-9));
  REQUIRE(r.reduced_cost[1] == Catch::Approx(1.0).margin(1e-9));
}

TEST_CASE("face refinement spreads mass over a tied transportation face") {
  // all four routes cost the same, so every plan is optimal; a vertex uses
  // two routes, but the face interior uses all four
  auto build = [](auto zero) {
    using T = decltype(zero);
    Problem<T> p;
    p.rows = 4;
    p.cols = 4;
    p.rhs = {T(1) / 2, T(1) / 2, T(1) / 2, T(1) / 2};
    p.obj = {T(1), T(1), T(1), T(1)};
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        add_entry(p, i, i * 2 + j, T(1));
        add_entry(p, 2 + j, i * 2 + j, T(1));
      }
    return p;
  };
  auto pr = build(Rational(0));
  auto sr = solve_lp(pr);
  REQUIRE(sr.status == Status::Optimal);
  int basic_positive = 0;
  for (int j = 0; j < 4; ++j)
    if (sr.x[j] > 0) ++basic_positive;
  REQUIRE(basic_positive <= 3);
  auto rr = bary::lp::optimal_face_refine(pr, sr);
  REQUIRE(rr.objective == Rational(1));
  for (int j = 0; j < 4; ++j) {
    REQUIRE(rr.x[j] > 0);  // interior of the face
    REQUIRE(rr.reduced_cost[j] == 0);
  }
  Rational mass(0);
  for (int j = 0; j < 4; ++j) mass += rr.x[j];
  REQUIRE(mass == 1);

  auto pd = build(0.0);
  auto sd = solve_lp(pd);
  auto rd = bary::lp::optimal_face_refine(pd, sd);
  for (int j = 0; j < 4; ++j) REQUIRE(rd.x[j] > 1e-6);
}

TEST_CASE("face refinement finds strictly complementary duals") {
  // x1 + x2 = 1 and x2 + x3 = 0 force x2 = x3 = 0; with a zero objective the
  // vertex duals are all zero, so strict complementarity needs the dual-side
  // search to certify the forced-zero columns.
  auto run = [](auto zero) {
    using T = decltype(zero);
    Problem<T> p;
    p.rows = 2;
    p.cols = 3;
    p.rhs = {T(1), T(0)};
    p.obj = {T(0), T(0), T(0)};
    add_entry(p, 0, 0, T(1));
    add_entry(p, 0, 1, T(1));
    add_entry(p, 1, 1, T(1));
    add_entry(p, 1, 2, T(1));
    auto s = solve_lp(p);
    REQUIRE(s.status == Status::Optimal);
    auto r = bary::lp::optimal_face_refine(p, s);
    // strict complementarity: each column positive or positively priced
    for (int j = 0; j < 3; ++j) {
      bool xp = bary::to_double(r.x[j]) > 1e-9;
      bool wp = bary::to_double(r.reduced_cost[j]) > 1e-9;
      INFO("column " << j);
      REQUIRE(xp != wp);
    }
    REQUIRE(bary::to_double(r.x[0]) > 1e-9);
  };
  run(0.0);
  run(Rational(0));
}

TEST_CASE("problem validation rejects malformed input") {
  Problem<double> p;
  p.rows = 1;
  p.cols = 1;
  p.rhs = {1.0};
  p.obj = {1.0};
  add_entry(p, 0, 5, 1.0);
  REQUIRE_THROWS_AS(solve_lp(p), bary::ValidationError);

  Problem<double> q;
  q.rows = 2;
  q.cols = 1;
  q.rhs = {1.0};  // wrong length
  q.obj = {1.0};
  REQUIRE_THROWS_AS(solve_lp(q), bary::ValidationError);
}
