#pragma once

// Brute-force verification of barycenter optima on tiny instances.
//
// The coupling polytope of N discrete measures is searched exhaustively over
// tensors whose entries are multiples of 1/(q*K), where 1/q is the common
// mass denominator and K = lcm(1..max support size).  That lattice is fine
// enough to contain an optimal vertex at this scale, and the exact LP paths
// cross-check the claim independently.

#include <algorithm>
#include <numeric>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "bary/barycenter.hpp"
#include "bary/errors.hpp"
#include "bary/geom.hpp"
#include "bary/measure.hpp"
#include "bary/scalar.hpp"

namespace bary {

struct BudgetExceeded : SizeError {
  using SizeError::SizeError;
};

// A measure set whose masses share a small common denominator, so couplings
// can be enumerated on an integer lattice.
struct RationalInstance {
  MeasureSet<Rational> measures;
  long long denominator = 1;  // every mass is an integer multiple of 1/denominator
};

inline void validate_instance(const RationalInstance& inst) {
  if (inst.denominator < 1 || inst.denominator > 8)
    throw ValidationError("instance denominator must lie in 1..8");
  long long tuples = 1;
  for (const auto& m : inst.measures.measures) {
    tuples *= static_cast<long long>(m.size());
    if (tuples > 64) throw SizeError("instance exceeds the 64-tuple enumeration cap");
    for (const auto& w : m.masses) {
      Rational units = w * inst.denominator;
      if (boost::multiprecision::denominator(units) != 1)
        throw ValidationError("masses are not multiples of 1/denominator");
    }
  }
}

template <class T>
struct OracleResult {
  T coupling_value{};   // maximum mass-weighted squared norm of tuple means
  T barycenter_cost{};  // induced total squared transport cost
  std::vector<T> coupling;  // tensor entries in lexicographic tuple order
  long long nodes = 0;      // search nodes visited
};

namespace detail_oracle {

struct CellData {
  std::vector<std::vector<int>> tuples;   // tuple per cell, lex order
  std::vector<Rational> value;            // squared norm of the cell's mean
  std::vector<Rational> suffix_max;       // max value over cells >= index
  std::vector<std::vector<int>> last_cover;  // last cell index covering (i,k)
};

inline CellData build_cells(const MeasureSet<Rational>& ms) {
  const int n_meas = static_cast<int>(ms.measures.size());
  const int dim = ms.measures[0].dim;
  long long total = 1;
  for (const auto& m : ms.measures) total *= static_cast<long long>(m.size());

  CellData cd;
  cd.tuples.reserve(static_cast<std::size_t>(total));
  cd.value.reserve(static_cast<std::size_t>(total));
  cd.last_cover.resize(n_meas);
  for (int i = 0; i < n_meas; ++i) cd.last_cover[i].assign(ms.measures[i].size(), -1);

  std::vector<int> digit(n_meas, 0);
  Point<Rational> mean(dim);
  for (long long t = 0; t < total; ++t) {
    for (int s = 0; s < dim; ++s) mean[s] = Rational(0);
    for (int i = 0; i < n_meas; ++i) {
      const auto& pt = ms.measures[i].points[digit[i]];
      for (int s = 0; s < dim; ++s) mean[s] += pt[s];
      cd.last_cover[i][digit[i]] = static_cast<int>(t);
    }
    for (int s = 0; s < dim; ++s) mean[s] /= n_meas;
    cd.tuples.push_back(digit);
    cd.value.push_back(sq_norm(mean));
    for (int i = n_meas - 1; i >= 0; --i) {
      if (++digit[i] < static_cast<int>(ms.measures[i].size())) break;
      digit[i] = 0;
    }
  }
  cd.suffix_max.assign(cd.value.size(), Rational(0));
  for (long long t = total - 1; t >= 0; --t) {
    cd.suffix_max[t] = cd.value[t];
    if (t + 1 < total && cd.suffix_max[t + 1] > cd.suffix_max[t])
      cd.suffix_max[t] = cd.suffix_max[t + 1];
  }
  return cd;
}

struct Search {
  const CellData* cd = nullptr;
  int n_meas = 0;
  long long unit_total = 0;  // mass 1 expressed in lattice units
  long long budget = 0;
  long long nodes = 0;
  std::vector<std::vector<long long>> resid;  // remaining units per (i,k)
  std::vector<long long> cur;                 // units placed per cell
  std::vector<long long> best_units;
  Rational best_acc = Rational(-1);
  bool have_best = false;

  void run(std::size_t cell, long long placed, const Rational& acc) {
    if (++nodes > budget)
      throw BudgetExceeded("enumeration node budget of " + std::to_string(budget) +
                           " exceeded");
    if (cell == cd->tuples.size()) {
      if (placed == unit_total && (!have_best || acc > best_acc)) {
        best_acc = acc;
        best_units = cur;
        have_best = true;
      }
      return;
    }
    // remaining mass cannot push the objective past the best suffix value
    if (have_best) {
      Rational bound = acc + Rational(unit_total - placed) * cd->suffix_max[cell] /
                                 Rational(unit_total);
      if (bound <= best_acc) return;
    }
    const auto& t = cd->tuples[cell];
    long long hi = unit_total;
    long long lo = 0;
    for (int i = 0; i < n_meas; ++i) {
      hi = std::min(hi, resid[i][t[i]]);
      if (cd->last_cover[i][t[i]] == static_cast<int>(cell))
        lo = std::max(lo, resid[i][t[i]]);
    }
    if (lo > hi) return;
    for (long long u = hi; u >= lo; --u) {
      cur[cell] = u;
      for (int i = 0; i < n_meas; ++i) resid[i][t[i]] -= u;
      run(cell + 1, placed + u,
          acc + Rational(u) * cd->value[cell] / Rational(unit_total));
      for (int i = 0; i < n_meas; ++i) resid[i][t[i]] += u;
    }
    cur[cell] = 0;
  }
};

inline long long lcm_up_to(long long n) {
  long long l = 1;
  for (long long v = 2; v <= n; ++v) l = std::lcm(l, v);
  return l;
}

}  // namespace detail_oracle

// Exhaustively maximize the mass-weighted squared norm of tuple means over
// all couplings on the 1/(q*K) lattice; report the induced barycenter cost.
inline OracleResult<Rational> enumerate_optimum(const RationalInstance& inst,
                                                long long node_budget = 100000000) {
  validate_instance(inst);
  MeasureSet<Rational> ms = inst.measures;
  for (auto& m : ms.measures) canonicalize(m);
  validate_set(ms);

  const int n_meas = static_cast<int>(ms.measures.size());
  int max_sz = 0;
  for (const auto& m : ms.measures) max_sz = std::max(max_sz, m.size());
  const long long K = detail_oracle::lcm_up_to(static_cast<long long>(max_sz));
  const long long unit_total = inst.denominator * K;

  detail_oracle::CellData cd = detail_oracle::build_cells(ms);
  detail_oracle::Search s;
  s.cd = &cd;
  s.n_meas = n_meas;
  s.unit_total = unit_total;
  s.budget = node_budget;
  s.resid.resize(n_meas);
  for (int i = 0; i < n_meas; ++i) {
    s.resid[i].resize(ms.measures[i].size());
    for (std::size_t k = 0; k < ms.measures[i].size(); ++k) {
      Rational units = ms.measures[i].masses[k] * unit_total;
      if (boost::multiprecision::denominator(units) != 1)
        throw ValidationError("marginal is not representable on the lattice");
      s.resid[i][k] = static_cast<long long>(boost::multiprecision::numerator(units));
    }
  }
  s.cur.assign(cd.tuples.size(), 0);
  s.run(0, 0, Rational(0));
  if (!s.have_best)
    throw NumericalError("enumeration found no feasible coupling");

  OracleResult<Rational> out;
  out.nodes = s.nodes;
  out.coupling_value = s.best_acc;
  out.coupling.reserve(s.best_units.size());
  for (long long u : s.best_units) out.coupling.push_back(Rational(u, unit_total));
  Rational moments(0);
  for (const auto& m : ms.measures) moments += second_moment(m);
  out.barycenter_cost = moments - Rational(n_meas) * out.coupling_value;
  return out;
}

// A randomly assembled feasible coupling on the same lattice (not optimal in
// general); used to check that no feasible coupling beats the enumeration.
// Mass is placed one random tuple at a time, which keeps every intermediate
// state balanced and therefore always completes.
inline std::vector<Rational> random_feasible_coupling(const RationalInstance& inst,
                                                      std::mt19937_64& rng) {
  validate_instance(inst);
  MeasureSet<Rational> ms = inst.measures;
  for (auto& m : ms.measures) canonicalize(m);
  const int n_meas = static_cast<int>(ms.measures.size());
  int max_sz = 0;
  for (const auto& m : ms.measures) max_sz = std::max(max_sz, m.size());
  const long long unit_total =
      inst.denominator * detail_oracle::lcm_up_to(static_cast<long long>(max_sz));

  std::vector<std::vector<long long>> resid(n_meas);
  std::vector<long long> stride(n_meas, 1);
  long long cells = 1;
  for (int i = n_meas - 1; i >= 0; --i) {
    stride[i] = cells;
    cells *= static_cast<long long>(ms.measures[i].size());
  }
  for (int i = 0; i < n_meas; ++i) {
    resid[i].resize(ms.measures[i].size());
    for (std::size_t k = 0; k < ms.measures[i].size(); ++k) {
      Rational units = ms.measures[i].masses[k] * unit_total;
      resid[i][k] = static_cast<long long>(boost::multiprecision::numerator(units));
    }
  }
  std::vector<Rational> coupling(static_cast<std::size_t>(cells), Rational(0));
  long long left = unit_total;
  while (left > 0) {
    long long cell = 0;
    long long cap = left;
    for (int i = 0; i < n_meas; ++i) {
      // pick a support point that still has mass to route
      std::vector<int> open;
      for (std::size_t k = 0; k < resid[i].size(); ++k)
        if (resid[i][k] > 0) open.push_back(static_cast<int>(k));
      int k = open[rng() % open.size()];
      cell += stride[i] * k;
      cap = std::min(cap, resid[i][k]);
    }
    long long u = 1 + static_cast<long long>(
                          rng() % static_cast<unsigned long long>(cap));
    coupling[static_cast<std::size_t>(cell)] += Rational(u, unit_total);
    long long c = cell;
    for (int i = 0; i < n_meas; ++i) {
      resid[i][static_cast<std::size_t>(c / stride[i])] -= u;
      c %= stride[i];
    }
    left -= u;
  }
  return coupling;
}

// Total squared transport cost of placing each tuple's mass at the tuple mean.
inline Rational coupling_induced_cost(const RationalInstance& inst,
                                      const std::vector<Rational>& coupling) {
  MeasureSet<Rational> ms = inst.measures;
  for (auto& m : ms.measures) canonicalize(m);
  detail_oracle::CellData cd = detail_oracle::build_cells(ms);
  if (coupling.size() != cd.tuples.size())
    throw ValidationError("coupling tensor has the wrong number of cells");
  Rational weighted(0);
  for (std::size_t cell = 0; cell < coupling.size(); ++cell)
    weighted += coupling[cell] * cd.value[cell];
  Rational moments(0);
  for (const auto& m : ms.measures) moments += second_moment(m);
  return moments - Rational(static_cast<int>(ms.measures.size())) * weighted;
}

struct CompareReport {
  Rational lp_cost;       // linked-program optimum
  Rational mm_cost;       // tuple-program optimum
  Rational oracle_cost;   // exhaustive-enumeration optimum
  bool pass = false;      // all three agree exactly
};

// Solve the same instance three independent ways and demand exact agreement.
inline CompareReport compare(const RationalInstance& inst,
                             long long node_budget = 100000000) {
  CompareReport rep;
  auto lp = solve_barycenter(inst.measures);
  auto mm = solve_multimarginal(inst.measures);
  auto oc = enumerate_optimum(inst, node_budget);
  rep.lp_cost = lp.total_cost;
  rep.mm_cost = mm.barycenter_cost;
  rep.oracle_cost = oc.barycenter_cost;
  rep.pass = rep.lp_cost == rep.mm_cost && rep.mm_cost == rep.oracle_cost;
  return rep;
}

// Deterministic generator for desk-scale rational instances.
//   n is drawn from 2..max_n, support sizes from 1..max_support, coordinates
//   are small integers (distinct within a measure), masses are positive
//   multiples of 1/denominator.
inline RationalInstance random_instance(std::mt19937_64& rng, int max_n = 3,
                                        int max_support = 3,
                                        long long denominator = 4) {
  if (max_n < 2) throw ValidationError("max_n must be at least 2");
  if (max_support < 1 || max_support > denominator)
    throw ValidationError("max_support must lie in 1..denominator");
  RationalInstance inst;
  inst.denominator = denominator;
  const int n_meas = 2 + static_cast<int>(rng() % static_cast<unsigned>(max_n - 1));
  const int dim = 1 + static_cast<int>(rng() % 2);
  const int side = 7;  // coordinates in -3..3
  long long pool = 1;
  for (int s = 0; s < dim; ++s) pool *= side;
  for (int i = 0; i < n_meas; ++i) {
    const int sz = 1 + static_cast<int>(rng() % static_cast<unsigned>(max_support));
    DiscreteMeasure<Rational> m;
    m.dim = dim;
    // sample distinct lattice points by partial shuffle of the coordinate pool
    std::vector<long long> codes(static_cast<std::size_t>(pool));
    std::iota(codes.begin(), codes.end(), 0);
    for (int k = 0; k < sz; ++k) {
      std::size_t pick =
          k + static_cast<std::size_t>(rng() % static_cast<unsigned long long>(pool - k));
      std::swap(codes[k], codes[pick]);
      long long code = codes[k];
      Point<Rational> pt(dim);
      for (int s = 0; s < dim; ++s) {
        pt[s] = Rational(code % side - side / 2);
        code /= side;
      }
      m.points.push_back(std::move(pt));
    }
    // positive unit masses summing to the denominator
    std::vector<long long> units(sz, 1);
    for (long long rest = denominator - sz; rest > 0; --rest)
      ++units[rng() % static_cast<unsigned>(sz)];
    for (int k = 0; k < sz; ++k) m.masses.push_back(Rational(units[k], denominator));
    canonicalize(m);
    inst.measures.measures.push_back(std::move(m));
  }
  return inst;
}

}  // namespace bary
