#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <random>
#include <vector>

#include "bary/barycenter.hpp"
#include "bary/centroid.hpp"
#include "bary/measure.hpp"
#include "bary/scalar.hpp"
#include "bary/sparsity.hpp"

using bary::BarycenterResult;
using bary::DiscreteMeasure;
using bary::MeasureSet;
using bary::Rational;
using bary::Scheme;
using bary::scheme_from_transport;
using bary::solve_barycenter;
using bary::sparsify;

namespace {

template <class T>
DiscreteMeasure<T> line_measure(std::vector<int> coords, std::vector<T> masses) {
  DiscreteMeasure<T> m;
  m.dim = 1;
  for (int c : coords) m.points.push_back({T(c)});
  m.masses = std::move(masses);
  return m;
}

// every (measure, target) marginal of the atoms must reproduce the measure
void check_scheme_marginals(const MeasureSet<Rational>& ms, const Scheme<Rational>& s) {
  for (std::size_t i = 0; i < ms.measures.size(); ++i) {
    std::map<int, Rational> got;
    for (const auto& a : s.atoms) got[a.targets[i]] += a.weight;
    for (std::size_t k = 0; k < ms.measures[i].size(); ++k)
      REQUIRE(got[static_cast<int>(k)] == ms.measures[i].masses[k]);
  }
}

Rational scheme_cost(const MeasureSet<Rational>& ms, const BarycenterResult<Rational>& r,
                     const Scheme<Rational>& s) {
  Rational c(0);
  for (const auto& a : s.atoms)
    for (std::size_t i = 0; i < ms.measures.size(); ++i)
      c += bary::sq_dist(r.candidates.points[a.candidate], ms.measures[i].points[a.targets[i]]) *
           a.weight;
  return c;
}

}  // namespace

TEST_CASE("peeling reproduces a hand-checked scheme") {
  MeasureSet<Rational> ms;
  ms.measures.push_back(line_measure<Rational>({0}, {Rational(1)}));
  ms.measures.push_back(line_measure<Rational>({0, 2}, {Rational(1, 2), Rational(1, 2)}));
  auto r = solve_barycenter(ms);
  auto s = scheme_from_transport(r);
  REQUIRE(s.atoms.size() == 2);
  REQUIRE(s.atoms[0].candidate == 0);
  REQUIRE(s.atoms[0].targets == std::vector<int>{0, 0});
  REQUIRE(s.atoms[0].weight == Rational(1, 2));
  REQUIRE(s.atoms[1].candidate == 1);
  REQUIRE(s.atoms[1].targets == std::vector<int>{0, 1});
  REQUIRE(s.atoms[1].weight == Rational(1, 2));
  check_scheme_marginals(ms, s);
  REQUIRE(scheme_cost(ms, r, s) == r.total_cost);
}

TEST_CASE("rebalanced schemes respect the support bound on random instances") {
  std::mt19937_64 rng(99991);
  for (int trial = 0; trial < 8; ++trial) {
    int n_meas = 2 + static_cast<int>(rng() % 2);
    MeasureSet<Rational> ms;
    int bound = 1 - n_meas;
    for (int i = 0; i < n_meas; ++i) {
      int sz = 2 + static_cast<int>(rng() % 2);
      std::vector<int> coords;
      std::vector<Rational> masses;
      int tot = 0;
      std::vector<int> units(sz);
      int base = static_cast<int>(rng() % 9) - 4;
      for (int k = 0; k < sz; ++k) {
        coords.push_back(base + k * (1 + static_cast<int>(rng() % 3)));
        units[k] = 1 + static_cast<int>(rng() % 5);
        tot += units[k];
      }
      for (int k = 0; k < sz; ++k) masses.push_back(Rational(units[k], tot));
      auto m = line_measure<Rational>(coords, masses);
      canonicalize(m);  // collapse colliding points the way the solver will
      bound += static_cast<int>(m.size());
      ms.measures.push_back(std::move(m));
    }
    auto r = solve_barycenter(ms);
    auto s = scheme_from_transport(r);
    check_scheme_marginals(ms, s);
    REQUIRE(scheme_cost(ms, r, s) == r.total_cost);

    auto sp = sparsify(ms, r);
    REQUIRE(sp.support_bound == bound);
    REQUIRE(static_cast<int>(sp.support.size()) <= bound);
    REQUIRE(sp.total_cost == r.total_cost);  // rebalancing may not change cost
    check_scheme_marginals(ms, sp.scheme);
    Rational mass(0);
    for (int j : sp.support) mass += sp.weights[j];
    REQUIRE(mass == Rational(1));
    // transports agree with the atom weights measure by measure
    for (int i = 0; i < n_meas; ++i) {
      Rational ti(0);
      for (const auto& e : sp.transports[i]) ti += e.mass;
      REQUIRE(ti == Rational(1));
    }
  }
}

TEST_CASE("a uniform measure against point masses attains the bound exactly") {
  // first measure uniform on W points, all others single points: the coupling
  // is forced, the barycenter support hits the bound W with masses 1/W
  const int W = 4;
  MeasureSet<Rational> ms;
  ms.measures.push_back(line_measure<Rational>(
      {0, 5, 11, 17},
      {Rational(1, W), Rational(1, W), Rational(1, W), Rational(1, W)}));
  ms.measures.push_back(line_measure<Rational>({1}, {Rational(1)}));
  ms.measures.push_back(line_measure<Rational>({2}, {Rational(1)}));
  auto r = solve_barycenter(ms);
  auto sp = sparsify(ms, r);
  REQUIRE(sp.support_bound == W);  // (W + 1 + 1) - 3 + 1
  REQUIRE(static_cast<int>(sp.support.size()) == W);
  for (int j : sp.support) REQUIRE(sp.weights[j] == Rational(1, W));
  REQUIRE(sp.barycenter.size() == W);
}

TEST_CASE("floating point sparsification stays within tolerance of exact") {
  MeasureSet<double> ms;
  ms.measures.push_back(line_measure<double>({0, 3}, {0.5, 0.5}));
  ms.measures.push_back(line_measure<double>({1, 2, 4}, {0.25, 0.25, 0.5}));
  auto r = solve_barycenter(ms);
  auto sp = sparsify(ms, r);
  REQUIRE(sp.support_bound == 4);
  REQUIRE(static_cast<int>(sp.support.size()) <= 4);
  REQUIRE(sp.total_cost == Catch::Approx(r.total_cost).margin(1e-9));
  double mass = 0;
  for (int j : sp.support) mass += sp.weights[j];
  REQUIRE(mass == Catch::Approx(1.0).margin(1e-9));
}

TEST_CASE("grid instances stay on the refined grid after sparsification") {
  // two measures supported on the integer grid {0,1,2}: the barycenter lives
  // on the half-step refinement and its support obeys the refined-grid cap
  std::mt19937_64 rng(5150);
  for (int trial = 0; trial < 4; ++trial) {
    MeasureSet<Rational> ms;
    for (int i = 0; i < 2; ++i) {
      std::vector<int> units = {1 + static_cast<int>(rng() % 5),
                                1 + static_cast<int>(rng() % 5),
                                1 + static_cast<int>(rng() % 5)};
      int tot = units[0] + units[1] + units[2];
      ms.measures.push_back(line_measure<Rational>(
          {0, 1, 2}, {Rational(units[0], tot), Rational(units[1], tot), Rational(units[2], tot)}));
    }
    auto r = solve_barycenter(ms);
    auto sp = sparsify(ms, r);
    REQUIRE(static_cast<int>(sp.support.size()) <= 2 * (3 - 1) + 1);

    MeasureSet<double> md;
    for (const auto& m : ms.measures) {
      DiscreteMeasure<double> f;
      f.dim = 1;
      for (const auto& pt : m.points) f.points.push_back(bary::point_to_double(pt));
      for (const auto& w : m.masses) f.masses.push_back(bary::to_double(w));
      md.measures.push_back(std::move(f));
    }
    auto grid = bary::detect_grid(md);
    REQUIRE(grid.has_value());
    auto refined = bary::refined_grid(*grid, 2);
    for (const auto& pt : sp.barycenter.points)
      REQUIRE(bary::on_grid(refined, bary::point_to_double(pt), 1e-9));
  }
}
