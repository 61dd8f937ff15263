#pragma once

// Bundled demand-distribution demo: nine California cities, eight months.
// Monthly demand mass at each city is proportional to
//   population * (average high temperature for the month - 72)^2
// normalized within the month. Populations are 2010 census counts; monthly
// average highs are 1981-2010 climate normals; coordinates are raw
// longitude/latitude degrees treated as planar positions.

#include <string>
#include <vector>

#include "bary/errors.hpp"
#include "bary/measure.hpp"

namespace bary {

struct DemoCity {
  std::string name;
  double longitude = 0;
  double latitude = 0;
  double population = 0;
};

struct DemoMonth {
  std::string name;
  std::vector<double> avg_high_f;  // one per city, in cities order
};

struct DemoSpec {
  std::vector<DemoCity> cities;
  std::vector<DemoMonth> months;
  double comfort_f = 72.0;
};

inline DemoSpec california_demo() {
  DemoSpec spec;
  spec.cities = {
      {"Bakersfield", -119.0187, 35.3733, 347483},
      {"Eureka", -124.1637, 40.8021, 27191},
      {"Fresno", -119.7871, 36.7378, 494665},
      {"Los Angeles", -118.2437, 34.0522, 3792621},
      {"Sacramento", -121.4944, 38.5816, 466488},
      {"San Bernardino", -117.2898, 34.1083, 209924},
      {"San Francisco", -122.4194, 37.7749, 805235},
      {"San Jose", -121.8863, 37.3382, 945942},
      {"South Lake Tahoe", -119.9772, 38.9399, 21403},
  };
  // city order matches spec.cities
  spec.months = {
      {"dec", {57.5, 54.5, 55.5, 67.3, 54.3, 64.8, 57.2, 58.5, 42.0}},
      {"jan", {57.7, 55.0, 54.9, 68.2, 54.6, 64.9, 57.4, 58.8, 41.6}},
      {"feb", {63.0, 55.7, 61.2, 69.0, 60.1, 65.6, 60.3, 62.3, 42.7}},
      {"mar", {68.9, 56.5, 67.3, 70.2, 65.4, 68.9, 62.4, 65.7, 47.1}},
      {"jun", {92.1, 61.4, 92.1, 78.8, 87.7, 87.4, 70.0, 78.9, 69.8}},
      {"jul", {98.3, 62.8, 98.6, 83.3, 92.4, 94.2, 70.5, 81.4, 78.0}},
      {"aug", {96.8, 63.7, 96.5, 84.8, 91.4, 95.0, 71.7, 81.4, 77.2}},
      {"sep", {91.0, 63.9, 90.3, 83.3, 87.7, 90.1, 74.2, 80.3, 70.7}},
  };
  return spec;
}

// One measure per month on the shared city coordinates; masses proportional
// to population * (avg high - comfort)^2, normalized within the month.
inline MeasureSet<double> generate_demo(const DemoSpec& spec) {
  if (spec.cities.empty()) throw ValidationError("demo needs at least one city");
  for (const auto& c : spec.cities)
    if (!(c.population > 0))
      throw ValidationError("demo city " + c.name + " needs a positive population");

  std::vector<Point<double>> sites;
  sites.reserve(spec.cities.size());
  for (const auto& c : spec.cities) sites.push_back({c.longitude, c.latitude});

  MeasureSet<double> ms;
  for (const auto& month : spec.months) {
    if (month.avg_high_f.size() != spec.cities.size())
      throw ValidationError("month " + month.name + " must list one temperature per city");
    DiscreteMeasure<double> m;
    m.dim = 2;
    m.points = sites;
    double total = 0;
    for (std::size_t c = 0; c < spec.cities.size(); ++c) {
      const double dev = month.avg_high_f[c] - spec.comfort_f;
      const double w = spec.cities[c].population * dev * dev;
      m.masses.push_back(w);
      total += w;
    }
    if (!(total > 0))
      throw ValidationError("month " + month.name +
                            " sits entirely at the comfort temperature");
    for (auto& w : m.masses) w /= total;
    ms.measures.push_back(std::move(m));
  }
  return ms;
}

}  // namespace bary
