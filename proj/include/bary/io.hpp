#pragma once

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bary/barycenter.hpp"
#include "bary/errors.hpp"
#include "bary/measure.hpp"

namespace bary {

using Json = nlohmann::json;

inline Json parse_json(std::istream& in) {
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

inline Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return parse_json(in);
}

// Measure document shape:
//   {"dim": 2, "points": [[x,y], ...], "masses": [...],
//    "masses_exact": ["1/3", ...]}   (dim and masses_exact optional)
// The exact instantiation prefers masses_exact and otherwise converts the
// float masses exactly (doubles are dyadic rationals).
template <class T>
DiscreteMeasure<T> measure_from_json(const Json& j, std::ostream* warn = nullptr) {
  if (!j.is_object() || !j.contains("points") || !j.contains("masses"))
    throw ParseError("measure needs 'points' and 'masses'");
  DiscreteMeasure<T> m;
  const Json& pts = j["points"];
  const Json& ws = j["masses"];
  if (!pts.is_array() || !ws.is_array()) throw ParseError("'points'/'masses' must be arrays");
  if (pts.empty()) throw ValidationError("measure has no support points");
  for (const Json& p : pts) {
    if (!p.is_array()) throw ParseError("each point must be an array of numbers");
    Point<T> q;
    q.reserve(p.size());
    for (const Json& c : p) {
      if (!c.is_number()) throw ParseError("point coordinate is not a number");
      q.push_back(scalar_from_double<T>(c.get<double>()));
    }
    m.points.push_back(std::move(q));
  }
  bool have_exact = false;
  if constexpr (is_exact_v<T>) {
    if (j.contains("masses_exact")) {
      const Json& we = j["masses_exact"];
      if (!we.is_array() || we.size() != pts.size())
        throw ParseError("'masses_exact' must match 'points' in length");
      for (const Json& w : we) {
        if (!w.is_string()) throw ParseError("'masses_exact' entries must be \"p/q\" strings");
        m.masses.push_back(parse_fraction(w.get<std::string>()));
      }
      have_exact = true;
    }
  }
  if (!have_exact) {
    for (const Json& w : ws) {
      if (!w.is_number()) throw ParseError("mass is not a number");
      m.masses.push_back(scalar_from_double<T>(w.get<double>()));
    }
  }
  if (m.masses.size() != m.points.size())
    throw ValidationError("points/masses length mismatch");
  if (j.contains("dim")) {
    if (!j["dim"].is_number_integer()) throw ParseError("'dim' must be an integer");
    m.dim = j["dim"].get<int>();
    for (const auto& p : m.points)
      if (static_cast<int>(p.size()) != m.dim)
        throw ValidationError("point dimension disagrees with 'dim'");
  }
  canonicalize(m, warn);
  return m;
}

template <class T>
MeasureSet<T> measure_set_from_json(const Json& j, std::ostream* warn = nullptr) {
  if (!j.is_object() || !j.contains("measures") || !j["measures"].is_array())
    throw ParseError("measure set needs a 'measures' array");
  MeasureSet<T> ms;
  for (const Json& mj : j["measures"]) ms.measures.push_back(measure_from_json<T>(mj, warn));
  validate_set(ms);
  return ms;
}

template <class T>
Json measure_to_json(const DiscreteMeasure<T>& m) {
  Json j;
  j["dim"] = m.points.empty() ? m.dim : static_cast<int>(m.points.front().size());
  Json pts = Json::array();
  for (const auto& p : m.points) {
    Json q = Json::array();
    for (const auto& c : p) q.push_back(to_double(c));
    pts.push_back(std::move(q));
  }
  j["points"] = std::move(pts);
  Json ws = Json::array();
  for (const auto& w : m.masses) ws.push_back(to_double(w));
  j["masses"] = std::move(ws);
  if constexpr (is_exact_v<T>) {
    Json we = Json::array();
    for (const auto& w : m.masses) we.push_back(format_fraction(w));
    j["masses_exact"] = std::move(we);
  }
  return j;
}

template <class T>
Json measure_set_to_json(const MeasureSet<T>& ms) {
  Json j;
  j["measures"] = Json::array();
  for (const auto& m : ms.measures) j["measures"].push_back(measure_to_json(m));
  return j;
}

// Solution document shape:
//   {"barycenter": <measure>, "total_cost": f, "per_measure_cost": [...],
//    "transports": [{"i": i, "entries": [{"j": j, "k": k, "mass": m}, ...]}, ...],
//    "dual": {"tau": [[...]], "theta": [[...]]}, "centroids": [[x,y], ...]}
// Centroid indices j refer to the canonical sorted candidate order, which is
// emitted alongside. Exact results add *_exact fraction strings.
template <class T>
Json result_to_json(const BarycenterResult<T>& r) {
  Json j;
  j["barycenter"] = measure_to_json(r.barycenter);
  j["total_cost"] = to_double(r.total_cost);
  Json pmc = Json::array();
  for (const auto& c : r.per_measure_cost) pmc.push_back(to_double(c));
  j["per_measure_cost"] = std::move(pmc);
  Json trans = Json::array();
  for (std::size_t i = 0; i < r.transports.size(); ++i) {
    Json rec;
    rec["i"] = static_cast<int>(i);
    Json entries = Json::array();
    for (const auto& e : r.transports[i]) {
      Json ej;
      ej["j"] = e.from;
      ej["k"] = e.to;
      ej["mass"] = to_double(e.mass);
      if constexpr (is_exact_v<T>) ej["mass_exact"] = format_fraction(e.mass);
      entries.push_back(std::move(ej));
    }
    rec["entries"] = std::move(entries);
    trans.push_back(std::move(rec));
  }
  j["transports"] = std::move(trans);
  Json tau = Json::array(), theta = Json::array();
  for (const auto& row : r.tau) {
    Json t = Json::array();
    for (const auto& v : row) t.push_back(to_double(v));
    tau.push_back(std::move(t));
  }
  for (const auto& row : r.theta) {
    Json t = Json::array();
    for (const auto& v : row) t.push_back(to_double(v));
    theta.push_back(std::move(t));
  }
  j["dual"] = Json{{"tau", std::move(tau)}, {"theta", std::move(theta)}};
  Json cents = Json::array();
  for (const auto& p : r.candidates.points) {
    Json q = Json::array();
    for (const auto& c : p) q.push_back(to_double(c));
    cents.push_back(std::move(q));
  }
  j["centroids"] = std::move(cents);
  if constexpr (is_exact_v<T>) {
    j["total_cost_exact"] = format_fraction(r.total_cost);
    Json pe = Json::array();
    for (const auto& c : r.per_measure_cost) pe.push_back(format_fraction(c));
    j["per_measure_cost_exact"] = std::move(pe);
  }
  return j;
}

// Rebuilds the checkable parts of a result from its document: candidate set,
// weights (from the first measure's transports), barycenter, transports, and
// duals. The program and basis are not stored and stay empty.
template <class T>
BarycenterResult<T> result_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("barycenter") || !j.contains("transports") ||
      !j.contains("dual") || !j.contains("centroids"))
    throw ParseError("result needs 'barycenter', 'transports', 'dual', 'centroids'");
  BarycenterResult<T> r;
  r.barycenter = measure_from_json<T>(j["barycenter"]);

  const Json& cents = j["centroids"];
  if (!cents.is_array() || cents.empty()) throw ParseError("'centroids' must be a non-empty array");
  r.candidates.dim = r.barycenter.dim;
  for (const Json& p : cents) {
    if (!p.is_array() || static_cast<int>(p.size()) != r.candidates.dim)
      throw ParseError("centroid dimension disagrees with the barycenter");
    Point<T> q;
    for (const Json& c : p) q.push_back(scalar_from_double<T>(c.get<double>()));
    r.candidates.points.push_back(std::move(q));
  }

  const Json& dual = j["dual"];
  if (!dual.contains("tau") || !dual.contains("theta"))
    throw ParseError("'dual' needs 'tau' and 'theta'");
  for (const Json& row : dual["tau"]) {
    std::vector<T> t;
    for (const Json& v : row) t.push_back(scalar_from_double<T>(v.get<double>()));
    r.tau.push_back(std::move(t));
  }
  for (const Json& row : dual["theta"]) {
    std::vector<T> t;
    if (row.size() != cents.size())
      throw ValidationError("'theta' rows must match the centroid count");
    for (const Json& v : row) t.push_back(scalar_from_double<T>(v.get<double>()));
    r.theta.push_back(std::move(t));
  }
  const int n_meas = static_cast<int>(r.tau.size());
  if (n_meas == 0 || static_cast<int>(r.theta.size()) != n_meas)
    throw ValidationError("'tau' and 'theta' must list one row per measure");

  const Json& trans = j["transports"];
  if (!trans.is_array() || static_cast<int>(trans.size()) != n_meas)
    throw ValidationError("'transports' must list one record per measure");
  r.transports.resize(n_meas);
  for (const Json& rec : trans) {
    if (!rec.contains("i") || !rec.contains("entries"))
      throw ParseError("transport record needs 'i' and 'entries'");
    const int i = rec["i"].get<int>();
    if (i < 0 || i >= n_meas) throw ValidationError("transport measure index out of range");
    for (const Json& ej : rec["entries"]) {
      TransportEntry<T> e;
      e.from = ej["j"].get<int>();
      e.to = ej["k"].get<int>();
      e.mass = scalar_from_double<T>(ej["mass"].get<double>());
      if (e.from < 0 || e.from >= static_cast<int>(cents.size()) || e.to < 0 ||
          e.to >= static_cast<int>(r.tau[i].size()))
        throw ValidationError("transport entry indexes outside the instance");
      r.transports[i].push_back(e);
    }
    std::sort(r.transports[i].begin(), r.transports[i].end(),
              [](const TransportEntry<T>& a, const TransportEntry<T>& b) {
                return a.from != b.from ? a.from < b.from : a.to < b.to;
              });
  }

  r.weights.assign(cents.size(), T(0));
  for (const auto& e : r.transports[0]) r.weights[e.from] += e.mass;
  for (int c = 0; c < static_cast<int>(cents.size()); ++c)
    if (mass_positive(r.weights[c])) r.support.push_back(c);

  if (j.contains("total_cost")) r.total_cost = scalar_from_double<T>(j["total_cost"].get<double>());
  if (j.contains("per_measure_cost"))
    for (const Json& v : j["per_measure_cost"])
      r.per_measure_cost.push_back(scalar_from_double<T>(v.get<double>()));

  PrimalLayout& lay = r.layout;
  lay.num_measures = n_meas;
  lay.num_candidates = static_cast<int>(cents.size());
  int ycols = 0, marg = 0;
  for (int i = 0; i < n_meas; ++i) {
    const int sz = static_cast<int>(r.tau[i].size());
    lay.sizes.push_back(sz);
    lay.ycol_base.push_back(ycols);
    lay.marg_base.push_back(marg);
    ycols += lay.num_candidates * sz;
    marg += sz;
  }
  lay.zcol_base = ycols;
  lay.link_rows = n_meas * lay.num_candidates;
  lay.rows = lay.link_rows + marg;
  lay.cols = ycols + lay.num_candidates;
  return r;
}

}  // namespace bary
