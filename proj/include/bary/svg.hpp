#pragma once

// Deterministic SVG rendering of planar measure sets and barycenters.
// Every coordinate is printed with fixed six-decimal formatting, so identical
// inputs produce byte-identical documents.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "bary/barycenter.hpp"
#include "bary/errors.hpp"
#include "bary/measure.hpp"
#include "bary/scalar.hpp"

namespace bary {

struct SvgOptions {
  double width = 800;        // canvas width in px; height follows the data box
  double max_radius = 22;    // disk radius for a unit mass, px
  double margin = 40;        // padding around the data box, px
  int transport_to = -1;     // measure index for arrow overlay, -1 = none
};

namespace detail_svg {

inline std::string num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

inline std::string measure_color(int i) {
  // fixed palette, cycled; chosen for contrast against the barycenter marks
  static const char* palette[] = {"#4878a8", "#e49444", "#5ba05b", "#b04f4f",
                                  "#9470b0", "#857458", "#cd6abc", "#8c8c30"};
  return palette[i % 8];
}

}  // namespace detail_svg

// Measures as translucent disks (area proportional to mass), barycenter as
// contrasting outlined disks, optional transport arrows to one measure.
template <class T>
std::string render_svg(const BarycenterResult<T>& r, const MeasureSet<T>& input,
                       const SvgOptions& opt = SvgOptions{}) {
  MeasureSet<T> ms = input;
  for (auto& m : ms.measures) canonicalize(m);
  validate_set(ms);
  if (ms.dim() != 2) throw DimensionError("plotting requires two-dimensional measures");
  if (opt.transport_to >= static_cast<int>(ms.measures.size()))
    throw ValidationError("transport overlay index is out of range");

  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  auto grow = [&](double x, double y) {
    xmin = std::min(xmin, x);
    xmax = std::max(xmax, x);
    ymin = std::min(ymin, y);
    ymax = std::max(ymax, y);
  };
  for (const auto& m : ms.measures)
    for (const auto& p : m.points) grow(to_double(p[0]), to_double(p[1]));
  for (const auto& p : r.barycenter.points) grow(to_double(p[0]), to_double(p[1]));
  if (xmax - xmin <= 0) xmax = xmin + 1;
  if (ymax - ymin <= 0) ymax = ymin + 1;

  const double inner = opt.width - 2 * opt.margin;
  const double scale = inner / std::max(xmax - xmin, ymax - ymin);
  const double height = (ymax - ymin) * scale + 2 * opt.margin;
  auto px = [&](double x) { return opt.margin + (x - xmin) * scale; };
  auto py = [&](double y) { return opt.margin + (ymax - y) * scale; };  // y up

  using detail_svg::num;
  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(opt.width) +
         "\" height=\"" + num(height) + "\" viewBox=\"0 0 " + num(opt.width) + " " +
         num(height) + "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";

  for (std::size_t i = 0; i < ms.measures.size(); ++i) {
    const auto& m = ms.measures[i];
    out += "<g fill=\"" + detail_svg::measure_color(static_cast<int>(i)) +
           "\" fill-opacity=\"0.45\" class=\"measure\">\n";
    for (int k = 0; k < m.size(); ++k) {
      const double mass = to_double(m.masses[k]);
      const double rad = opt.max_radius * std::sqrt(std::max(0.0, mass));
      out += "  <circle cx=\"" + num(px(to_double(m.points[k][0]))) + "\" cy=\"" +
             num(py(to_double(m.points[k][1]))) + "\" r=\"" + num(rad) + "\"/>\n";
    }
    out += "</g>\n";
  }

  if (opt.transport_to >= 0) {
    const auto& m = ms.measures[opt.transport_to];
    out += "<g stroke=\"#222222\" stroke-opacity=\"0.8\" class=\"transport\">\n";
    for (const auto& e : r.transports[opt.transport_to]) {
      const auto& a = r.candidates.points[e.from];
      const auto& b = m.points[e.to];
      const double w = 0.6 + 5.0 * to_double(e.mass);
      out += "  <line x1=\"" + num(px(to_double(a[0]))) + "\" y1=\"" +
             num(py(to_double(a[1]))) + "\" x2=\"" + num(px(to_double(b[0]))) +
             "\" y2=\"" + num(py(to_double(b[1]))) + "\" stroke-width=\"" + num(w) +
             "\"/>\n";
    }
    out += "</g>\n";
  }

  out += "<g fill=\"#d62728\" stroke=\"#000000\" stroke-width=\"0.8\" class=\"barycenter\">\n";
  for (int j = 0; j < r.barycenter.size(); ++j) {
    const double mass = to_double(r.barycenter.masses[j]);
    const double rad = opt.max_radius * std::sqrt(std::max(0.0, mass));
    out += "  <circle cx=\"" + num(px(to_double(r.barycenter.points[j][0]))) +
           "\" cy=\"" + num(py(to_double(r.barycenter.points[j][1]))) + "\" r=\"" +
           num(rad) + "\"/>\n";
  }
  out += "</g>\n</svg>\n";
  return out;
}

}  // namespace bary
