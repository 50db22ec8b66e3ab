#include <algorithm>
#include <cmath>
#include <cstdio>

#include "kscolor/formats.hpp"

namespace ks::formats {

namespace {

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_svg(const Frame& frame, const SvgLayers& layers, const Tolerances& tol) {
  auto project = [&](const UnitVec& v) { return gnomonic(frame, northern(frame, v), tol); };

  // Project everything first so an unplottable point fails before output.
  std::vector<PlanePoint> dots;
  for (const auto& p : layers.points) dots.push_back(project(p.v));
  std::vector<std::vector<PlanePoint>> lines;
  for (const auto& c : layers.chains) {
    lines.emplace_back();
    for (const auto& v : c.points) lines.back().push_back(project(v));
  }

  double extent = 1.0;
  for (double lat : layers.latitude_circles_deg) extent = std::max(extent, std::tan(deg_to_rad(90.0 - lat)));
  for (const auto& d : dots) extent = std::max({extent, std::abs(d.u), std::abs(d.v)});
  for (const auto& l : lines) {
    for (const auto& d : l) extent = std::max({extent, std::abs(d.u), std::abs(d.v)});
  }
  extent *= 1.15;
  const double stroke = extent / 400.0;
  const double dot_r = extent / 120.0;

  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"800\" height=\"800\" viewBox=\"" +
         num(-extent) + " " + num(-extent) + " " + num(2 * extent) + " " + num(2 * extent) + "\">\n";
  out += "<rect x=\"" + num(-extent) + "\" y=\"" + num(-extent) + "\" width=\"" + num(2 * extent) + "\" height=\"" +
         num(2 * extent) + "\" fill=\"white\"/>\n";
  out += "<g id=\"plane\" transform=\"scale(1,-1)\" fill=\"none\" stroke-width=\"" + num(stroke) + "\">\n";
  out += "<line class=\"axis\" x1=\"" + num(-extent) + "\" y1=\"0\" x2=\"" + num(extent) +
         "\" y2=\"0\" stroke=\"#bbbbbb\"/>\n";
  out += "<line class=\"axis\" x1=\"0\" y1=\"" + num(-extent) + "\" x2=\"0\" y2=\"" + num(extent) +
         "\" stroke=\"#bbbbbb\"/>\n";
  for (double lat : layers.latitude_circles_deg) {
    out += "<circle class=\"latitude\" data-lat=\"" + num(lat) + "\" cx=\"0\" cy=\"0\" r=\"" +
           num(std::tan(deg_to_rad(90.0 - lat))) + "\" stroke=\"#4477aa\"/>\n";
  }
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string pts;
    for (const auto& d : lines[i]) pts += (pts.empty() ? "" : " ") + num(d.u) + "," + num(d.v);
    out += "<polyline class=\"chain\" data-name=\"" + escape(layers.chains[i].name) + "\" points=\"" + pts +
           "\" stroke=\"#cc3311\"/>\n";
  }
  for (std::size_t i = 0; i < dots.size(); ++i) {
    out += "<circle class=\"point\" data-label=\"" + escape(layers.points[i].label) + "\" cx=\"" + num(dots[i].u) +
           "\" cy=\"" + num(dots[i].v) + "\" r=\"" + num(dot_r) + "\" fill=\"black\" stroke=\"none\"/>\n";
  }
  out += "</g>\n";
  // Text stays upright, so labels live outside the flipped group.
  out += "<g id=\"labels\" font-family=\"sans-serif\" font-size=\"" + num(extent / 25.0) + "\">\n";
  for (std::size_t i = 0; i < dots.size(); ++i) {
    out += "<text x=\"" + num(dots[i].u + dot_r) + "\" y=\"" + num(-dots[i].v - dot_r) + "\">" +
           escape(layers.points[i].label) + "</text>\n";
  }
  out += "</g>\n</svg>\n";
  return out;
}

}  // namespace ks::formats
