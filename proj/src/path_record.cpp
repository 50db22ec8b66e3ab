#include <cstdio>

#include <json.hpp>

#include "kscolor/formats.hpp"

namespace ks::formats {

namespace {

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12f", x);
  return buf;
}

}  // namespace

std::string write_path_json(const descent::Path& path) {
  using json = nlohmann::ordered_json;
  const Frame& f = path.frame;
  auto vec = [](const UnitVec& v) { return json::array({v.x(), v.y(), v.z()}); };
  json root;
  root["frame"] = {{"e1", vec(f.e1())}, {"e2", vec(f.e2())}, {"e3", vec(f.e3())}};
  json points = json::array();
  for (const auto& p : path.points) {
    const LatLon ll = vec_to_latlon(f, p);
    points.push_back({{"lat_deg", ll.lat_deg}, {"lon_deg", ll.lon_deg}, {"v", vec(p)}});
  }
  root["points"] = std::move(points);
  json steps = json::array();
  for (const auto& s : path.steps) steps.push_back({{"beta_deg", s.beta_deg}});
  root["steps"] = std::move(steps);
  return root.dump(1) + "\n";
}

std::string write_path_text(const descent::Path& path) {
  std::string out = "descent path: " + std::to_string(path.steps.size()) + " steps\n";
  for (std::size_t i = 0; i < path.points.size(); ++i) {
    const LatLon ll = vec_to_latlon(path.frame, path.points[i]);
    out += "  psi" + std::to_string(i) + "  lat " + num(ll.lat_deg) + "  lon " + num(ll.lon_deg) + "\n";
    if (i < path.steps.size()) out += "    step " + std::to_string(i + 1) + "  beta " + num(path.steps[i].beta_deg) + "\n";
  }
  return out;
}

}  // namespace ks::formats
