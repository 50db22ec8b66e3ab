#include "kscolor/descent.hpp"

#include <cmath>
#include <string>

#include "kscolor/error.hpp"

namespace ks::descent {

namespace {

// A zigzag this shallow changes the radius below double resolution, which
// would leave two consecutive points at the same colatitude.
constexpr double kMinZigzagRad = 1e-6;

bool in_open_band(double lat_deg, const Tolerances& tol) {
  return lat_deg > tol.lat_band_deg && lat_deg < 90.0 - tol.lat_band_deg;
}

double log_sec(double rad) { return -std::log(std::cos(rad)); }

}  // namespace

Path plan(const Frame& f, const LatLon& from, const LatLon& to, const Tolerances& tol) {
  if (!in_open_band(from.lat_deg, tol) || !in_open_band(to.lat_deg, tol)) {
    throw Error(ErrorKind::DegenerateEndpoint, "descent endpoints must lie strictly between equator and pole");
  }
  if (!(to.lat_deg < from.lat_deg)) {
    throw Error(ErrorKind::NotMoreSoutherly, "target latitude " + std::to_string(to.lat_deg) +
                                                 " is not below start latitude " + std::to_string(from.lat_deg));
  }

  const double r = std::tan(deg_to_rad(90.0 - from.lat_deg));
  const double R = std::tan(deg_to_rad(90.0 - to.lat_deg));
  const double log_ratio = std::log(R / r);
  const double dphi = wrap_lon_deg(to.lon_deg - from.lon_deg);
  const double dphi_rad = deg_to_rad(dphi);

  std::size_t n = 0;
  double gamma = 0.0;
  if (dphi != 0.0) n = static_cast<std::size_t>(std::floor(std::abs(dphi) / 90.0)) + 1;
  for (;;) {
    const double spent = n == 0 ? 0.0 : static_cast<double>(n) * log_sec(dphi_rad / static_cast<double>(n));
    if (spent > log_ratio) {
      ++n;
      continue;
    }
    // tan^2 g = sec^2 g - 1
    gamma = std::atan(std::sqrt(std::expm1(log_ratio - spent)));
    if (n > 0 && gamma >= tol.ang && gamma < kMinZigzagRad) {
      ++n;
      continue;
    }
    break;
  }

  Path path{f, {latlon_to_vec(f, from)}, {}};
  auto advance = [&](double beta_deg) {
    const UnitVec prev = path.points.back();
    const UnitVec next = descent_point(f, prev, beta_deg, tol);
    path.steps.push_back({beta_deg, prev, next});
    path.points.push_back(next);
  };
  const double equal_step = n == 0 ? 0.0 : dphi / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) advance(equal_step);
  if (gamma >= tol.ang) {
    advance(rad_to_deg(gamma));
    advance(-rad_to_deg(gamma));
  }
  return path;
}

std::vector<Violation> validate(const Path& path, const Tolerances& tol) {
  std::vector<Violation> out;
  const Frame& f = path.frame;
  const auto& pts = path.points;
  if (pts.empty()) {
    out.push_back({0, "path has no points"});
    return out;
  }
  if (path.steps.size() + 1 != pts.size()) {
    out.push_back({0, "expected " + std::to_string(pts.size() - 1) + " steps, found " +
                          std::to_string(path.steps.size())});
    return out;
  }

  auto tan_colat = [&](const UnitVec& v) {
    const Vec3 c = f.local(v.vec());
    return std::hypot(c.x, c.y) / std::abs(c.z);
  };

  for (std::size_t i = 0; i < path.steps.size(); ++i) {
    const Step& s = path.steps[i];
    const std::size_t k = i + 1;
    if (!(s.from == pts[i]) || !(s.to == pts[k])) {
      out.push_back({i, "step endpoints differ from the point sequence"});
      continue;
    }
    if (!(s.beta_deg != 0.0 && std::abs(s.beta_deg) < 90.0)) {
      out.push_back({i, "step angle " + std::to_string(s.beta_deg) + " outside 0 < |beta| < 90"});
      continue;
    }
    UnitVec expect = s.from;
    try {
      expect = descent_point(f, s.from, s.beta_deg, tol);
    } catch (const Error& e) {
      out.push_back({i, std::string("step origin invalid: ") + e.what()});
      continue;
    }
    if (proj_angle(expect, s.to) > rad_to_deg(tol.ang)) {
      out.push_back({k, "point is not the descent of its predecessor"});
    }
    if (colatitude_deg(f, northern(f, pts[k])) <= colatitude_deg(f, northern(f, pts[i]))) {
      out.push_back({k, "colatitude does not increase"});
    }
    const UnitVec helper = e_point(f, pts[i], tol);
    if (std::abs(det3(pts[i], helper, pts[k])) >= tol.orth) {
      out.push_back({k, "point leaves the descent circle of its predecessor"});
    }
    const double law = tan_colat(pts[i]) / std::cos(deg_to_rad(s.beta_deg));
    if (std::abs(tan_colat(pts[k]) - law) > tol.ang * std::max(1.0, law)) {
      out.push_back({k, "radius law tan(colat') = tan(colat) sec(beta) fails"});
    }
  }
  for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
    const double lat = 90.0 - colatitude_deg(f, northern(f, pts[i]));
    if (!(lat > tol.lat_band_deg && lat < 90.0 - tol.lat_band_deg)) {
      out.push_back({i, "interior point at the pole or on the equator"});
    }
  }
  return out;
}

}  // namespace ks::descent
