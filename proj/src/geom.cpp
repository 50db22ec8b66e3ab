#include "kscolor/geom.hpp"

#include <algorithm>
#include <cstdio>
#include <string>

#include "kscolor/error.hpp"

namespace ks {

namespace {

std::string fmt_vec(const Vec3& v) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "(%.17g, %.17g, %.17g)", v.x, v.y, v.z);
  return buf;
}

// Latitude in degrees of the northern representative of psi, checked against
// the open band between equator and pole.
double check_band(const Frame& f, const UnitVec& psi, const Tolerances& tol) {
  const Vec3 c = f.local(psi.vec());
  const double lat = rad_to_deg(std::atan2(std::abs(c.z), std::hypot(c.x, c.y)));
  if (!(lat > tol.lat_band_deg && lat < 90.0 - tol.lat_band_deg)) {
    throw Error(ErrorKind::DegeneratePoint,
                "point " + fmt_vec(psi.vec()) + " at latitude " + std::to_string(lat) +
                    " is at the pole or on the equator");
  }
  return lat;
}

}  // namespace

double wrap_lon_deg(double lon_deg) {
  double w = std::fmod(lon_deg, 360.0);
  if (w <= -180.0) w += 360.0;
  if (w > 180.0) w -= 360.0;
  return w;
}

UnitVec UnitVec::checked(const Vec3& v, double eps) {
  const double n = norm(v);
  if (!(std::abs(n - 1.0) <= eps)) {
    throw Error(ErrorKind::NonUnitVector, fmt_vec(v) + " has norm " + std::to_string(n));
  }
  return UnitVec(v);
}

UnitVec UnitVec::normalized(const Vec3& v) {
  const double n = norm(v);
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw Error(ErrorKind::ZeroVector, fmt_vec(v) + " cannot be normalized");
  }
  return UnitVec(v * (1.0 / n));
}

ProjPoint canonicalize(const UnitVec& v, const Tolerances& tol) {
  for (double c : {v.x(), v.y(), v.z()}) {
    if (std::abs(c) > tol.canon) return ProjPoint(c > 0.0 ? v : -v);
  }
  // Unreachable for unit vectors.
  return ProjPoint(v);
}

ProjPoint canonicalize(const Vec3& v, const Tolerances& tol) {
  return canonicalize(UnitVec::checked(v, tol.norm), tol);
}

double proj_angle(const UnitVec& a, const UnitVec& b) {
  const double c = std::min(1.0, std::abs(dot(a, b)));
  // acos loses precision near 0; use the cross product there.
  const double s = norm(cross(a.vec(), b.vec()));
  return rad_to_deg(std::atan2(s, c));
}

double proj_angle(const ProjPoint& a, const ProjPoint& b) { return proj_angle(a.rep(), b.rep()); }

Frame Frame::standard() {
  return Frame(UnitVec::checked({1, 0, 0}), UnitVec::checked({0, 1, 0}), UnitVec::checked({0, 0, 1}));
}

Frame Frame::from_axes(const UnitVec& e1, const UnitVec& e2, const UnitVec& e3, const Tolerances& tol) {
  const bool orthogonal = std::abs(dot(e1, e2)) < tol.orth && std::abs(dot(e1, e3)) < tol.orth &&
                          std::abs(dot(e2, e3)) < tol.orth;
  const bool right_handed = std::abs(det3(e1, e2, e3) - 1.0) < tol.orth;
  if (!orthogonal || !right_handed) {
    throw Error(ErrorKind::DegeneratePoint, "axes are not a right-handed orthonormal basis");
  }
  return Frame(e1, e2, e3);
}

Frame Frame::from_pole_meridian(const UnitVec& pole, const UnitVec& meridian_point, const Tolerances& tol) {
  const Vec3 n = pole.vec();
  const Vec3 m = meridian_point.vec() - dot(meridian_point.vec(), n) * n;
  if (norm(m) <= tol.orth) {
    throw Error(ErrorKind::DegeneratePoint, "meridian point is parallel to the pole");
  }
  // Gram-Schmidt once more keeps e1 orthogonal to the pole at rounding level.
  Vec3 e1 = m * (1.0 / norm(m));
  e1 = e1 - dot(e1, n) * n;
  const UnitVec u1 = UnitVec::normalized(e1);
  const UnitVec u2 = UnitVec::normalized(cross(n, u1.vec()));
  return from_axes(u1, u2, pole, tol);
}

Vec3 Frame::local(const Vec3& v) const { return {dot(v, e1_.vec()), dot(v, e2_.vec()), dot(v, e3_.vec())}; }

Vec3 Frame::world(const Vec3& c) const { return c.x * e1_.vec() + c.y * e2_.vec() + c.z * e3_.vec(); }

UnitVec latlon_to_vec(const Frame& f, const LatLon& p) {
  const double lat = deg_to_rad(p.lat_deg);
  const double lon = deg_to_rad(p.lon_deg);
  // Exact values at the cardinal angles keep basis points exact.
  auto cos_exact = [](double deg, double rad) {
    const double w = std::fmod(std::abs(deg), 360.0);
    if (w == 90.0 || w == 270.0) return 0.0;
    return std::cos(rad);
  };
  auto sin_exact = [](double deg, double rad) {
    const double w = std::fmod(deg, 360.0);
    if (w == 0.0 || std::abs(w) == 180.0) return 0.0;
    return std::sin(rad);
  };
  const double cl = cos_exact(p.lat_deg, lat);
  const Vec3 c{cl * cos_exact(p.lon_deg, lon), cl * sin_exact(p.lon_deg, lon), sin_exact(p.lat_deg, lat)};
  return UnitVec::normalized(f.world(c));
}

LatLon vec_to_latlon(const Frame& f, const UnitVec& v) {
  const Vec3 c = f.local(v.vec());
  const double rho = std::hypot(c.x, c.y);
  LatLon out;
  out.lat_deg = rad_to_deg(std::atan2(c.z, rho));
  out.lon_deg = (rho == 0.0) ? 0.0 : wrap_lon_deg(rad_to_deg(std::atan2(c.y, c.x)));
  return out;
}

double colatitude_deg(const Frame& f, const UnitVec& v) {
  const Vec3 c = f.local(v.vec());
  return rad_to_deg(std::atan2(std::hypot(c.x, c.y), c.z));
}

UnitVec northern(const Frame& f, const UnitVec& v) { return dot(v.vec(), f.e3().vec()) < 0.0 ? -v : v; }

UnitVec e_point(const Frame& f, const UnitVec& psi, const Tolerances& tol) {
  check_band(f, psi, tol);
  const Vec3 c = f.local(northern(f, psi).vec());
  const double rho = std::hypot(c.x, c.y);
  return UnitVec::normalized(f.world({-c.y / rho, c.x / rho, 0.0}));
}

UnitVec perp_point(const Frame& f, const UnitVec& psi, const Tolerances& tol) {
  check_band(f, psi, tol);
  const Vec3 c = f.local(northern(f, psi).vec());
  const double rho = std::hypot(c.x, c.y);
  return UnitVec::normalized(f.world({-c.z * c.x / rho, -c.z * c.y / rho, rho}));
}

UnitVec descent_point(const Frame& f, const UnitVec& psi, double beta_deg, const Tolerances& tol) {
  check_band(f, psi, tol);
  if (!(std::abs(beta_deg) < 90.0)) {
    throw Error(ErrorKind::BetaOutOfRange, "descent angle " + std::to_string(beta_deg) + " not in (-90, 90)");
  }
  const PlanePoint p = gnomonic(f, northern(f, psi), tol);
  if (beta_deg == 0.0) return northern(f, psi);
  const double t = std::tan(deg_to_rad(beta_deg));
  // (-v, u) is the +longitude tangent direction at p scaled by r.
  return ungnomonic(f, {p.u - t * p.v, p.v + t * p.u});
}

PlanePoint gnomonic(const Frame& f, const UnitVec& v, const Tolerances& tol) {
  const Vec3 c = f.local(v.vec());
  if (!(c.z > tol.plane)) {
    throw Error(ErrorKind::EquatorOrSouthern,
                fmt_vec(v.vec()) + " is not in the open northern hemisphere of the frame");
  }
  return {c.x / c.z, c.y / c.z};
}

UnitVec ungnomonic(const Frame& f, const PlanePoint& p) { return UnitVec::normalized(f.world({p.u, p.v, 1.0})); }

}  // namespace ks
