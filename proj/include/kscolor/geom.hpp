#pragma once

// Spherical and projective geometry on the unit sphere of R^3: frames,
// latitude/longitude, the orthogonal triple attached to a point, descent
// circles and the gnomonic projection onto the tangent plane at the pole.
//
// Angles cross the API in degrees; everything inside works in radians.

#include <array>
#include <cmath>
#include <numbers>

#include "kscolor/tolerances.hpp"

namespace ks {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  constexpr Vec3 operator-() const { return {-x, -y, -z}; }
  constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  constexpr bool operator==(const Vec3&) const = default;
};

constexpr Vec3 operator*(double s, const Vec3& v) { return v * s; }
constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }
/// det[a b c] = a . (b x c)
constexpr double det3(const Vec3& a, const Vec3& b, const Vec3& c) { return dot(a, cross(b, c)); }

constexpr double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
constexpr double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

/// Wraps a longitude in degrees into (-180, 180].
double wrap_lon_deg(double lon_deg);

/// A vector of unit length (within Tolerances::norm).
class UnitVec {
 public:
  /// Throws NonUnitVector unless |v| = 1 within `eps`.
  static UnitVec checked(const Vec3& v, double eps = kDefaultTolerances.norm);
  /// Scales v to unit length; throws ZeroVector for v = 0.
  static UnitVec normalized(const Vec3& v);

  const Vec3& vec() const { return v_; }
  double x() const { return v_.x; }
  double y() const { return v_.y; }
  double z() const { return v_.z; }
  UnitVec operator-() const { return UnitVec(-v_); }
  bool operator==(const UnitVec&) const = default;

 private:
  explicit UnitVec(const Vec3& v) : v_(v) {}
  Vec3 v_;
};

inline double dot(const UnitVec& a, const UnitVec& b) { return dot(a.vec(), b.vec()); }
inline double det3(const UnitVec& a, const UnitVec& b, const UnitVec& c) {
  return det3(a.vec(), b.vec(), c.vec());
}

/// A one-dimensional subspace, stored as the sign-canonical unit vector:
/// the first component with magnitude above Tolerances::canon is positive.
class ProjPoint {
 public:
  const UnitVec& rep() const { return rep_; }
  const Vec3& vec() const { return rep_.vec(); }
  bool operator==(const ProjPoint&) const = default;

 private:
  friend ProjPoint canonicalize(const UnitVec& v, const Tolerances& tol);
  explicit ProjPoint(const UnitVec& v) : rep_(v) {}
  UnitVec rep_;
};

/// Sign-canonical representative of the line through v. Idempotent and
/// invariant under v -> -v.
ProjPoint canonicalize(const UnitVec& v, const Tolerances& tol = kDefaultTolerances);
/// Convenience overload: checks |v| = 1 first (NonUnitVector otherwise).
ProjPoint canonicalize(const Vec3& v, const Tolerances& tol = kDefaultTolerances);

/// Angle between two lines, arccos |a.b|, in degrees within [0, 90].
double proj_angle(const ProjPoint& a, const ProjPoint& b);
double proj_angle(const UnitVec& a, const UnitVec& b);

struct LatLon {
  double lat_deg = 0.0;
  double lon_deg = 0.0;
};

/// Right-handed orthonormal basis; e3 is the pole, e1 and e2 the equator
/// points at longitude 0 and 90.
class Frame {
 public:
  static Frame standard();
  /// Validates orthonormality and handedness within `tol.orth`.
  static Frame from_axes(const UnitVec& e1, const UnitVec& e2, const UnitVec& e3,
                         const Tolerances& tol = kDefaultTolerances);
  /// Pole `pole`, meridian 0 through `meridian_point`, e2 = e3 x e1.
  /// Throws DegeneratePoint when the meridian point is (anti)parallel to the pole.
  static Frame from_pole_meridian(const UnitVec& pole, const UnitVec& meridian_point,
                                  const Tolerances& tol = kDefaultTolerances);

  const UnitVec& e1() const { return e1_; }
  const UnitVec& e2() const { return e2_; }
  const UnitVec& e3() const { return e3_; }

  /// Coordinates of v in this basis.
  Vec3 local(const Vec3& v) const;
  /// Inverse of local().
  Vec3 world(const Vec3& c) const;

 private:
  Frame(const UnitVec& e1, const UnitVec& e2, const UnitVec& e3) : e1_(e1), e2_(e2), e3_(e3) {}
  UnitVec e1_, e2_, e3_;
};

struct PlanePoint {
  double u = 0.0;
  double v = 0.0;

  double radius() const { return std::hypot(u, v); }
};

UnitVec latlon_to_vec(const Frame& f, const LatLon& p);
/// Longitude is reported as 0 at the poles.
LatLon vec_to_latlon(const Frame& f, const UnitVec& v);

/// Colatitude of v in degrees, in [0, 180].
double colatitude_deg(const Frame& f, const UnitVec& v);

/// The equator point at longitude(psi) + 90: psi's descent circle crosses
/// the equator there. Throws DegeneratePoint unless psi lies strictly between
/// the pole and the equator (after flipping to the northern representative).
UnitVec e_point(const Frame& f, const UnitVec& psi, const Tolerances& tol = kDefaultTolerances);

/// The point completing {psi, e_point(psi)} to an orthogonal triple:
/// latitude 90 - lat(psi), longitude lon(psi) + 180.
UnitVec perp_point(const Frame& f, const UnitVec& psi, const Tolerances& tol = kDefaultTolerances);

/// Moves along the descent circle of psi. In the gnomonic plane this is a
/// step of length r tan(beta) along the tangent to the latitude circle at the
/// image of psi, towards increasing longitude for beta > 0; the plane radius
/// grows by sec(beta) and the plane angle turns by beta.
/// Throws DegeneratePoint, or BetaOutOfRange unless |beta_deg| < 90.
UnitVec descent_point(const Frame& f, const UnitVec& psi, double beta_deg,
                      const Tolerances& tol = kDefaultTolerances);

/// Central projection onto the tangent plane at the pole: (x/z, y/z) in frame
/// coordinates. Throws EquatorOrSouthern if the e3 component is <= tol.plane.
PlanePoint gnomonic(const Frame& f, const UnitVec& v, const Tolerances& tol = kDefaultTolerances);
UnitVec ungnomonic(const Frame& f, const PlanePoint& p);

/// Returns v or -v, whichever has non-negative e3 component.
UnitVec northern(const Frame& f, const UnitVec& v);

}  // namespace ks
