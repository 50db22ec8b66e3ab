#pragma once

namespace ks {

/// Numerical tolerances shared by every module. Angles in `ang` are radians,
/// `lat_band_deg` is degrees.
struct Tolerances {
  double norm = 1e-9;
  double orth = 1e-9;
  double plane = 1e-9;
  double ang = 1e-9;
  double lat_band_deg = 1e-6;
  double canon = 1e-12;
  double merge = 1e-7;

  bool operator==(const Tolerances&) const = default;
};

inline constexpr Tolerances kDefaultTolerances{};

}  // namespace ks
