#pragma once

#include <cmath>
#include <string>

#include "aanet/core.hpp"

namespace aanet {

// WGS-84 ellipsoid, the frame ADS-B positions are reported in.
inline constexpr double kWgs84SemiMajorM = 6378137.0;
inline constexpr double kWgs84Flattening = 1.0 / 298.257223563;
inline constexpr double kWgs84SemiMinorM = kWgs84SemiMajorM * (1.0 - kWgs84Flattening);
inline constexpr double kWgs84Ecc2 = kWgs84Flattening * (2.0 - kWgs84Flattening);

inline constexpr double kMeanEarthRadiusM = 6371000.0;

/// Tangent-plane projections are only trusted this far from their reference.
inline constexpr double kTangentPlaneValidityM = 2000e3;

inline constexpr double kDegToRad = 3.14159265358979323846 / 180.0;
inline constexpr double kRadToDeg = 180.0 / 3.14159265358979323846;

struct GeodeticPosition {
  double latitude_deg = 0.0;   // [-90, 90]
  double longitude_deg = 0.0;  // [-180, 180)
  double altitude_m = 0.0;     // >= -500
};

struct EcefPosition {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

/// Position and velocity in a local east-north tangent plane.
struct PlanarKinematicState {
  double x = 0.0;   // east offset, m
  double y = 0.0;   // north offset, m
  double vx = 0.0;  // east velocity, m/s
  double vy = 0.0;  // north velocity, m/s
};

inline double normalize_longitude(double lon_deg) {
  double l = std::fmod(lon_deg + 180.0, 360.0);
  if (l < 0.0) l += 360.0;
  return l - 180.0;
}

inline GeodeticPosition make_geodetic(double lat_deg, double lon_deg, double alt_m) {
  if (!(lat_deg >= -90.0 && lat_deg <= 90.0))
    throw input_error("latitude out of range [-90, 90]: " + detail::format_double(lat_deg));
  if (!std::isfinite(lon_deg))
    throw input_error("longitude is not finite");
  if (!(alt_m >= -500.0))
    throw input_error("altitude below -500 m: " + detail::format_double(alt_m));
  return GeodeticPosition{lat_deg, normalize_longitude(lon_deg), alt_m};
}

inline EcefPosition geodetic_to_ecef(const GeodeticPosition& p) {
  if (!(p.latitude_deg >= -90.0 && p.latitude_deg <= 90.0))
    throw input_error("latitude out of range [-90, 90]: " + detail::format_double(p.latitude_deg));
  if (!(p.longitude_deg >= -180.0 && p.longitude_deg < 180.0))
    throw input_error("longitude out of range [-180, 180): " + detail::format_double(p.longitude_deg));
  const double lat = p.latitude_deg * kDegToRad;
  const double lon = p.longitude_deg * kDegToRad;
  const double sin_lat = std::sin(lat);
  const double cos_lat = std::cos(lat);
  const double n = kWgs84SemiMajorM / std::sqrt(1.0 - kWgs84Ecc2 * sin_lat * sin_lat);
  return EcefPosition{(n + p.altitude_m) * cos_lat * std::cos(lon),
                      (n + p.altitude_m) * cos_lat * std::sin(lon),
                      (n * (1.0 - kWgs84Ecc2) + p.altitude_m) * sin_lat};
}

inline double slant_distance(const EcefPosition& p1, const EcefPosition& p2) {
  const double dx = p1.x - p2.x;
  const double dy = p1.y - p2.y;
  const double dz = p1.z - p2.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

inline double slant_distance(const GeodeticPosition& g1, const GeodeticPosition& g2) {
  return slant_distance(geodetic_to_ecef(g1), geodetic_to_ecef(g2));
}

/// Haversine on the mean sphere; used only for tangent-plane validity checks.
inline double great_circle_distance(const GeodeticPosition& g1, const GeodeticPosition& g2) {
  const double lat1 = g1.latitude_deg * kDegToRad;
  const double lat2 = g2.latitude_deg * kDegToRad;
  const double dlat = lat2 - lat1;
  const double dlon = (g2.longitude_deg - g1.longitude_deg) * kDegToRad;
  const double s1 = std::sin(dlat / 2.0);
  const double s2 = std::sin(dlon / 2.0);
  const double h = s1 * s1 + std::cos(lat1) * std::cos(lat2) * s2 * s2;
  return 2.0 * kMeanEarthRadiusM * std::asin(std::min(1.0, std::sqrt(h)));
}

/// Componentwise midpoint; longitude interpolated along the shorter arc.
inline GeodeticPosition geodetic_midpoint(const GeodeticPosition& g1, const GeodeticPosition& g2) {
  double dlon = normalize_longitude(g2.longitude_deg - g1.longitude_deg);
  return GeodeticPosition{(g1.latitude_deg + g2.latitude_deg) / 2.0,
                          normalize_longitude(g1.longitude_deg + dlon / 2.0),
                          (g1.altitude_m + g2.altitude_m) / 2.0};
}

/// East-north offsets of `position` in the tangent plane at `reference`,
/// with velocity components resolved from the compass heading (degrees
/// clockwise from true north): vx = v sin(heading), vy = v cos(heading).
inline PlanarKinematicState project_to_plane(const GeodeticPosition& reference,
                                             const GeodeticPosition& position,
                                             double ground_speed_mps,
                                             double heading_deg) {
  if (great_circle_distance(reference, position) > kTangentPlaneValidityM)
    throw input_error("position beyond tangent-plane validity radius");
  const EcefPosition ref = geodetic_to_ecef(reference);
  const EcefPosition pos = geodetic_to_ecef(position);
  const double dx = pos.x - ref.x;
  const double dy = pos.y - ref.y;
  const double dz = pos.z - ref.z;
  const double lat = reference.latitude_deg * kDegToRad;
  const double lon = reference.longitude_deg * kDegToRad;
  const double sin_lat = std::sin(lat), cos_lat = std::cos(lat);
  const double sin_lon = std::sin(lon), cos_lon = std::cos(lon);
  const double east = -sin_lon * dx + cos_lon * dy;
  const double north = -sin_lat * cos_lon * dx - sin_lat * sin_lon * dy + cos_lat * dz;
  const double heading = heading_deg * kDegToRad;
  return PlanarKinematicState{east, north,
                              ground_speed_mps * std::sin(heading),
                              ground_speed_mps * std::cos(heading)};
}

inline double planar_distance(const PlanarKinematicState& a, const PlanarKinematicState& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

}  // namespace aanet
