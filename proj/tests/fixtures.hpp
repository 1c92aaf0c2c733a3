#pragma once

// Shared test instances. The TT589-style instance reproduces the structure
// of the known reference scenario: a source with no direct ground-station
// link, two non-dominated 2-hop routes at SE 0.459 whose expiration times
// are 1902.86767 s and 2586.56434 s, and two non-dominated 3-hop routes at
// SE 1.000 sharing their first relay.

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "aanet/flightdata.hpp"
#include "aanet/geo.hpp"
#include "aanet/linkmodel.hpp"

namespace aanet_test {

using namespace aanet;

// All actors sit on (or just off) the equator so east chord distances are
// exact and link geometry stays analytic.
inline constexpr double kFixtureAltitudeM = 10000.0;
inline constexpr double kFixtureLon0 = 140.0;

inline double lon_for_east_chord_km(double chord_km, double altitude_m) {
  const double radius = kWgs84SemiMajorM + altitude_m;
  const double half_angle = std::asin(chord_km * 1000.0 / (2.0 * radius));
  return kFixtureLon0 + 2.0 * half_angle * kRadToDeg;
}

inline double lat_for_north_km(double north_km) { return north_km / 110.574; }

inline double pair_let(const GeodeticPosition& p1, double v1, const GeodeticPosition& p2, double v2,
                       double threshold_km) {
  const GeodeticPosition mid = geodetic_midpoint(p1, p2);
  const PlanarKinematicState s1 = project_to_plane(mid, p1, v1, 90.0);
  const PlanarKinematicState s2 = project_to_plane(mid, p2, v2, 90.0);
  return link_expiration_time(s1, s2, threshold_km);
}

/// Relay speed (eastbound, faster than the source) that makes the
/// source-relay link expire after exactly target_let seconds.
inline double solve_relay_speed(const GeodeticPosition& source_pos, double source_speed,
                                const GeodeticPosition& relay_pos, double threshold_km,
                                double target_let) {
  double lo = source_speed + 1e-6;  // barely receding, huge LET
  double hi = source_speed + 200.0;
  if (pair_let(source_pos, source_speed, relay_pos, hi, threshold_km) > target_let)
    throw std::logic_error("fixture: target LET not bracketed");
  for (int i = 0; i < 200; ++i) {
    const double mid = (lo + hi) / 2.0;
    const double let = pair_let(source_pos, source_speed, relay_pos, mid, threshold_km);
    (let > target_let ? lo : hi) = mid;
  }
  return (lo + hi) / 2.0;
}

struct Tt589Instance {
  Snapshot snapshot;
  std::string source = "TT589";
  std::string gs = "BNE";
  double pet_2hop_1 = 1902.86767;
  double pet_2hop_2 = 2586.56434;
  std::vector<std::string> path_2hop_1{"TT589", "JQ935", "BNE"};
  std::vector<std::string> path_2hop_2{"TT589", "QF2366", "BNE"};
  std::vector<std::string> path_3hop_1{"TT589", "QF2407", "QF974", "BNE"};
  std::vector<std::string> path_3hop_2{"TT589", "QF2407", "QF935", "BNE"};
};

inline Tt589Instance make_tt589_instance() {
  Tt589Instance inst;
  const double h = kFixtureAltitudeM;
  const double source_speed = 200.0;

  const GeodeticPosition source{0.0, kFixtureLon0, h};
  const GeodeticPosition r1{0.0, lon_for_east_chord_km(600.0, h), h};             // JQ935
  const GeodeticPosition r2{lat_for_north_km(40.0), lon_for_east_chord_km(610.0, h), h};  // QF2366
  const GeodeticPosition r3{0.0, lon_for_east_chord_km(450.0, h), h};             // QF2407
  const GeodeticPosition r4{0.0, lon_for_east_chord_km(750.0, h), h};             // QF974
  const GeodeticPosition r5{lat_for_north_km(60.0), lon_for_east_chord_km(720.0, h), h};  // QF935
  const GeodeticPosition gs{0.0, lon_for_east_chord_km(940.0, 0.0), 4.0};

  // Mode-1 links expire at the 740.8 km horizon; tune the recession speeds
  // so the two 2-hop routes hit the reference expiration times exactly.
  const double v_r1 = solve_relay_speed(source, source_speed, r1, 740.8, inst.pet_2hop_1);
  const double v_r2 = solve_relay_speed(source, source_speed, r2, 740.8, inst.pet_2hop_2);

  std::vector<FlightState> aircraft{
      {"TT589", source, source_speed, 90.0, 0},
      {"JQ935", r1, v_r1, 90.0, 0},
      {"QF2366", r2, v_r2, 90.0, 0},
      {"QF2407", r3, 210.0, 90.0, 0},
      {"QF974", r4, 230.0, 90.0, 0},
      {"QF935", r5, 215.0, 90.0, 0},
  };
  std::vector<GroundStation> stations{{"BNE", gs}};
  inst.snapshot = make_snapshot(64800.0, std::move(aircraft), std::move(stations));
  return inst;
}

/// Seeded random desk-scale instance: two ground stations ~300 km apart, the
/// source pinned 200 km from the first so at least one direct link exists,
/// and the remaining aircraft scattered over a ~600 km box.
inline Snapshot make_random_instance(std::uint64_t seed, int n_aircraft) {
  Rng rng(seed);
  std::vector<GroundStation> stations{
      {"GS1", {-30.0, 145.0, 10.0}},
      {"GS2", {-30.0, 148.1, 25.0}},  // ~298 km east of GS1
  };
  std::vector<FlightState> aircraft;
  aircraft.push_back(FlightState{
      "SRC", {-30.0 + 200.0 / 110.574, 145.0, 10000.0}, uniform_range(rng, 222.3, 277.7),
      uniform_range(rng, 0.0, 360.0), 0});
  for (int i = 1; i < n_aircraft; ++i) {
    aircraft.push_back(FlightState{"AC" + std::to_string(i),
                                   {uniform_range(rng, -32.5, -27.5),
                                    uniform_range(rng, 143.5, 149.5),
                                    uniform_range(rng, 9000.0, 12000.0)},
                                   uniform_range(rng, 222.3, 277.7),
                                   uniform_range(rng, 0.0, 360.0), 0});
  }
  return make_snapshot(0.0, std::move(aircraft), std::move(stations));
}

}  // namespace aanet_test
