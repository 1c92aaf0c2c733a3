#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "aanet/core.hpp"
#include "aanet/flightdata.hpp"
#include "aanet/geo.hpp"

namespace aanet {

inline constexpr double kSpeedOfLightMps = 299792458.0;

enum class LinkKind { A2A, A2G };

/// One row of the distance-based adaptive coding and modulation table.
/// threshold_km is the lower switching distance d_k of the mode; mode 0 is
/// the "no adequate link" row whose threshold is the A2A range limit.
struct AcmMode {
  int index = 0;
  std::string color;
  std::string modulation;
  double code_rate = 0.0;
  double spectral_efficiency = 0.0;  // bps/Hz
  double threshold_km = 0.0;         // d_k
};

struct AcmTable {
  std::vector<AcmMode> modes;  // k = 0..K, thresholds strictly decreasing
  double max_a2a_km = 740.8;
  double max_a2g_km = 370.4;
  double min_km = 5.56;  // flight-safety separation

  static AcmTable builtin();
  static AcmTable from_csv(std::string_view text);
  void validate() const;
};

inline AcmTable AcmTable::builtin() {
  AcmTable t;
  t.modes = {
      {0, "None", "None", 0.0, 0.0, 740.8},
      {1, "Black", "BPSK", 0.488, 0.459, 500.0},
      {2, "Magenta", "QPSK", 0.533, 1.000, 350.0},
      {3, "Green", "QPSK", 0.706, 1.322, 200.0},
      {4, "Yellow", "8-QAM", 0.642, 1.809, 110.0},
      {5, "Blue", "8-QAM", 0.780, 2.194, 40.0},
      {6, "Cyan", "16-QAM", 0.731, 2.747, 25.0},
      {7, "Red", "16-QAM", 0.853, 3.197, 5.56},
  };
  return t;
}

inline void AcmTable::validate() const {
  if (modes.size() < 2) throw format_error("ACM table needs mode 0 plus at least one usable mode");
  for (std::size_t k = 0; k < modes.size(); ++k) {
    if (modes[k].index != static_cast<int>(k))
      throw format_error("ACM table: mode indices must be 0..K in order");
    if (k >= 1 && !(modes[k].threshold_km < modes[k - 1].threshold_km))
      throw format_error("ACM table: switching thresholds must be strictly decreasing");
    if (k >= 2 && !(modes[k].spectral_efficiency > modes[k - 1].spectral_efficiency))
      throw format_error("ACM table: spectral efficiency must be strictly increasing");
  }
  if (modes.front().threshold_km != max_a2a_km)
    throw format_error("ACM table: mode-0 threshold must equal the A2A range limit");
  if (modes.back().threshold_km != min_km)
    throw format_error("ACM table: last threshold must equal the minimum separation");
}

/// CSV schema: mode,color,modulation,code_rate,se_bps_hz,threshold_km.
/// The A2A range limit is row 0's threshold; the A2G limit is half of it.
inline AcmTable AcmTable::from_csv(std::string_view text) {
  AcmTable t;
  std::size_t start = 0;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!header_seen) {
      if (detail::trim(line) != "mode,color,modulation,code_rate,se_bps_hz,threshold_km")
        throw format_error("ACM CSV: missing or wrong header on line 1");
      header_seen = true;
      continue;
    }
    if (detail::trim(line).empty()) continue;
    const auto fields = detail::split(line, ',');
    if (fields.size() != 6)
      throw format_error("ACM CSV line " + std::to_string(line_no) + ": expected 6 fields");
    AcmMode m;
    long long idx;
    if (!detail::parse_int(fields[0], idx))
      throw format_error("ACM CSV line " + std::to_string(line_no) + ": bad mode index");
    m.index = static_cast<int>(idx);
    m.color = std::string(detail::trim(fields[1]));
    m.modulation = std::string(detail::trim(fields[2]));
    if (!detail::parse_double(fields[3], m.code_rate) ||
        !detail::parse_double(fields[4], m.spectral_efficiency) ||
        !detail::parse_double(fields[5], m.threshold_km))
      throw format_error("ACM CSV line " + std::to_string(line_no) + ": bad numeric field");
    t.modes.push_back(std::move(m));
  }
  if (t.modes.empty()) throw format_error("ACM CSV: no modes defined");
  t.max_a2a_km = t.modes.front().threshold_km;
  t.max_a2g_km = t.max_a2a_km / 2.0;
  t.min_km = t.modes.back().threshold_km;
  t.validate();
  return t;
}

/// Fixed delay and queueing parameters of the link budget.
struct LinkBudgetParams {
  double speed_of_light_mps = kSpeedOfLightMps;
  double processing_delay_s = 0.005;  // per relay transmitter
  double queue_slot_delay_s = 0.010;  // D_q0, per queued packet slot
  int buffer_capacity = 10;           // N_B
  bool queue_at_source = false;       // whether the source also queues
  double let_cap_s = 86400.0;         // stands in for remaining flight time
};

/// Everything evaluated about one directed link.
struct LinkMetrics {
  double distance_m = 0.0;
  int mode_index = 0;  // 0 = no adequate link
  double spectral_efficiency = 0.0;
  double delay_s = 0.0;
  double let_s = 0.0;
  bool feasible = false;
};

/// Mode k such that d_k <= d < d_{k-1} (half-open); nullptr when the
/// distance is outside [min separation, kind-specific range limit).
inline const AcmMode* select_acm_mode(double distance_m, LinkKind kind, const AcmTable& table) {
  if (distance_m < 0.0) throw input_error("negative link distance");
  const double cap_m = (kind == LinkKind::A2G ? table.max_a2g_km : table.max_a2a_km) * 1000.0;
  if (distance_m < table.min_km * 1000.0 || distance_m >= cap_m) return nullptr;
  for (std::size_t k = 1; k < table.modes.size(); ++k) {
    if (distance_m >= table.modes[k].threshold_km * 1000.0 &&
        distance_m < table.modes[k - 1].threshold_km * 1000.0)
      return &table.modes[k];
  }
  return nullptr;
}

inline double propagation_delay(double distance_m, double speed_of_light_mps = kSpeedOfLightMps) {
  if (distance_m < 0.0) throw input_error("negative link distance");
  return distance_m / speed_of_light_mps;
}

inline double processing_delay(bool transmitter_is_source, const LinkBudgetParams& params = {}) {
  return transmitter_is_source ? 0.0 : params.processing_delay_s;
}

/// (O + 1) * D_q0 for relay transmitters; the source only queues when
/// queue_at_source is enabled.
inline double queueing_delay(int occupancy, bool transmitter_is_source,
                             const LinkBudgetParams& params = {}) {
  if (occupancy < 0 || occupancy > params.buffer_capacity)
    throw input_error("queue occupancy outside [0, N_B]: " + std::to_string(occupancy));
  if (transmitter_is_source && !params.queue_at_source) return 0.0;
  return (occupancy + 1) * params.queue_slot_delay_s;
}

inline double link_delay(double distance_m, bool transmitter_is_source, int occupancy,
                         const LinkBudgetParams& params = {}) {
  return propagation_delay(distance_m, params.speed_of_light_mps) +
         processing_delay(transmitter_is_source, params) +
         queueing_delay(occupancy, transmitter_is_source, params);
}

/// Time until the planar distance between two straight-line constant-velocity
/// tracks first reaches threshold_km. With a = vx1-vx2, b = x1-x2,
/// e = vy1-vy2, f = y1-y2 the relative track is (b+at, f+et) and the first
/// future crossing of radius d is
///   t = (-(ab+ef) + sqrt((a^2+e^2) d^2 - (af-be)^2)) / (a^2+e^2).
/// Identical velocities never cross; that case and any value beyond the cap
/// return let_cap_s.
inline double link_expiration_time(const PlanarKinematicState& s1, const PlanarKinematicState& s2,
                                   double threshold_km, double let_cap_s = 86400.0) {
  const double d = threshold_km * 1000.0;
  const double b = s1.x - s2.x;
  const double f = s1.y - s2.y;
  if (b * b + f * f >= d * d)
    throw state_error("link already at or beyond the range threshold");
  const double a = s1.vx - s2.vx;
  const double e = s1.vy - s2.vy;
  const double rel2 = a * a + e * e;
  if (rel2 == 0.0) return let_cap_s;
  const double cross = a * f - b * e;
  const double disc = rel2 * d * d - cross * cross;
  if (disc <= 0.0) return let_cap_s;  // relative track never reaches the radius
  const double t = (-(a * b + e * f) + std::sqrt(disc)) / rel2;
  return t < let_cap_s ? t : let_cap_s;
}

/// Uniform view over aircraft and ground stations for link evaluation.
struct Node {
  std::string id;
  GeodeticPosition position;
  double ground_speed_mps = 0.0;
  double heading_deg = 0.0;
  int queue_occupancy = 0;
  bool is_ground_station = false;
};

inline Node make_node(const FlightState& s) {
  return Node{s.flight_id, s.position, s.ground_speed_mps, s.heading_deg, s.queue_occupancy, false};
}

inline Node make_node(const GroundStation& g) {
  return Node{g.station_id, g.position, 0.0, 0.0, 0, true};
}

/// Full evaluation of the directed link tx -> rx: slant distance, ACM mode,
/// delay, and the expiration time of the selected mode. The LET threshold is
/// the selected mode's upper switching distance d_{k-1}; its geometry lives
/// in the tangent plane at the midpoint of the two endpoints. A link is
/// feasible when a mode exists and the receiving node's queue is not full.
inline LinkMetrics evaluate_link(const Node& tx, const Node& rx, bool transmitter_is_source,
                                 const LinkBudgetParams& params, const AcmTable& table) {
  if (tx.is_ground_station && rx.is_ground_station)
    throw input_error("link between two ground stations");
  LinkMetrics m;
  m.distance_m = slant_distance(geodetic_to_ecef(tx.position), geodetic_to_ecef(rx.position));
  const LinkKind kind =
      (tx.is_ground_station || rx.is_ground_station) ? LinkKind::A2G : LinkKind::A2A;
  const AcmMode* mode = select_acm_mode(m.distance_m, kind, table);
  m.delay_s = link_delay(m.distance_m, transmitter_is_source, tx.queue_occupancy, params);
  if (mode != nullptr) {
    m.mode_index = mode->index;
    m.spectral_efficiency = mode->spectral_efficiency;
    const double threshold_km = table.modes[mode->index - 1].threshold_km;
    const GeodeticPosition mid = geodetic_midpoint(tx.position, rx.position);
    const PlanarKinematicState p1 =
        project_to_plane(mid, tx.position, tx.ground_speed_mps, tx.heading_deg);
    const PlanarKinematicState p2 =
        project_to_plane(mid, rx.position, rx.ground_speed_mps, rx.heading_deg);
    m.let_s = link_expiration_time(p1, p2, threshold_km, params.let_cap_s);
    m.feasible = rx.queue_occupancy < params.buffer_capacity;
  }
  return m;
}

}  // namespace aanet
