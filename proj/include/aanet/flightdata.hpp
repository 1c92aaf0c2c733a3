#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "aanet/core.hpp"
#include "aanet/geo.hpp"

namespace aanet {

inline constexpr std::string_view kFlightCsvHeader =
    "timestamp_utc_s,flight_id,lat_deg,lon_deg,alt_m,ground_speed_mps,heading_deg";
inline constexpr std::string_view kGroundStationCsvHeader = "station_id,lat_deg,lon_deg,alt_m";

/// One ADS-B style position report.
struct FlightRecord {
  double timestamp_utc_s = 0.0;
  std::string flight_id;
  GeodeticPosition position;
  double ground_speed_mps = 0.0;
  double heading_deg = 0.0;  // compass degrees, [0, 360)
};

/// An airborne node frozen at the snapshot instant.
struct FlightState {
  std::string flight_id;
  GeodeticPosition position;
  double ground_speed_mps = 0.0;
  double heading_deg = 0.0;
  int queue_occupancy = 0;  // packets ahead in the transmit queue
};

/// Airport-sited gateway; velocity is zero by definition.
struct GroundStation {
  std::string station_id;
  GeodeticPosition position;
};

/// Aircraft space plus ground-station space at one evaluation time.
/// Both vectors are sorted by id and ids are unique across the two.
struct Snapshot {
  double evaluation_time_s = 0.0;
  std::vector<FlightState> aircraft;
  std::vector<GroundStation> ground_stations;
};

inline PlanarKinematicState project_to_plane(const GeodeticPosition& reference, const FlightState& s) {
  return project_to_plane(reference, s.position, s.ground_speed_mps, s.heading_deg);
}

inline Snapshot make_snapshot(double evaluation_time_s, std::vector<FlightState> aircraft,
                              std::vector<GroundStation> stations) {
  std::sort(aircraft.begin(), aircraft.end(),
            [](const FlightState& a, const FlightState& b) { return a.flight_id < b.flight_id; });
  std::sort(stations.begin(), stations.end(),
            [](const GroundStation& a, const GroundStation& b) { return a.station_id < b.station_id; });
  for (std::size_t i = 1; i < aircraft.size(); ++i)
    if (aircraft[i].flight_id == aircraft[i - 1].flight_id)
      throw input_error("duplicate flight id in snapshot: " + aircraft[i].flight_id);
  for (std::size_t i = 1; i < stations.size(); ++i)
    if (stations[i].station_id == stations[i - 1].station_id)
      throw input_error("duplicate station id in snapshot: " + stations[i].station_id);
  for (const auto& a : aircraft)
    for (const auto& g : stations)
      if (a.flight_id == g.station_id)
        throw input_error("id used for both aircraft and ground station: " + a.flight_id);
  return Snapshot{evaluation_time_s, std::move(aircraft), std::move(stations)};
}

struct RowError {
  std::size_t line = 0;  // 1-based line number in the input
  std::string field;
  std::string message;
};

struct ParseResult {
  std::vector<FlightRecord> records;
  std::vector<RowError> row_errors;
};

namespace detail {

inline std::optional<RowError> parse_flight_row(std::string_view line, std::size_t line_no,
                                                FlightRecord& out) {
  const auto fields = split(line, ',');
  if (fields.size() != 7)
    return RowError{line_no, "", "expected 7 fields, got " + std::to_string(fields.size())};
  double ts, lat, lon, alt, speed, heading;
  if (!parse_double(fields[0], ts)) return RowError{line_no, "timestamp_utc_s", "not a number"};
  const std::string_view id = trim(fields[1]);
  if (id.empty()) return RowError{line_no, "flight_id", "empty"};
  if (!parse_double(fields[2], lat)) return RowError{line_no, "lat_deg", "not a number"};
  if (!parse_double(fields[3], lon)) return RowError{line_no, "lon_deg", "not a number"};
  if (!parse_double(fields[4], alt)) return RowError{line_no, "alt_m", "not a number"};
  if (!parse_double(fields[5], speed)) return RowError{line_no, "ground_speed_mps", "not a number"};
  if (!parse_double(fields[6], heading)) return RowError{line_no, "heading_deg", "not a number"};
  if (lat < -90.0 || lat > 90.0) return RowError{line_no, "lat_deg", "out of range [-90, 90]"};
  if (lon < -180.0 || lon >= 180.0) return RowError{line_no, "lon_deg", "out of range [-180, 180)"};
  if (alt < -500.0) return RowError{line_no, "alt_m", "below -500 m"};
  if (speed < 0.0) return RowError{line_no, "ground_speed_mps", "negative"};
  if (heading < 0.0 || heading >= 360.0) return RowError{line_no, "heading_deg", "out of range [0, 360)"};
  out = FlightRecord{ts, std::string(id), GeodeticPosition{lat, lon, alt}, speed, heading};
  return std::nullopt;
}

}  // namespace detail

/// Parses the flight CSV. Malformed rows are collected (with line numbers)
/// rather than aborting the parse, unless more than 10% of data rows fail.
inline ParseResult parse_flight_records(std::string_view text) {
  ParseResult result;
  std::size_t line_no = 0;
  std::size_t start = 0;
  bool header_seen = false;
  std::size_t data_rows = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!header_seen) {
      if (detail::trim(line) != kFlightCsvHeader)
        throw format_error("flight CSV: missing or wrong header on line 1");
      header_seen = true;
      continue;
    }
    if (detail::trim(line).empty()) continue;
    ++data_rows;
    FlightRecord rec;
    if (auto err = detail::parse_flight_row(line, line_no, rec))
      result.row_errors.push_back(std::move(*err));
    else
      result.records.push_back(std::move(rec));
  }
  if (!header_seen) throw format_error("flight CSV: empty input");
  if (data_rows > 0 && result.row_errors.size() * 10 > data_rows)
    throw format_error("flight CSV: " + std::to_string(result.row_errors.size()) + " of " +
                       std::to_string(data_rows) + " rows malformed (over 10%)");
  return result;
}

/// Ground-station config CSV. Duplicate station ids and missing coordinates
/// are configuration errors, as is an empty station list.
inline std::vector<GroundStation> load_ground_stations(std::string_view text) {
  std::vector<GroundStation> stations;
  std::size_t line_no = 0;
  std::size_t start = 0;
  bool header_seen = false;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!header_seen) {
      if (detail::trim(line) != kGroundStationCsvHeader)
        throw format_error("ground-station CSV: missing or wrong header on line 1");
      header_seen = true;
      continue;
    }
    if (detail::trim(line).empty()) continue;
    const auto fields = detail::split(line, ',');
    if (fields.size() != 4)
      throw format_error("ground-station CSV line " + std::to_string(line_no) +
                         ": expected 4 fields");
    const std::string id{detail::trim(fields[0])};
    if (id.empty())
      throw format_error("ground-station CSV line " + std::to_string(line_no) + ": empty station_id");
    double lat, lon, alt;
    if (!detail::parse_double(fields[1], lat) || !detail::parse_double(fields[2], lon) ||
        !detail::parse_double(fields[3], alt))
      throw format_error("ground-station CSV line " + std::to_string(line_no) +
                         ": missing or bad coordinate for " + id);
    for (const auto& s : stations)
      if (s.station_id == id)
        throw format_error("ground-station CSV: duplicate station id " + id);
    stations.push_back(GroundStation{id, make_geodetic(lat, lon, alt)});
  }
  if (stations.empty()) throw format_error("ground-station CSV: no stations defined");
  return stations;
}

/// Queue occupancy source, injected because recorded data carries none.
using OccupancyProvider = std::function<int(const std::string& flight_id, double t)>;

inline OccupancyProvider zero_occupancy() {
  return [](const std::string&, double) { return 0; };
}

inline constexpr double kDefaultSnapshotWindowS = 300.0;
inline constexpr double kDefaultMinAltitudeM = 1000.0;

/// For each flight, the latest record within [t - window, t] at or above
/// min_altitude becomes a FlightState. Stale or low flights drop out; an
/// empty airspace is a valid result.
inline Snapshot build_snapshot(const std::vector<FlightRecord>& records, double t, double window,
                               double min_altitude_m, const OccupancyProvider& occupancy) {
  if (!(window > 0.0)) throw input_error("snapshot window must be positive");
  std::map<std::string, const FlightRecord*> latest;
  for (const auto& rec : records) {
    if (rec.timestamp_utc_s < t - window || rec.timestamp_utc_s > t) continue;
    if (rec.position.altitude_m < min_altitude_m) continue;
    auto [it, inserted] = latest.try_emplace(rec.flight_id, &rec);
    if (!inserted && rec.timestamp_utc_s >= it->second->timestamp_utc_s) it->second = &rec;
  }
  std::vector<FlightState> aircraft;
  aircraft.reserve(latest.size());
  for (const auto& [id, rec] : latest)
    aircraft.push_back(FlightState{id, rec->position, rec->ground_speed_mps, rec->heading_deg,
                                   occupancy(id, t)});
  return Snapshot{t, std::move(aircraft), {}};
}

inline Snapshot build_snapshot(const std::vector<FlightRecord>& records,
                               std::vector<GroundStation> stations, double t, double window,
                               double min_altitude_m, const OccupancyProvider& occupancy) {
  Snapshot snap = build_snapshot(records, t, window, min_altitude_m, occupancy);
  return make_snapshot(snap.evaluation_time_s, std::move(snap.aircraft), std::move(stations));
}

// --- synthetic dataset -------------------------------------------------

struct RegionCity {
  std::string name;
  double latitude_deg = 0.0;
  double longitude_deg = 0.0;
};

struct SyntheticRegion {
  std::vector<RegionCity> cities;

  static SyntheticRegion australia() {
    return SyntheticRegion{{
        {"PER", -31.9403, 115.9672},
        {"MEL", -37.6733, 144.8433},
        {"SYD", -33.9461, 151.1772},
        {"BNE", -27.3842, 153.1175},
        {"DRW", -12.4147, 130.8767},
        {"ADL", -34.9450, 138.5310},
        {"CBR", -35.3069, 149.1950},
        {"OOL", -28.1644, 153.5050},
        {"CNS", -16.8858, 145.7550},
        {"HBA", -42.8361, 147.5100},
    }};
  }
};

namespace detail {

struct UnitVec3 {
  double x, y, z;
};

inline UnitVec3 unit_from_latlon(double lat_deg, double lon_deg) {
  const double lat = lat_deg * kDegToRad, lon = lon_deg * kDegToRad;
  return UnitVec3{std::cos(lat) * std::cos(lon), std::cos(lat) * std::sin(lon), std::sin(lat)};
}

/// Spherical linear interpolation between two unit vectors.
inline UnitVec3 slerp(const UnitVec3& a, const UnitVec3& b, double angle, double f) {
  const double sa = std::sin(angle);
  const double wa = std::sin((1.0 - f) * angle) / sa;
  const double wb = std::sin(f * angle) / sa;
  return UnitVec3{wa * a.x + wb * b.x, wa * a.y + wb * b.y, wa * a.z + wb * b.z};
}

/// Initial great-circle bearing from (lat1, lon1) towards (lat2, lon2),
/// compass degrees in [0, 360).
inline double initial_bearing_deg(double lat1_deg, double lon1_deg, double lat2_deg, double lon2_deg) {
  const double lat1 = lat1_deg * kDegToRad, lat2 = lat2_deg * kDegToRad;
  const double dlon = (lon2_deg - lon1_deg) * kDegToRad;
  const double y = std::sin(dlon) * std::cos(lat2);
  const double x = std::cos(lat1) * std::sin(lat2) - std::sin(lat1) * std::cos(lat2) * std::cos(dlon);
  double b = std::atan2(y, x) * kRadToDeg;
  if (b < 0.0) b += 360.0;
  if (b >= 360.0) b -= 360.0;
  return b;
}

}  // namespace detail

inline constexpr double kSyntheticSampleIntervalS = 60.0;
inline constexpr double kMinCruiseSpeedMps = 800.0 * 1000.0 / 3600.0;   // 800 km/h
inline constexpr double kMaxCruiseSpeedMps = 1000.0 * 1000.0 / 3600.0;  // 1000 km/h

/// Deterministic synthetic stand-in for a day of recorded traffic: each
/// flight flies a great-circle leg between two distinct region cities at a
/// constant cruise speed and altitude, sampled every 60 s.
inline std::vector<FlightRecord> generate_synthetic_dataset(std::uint64_t seed, int n_flights,
                                                            double duration_s,
                                                            const SyntheticRegion& region) {
  if (n_flights < 1) throw input_error("n_flights must be >= 1");
  if (region.cities.size() < 2) throw input_error("synthetic region needs at least 2 cities");
  static const char* kAirlines[] = {"QF", "JQ", "TT", "VA", "ZL"};
  Rng rng(seed);
  std::vector<FlightRecord> records;
  for (int i = 0; i < n_flights; ++i) {
    const std::size_t from = uniform_index(rng, region.cities.size());
    std::size_t to = uniform_index(rng, region.cities.size() - 1);
    if (to >= from) ++to;
    const RegionCity& a = region.cities[from];
    const RegionCity& b = region.cities[to];
    const double speed = uniform_range(rng, kMinCruiseSpeedMps, kMaxCruiseSpeedMps);
    const double altitude = uniform_range(rng, 9000.0, 12000.0);
    const double depart = uniform_range(rng, 0.0, duration_s * 0.75);
    const std::string id = std::string(kAirlines[uniform_index(rng, 5)]) + std::to_string(100 + i);

    const auto ua = detail::unit_from_latlon(a.latitude_deg, a.longitude_deg);
    const auto ub = detail::unit_from_latlon(b.latitude_deg, b.longitude_deg);
    const double dot = std::clamp(ua.x * ub.x + ua.y * ub.y + ua.z * ub.z, -1.0, 1.0);
    const double angle = std::acos(dot);
    const double leg_length = angle * kMeanEarthRadiusM;
    const double flight_time = leg_length / speed;

    for (double t = depart; t <= depart + flight_time && t <= duration_s;
         t += kSyntheticSampleIntervalS) {
      const double f = (t - depart) / flight_time;
      const auto u = detail::slerp(ua, ub, angle, f);
      const double lat = std::asin(std::clamp(u.z, -1.0, 1.0)) * kRadToDeg;
      const double lon = std::atan2(u.y, u.x) * kRadToDeg;
      const double heading = detail::initial_bearing_deg(lat, lon, b.latitude_deg, b.longitude_deg);
      records.push_back(FlightRecord{t, id, GeodeticPosition{lat, normalize_longitude(lon), altitude},
                                     speed, heading});
    }
  }
  std::stable_sort(records.begin(), records.end(),
                   [](const FlightRecord& x, const FlightRecord& y) {
                     return x.timestamp_utc_s < y.timestamp_utc_s;
                   });
  return records;
}

inline std::string write_flight_csv(const std::vector<FlightRecord>& records) {
  std::string out{kFlightCsvHeader};
  out += '\n';
  for (const auto& r : records) {
    out += detail::format_double(r.timestamp_utc_s);
    out += ',';
    out += r.flight_id;
    out += ',';
    out += detail::format_double(r.position.latitude_deg);
    out += ',';
    out += detail::format_double(r.position.longitude_deg);
    out += ',';
    out += detail::format_double(r.position.altitude_m);
    out += ',';
    out += detail::format_double(r.ground_speed_mps);
    out += ',';
    out += detail::format_double(r.heading_deg);
    out += '\n';
  }
  return out;
}

}  // namespace aanet
