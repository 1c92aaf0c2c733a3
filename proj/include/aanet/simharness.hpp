#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <string>
#include <thread>
#include <vector>

#include "aanet/core.hpp"
#include "aanet/edmoga.hpp"
#include "aanet/flightdata.hpp"
#include "aanet/pathobjectives.hpp"

namespace aanet {

/// Network-layer aggregates for one hour of the day. Index h-2 of the
/// "up to h" arrays holds the value for hop budget h in {2, 3, 4}.
struct HourlyMetrics {
  int hour = 0;
  int flights_in_air = 0;
  std::array<int, 4> reach_exact{0, 0, 0, 0};  // 1..4 hops
  std::array<int, 3> reach_upto{0, 0, 0};
  std::array<double, 3> avg_se_upto{0.0, 0.0, 0.0};
  std::array<double, 3> avg_delay_upto{0.0, 0.0, 0.0};
  std::array<double, 3> avg_pet_upto{0.0, 0.0, 0.0};
};

/// How one representative solution is picked from a flight's front when
/// averaging across flights.
enum class RepresentativePolicy { MaxSe, MinDelay, MaxPet };

namespace detail {

inline bool preferred(const ObjectiveVector& a, const ObjectiveVector& b,
                      RepresentativePolicy policy) {
  switch (policy) {
    case RepresentativePolicy::MinDelay:
      if (a.delay_s != b.delay_s) return a.delay_s < b.delay_s;
      if (a.se_bps_hz != b.se_bps_hz) return a.se_bps_hz > b.se_bps_hz;
      return a.pet_s > b.pet_s;
    case RepresentativePolicy::MaxPet:
      if (a.pet_s != b.pet_s) return a.pet_s > b.pet_s;
      if (a.se_bps_hz != b.se_bps_hz) return a.se_bps_hz > b.se_bps_hz;
      return a.delay_s < b.delay_s;
    case RepresentativePolicy::MaxSe:
    default:
      if (a.se_bps_hz != b.se_bps_hz) return a.se_bps_hz > b.se_bps_hz;
      if (a.delay_s != b.delay_s) return a.delay_s < b.delay_s;
      return a.pet_s > b.pet_s;
  }
}

inline const RoutedSolution* select_representative(const std::vector<RoutedSolution>& front,
                                                   RepresentativePolicy policy) {
  const RoutedSolution* best = nullptr;
  for (const auto& s : front) {
    if (best == nullptr || preferred(s.objective, best->objective, policy) ||
        (!preferred(best->objective, s.objective, policy) && s.path < best->path))
      best = &s;
  }
  return best;
}

}  // namespace detail

struct FlightAverages {
  int flights_with_path = 0;
  double avg_se = 0.0;
  double avg_delay = 0.0;
  double avg_pet = 0.0;
};

/// One representative solution per flight (default policy: max SE, then min
/// delay, then max PET), averaged over the flights that have at least one
/// feasible path.
inline FlightAverages aggregate_flight_metrics(
    const std::vector<std::vector<RoutedSolution>>& per_flight_fronts,
    RepresentativePolicy policy = RepresentativePolicy::MaxSe) {
  FlightAverages out;
  double se = 0.0, delay = 0.0, pet = 0.0;
  for (const auto& front : per_flight_fronts) {
    const RoutedSolution* rep = detail::select_representative(front, policy);
    if (rep == nullptr) continue;
    ++out.flights_with_path;
    se += rep->objective.se_bps_hz;
    delay += rep->objective.delay_s;
    pet += rep->objective.pet_s;
  }
  if (out.flights_with_path > 0) {
    out.avg_se = se / out.flights_with_path;
    out.avg_delay = delay / out.flights_with_path;
    out.avg_pet = pet / out.flights_with_path;
  }
  return out;
}

struct SweepOptions {
  double snapshot_window_s = kDefaultSnapshotWindowS;
  double min_altitude_m = kDefaultMinAltitudeM;
  int jobs = 1;
  RepresentativePolicy policy = RepresentativePolicy::MaxSe;
};

namespace detail {

/// Per-flight optimization outcome at one hour: the single-hop front plus
/// the final archive of each hop-budget run (2, 3, 4).
struct FlightOutcome {
  std::string flight_id;
  std::vector<RoutedSolution> single_hop;
  std::array<std::vector<RoutedSolution>, 3> budget_archives;

  std::vector<RoutedSolution> merged_up_to(int max_budget) const {
    std::vector<RoutedSolution> pool = single_hop;
    for (int b = 2; b <= max_budget; ++b) {
      const auto& arch = budget_archives[b - 2];
      pool.insert(pool.end(), arch.begin(), arch.end());
    }
    if (pool.empty()) return pool;
    return pareto_filter(pool);
  }

  bool reachable_up_to(int max_budget) const {
    if (!single_hop.empty()) return true;
    for (int b = 2; b <= max_budget; ++b)
      if (!budget_archives[b - 2].empty()) return true;
    return false;
  }
};

inline FlightOutcome optimize_flight(const PathEvaluator& eval, const Snapshot& snapshot,
                                     const std::string& flight_id, const OptimizerConfig& config,
                                     std::uint64_t flight_seed) {
  FlightOutcome out;
  out.flight_id = flight_id;
  out.single_hop = enumerate_single_hop(eval, flight_id);
  for (int budget = 2; budget <= 4; ++budget) {
    BudgetRunResult br = run_budget(eval, snapshot, flight_id, budget, config,
                                    seed_mix(flight_seed, static_cast<std::uint64_t>(budget)));
    out.budget_archives[budget - 2] = std::move(br.archive);
  }
  return out;
}

}  // namespace detail

/// The 24-hour experiment: build one snapshot per hour, run the optimizer
/// for every airborne flight as source (hop budgets 2..4 plus the direct
/// link), and aggregate reachability counts and per-budget averages. Flights
/// are processed with per-flight seeds derived from the config seed, so the
/// result is independent of processing order and of the job count.
inline std::vector<HourlyMetrics> run_hourly_experiment(const std::vector<FlightRecord>& records,
                                                        const std::vector<GroundStation>& stations,
                                                        const OptimizerConfig& config,
                                                        const LinkBudgetParams& params,
                                                        const AcmTable& table,
                                                        const SweepOptions& options = {}) {
  if (records.empty()) throw input_error("empty flight dataset");
  config.validate();
  table.validate();

  double day_start = records.front().timestamp_utc_s;
  for (const auto& r : records) day_start = std::min(day_start, r.timestamp_utc_s);
  day_start = std::floor(day_start / 86400.0) * 86400.0;

  struct Task {
    int hour;
    std::size_t flight_index;
  };
  std::vector<Snapshot> snapshots;
  std::vector<PathEvaluator> evaluators;
  std::vector<Task> tasks;
  snapshots.reserve(24);
  evaluators.reserve(24);
  for (int hour = 0; hour < 24; ++hour) {
    snapshots.push_back(build_snapshot(records, stations, day_start + hour * 3600.0,
                                       options.snapshot_window_s, options.min_altitude_m,
                                       zero_occupancy()));
    evaluators.emplace_back(snapshots.back(), params, table);
    for (std::size_t i = 0; i < snapshots.back().aircraft.size(); ++i)
      tasks.push_back(Task{hour, i});
  }

  std::vector<detail::FlightOutcome> outcomes(tasks.size());
  const auto worker = [&](std::atomic<std::size_t>& next) {
    for (std::size_t t = next.fetch_add(1); t < tasks.size(); t = next.fetch_add(1)) {
      const Task& task = tasks[t];
      const Snapshot& snap = snapshots[task.hour];
      const std::string& id = snap.aircraft[task.flight_index].flight_id;
      const std::uint64_t seed =
          seed_mix(config.rng_seed, id, static_cast<std::uint64_t>(task.hour));
      outcomes[t] = detail::optimize_flight(evaluators[task.hour], snap, id, config, seed);
    }
  };
  const int jobs = std::max(1, options.jobs);
  if (jobs == 1) {
    std::atomic<std::size_t> next{0};
    worker(next);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back([&] { worker(next); });
    for (auto& th : pool) th.join();
  }

  std::vector<HourlyMetrics> metrics(24);
  std::size_t cursor = 0;
  for (int hour = 0; hour < 24; ++hour) {
    HourlyMetrics& m = metrics[hour];
    m.hour = hour;
    m.flights_in_air = static_cast<int>(snapshots[hour].aircraft.size());
    std::array<std::vector<std::vector<RoutedSolution>>, 3> fronts_upto;
    for (std::size_t i = 0; i < snapshots[hour].aircraft.size(); ++i, ++cursor) {
      const detail::FlightOutcome& out = outcomes[cursor];
      const std::vector<RoutedSolution> merged_full = out.merged_up_to(4);
      for (int h = 1; h <= 4; ++h) {
        const bool has_h = std::any_of(merged_full.begin(), merged_full.end(),
                                       [&](const RoutedSolution& s) { return s.path.hops() == h; });
        if (has_h) ++m.reach_exact[h - 1];
      }
      for (int h = 2; h <= 4; ++h) {
        if (out.reachable_up_to(h)) ++m.reach_upto[h - 2];
        auto merged = out.merged_up_to(h);
        if (!merged.empty()) fronts_upto[h - 2].push_back(std::move(merged));
      }
    }
    for (int h = 2; h <= 4; ++h) {
      const FlightAverages avg = aggregate_flight_metrics(fronts_upto[h - 2], options.policy);
      m.avg_se_upto[h - 2] = avg.avg_se;
      m.avg_delay_upto[h - 2] = avg.avg_delay;
      m.avg_pet_upto[h - 2] = avg.avg_pet;
    }
  }
  return metrics;
}

inline constexpr std::string_view kHourlyCsvHeader =
    "hour,flights_in_air,reach_1,reach_2,reach_3,reach_4,reach_upto2,reach_upto3,reach_upto4,"
    "avg_se_upto2,avg_se_upto3,avg_se_upto4,avg_delay_upto2,avg_delay_upto3,avg_delay_upto4,"
    "avg_pet_upto2,avg_pet_upto3,avg_pet_upto4";

inline std::string format_hourly_csv(const std::vector<HourlyMetrics>& metrics) {
  std::vector<const HourlyMetrics*> rows;
  rows.reserve(metrics.size());
  for (const auto& m : metrics) rows.push_back(&m);
  std::sort(rows.begin(), rows.end(),
            [](const HourlyMetrics* a, const HourlyMetrics* b) { return a->hour < b->hour; });
  std::string out{kHourlyCsvHeader};
  out += '\n';
  for (const HourlyMetrics* m : rows) {
    out += std::to_string(m->hour);
    out += ',';
    out += std::to_string(m->flights_in_air);
    for (int h = 0; h < 4; ++h) {
      out += ',';
      out += std::to_string(m->reach_exact[h]);
    }
    for (int h = 0; h < 3; ++h) {
      out += ',';
      out += std::to_string(m->reach_upto[h]);
    }
    for (const auto& arr : {m->avg_se_upto, m->avg_delay_upto, m->avg_pet_upto})
      for (int h = 0; h < 3; ++h) {
        out += ',';
        out += detail::format_double(arr[h]);
      }
    out += '\n';
  }
  return out;
}

/// Byte-stable CSV per the fixed header, rows sorted by hour, LF endings.
inline void write_results(const std::vector<HourlyMetrics>& metrics, const std::string& path) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw input_error("cannot open output file: " + path);
  const std::string body = format_hourly_csv(metrics);
  file.write(body.data(), static_cast<std::streamsize>(body.size()));
  if (!file) throw input_error("failed writing output file: " + path);
}

}  // namespace aanet
