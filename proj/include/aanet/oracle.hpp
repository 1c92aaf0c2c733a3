#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "aanet/core.hpp"
#include "aanet/flightdata.hpp"
#include "aanet/pathobjectives.hpp"

namespace aanet::oracle {

/// Refuses exhaustive enumeration beyond this size unless overridden.
inline constexpr std::size_t kMaxAircraftForEnumeration = 14;
inline constexpr int kMaxHopsForEnumeration = 4;

/// How well a result archive covers the exhaustively computed front.
struct CoverageReport {
  std::size_t exact_front_size = 0;
  std::size_t archive_size = 0;
  double fraction_covered = 0.0;       // front points matched or eps-dominated
  double generational_distance = 0.0;  // mean normalized distance archive -> front
};

/// Every loop-free path source -> relays -> ground station with at most
/// max_hops links, with no feasibility filtering.
inline std::vector<RoutePath> enumerate_all_paths(const Snapshot& snapshot,
                                                  const std::string& source_id, int max_hops,
                                                  bool allow_large = false) {
  if (max_hops < 1 || max_hops > kMaxHops)
    throw input_error("max_hops must be in {1.." + std::to_string(kMaxHops) + "}");
  if (!allow_large && (snapshot.aircraft.size() > kMaxAircraftForEnumeration ||
                       max_hops > kMaxHopsForEnumeration))
    throw size_error("instance too large for exhaustive enumeration (override to force)");
  bool source_found = false;
  std::vector<std::string> others;
  for (const auto& a : snapshot.aircraft) {
    if (a.flight_id == source_id)
      source_found = true;
    else
      others.push_back(a.flight_id);
  }
  if (!source_found) throw resolution_error("unknown source id: " + source_id);

  std::vector<RoutePath> paths;
  std::vector<std::string> relays;
  std::vector<bool> used(others.size(), false);

  const auto emit = [&] {
    for (const auto& gs : snapshot.ground_stations) {
      std::vector<std::string> nodes;
      nodes.reserve(relays.size() + 2);
      nodes.push_back(source_id);
      nodes.insert(nodes.end(), relays.begin(), relays.end());
      nodes.push_back(gs.station_id);
      paths.push_back(RoutePath{std::move(nodes)});
    }
  };

  const auto extend = [&](auto&& self) -> void {
    emit();
    if (static_cast<int>(relays.size()) + 1 >= max_hops) return;
    for (std::size_t i = 0; i < others.size(); ++i) {
      if (used[i]) continue;
      used[i] = true;
      relays.push_back(others[i]);
      self(self);
      relays.pop_back();
      used[i] = false;
    }
  };
  extend(extend);
  return paths;
}

namespace detail {

/// Deliberately separate from pathobjectives::pareto_filter so the two
/// dominance implementations cross-check each other.
inline std::vector<RoutedSolution> double_loop_front(const std::vector<RoutedSolution>& feasible) {
  std::vector<RoutedSolution> unique;
  for (const auto& s : feasible) {
    bool duplicate = false;
    for (auto& kept : unique) {
      if (kept.objective.se_bps_hz == s.objective.se_bps_hz &&
          kept.objective.delay_s == s.objective.delay_s &&
          kept.objective.pet_s == s.objective.pet_s) {
        duplicate = true;
        if (s.path.nodes < kept.path.nodes) kept = s;
        break;
      }
    }
    if (!duplicate) unique.push_back(s);
  }
  std::vector<RoutedSolution> front;
  for (std::size_t i = 0; i < unique.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < unique.size(); ++j) {
      if (i == j) continue;
      const auto& a = unique[j].objective;
      const auto& b = unique[i].objective;
      const bool no_worse = a.se_bps_hz >= b.se_bps_hz && a.delay_s <= b.delay_s && a.pet_s >= b.pet_s;
      const bool better = a.se_bps_hz > b.se_bps_hz || a.delay_s < b.delay_s || a.pet_s > b.pet_s;
      if (no_worse && better) {
        dominated = true;
        break;
      }
    }
    if (!dominated) front.push_back(unique[i]);
  }
  return front;
}

}  // namespace detail

/// Exact Pareto front over every enumerable feasible path.
inline std::vector<RoutedSolution> exact_pareto_front(const Snapshot& snapshot,
                                                      const std::string& source_id, int max_hops,
                                                      const LinkBudgetParams& params,
                                                      const AcmTable& table,
                                                      bool allow_large = false) {
  const PathEvaluator eval(snapshot, params, table);
  std::vector<RoutedSolution> feasible;
  for (auto& path : enumerate_all_paths(snapshot, source_id, max_hops, allow_large)) {
    ObjectiveVector o = eval.evaluate(path);
    if (o.feasible) feasible.push_back(RoutedSolution{std::move(path), o});
  }
  std::vector<RoutedSolution> front = detail::double_loop_front(feasible);
  aanet::canonical_sort(front);
  return front;
}

/// Motion-stepping validation of the closed-form expiration time: advance
/// both tracks in dt steps until the distance first reaches the threshold,
/// then bisect the bracketing step down to 1e-6 s. Empty when no crossing
/// happens before t_max.
inline std::optional<double> let_crossing_oracle(const PlanarKinematicState& s1,
                                                 const PlanarKinematicState& s2, double threshold_km,
                                                 double dt, double t_max) {
  if (!(dt > 0.0)) throw input_error("time step must be positive");
  const double d = threshold_km * 1000.0;
  const auto distance_at = [&](double t) {
    const double dx = (s1.x + s1.vx * t) - (s2.x + s2.vx * t);
    const double dy = (s1.y + s1.vy * t) - (s2.y + s2.vy * t);
    return std::sqrt(dx * dx + dy * dy);
  };
  if (distance_at(0.0) >= d) throw state_error("link already at or beyond the range threshold");
  double prev = 0.0;
  for (double t = dt; t <= t_max; t += dt) {
    if (distance_at(t) >= d) {
      double lo = prev, hi = t;
      while (hi - lo > 1e-6) {
        const double mid = (lo + hi) / 2.0;
        (distance_at(mid) >= d ? hi : lo) = mid;
      }
      return (lo + hi) / 2.0;
    }
    prev = t;
  }
  return std::nullopt;
}

/// Coverage of the exact front by a result archive, with box geometry taken
/// from the exact front. A front point counts as covered when some archive
/// point matches or epsilon-dominates it; generational distance averages the
/// range-normalized distance from each archive point to its closest front
/// point.
inline CoverageReport coverage_metrics(const std::vector<RoutedSolution>& result_archive,
                                       const std::vector<RoutedSolution>& exact_front, int n_box) {
  if (exact_front.empty()) throw input_error("coverage_metrics: empty exact front");
  CoverageReport report;
  report.exact_front_size = exact_front.size();
  report.archive_size = result_archive.size();

  std::vector<NormalizedObjective> front_norm, archive_norm;
  for (const auto& s : exact_front) front_norm.push_back(normalize(s.objective));
  for (const auto& s : result_archive) archive_norm.push_back(normalize(s.objective));
  const FrontLimits lim = front_limits(front_norm, n_box);

  std::size_t covered = 0;
  for (const auto& f : front_norm) {
    bool hit = false;
    for (const auto& a : archive_norm) {
      if (a.m == f.m || epsilon_dominates(a, f, lim)) {
        hit = true;
        break;
      }
    }
    if (hit) ++covered;
  }
  report.fraction_covered = static_cast<double>(covered) / exact_front.size();

  if (!archive_norm.empty()) {
    double total = 0.0;
    for (const auto& a : archive_norm) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& f : front_norm) {
        double sum = 0.0;
        for (int i = 0; i < 3; ++i) {
          const double range = lim.upper[i] - lim.lower[i];
          if (range <= 0.0) continue;
          const double dd = (a.m[i] - f.m[i]) / range;
          sum += dd * dd;
        }
        best = std::min(best, std::sqrt(sum));
      }
      total += best;
    }
    report.generational_distance = total / archive_norm.size();
  }
  return report;
}

}  // namespace aanet::oracle
