#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "aanet/core.hpp"
#include "aanet/flightdata.hpp"
#include "aanet/linkmodel.hpp"

namespace aanet {

inline constexpr int kMaxHops = 5;           // N - 1 <= 5
inline constexpr double kDelayCapS = 0.250;  // geostationary round-trip budget

/// Permutation-encoded chromosome: source aircraft, distinct relay aircraft,
/// terminal ground station.
struct RoutePath {
  std::vector<std::string> nodes;

  int hops() const { return static_cast<int>(nodes.size()) - 1; }
  bool operator==(const RoutePath& other) const { return nodes == other.nodes; }
  bool operator<(const RoutePath& other) const { return nodes < other.nodes; }
};

inline RoutePath make_route_path(std::vector<std::string> nodes) {
  if (nodes.size() < 2) throw input_error("route path needs at least source and ground station");
  if (static_cast<int>(nodes.size()) - 1 > kMaxHops)
    throw input_error("route path exceeds the hop budget of " + std::to_string(kMaxHops));
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
    for (std::size_t j = i + 1; j + 1 < nodes.size(); ++j)
      if (nodes[i] == nodes[j]) throw input_error("route path repeats aircraft id " + nodes[i]);
  return RoutePath{std::move(nodes)};
}

inline std::string path_to_string(const RoutePath& p, char sep = '>') {
  std::string out;
  for (std::size_t i = 0; i < p.nodes.size(); ++i) {
    if (i) out += sep;
    out += p.nodes[i];
  }
  return out;
}

/// The tri-objective value of one evaluated path plus its feasibility
/// annotation. violation is 0 exactly when the path is feasible.
struct ObjectiveVector {
  double se_bps_hz = 0.0;  // J1, maximized
  double delay_s = 0.0;    // J2, minimized
  double pet_s = 0.0;      // J3, maximized
  bool feasible = false;
  double violation = 0.0;

  bool same_objectives(const ObjectiveVector& o) const {
    return se_bps_hz == o.se_bps_hz && delay_s == o.delay_s && pet_s == o.pet_s &&
           feasible == o.feasible;
  }
};

/// All-minimized image of an ObjectiveVector: (-SE, delay, -PET). Dominance
/// on this triple is order-isomorphic to the paper's mixed max/min ordering.
struct NormalizedObjective {
  std::array<double, 3> m{0.0, 0.0, 0.0};
};

inline NormalizedObjective normalize(const ObjectiveVector& o) {
  return NormalizedObjective{{-o.se_bps_hz, o.delay_s, -o.pet_s}};
}

inline bool dominates(const NormalizedObjective& a, const NormalizedObjective& b) {
  bool strict = false;
  for (int i = 0; i < 3; ++i) {
    if (a.m[i] > b.m[i]) return false;
    if (a.m[i] < b.m[i]) strict = true;
  }
  return strict;
}

enum class CompareOutcome { First, Second, Neither };

/// Feasibility-first comparison: feasible beats infeasible, two infeasible
/// compare by violation, two feasible fall through to dominance.
inline CompareOutcome constrained_compare(const ObjectiveVector& o1, const ObjectiveVector& o2) {
  if (o1.feasible != o2.feasible)
    return o1.feasible ? CompareOutcome::First : CompareOutcome::Second;
  if (!o1.feasible) {
    if (o1.violation < o2.violation) return CompareOutcome::First;
    if (o2.violation < o1.violation) return CompareOutcome::Second;
    return CompareOutcome::Neither;
  }
  const NormalizedObjective n1 = normalize(o1), n2 = normalize(o2);
  if (dominates(n1, n2)) return CompareOutcome::First;
  if (dominates(n2, n1)) return CompareOutcome::Second;
  return CompareOutcome::Neither;
}

/// Pareto-front limits and box geometry in normalized space. epsilon 0 is
/// the sentinel for a degenerate dimension (upper == lower).
struct FrontLimits {
  std::array<double, 3> lower{0.0, 0.0, 0.0};
  std::array<double, 3> upper{0.0, 0.0, 0.0};
  std::array<int, 3> boxes{1, 1, 1};
  std::array<double, 3> epsilon{0.0, 0.0, 0.0};
};

template <typename Range>
inline FrontLimits front_limits(const Range& normalized, int n_box) {
  if (n_box < 1) throw input_error("box count must be >= 1");
  FrontLimits lim;
  bool first = true;
  for (const NormalizedObjective& n : normalized) {
    for (int i = 0; i < 3; ++i) {
      if (first || n.m[i] < lim.lower[i]) lim.lower[i] = n.m[i];
      if (first || n.m[i] > lim.upper[i]) lim.upper[i] = n.m[i];
    }
    first = false;
  }
  if (first) throw input_error("front_limits: empty set");
  for (int i = 0; i < 3; ++i) {
    lim.boxes[i] = n_box;
    lim.epsilon[i] = lim.upper[i] > lim.lower[i] ? (lim.upper[i] - lim.lower[i]) / n_box : 0.0;
  }
  return lim;
}

inline std::array<int, 3> box_index(const NormalizedObjective& n, const FrontLimits& lim) {
  std::array<int, 3> idx{0, 0, 0};
  for (int i = 0; i < 3; ++i) {
    if (lim.epsilon[i] == 0.0) continue;
    const double raw = std::floor((n.m[i] - lim.lower[i]) / lim.epsilon[i]);
    idx[i] = static_cast<int>(std::clamp(raw, 0.0, static_cast<double>(lim.boxes[i])));
  }
  return idx;
}

inline bool box_dominates(const std::array<int, 3>& a, const std::array<int, 3>& b) {
  bool strict = false;
  for (int i = 0; i < 3; ++i) {
    if (a[i] > b[i]) return false;
    if (a[i] < b[i]) strict = true;
  }
  return strict;
}

/// Distance to the lower corner of the point's own box, per-dimension
/// normalized by the box width.
inline double box_corner_distance(const NormalizedObjective& n, const FrontLimits& lim) {
  const auto idx = box_index(n, lim);
  double sum = 0.0;
  for (int i = 0; i < 3; ++i) {
    if (lim.epsilon[i] == 0.0) continue;
    const double corner = lim.lower[i] + idx[i] * lim.epsilon[i];
    const double d = (n.m[i] - corner) / lim.epsilon[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

/// Box-level dominance, refined inside a shared box by plain dominance and
/// then by proximity to the box's lower corner.
inline bool epsilon_dominates(const NormalizedObjective& a, const NormalizedObjective& b,
                              const FrontLimits& lim) {
  const auto ba = box_index(a, lim);
  const auto bb = box_index(b, lim);
  if (box_dominates(ba, bb)) return true;
  if (ba != bb) return false;
  if (dominates(a, b)) return true;
  if (dominates(b, a)) return false;
  return box_corner_distance(a, lim) < box_corner_distance(b, lim);
}

/// A candidate routing path tagged with its evaluated objectives.
struct RoutedSolution {
  RoutePath path;
  ObjectiveVector objective;
};

/// Stable presentation order: by hop count, then node list.
inline void canonical_sort(std::vector<RoutedSolution>& solutions) {
  std::sort(solutions.begin(), solutions.end(),
            [](const RoutedSolution& a, const RoutedSolution& b) {
              if (a.path.nodes.size() != b.path.nodes.size())
                return a.path.nodes.size() < b.path.nodes.size();
              return a.path < b.path;
            });
}

namespace detail {

/// Collapse entries with identical objective vectors to the one with the
/// lexicographically smallest node list, keeping runs reproducible.
inline std::vector<RoutedSolution> collapse_duplicates(std::vector<RoutedSolution> items) {
  std::vector<RoutedSolution> out;
  for (auto& item : items) {
    bool merged = false;
    for (auto& kept : out) {
      if (kept.objective.same_objectives(item.objective)) {
        if (item.path < kept.path) kept = item;
        merged = true;
        break;
      }
    }
    if (!merged) out.push_back(std::move(item));
  }
  return out;
}

}  // namespace detail

/// Members not beaten by any other under the feasibility-first comparison.
inline std::vector<RoutedSolution> pareto_filter(const std::vector<RoutedSolution>& items) {
  std::vector<RoutedSolution> unique = detail::collapse_duplicates(items);
  std::vector<RoutedSolution> front;
  for (std::size_t i = 0; i < unique.size(); ++i) {
    bool beaten = false;
    for (std::size_t j = 0; j < unique.size() && !beaten; ++j) {
      if (j == i) continue;
      beaten = constrained_compare(unique[j].objective, unique[i].objective) == CompareOutcome::First;
    }
    if (!beaten) front.push_back(unique[i]);
  }
  return front;
}

struct EpsilonFrontResult {
  std::vector<RoutedSolution> members;
  FrontLimits limits;
};

/// The epsilon-Pareto front: Pareto-filter the set, size the boxes from the
/// survivors, keep one representative per occupied box (corner distance,
/// then lexicographic node list), and drop boxes dominated by another
/// occupied box so the output is mutually non-epsilon-dominated.
inline EpsilonFrontResult epsilon_front(const std::vector<RoutedSolution>& items, int n_box) {
  if (items.empty()) throw input_error("epsilon_front: empty set");
  std::vector<RoutedSolution> front = pareto_filter(items);
  std::vector<NormalizedObjective> norms;
  norms.reserve(front.size());
  for (const auto& s : front) norms.push_back(normalize(s.objective));
  const FrontLimits lim = front_limits(norms, n_box);

  std::map<std::array<int, 3>, std::size_t> best_in_box;
  for (std::size_t i = 0; i < front.size(); ++i) {
    const auto idx = box_index(norms[i], lim);
    auto [it, inserted] = best_in_box.try_emplace(idx, i);
    if (inserted) continue;
    const std::size_t j = it->second;
    if (dominates(norms[i], norms[j])) {
      it->second = i;
    } else if (!dominates(norms[j], norms[i])) {
      const double di = box_corner_distance(norms[i], lim);
      const double dj = box_corner_distance(norms[j], lim);
      if (di < dj || (di == dj && front[i].path < front[j].path)) it->second = i;
    }
  }

  EpsilonFrontResult result;
  result.limits = lim;
  for (const auto& [idx, i] : best_in_box) {
    bool beaten = false;
    for (const auto& [other_idx, j] : best_in_box) {
      if (box_dominates(other_idx, idx)) {
        beaten = true;
        break;
      }
    }
    if (!beaten) result.members.push_back(front[i]);
  }
  return result;
}

/// Constraint handling knobs for Eq.-16 violations. The weights only rank
/// infeasible candidates against each other.
struct ConstraintPolicy {
  double delay_cap_s = kDelayCapS;
  double link_violation_weight = 1000.0;
  double delay_violation_weight = 100.0;
};

/// Resolves node ids against one snapshot and evaluates paths into objective
/// vectors. Pure with respect to the snapshot, so one evaluator can serve
/// concurrent callers.
class PathEvaluator {
 public:
  PathEvaluator(const Snapshot& snapshot, const LinkBudgetParams& params, const AcmTable& table,
                const ConstraintPolicy& policy = {})
      : params_(params), table_(table), policy_(policy) {
    nodes_.reserve(snapshot.aircraft.size() + snapshot.ground_stations.size());
    for (const auto& a : snapshot.aircraft) {
      aircraft_ids_.push_back(a.flight_id);
      nodes_.push_back(make_node(a));
    }
    for (const auto& g : snapshot.ground_stations) {
      station_ids_.push_back(g.station_id);
      nodes_.push_back(make_node(g));
    }
    for (const auto& n : nodes_) index_.emplace(n.id, &n - nodes_.data());
  }

  const std::vector<std::string>& aircraft_ids() const { return aircraft_ids_; }
  const std::vector<std::string>& station_ids() const { return station_ids_; }

  const Node& resolve(const std::string& id) const {
    const auto it = index_.find(id);
    if (it == index_.end()) throw resolution_error("unknown node id: " + id);
    return nodes_[it->second];
  }

  std::vector<LinkMetrics> link_metrics(const RoutePath& path) const {
    if (path.nodes.size() < 2) throw input_error("route path needs at least 2 nodes");
    std::vector<LinkMetrics> links;
    links.reserve(path.nodes.size() - 1);
    for (std::size_t i = 0; i + 1 < path.nodes.size(); ++i) {
      const Node& tx = resolve(path.nodes[i]);
      const Node& rx = resolve(path.nodes[i + 1]);
      if (tx.is_ground_station)
        throw resolution_error("ground station " + tx.id + " used as a relay or source");
      if (rx.is_ground_station && i + 2 < path.nodes.size())
        throw resolution_error("ground station " + rx.id + " not in terminal position");
      if (!rx.is_ground_station && i + 2 == path.nodes.size())
        throw resolution_error("route path must terminate at a ground station, got " + rx.id);
      links.push_back(evaluate_link(tx, rx, i == 0, params_, table_));
    }
    return links;
  }

  /// SE is the minimum link SE, delay the sum of link delays, PET the
  /// minimum link LET. Feasible iff every link is feasible, the delay cap
  /// holds and the hop budget holds.
  ObjectiveVector evaluate(const RoutePath& path) const {
    if (path.hops() > kMaxHops)
      throw input_error("route path exceeds the hop budget of " + std::to_string(kMaxHops));
    const std::vector<LinkMetrics> links = link_metrics(path);
    ObjectiveVector o;
    o.se_bps_hz = links.front().spectral_efficiency;
    o.pet_s = links.front().let_s;
    int broken = 0;
    for (const auto& l : links) {
      o.se_bps_hz = std::min(o.se_bps_hz, l.spectral_efficiency);
      o.pet_s = std::min(o.pet_s, l.let_s);
      o.delay_s += l.delay_s;
      if (!l.feasible) ++broken;
    }
    const double delay_excess = std::max(0.0, o.delay_s - policy_.delay_cap_s);
    o.violation =
        broken * policy_.link_violation_weight + delay_excess * policy_.delay_violation_weight;
    o.feasible = broken == 0 && delay_excess == 0.0 && path.hops() <= kMaxHops;
    return o;
  }

  const LinkBudgetParams& params() const { return params_; }
  const AcmTable& table() const { return table_; }

 private:
  LinkBudgetParams params_;
  AcmTable table_;
  ConstraintPolicy policy_;
  std::vector<Node> nodes_;
  std::vector<std::string> aircraft_ids_;
  std::vector<std::string> station_ids_;
  std::unordered_map<std::string, std::size_t> index_;
};

inline ObjectiveVector evaluate_path(const RoutePath& path, const Snapshot& snapshot,
                                     const LinkBudgetParams& params, const AcmTable& table) {
  return PathEvaluator(snapshot, params, table).evaluate(path);
}

}  // namespace aanet
