#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "aanet/core.hpp"
#include "aanet/flightdata.hpp"
#include "aanet/pathobjectives.hpp"

namespace aanet {

struct OptimizerConfig {
  int population_size = 200;          // P_s
  int offspring_per_generation = 8;   // N_O, even
  int max_generations = 200;          // g_max
  double crossover_mutation_prob = 0.2;  // p_c/m; alpha > p selects crossover
  int boxes_per_objective = 20;       // N_box,i
  std::vector<int> hop_budgets = {2, 3, 4, 5};
  std::uint64_t rng_seed = 0;

  void validate() const {
    if (population_size < 1) throw input_error("population_size must be >= 1");
    if (offspring_per_generation < 2 || offspring_per_generation % 2 != 0)
      throw input_error("offspring_per_generation must be a positive even number");
    if (max_generations < 1) throw input_error("max_generations must be >= 1");
    if (!(crossover_mutation_prob >= 0.0 && crossover_mutation_prob <= 1.0))
      throw input_error("crossover_mutation_prob must be in [0, 1]");
    if (boxes_per_objective < 1) throw input_error("boxes_per_objective must be >= 1");
    if (hop_budgets.empty()) throw input_error("hop_budgets must not be empty");
    for (int b : hop_budgets)
      if (b < 2 || b > kMaxHops)
        throw input_error("hop budget outside {2.." + std::to_string(kMaxHops) +
                          "}: " + std::to_string(b));
  }
};

/// Flat key=value config ('#' starts a comment). Unknown keys are rejected.
inline OptimizerConfig parse_optimizer_config(std::string_view text, OptimizerConfig base = {}) {
  std::size_t start = 0;
  std::size_t line_no = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw format_error("config line " + std::to_string(line_no) + ": expected key=value");
    const std::string_view key = detail::trim(line.substr(0, eq));
    const std::string_view value = detail::trim(line.substr(eq + 1));
    long long iv = 0;
    double dv = 0.0;
    if (key == "population_size" && detail::parse_int(value, iv)) {
      base.population_size = static_cast<int>(iv);
    } else if (key == "offspring_per_generation" && detail::parse_int(value, iv)) {
      base.offspring_per_generation = static_cast<int>(iv);
    } else if (key == "max_generations" && detail::parse_int(value, iv)) {
      base.max_generations = static_cast<int>(iv);
    } else if (key == "crossover_mutation_prob" && detail::parse_double(value, dv)) {
      base.crossover_mutation_prob = dv;
    } else if (key == "boxes_per_objective" && detail::parse_int(value, iv)) {
      base.boxes_per_objective = static_cast<int>(iv);
    } else if (key == "rng_seed" && detail::parse_int(value, iv)) {
      base.rng_seed = static_cast<std::uint64_t>(iv);
    } else if (key == "hop_budgets") {
      base.hop_budgets.clear();
      for (const auto part : detail::split(value, ',')) {
        if (!detail::parse_int(part, iv))
          throw format_error("config line " + std::to_string(line_no) + ": bad hop budget");
        base.hop_budgets.push_back(static_cast<int>(iv));
      }
    } else {
      throw format_error("config line " + std::to_string(line_no) + ": unknown or malformed key '" +
                         std::string(key) + "'");
    }
  }
  base.validate();
  return base;
}

/// Elite population A^(g): mutually non-epsilon-dominated feasible solutions,
/// at most one per box, with the dynamic Pareto-front limits that define the
/// boxes. evaluation_count tracks cost-function calls of the owning run.
class EpsilonArchive {
 public:
  explicit EpsilonArchive(int n_box = 20) : n_box_(n_box) {}

  const std::vector<RoutedSolution>& members() const { return members_; }
  const FrontLimits& limits() const { return limits_; }
  bool empty() const { return members_.empty(); }
  std::size_t size() const { return members_.size(); }
  std::uint64_t evaluation_count = 0;

  /// Seed from the epsilon front of an initial population's feasible members.
  void bootstrap(const std::vector<RoutedSolution>& feasible) {
    if (feasible.empty()) return;
    EpsilonFrontResult front = epsilon_front(feasible, n_box_);
    members_ = std::move(front.members);
    limits_ = front.limits;
  }

  /// Four-zone insertion. In normalized space, a candidate strictly inside
  /// the limit box competes by epsilon-dominance (S1); strictly worse than
  /// the upper limit in every dimension it is rejected (S2); strictly better
  /// than the lower limit in every dimension it replaces the whole archive
  /// and tightens the lower limits (S4); anything else re-derives the front
  /// and its limits from scratch (S3). Boundary-exact values fall to S1/S3.
  void insert(const RoutedSolution& candidate) {
    if (!candidate.objective.feasible)
      throw std::logic_error("infeasible candidate offered to the elite archive");
    const NormalizedObjective n = normalize(candidate.objective);
    if (members_.empty()) {
      members_.push_back(candidate);
      for (int i = 0; i < 3; ++i) {
        limits_.lower[i] = n.m[i];
        limits_.upper[i] = n.m[i];
        limits_.boxes[i] = n_box_;
        limits_.epsilon[i] = 0.0;
      }
      return;
    }
    bool below_all = true, above_all = true, inside = true;
    for (int i = 0; i < 3; ++i) {
      below_all = below_all && n.m[i] < limits_.lower[i];
      above_all = above_all && n.m[i] > limits_.upper[i];
      inside = inside && n.m[i] >= limits_.lower[i] && n.m[i] <= limits_.upper[i];
    }
    if (below_all) {  // S4: dominates the whole limit box
      members_.assign(1, candidate);
      for (int i = 0; i < 3; ++i) {
        limits_.lower[i] = n.m[i];
        limits_.epsilon[i] =
            limits_.upper[i] > limits_.lower[i] ? (limits_.upper[i] - limits_.lower[i]) / n_box_ : 0.0;
      }
      return;
    }
    if (above_all) return;  // S2: epsilon-dominated by every member
    if (inside) {           // S1
      for (const auto& m : members_)
        if (epsilon_dominates(normalize(m.objective), n, limits_)) return;
      const auto cand_box = box_index(n, limits_);
      std::erase_if(members_, [&](const RoutedSolution& m) {
        return epsilon_dominates(n, normalize(m.objective), limits_);
      });
      // Exact corner-distance tie inside a shared box: keep the
      // lexicographically smaller node list.
      for (auto& m : members_) {
        if (box_index(normalize(m.objective), limits_) == cand_box) {
          if (candidate.path < m.path) m = candidate;
          return;
        }
      }
      members_.push_back(candidate);
      return;
    }
    // S3: partially outside the limits; recompute front and limits.
    std::vector<RoutedSolution> pool = members_;
    pool.push_back(candidate);
    EpsilonFrontResult front = epsilon_front(pool, n_box_);
    members_ = std::move(front.members);
    limits_ = front.limits;
  }

 private:
  int n_box_;
  std::vector<RoutedSolution> members_;
  FrontLimits limits_;
};

/// P_s random chromosomes of N nodes: fixed source, relays drawn uniformly
/// without replacement from the remaining aircraft, terminal drawn uniformly
/// from the ground stations.
inline std::vector<RoutePath> initialize_population(const Snapshot& snapshot,
                                                    const std::string& source_id, int n_nodes,
                                                    const OptimizerConfig& config, Rng& rng) {
  const int relays = n_nodes - 2;
  if (relays < 0) throw input_error("population paths need at least 2 nodes");
  if (static_cast<int>(snapshot.aircraft.size()) < n_nodes - 1)
    throw instance_error("not enough aircraft for " + std::to_string(n_nodes) + "-node paths");
  if (snapshot.ground_stations.empty()) throw instance_error("no ground stations in snapshot");
  std::vector<std::string> pool;
  pool.reserve(snapshot.aircraft.size());
  bool source_found = false;
  for (const auto& a : snapshot.aircraft) {
    if (a.flight_id == source_id) {
      source_found = true;
      continue;
    }
    pool.push_back(a.flight_id);
  }
  if (!source_found) throw resolution_error("unknown source id: " + source_id);

  std::vector<RoutePath> population;
  population.reserve(config.population_size);
  std::vector<std::string> scratch;
  for (int p = 0; p < config.population_size; ++p) {
    scratch = pool;
    std::vector<std::string> nodes;
    nodes.reserve(n_nodes);
    nodes.push_back(source_id);
    for (int r = 0; r < relays; ++r) {
      const std::size_t pick = uniform_index(rng, scratch.size());
      nodes.push_back(scratch[pick]);
      scratch[pick] = scratch.back();
      scratch.pop_back();
    }
    const std::size_t g = uniform_index(rng, snapshot.ground_stations.size());
    nodes.push_back(snapshot.ground_stations[g].station_id);
    population.push_back(RoutePath{std::move(nodes)});
  }
  return population;
}

/// Evaluates the direct link to every ground station and keeps the Pareto
/// front of the feasible ones; empty when no station is in range.
inline std::vector<RoutedSolution> enumerate_single_hop(const PathEvaluator& eval,
                                                        const std::string& source_id) {
  std::vector<RoutedSolution> feasible;
  for (const auto& gs : eval.station_ids()) {
    RoutePath path{{source_id, gs}};
    ObjectiveVector o = eval.evaluate(path);
    if (o.feasible) feasible.push_back(RoutedSolution{std::move(path), o});
  }
  if (feasible.empty()) return {};
  return pareto_filter(feasible);
}

inline std::vector<RoutedSolution> enumerate_single_hop(const Snapshot& snapshot,
                                                        const std::string& source_id,
                                                        const LinkBudgetParams& params,
                                                        const AcmTable& table) {
  return enumerate_single_hop(PathEvaluator(snapshot, params, table), source_id);
}

/// Single-point crossover with duplicate repair: the cut point is drawn from
/// the interior positions, tails are swapped, and any aircraft id duplicated
/// into an offspring is re-drawn uniformly from the aircraft not yet in it.
/// An offspring whose repair pool runs dry is discarded.
inline std::vector<RoutePath> crossover(const RoutePath& parent_p, const RoutePath& parent_a,
                                        const std::vector<std::string>& aircraft_ids, Rng& rng) {
  const std::size_t n = parent_p.nodes.size();
  if (n != parent_a.nodes.size())
    throw input_error("crossover parents must have the same length");
  if (n < 3) throw input_error("crossover needs at least one interior position");
  // 1-based crossover point in {2..N-1}; genes after it are swapped.
  const std::size_t point = 2 + uniform_index(rng, n - 2);

  const auto make_child = [&](const RoutePath& head, const RoutePath& tail) {
    std::vector<std::string> nodes(head.nodes.begin(), head.nodes.begin() + point);
    nodes.insert(nodes.end(), tail.nodes.begin() + point, tail.nodes.end());
    return nodes;
  };
  std::vector<RoutePath> offspring;
  for (auto& nodes : {make_child(parent_p, parent_a), make_child(parent_a, parent_p)}) {
    std::vector<std::string> repaired = nodes;
    bool ok = true;
    for (std::size_t i = point; i + 1 < repaired.size() && ok; ++i) {
      const bool dup = std::find(repaired.begin(), repaired.begin() + i, repaired[i]) !=
                       repaired.begin() + i;
      if (!dup) continue;
      std::vector<const std::string*> pool;
      for (const auto& id : aircraft_ids)
        if (std::find(repaired.begin(), repaired.end(), id) == repaired.end())
          pool.push_back(&id);
      if (pool.empty()) {
        ok = false;
        break;
      }
      repaired[i] = *pool[uniform_index(rng, pool.size())];
    }
    if (ok) offspring.push_back(RoutePath{std::move(repaired)});
  }
  return offspring;
}

/// Multi-position mutation: one position set (drawn without repetition from
/// {2..N}) is applied to both parents, each gene re-drawn independently.
/// Relay genes come from aircraft not already in the individual; the
/// terminal gene from the ground stations.
inline std::vector<RoutePath> mutate(const RoutePath& parent_p, const RoutePath& parent_a,
                                     const std::vector<std::string>& aircraft_ids,
                                     const std::vector<std::string>& station_ids, Rng& rng) {
  const std::size_t n = parent_p.nodes.size();
  if (n != parent_a.nodes.size()) throw input_error("mutation parents must have the same length");
  if (n < 2) throw input_error("mutation needs at least 2 nodes");
  if (station_ids.empty()) throw instance_error("no ground stations to mutate towards");
  const std::size_t n_mut = 1 + uniform_index(rng, n - 1);
  // 0-based mutable positions {1..n-1}, sampled without repetition.
  std::vector<std::size_t> positions(n - 1);
  for (std::size_t i = 0; i < positions.size(); ++i) positions[i] = i + 1;
  for (std::size_t i = 0; i < n_mut; ++i) {
    const std::size_t j = i + uniform_index(rng, positions.size() - i);
    std::swap(positions[i], positions[j]);
  }
  positions.resize(n_mut);

  std::vector<RoutePath> offspring;
  for (const RoutePath* parent : {&parent_p, &parent_a}) {
    std::vector<std::string> nodes = parent->nodes;
    for (const std::size_t pos : positions) {
      if (pos + 1 == n) {
        nodes[pos] = station_ids[uniform_index(rng, station_ids.size())];
        continue;
      }
      std::vector<const std::string*> pool;
      for (const auto& id : aircraft_ids)
        if (std::find(nodes.begin(), nodes.end(), id) == nodes.end()) pool.push_back(&id);
      if (pool.empty())
        throw instance_error("aircraft pool exhausted while mutating a relay gene");
      nodes[pos] = *pool[uniform_index(rng, pool.size())];
    }
    offspring.push_back(RoutePath{std::move(nodes)});
  }
  return offspring;
}

/// Each offspring challenges one uniformly drawn population member and
/// replaces it iff it wins the feasibility-first comparison.
inline void update_population(std::vector<RoutedSolution>& population,
                              const std::vector<RoutedSolution>& offspring, Rng& rng) {
  if (population.empty()) return;
  for (const auto& child : offspring) {
    const std::size_t j = uniform_index(rng, population.size());
    if (constrained_compare(child.objective, population[j].objective) == CompareOutcome::First)
      population[j] = child;
  }
}

struct BudgetRunResult {
  int hop_budget = 0;
  std::vector<RoutedSolution> archive;
  std::uint64_t evaluations = 0;
};

struct RunResult {
  std::vector<RoutedSolution> front;       // merged and Pareto-filtered
  std::vector<RoutedSolution> single_hop;  // direct-link Pareto set
  std::vector<BudgetRunResult> budgets;
};

/// One fixed-length generation loop: bootstrap the archive from the initial
/// population's epsilon front, then per generation run N_O/2 variant draws
/// (crossover when alpha exceeds p_c/m, mutation otherwise, the second
/// parent coming from the archive once it is non-empty), insert feasible
/// offspring into the archive and let every offspring challenge the
/// population.
inline BudgetRunResult run_budget(const PathEvaluator& eval, const Snapshot& snapshot,
                                  const std::string& source_id, int hop_budget,
                                  const OptimizerConfig& config, std::uint64_t seed) {
  BudgetRunResult result;
  result.hop_budget = hop_budget;
  const int n_nodes = hop_budget + 1;
  if (static_cast<int>(snapshot.aircraft.size()) < hop_budget) return result;  // no such paths

  Rng rng(seed);
  EpsilonArchive archive(config.boxes_per_objective);

  std::vector<RoutePath> seeds = initialize_population(snapshot, source_id, n_nodes, config, rng);
  std::vector<RoutedSolution> population;
  population.reserve(seeds.size());
  std::vector<RoutedSolution> feasible;
  for (auto& path : seeds) {
    ObjectiveVector o = eval.evaluate(path);
    ++archive.evaluation_count;
    RoutedSolution s{std::move(path), o};
    if (o.feasible) feasible.push_back(s);
    population.push_back(std::move(s));
  }
  archive.bootstrap(feasible);

  for (int g = 0; g < config.max_generations; ++g) {
    std::vector<RoutedSolution> offspring;
    for (int v = 0; v < config.offspring_per_generation / 2; ++v) {
      const RoutePath& parent_p = population[uniform_index(rng, population.size())].path;
      const RoutePath& parent_a =
          archive.empty() ? population[uniform_index(rng, population.size())].path
                          : archive.members()[uniform_index(rng, archive.size())].path;
      const double alpha = uniform_real01(rng);
      std::vector<RoutePath> children;
      try {
        children = alpha > config.crossover_mutation_prob
                       ? crossover(parent_p, parent_a, eval.aircraft_ids(), rng)
                       : mutate(parent_p, parent_a, eval.aircraft_ids(), eval.station_ids(), rng);
      } catch (const instance_error&) {
        continue;  // pool exhausted on a tiny instance; skip this draw
      }
      for (auto& child : children) {
        ObjectiveVector o = eval.evaluate(child);
        ++archive.evaluation_count;
        offspring.push_back(RoutedSolution{std::move(child), o});
      }
    }
    for (const auto& child : offspring)
      if (child.objective.feasible) archive.insert(child);
    update_population(population, offspring, rng);
  }

  result.archive = archive.members();
  result.evaluations = archive.evaluation_count;
  return result;
}

/// Full optimization for one source: the enumerated single-hop front plus
/// one independent fixed-length run per hop budget, merged through a final
/// Pareto filter. Deterministic for a fixed seed.
inline RunResult run(const Snapshot& snapshot, const std::string& source_id,
                     const OptimizerConfig& config, const LinkBudgetParams& params,
                     const AcmTable& table) {
  config.validate();
  table.validate();
  const PathEvaluator eval(snapshot, params, table);
  eval.resolve(source_id);  // fail fast on unknown sources

  RunResult result;
  result.single_hop = enumerate_single_hop(eval, source_id);

  std::vector<int> budgets = config.hop_budgets;
  std::sort(budgets.begin(), budgets.end());
  budgets.erase(std::unique(budgets.begin(), budgets.end()), budgets.end());

  std::vector<RoutedSolution> pool = result.single_hop;
  for (const int budget : budgets) {
    BudgetRunResult br = run_budget(eval, snapshot, source_id, budget, config,
                                    seed_mix(config.rng_seed, static_cast<std::uint64_t>(budget)));
    pool.insert(pool.end(), br.archive.begin(), br.archive.end());
    result.budgets.push_back(std::move(br));
  }
  result.front = pool.empty() ? pool : pareto_filter(pool);
  canonical_sort(result.front);
  return result;
}

}  // namespace aanet
