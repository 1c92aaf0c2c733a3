// aanet command line: evaluate a path, optimize one source, run the 24-hour
// sweep, cross-check against the exhaustive oracle, or generate synthetic
// flight data. Exit codes: 0 success, 1 input/config error, 2 internal error.

#include <unistd.h>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "aanet/aanet.hpp"

namespace {

using namespace aanet;
using nlohmann::json;

std::string slurp_file(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw input_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << file.rdbuf();
  return ss.str();
}

enum class OutputFormat { Auto, Table, Csv, Json };

OutputFormat parse_format(const std::string& name) {
  if (name == "auto") return OutputFormat::Auto;
  if (name == "table") return OutputFormat::Table;
  if (name == "csv") return OutputFormat::Csv;
  if (name == "json") return OutputFormat::Json;
  throw input_error("unknown format: " + name);
}

OutputFormat resolve(OutputFormat f) {
  if (f != OutputFormat::Auto) return f;
  return isatty(STDOUT_FILENO) ? OutputFormat::Table : OutputFormat::Csv;
}

std::vector<std::string> split_ids(const std::string& csv, char sep) {
  std::vector<std::string> out;
  for (const auto part : detail::split(csv, sep)) {
    const auto token = detail::trim(part);
    if (!token.empty()) out.emplace_back(token);
  }
  return out;
}

// Options shared by the data-consuming subcommands.
struct DataOptions {
  std::string flights_path;
  std::string gs_path;
  std::string acm_path;
  double window_s = kDefaultSnapshotWindowS;
  double min_altitude_m = kDefaultMinAltitudeM;

  void attach(CLI::App* cmd) {
    cmd->add_option("--flights", flights_path, "Flight CSV")->required();
    cmd->add_option("--gs", gs_path, "Ground-station CSV")->required();
    cmd->add_option("--acm", acm_path, "ACM table CSV (defaults to the built-in table)");
    cmd->add_option("--window", window_s, "Snapshot window, seconds");
    cmd->add_option("--min-alt", min_altitude_m, "Minimum airborne altitude, meters");
  }

  std::vector<FlightRecord> records() const {
    ParseResult parsed = parse_flight_records(slurp_file(flights_path));
    for (const auto& e : parsed.row_errors)
      std::cerr << "warning: " << flights_path << ":" << e.line << ": " << e.field << " "
                << e.message << "\n";
    return std::move(parsed.records);
  }
  std::vector<GroundStation> stations() const {
    return load_ground_stations(slurp_file(gs_path));
  }
  AcmTable table() const {
    return acm_path.empty() ? AcmTable::builtin() : AcmTable::from_csv(slurp_file(acm_path));
  }
  Snapshot snapshot_at(double t) const {
    return build_snapshot(records(), stations(), t, window_s, min_altitude_m, zero_occupancy());
  }
};

struct OptimizerOptions {
  std::string config_path;
  std::string hops = "2,3,4,5";
  std::uint64_t seed = 0;
  int population = -1, offspring = -1, generations = -1, nbox = -1;
  double pcm = -1.0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "Optimizer key=value config file");
    cmd->add_option("--seed", seed, "RNG seed (default 0)");
    cmd->add_option("--hops", hops, "Hop budgets, e.g. 2,3,4,5");
    cmd->add_option("--population", population, "Population size");
    cmd->add_option("--offspring", offspring, "Offspring per generation (even)");
    cmd->add_option("--generations", generations, "Generation budget");
    cmd->add_option("--pcm", pcm, "Crossover/mutation probability");
    cmd->add_option("--nbox", nbox, "Boxes per objective dimension");
  }

  OptimizerConfig build() const {
    OptimizerConfig config;
    if (!config_path.empty()) config = parse_optimizer_config(slurp_file(config_path));
    config.rng_seed = seed;
    if (population > 0) config.population_size = population;
    if (offspring > 0) config.offspring_per_generation = offspring;
    if (generations > 0) config.max_generations = generations;
    if (nbox > 0) config.boxes_per_objective = nbox;
    if (pcm >= 0.0) config.crossover_mutation_prob = pcm;
    config.hop_budgets.clear();
    long long value = 0;
    for (const auto part : detail::split(hops, ','))
      if (detail::parse_int(part, value)) config.hop_budgets.push_back(static_cast<int>(value));
    config.validate();
    return config;
  }
};

struct LinkOptions {
  double dq0_ms = 10.0;
  double ds_ms = 5.0;
  int buffer_capacity = 10;
  bool queue_at_source = false;
  double let_cap_s = 86400.0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--dq0-ms", dq0_ms, "Per-slot queueing delay, ms");
    cmd->add_option("--ds-ms", ds_ms, "Relay processing delay, ms");
    cmd->add_option("--buffer-capacity", buffer_capacity, "Queue capacity");
    cmd->add_flag("--queue-at-source", queue_at_source, "Source transmitter also queues");
    cmd->add_option("--let-cap", let_cap_s, "Expiration-time cap, seconds");
  }

  LinkBudgetParams build() const {
    LinkBudgetParams p;
    p.queue_slot_delay_s = dq0_ms / 1000.0;
    p.processing_delay_s = ds_ms / 1000.0;
    p.buffer_capacity = buffer_capacity;
    p.queue_at_source = queue_at_source;
    p.let_cap_s = let_cap_s;
    return p;
  }
};

json solution_to_json(const RoutedSolution& s) {
  return json{{"path", s.path.nodes},
              {"hops", s.path.hops()},
              {"se_bps_hz", s.objective.se_bps_hz},
              {"delay_s", s.objective.delay_s},
              {"pet_s", s.objective.pet_s},
              {"feasible", s.objective.feasible}};
}

void print_front(const std::vector<RoutedSolution>& front, OutputFormat format) {
  switch (resolve(format)) {
    case OutputFormat::Json: {
      json arr = json::array();
      for (const auto& s : front) arr.push_back(solution_to_json(s));
      std::cout << arr.dump(2) << "\n";
      return;
    }
    case OutputFormat::Table:
      std::printf("%-40s %4s %10s %12s %12s\n", "path", "hops", "se_bps_hz", "delay_s", "pet_s");
      for (const auto& s : front)
        std::printf("%-40s %4d %10.3f %12.6f %12.3f\n", path_to_string(s.path).c_str(),
                    s.path.hops(), s.objective.se_bps_hz, s.objective.delay_s, s.objective.pet_s);
      if (front.empty()) std::printf("(no feasible path)\n");
      return;
    default:
      std::cout << "path,hops,se_bps_hz,delay_s,pet_s\n";
      for (const auto& s : front)
        std::cout << path_to_string(s.path) << ',' << s.path.hops() << ','
                  << detail::format_double(s.objective.se_bps_hz) << ','
                  << detail::format_double(s.objective.delay_s) << ','
                  << detail::format_double(s.objective.pet_s) << "\n";
      return;
  }
}

std::string infeasibility_reason(const std::vector<LinkMetrics>& links, const ObjectiveVector& o,
                                 const RoutePath& path) {
  for (std::size_t i = 0; i < links.size(); ++i) {
    if (links[i].mode_index == 0)
      return "no ACM mode on link " + path.nodes[i] + ">" + path.nodes[i + 1];
    if (!links[i].feasible)
      return "receiver queue full on link " + path.nodes[i] + ">" + path.nodes[i + 1];
  }
  if (o.delay_s > kDelayCapS) return "end-to-end delay exceeds 250 ms";
  return "";
}

int cmd_evaluate(const DataOptions& data, const LinkOptions& link, const std::string& path_csv,
                 double time_s, OutputFormat format) {
  const Snapshot snap = data.snapshot_at(time_s);
  const PathEvaluator eval(snap, link.build(), data.table());
  const RoutePath path = make_route_path(split_ids(path_csv, ','));
  const ObjectiveVector o = eval.evaluate(path);
  const auto links = eval.link_metrics(path);
  const std::string reason = o.feasible ? "" : infeasibility_reason(links, o, path);

  switch (resolve(format)) {
    case OutputFormat::Json: {
      json out = solution_to_json(RoutedSolution{path, o});
      out["violation"] = o.violation;
      if (!o.feasible) out["reason"] = reason;
      json link_arr = json::array();
      for (const auto& l : links)
        link_arr.push_back(json{{"distance_m", l.distance_m},
                                {"mode", l.mode_index},
                                {"se_bps_hz", l.spectral_efficiency},
                                {"delay_s", l.delay_s},
                                {"let_s", l.let_s},
                                {"feasible", l.feasible}});
      out["links"] = link_arr;
      std::cout << out.dump(2) << "\n";
      break;
    }
    case OutputFormat::Table: {
      std::printf("path      %s\n", path_to_string(path).c_str());
      std::printf("se        %.3f bps/Hz\n", o.se_bps_hz);
      std::printf("delay     %.6f s\n", o.delay_s);
      std::printf("pet       %.3f s\n", o.pet_s);
      std::printf("feasible  %s%s%s\n", o.feasible ? "yes" : "no", o.feasible ? "" : " -- ",
                  reason.c_str());
      std::printf("%-24s %12s %5s %10s %12s %12s\n", "link", "dist_m", "mode", "se", "delay_s",
                  "let_s");
      for (std::size_t i = 0; i < links.size(); ++i)
        std::printf("%-24s %12.1f %5d %10.3f %12.6f %12.3f\n",
                    (path.nodes[i] + ">" + path.nodes[i + 1]).c_str(), links[i].distance_m,
                    links[i].mode_index, links[i].spectral_efficiency, links[i].delay_s,
                    links[i].let_s);
      break;
    }
    default:
      std::cout << "se_bps_hz,delay_s,pet_s,feasible,violation,reason\n"
                << detail::format_double(o.se_bps_hz) << ',' << detail::format_double(o.delay_s)
                << ',' << detail::format_double(o.pet_s) << ',' << (o.feasible ? 1 : 0) << ','
                << detail::format_double(o.violation) << ',' << reason << "\n";
      break;
  }
  return 0;
}

std::vector<RoutedSolution> parse_front_csv(const std::string& text) {
  std::vector<RoutedSolution> out;
  std::size_t start = 0;
  bool header = true;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    std::string_view line{text.data() + start, end - start};
    start = end + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (detail::trim(line).empty()) continue;
    if (header) {
      if (detail::trim(line) != "path,hops,se_bps_hz,delay_s,pet_s")
        throw format_error("result CSV: expected the optimize CSV header");
      header = false;
      continue;
    }
    const auto fields = detail::split(line, ',');
    if (fields.size() != 5) throw format_error("result CSV: expected 5 fields per row");
    RoutedSolution s;
    s.path.nodes = split_ids(std::string(fields[0]), '>');
    s.objective.feasible = true;
    if (!detail::parse_double(fields[2], s.objective.se_bps_hz) ||
        !detail::parse_double(fields[3], s.objective.delay_s) ||
        !detail::parse_double(fields[4], s.objective.pet_s))
      throw format_error("result CSV: bad numeric field");
    out.push_back(std::move(s));
  }
  if (header) throw format_error("result CSV: empty input");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-objective route optimization for aeronautical ad-hoc networks"};
  app.require_subcommand(1);

  std::string format_name = "auto";
  app.add_option("--format", format_name, "Output format: auto|table|csv|json")
      ->capture_default_str();

  DataOptions data;
  LinkOptions link;
  OptimizerOptions optim;

  auto* evaluate = app.add_subcommand("evaluate", "Evaluate one routing path at an instant");
  std::string path_csv;
  double eval_time = 0.0;
  data.attach(evaluate);
  link.attach(evaluate);
  evaluate->add_option("--time", eval_time, "Evaluation time, seconds UTC")->required();
  evaluate->add_option("--path", path_csv, "Comma-separated node ids, ground station last")
      ->required();

  auto* optimize = app.add_subcommand("optimize", "Run the optimizer for one source aircraft");
  std::string source_id;
  double opt_time = 0.0;
  data.attach(optimize);
  link.attach(optimize);
  optim.attach(optimize);
  optimize->add_option("--time", opt_time, "Evaluation time, seconds UTC")->required();
  optimize->add_option("--source", source_id, "Source aircraft id")->required();

  auto* sweep = app.add_subcommand("sweep", "24-hour hourly experiment over a dataset");
  std::string sweep_out;
  int jobs = 1;
  data.attach(sweep);
  link.attach(sweep);
  optim.attach(sweep);
  sweep->add_option("--out", sweep_out, "Output CSV path")->required();
  sweep->add_option("--jobs", jobs, "Parallel per-flight optimizations");

  auto* oracle_cmd = app.add_subcommand("oracle", "Exhaustive front and coverage report");
  std::string result_path;
  double oracle_time = 0.0;
  std::string oracle_source;
  int max_hops = 3;
  bool force = false;
  int oracle_nbox = 20;
  data.attach(oracle_cmd);
  link.attach(oracle_cmd);
  oracle_cmd->add_option("--time", oracle_time, "Evaluation time, seconds UTC")->required();
  oracle_cmd->add_option("--source", oracle_source, "Source aircraft id")->required();
  oracle_cmd->add_option("--max-hops", max_hops, "Enumeration hop limit");
  oracle_cmd->add_option("--result", result_path, "Optimizer front CSV to score for coverage");
  oracle_cmd->add_option("--nbox", oracle_nbox, "Boxes per objective for coverage");
  oracle_cmd->add_flag("--force", force, "Override the enumeration size guard");

  auto* synth = app.add_subcommand("synth", "Write a synthetic flight dataset");
  std::string synth_out;
  std::uint64_t synth_seed = 0;
  int n_flights = 50;
  double duration_hours = 24.0;
  synth->add_option("--out", synth_out, "Output CSV path")->required();
  synth->add_option("--seed", synth_seed, "RNG seed (default 0)");
  synth->add_option("--flights", n_flights, "Number of flights");
  synth->add_option("--duration-hours", duration_hours, "Dataset horizon in hours");

  CLI11_PARSE(app, argc, argv);

  try {
    const OutputFormat format = parse_format(format_name);

    if (*evaluate) return cmd_evaluate(data, link, path_csv, eval_time, format);

    if (*optimize) {
      const Snapshot snap = data.snapshot_at(opt_time);
      const RunResult result = run(snap, source_id, optim.build(), link.build(), data.table());
      print_front(result.front, format);
      return 0;
    }

    if (*sweep) {
      SweepOptions options;
      options.snapshot_window_s = data.window_s;
      options.min_altitude_m = data.min_altitude_m;
      options.jobs = jobs;
      const auto metrics = run_hourly_experiment(data.records(), data.stations(), optim.build(),
                                                 link.build(), data.table(), options);
      write_results(metrics, sweep_out);
      return 0;
    }

    if (*oracle_cmd) {
      const Snapshot snap = data.snapshot_at(oracle_time);
      const auto front = oracle::exact_pareto_front(snap, oracle_source, max_hops, link.build(),
                                                    data.table(), force);
      print_front(front, format);
      if (!result_path.empty()) {
        const auto archive = parse_front_csv(slurp_file(result_path));
        const auto report = oracle::coverage_metrics(archive, front, oracle_nbox);
        if (resolve(format) == OutputFormat::Json) {
          std::cout << json{{"exact_front_size", report.exact_front_size},
                            {"archive_size", report.archive_size},
                            {"fraction_covered", report.fraction_covered},
                            {"generational_distance", report.generational_distance}}
                           .dump(2)
                    << "\n";
        } else {
          std::cout << "exact_front_size,archive_size,fraction_covered,generational_distance\n"
                    << report.exact_front_size << ',' << report.archive_size << ','
                    << detail::format_double(report.fraction_covered) << ','
                    << detail::format_double(report.generational_distance) << "\n";
        }
      }
      return 0;
    }

    if (*synth) {
      const auto records = generate_synthetic_dataset(synth_seed, n_flights,
                                                      duration_hours * 3600.0,
                                                      SyntheticRegion::australia());
      std::ofstream file(synth_out, std::ios::binary);
      if (!file) throw input_error("cannot open output file: " + synth_out);
      const std::string body = write_flight_csv(records);
      file.write(body.data(), static_cast<std::streamsize>(body.size()));
      if (!file) throw input_error("failed writing output file: " + synth_out);
      return 0;
    }
  } catch (const aanet::error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
