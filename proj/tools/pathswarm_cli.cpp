// pathswarm: run BitTorrent swarm scenarios over BGP, BGP-M and SCION-style
// path selection and summarise the results.
//
//   pathswarm validate <topo>
//   pathswarm run <scenario.cfg> [--out file.csv] [--jobs N]
//   pathswarm sweep <scenario.cfg> --conns 3..10 [--out file.csv] [--jobs N]
//   pathswarm report <csv...> [--baseline BGP]
//
// Exit status: 0 success, 1 invalid input, 2 runtime failure.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "pathswarm/scenario.hpp"
#include "pathswarm/topology.hpp"

namespace {

constexpr int kExitInvalid = 1;
constexpr int kExitRuntime = 2;

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  out << text;
}

int cmd_validate(const std::string& topo_path) {
  const auto topo = pathswarm::load_topology(topo_path);
  const auto violations = pathswarm::validate(topo);
  for (const auto& v : violations) std::cout << pathswarm::to_string(v.kind) << ": " << v.detail << '\n';
  if (!violations.empty()) return kExitInvalid;
  std::cout << "ok: " << topo.nodes().size() << " ASes, " << topo.links().size() << " links\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Flow-level BitTorrent swarm simulator for path-aware inter-domain routing"};
  app.require_subcommand(1);

  std::string topo_path;
  auto* validate = app.add_subcommand("validate", "Check a topology file");
  validate->add_option("topology", topo_path, "Topology file")->required();

  std::string scenario_path;
  std::string out_path;
  unsigned jobs = std::max(1U, std::thread::hardware_concurrency());
  auto* run = app.add_subcommand("run", "Run every candidate and seed listed in a scenario file");
  run->add_option("scenario", scenario_path, "Scenario file")->required();
  run->add_option("--out", out_path, "Write CSV here instead of stdout");
  run->add_option("--jobs", jobs, "Parallel runs");

  std::string conns = "3..10";
  auto* sweep = app.add_subcommand("sweep", "Sweep OutgoingConns for BGP, BGPM and SCION");
  sweep->add_option("scenario", scenario_path, "Scenario file")->required();
  sweep->add_option("--conns", conns, "Inclusive range lo..hi")->capture_default_str();
  sweep->add_option("--out", out_path, "Write CSV here instead of stdout");
  sweep->add_option("--jobs", jobs, "Parallel runs");

  std::vector<std::string> csv_paths;
  std::string baseline = "BGP";
  auto* report = app.add_subcommand("report", "Relative goodput and download time against a baseline");
  report->add_option("csv", csv_paths, "Metrics CSV files")->required();
  report->add_option("--baseline", baseline, "Baseline candidate")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitInvalid;
  }

  try {
    if (*validate) return cmd_validate(topo_path);

    if (*run) {
      const auto file = pathswarm::load_scenario(scenario_path);
      emit(pathswarm::to_csv(pathswarm::run_batch(file.expand(), jobs)), out_path);
      return 0;
    }

    if (*sweep) {
      const auto file = pathswarm::load_scenario(scenario_path);
      const auto [lo, hi] = pathswarm::parse_conns_range(conns);
      const auto configs = pathswarm::sweep_configs(
          file.base, lo, hi, {pathswarm::Candidate::bgp, pathswarm::Candidate::bgpm, pathswarm::Candidate::scion},
          file.seeds);
      emit(pathswarm::to_csv(pathswarm::run_batch(configs, jobs)), out_path);
      return 0;
    }

    if (*report) {
      std::vector<pathswarm::MetricsRecord> records;
      for (const auto& path : csv_paths) {
        std::ifstream in(path);
        if (!in) throw pathswarm::ConfigError("cannot open " + path);
        std::stringstream buf;
        buf << in.rdbuf();
        auto part = pathswarm::parse_csv(buf.str());
        records.insert(records.end(), part.begin(), part.end());
      }
      std::cout << pathswarm::format_report(
          pathswarm::aggregate_relative(records, pathswarm::parse_candidate(baseline)));
      return 0;
    }
  } catch (const pathswarm::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const pathswarm::TopologyError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
