#pragma once

// Scenario files, experiment execution, metrics CSV and relative aggregation.
//
// Scenario files use the key=value line grammar of topology files: one
// "key=value" per line, '#' starts a comment. Recognised keys:
//
//   scenario=<id>                 topology=<path, relative to the file>
//   members=<asn>,<asn>,...       hosts_per_member=<n>   (overrides topology)
//   candidate=<BGP|BGPM|SCION>[,...]
//   seed=<n>[,<n>...] | <lo>..<hi>
//   outgoing_conns=<n>|unbounded  bgpm_max_paths=<n>
//   file_size_bytes=<n>           piece_size_bytes=<n>   content_seed=<n>
//   tick_s=<s>                    round_interval_s=<s>   max_sim_time_s=<s>
//   payload_per_packet_bytes=<n>  base_header_bytes=<n>
//   scion_fixed_bytes=<n>         scion_per_hopfield_bytes=<n>
//   overhead=on|off               capacity=shared|duplex
//   rescore=on|off                verify=digest|full
//   corrupt_probability=<p>       max_peers=<n>          (checked, optional)

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <tuple>
#include <vector>

#include "pathswarm/flowsim.hpp"
#include "pathswarm/swarm.hpp"
#include "pathswarm/topology.hpp"

namespace pathswarm {

// Invalid user input: scenario text, topology content, CSV schema.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ScenarioConfig {
  std::string scenario_id = "scenario";
  std::filesystem::path topology_file;
  std::vector<Asn> torrent_members;
  std::optional<std::uint32_t> hosts_per_member;
  Candidate candidate = Candidate::scion;
  std::int64_t file_size_bytes = 100'000'000;
  std::int64_t piece_size_bytes = 256 * 1024;
  std::optional<std::size_t> outgoing_conns;  // nullopt: unbounded
  std::size_t bgpm_max_paths = 8;
  std::uint64_t seed = 1;
  std::uint64_t content_seed = 0;
  double tick_s = 0.1;
  double round_interval_s = 5.0;
  double max_sim_time_s = 36000.0;
  OverheadModel overhead;
  CapacityMode capacity_mode = CapacityMode::shared;
  bool rescore = false;
  VerifyMode verify = VerifyMode::digest;
  double corrupt_probability = 0.0;
  std::optional<std::size_t> max_peers;

  SwarmConfig swarm_config() const {
    SwarmConfig c;
    c.candidate = candidate;
    c.outgoing_conns = outgoing_conns;
    c.bgpm_max_paths = bgpm_max_paths;
    c.seed = seed;
    c.tick_s = tick_s;
    c.round_interval_s = round_interval_s;
    c.overhead = overhead;
    c.capacity_mode = capacity_mode;
    c.selection.rescore_after_pick = rescore;
    c.verify = verify;
    c.corrupt_probability = corrupt_probability;
    c.max_sim_time_s = max_sim_time_s;
    return c;
  }
};

// A parsed scenario file: one base configuration expanded over candidates
// and seeds.
struct ScenarioFile {
  ScenarioConfig base;
  std::vector<Candidate> candidates{Candidate::scion};
  std::vector<std::uint64_t> seeds{1};

  std::vector<ScenarioConfig> expand() const {
    std::vector<ScenarioConfig> out;
    for (auto c : candidates) {
      for (auto s : seeds) {
        auto cfg = base;
        cfg.candidate = c;
        cfg.seed = s;
        out.push_back(std::move(cfg));
      }
    }
    return out;
  }
};

namespace detail {

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const auto next = s.find(sep, pos);
    out.push_back(s.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

template <typename Int>
Int config_int(std::string_view key, std::string_view v) {
  Int out{};
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc{} || ptr != v.data() + v.size())
    throw ConfigError("invalid integer for '" + std::string(key) + "': '" + std::string(v) + "'");
  return out;
}

inline double config_double(std::string_view key, std::string_view v) {
  double out{};
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc{} || ptr != v.data() + v.size() || !std::isfinite(out))
    throw ConfigError("invalid number for '" + std::string(key) + "': '" + std::string(v) + "'");
  return out;
}

inline bool config_switch(std::string_view key, std::string_view v) {
  if (v == "on" || v == "true" || v == "1") return true;
  if (v == "off" || v == "false" || v == "0") return false;
  throw ConfigError("expected on/off for '" + std::string(key) + "': '" + std::string(v) + "'");
}

inline std::vector<std::uint64_t> config_seeds(std::string_view v) {
  std::vector<std::uint64_t> out;
  if (auto dots = v.find(".."); dots != std::string_view::npos) {
    const auto lo = config_int<std::uint64_t>("seed", v.substr(0, dots));
    const auto hi = config_int<std::uint64_t>("seed", v.substr(dots + 2));
    if (hi < lo || hi - lo > 100000) throw ConfigError("invalid seed range '" + std::string(v) + "'");
    for (auto s = lo; s <= hi; ++s) out.push_back(s);
    return out;
  }
  for (auto part : split(v, ',')) out.push_back(config_int<std::uint64_t>("seed", part));
  return out;
}

}  // namespace detail

// Parses "<lo>..<hi>" (or a single value) into an inclusive range.
inline std::pair<std::size_t, std::size_t> parse_conns_range(std::string_view v) {
  auto dots = v.find("..");
  std::size_t lo = 0;
  std::size_t hi = 0;
  if (dots == std::string_view::npos) {
    lo = hi = detail::config_int<std::size_t>("conns", v);
  } else {
    lo = detail::config_int<std::size_t>("conns", v.substr(0, dots));
    hi = detail::config_int<std::size_t>("conns", v.substr(dots + 2));
  }
  if (lo == 0 || hi < lo) throw ConfigError("invalid OutgoingConns range '" + std::string(v) + "'");
  return {lo, hi};
}

inline ScenarioFile parse_scenario(std::string_view text, const std::filesystem::path& base_dir = {}) {
  ScenarioFile file;
  auto& cfg = file.base;
  std::size_t lineno = 0;
  for (auto raw : detail::split(text, '\n')) {
    ++lineno;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    while (!line.empty() && (line.back() == ' ' || line.back() == '\r' || line.back() == '\t')) line.remove_suffix(1);
    while (!line.empty() && (line.front() == ' ' || line.front() == '\t')) line.remove_prefix(1);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos || eq == 0)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key=value");
    const auto key = line.substr(0, eq);
    const auto v = line.substr(eq + 1);
    try {
      if (key == "scenario") {
        if (v.empty() || v.find(',') != std::string_view::npos) throw ConfigError("scenario id must be non-empty and comma-free");
        cfg.scenario_id = std::string(v);
      } else if (key == "topology") {
        cfg.topology_file = base_dir / std::filesystem::path(std::string(v));
      } else if (key == "members") {
        cfg.torrent_members.clear();
        for (auto part : detail::split(v, ',')) cfg.torrent_members.push_back(detail::config_int<Asn>(key, part));
      } else if (key == "hosts_per_member") {
        cfg.hosts_per_member = detail::config_int<std::uint32_t>(key, v);
      } else if (key == "candidate" || key == "candidates") {
        file.candidates.clear();
        for (auto part : detail::split(v, ',')) file.candidates.push_back(parse_candidate(part));
      } else if (key == "seed" || key == "seeds") {
        file.seeds = detail::config_seeds(v);
      } else if (key == "outgoing_conns") {
        if (v == "unbounded") {
          cfg.outgoing_conns.reset();
        } else {
          cfg.outgoing_conns = detail::config_int<std::size_t>(key, v);
          if (*cfg.outgoing_conns == 0) throw ConfigError("outgoing_conns must be >= 1");
        }
      } else if (key == "bgpm_max_paths") {
        cfg.bgpm_max_paths = detail::config_int<std::size_t>(key, v);
        if (cfg.bgpm_max_paths == 0) throw ConfigError("bgpm_max_paths must be >= 1");
      } else if (key == "file_size_bytes") {
        cfg.file_size_bytes = detail::config_int<std::int64_t>(key, v);
      } else if (key == "piece_size_bytes") {
        cfg.piece_size_bytes = detail::config_int<std::int64_t>(key, v);
      } else if (key == "content_seed") {
        cfg.content_seed = detail::config_int<std::uint64_t>(key, v);
      } else if (key == "tick_s") {
        cfg.tick_s = detail::config_double(key, v);
      } else if (key == "round_interval_s") {
        cfg.round_interval_s = detail::config_double(key, v);
      } else if (key == "max_sim_time_s") {
        cfg.max_sim_time_s = detail::config_double(key, v);
      } else if (key == "payload_per_packet_bytes") {
        cfg.overhead.payload_per_packet_bytes = detail::config_int<std::uint32_t>(key, v);
      } else if (key == "base_header_bytes") {
        cfg.overhead.base_header_bytes = detail::config_int<std::uint32_t>(key, v);
      } else if (key == "scion_fixed_bytes") {
        cfg.overhead.scion_fixed_bytes = detail::config_int<std::uint32_t>(key, v);
      } else if (key == "scion_per_hopfield_bytes") {
        cfg.overhead.scion_per_hopfield_bytes = detail::config_int<std::uint32_t>(key, v);
      } else if (key == "overhead") {
        cfg.overhead.enabled = detail::config_switch(key, v);
      } else if (key == "capacity") {
        if (v == "shared") {
          cfg.capacity_mode = CapacityMode::shared;
        } else if (v == "duplex") {
          cfg.capacity_mode = CapacityMode::duplex;
        } else {
          throw ConfigError("capacity must be shared or duplex");
        }
      } else if (key == "rescore") {
        cfg.rescore = detail::config_switch(key, v);
      } else if (key == "verify") {
        if (v == "digest") {
          cfg.verify = VerifyMode::digest;
        } else if (v == "full") {
          cfg.verify = VerifyMode::full;
        } else {
          throw ConfigError("verify must be digest or full");
        }
      } else if (key == "corrupt_probability") {
        cfg.corrupt_probability = detail::config_double(key, v);
      } else if (key == "max_peers") {
        cfg.max_peers = detail::config_int<std::size_t>(key, v);
      } else {
        throw ConfigError("unknown key '" + std::string(key) + "'");
      }
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(lineno) + ": " + e.what());
    } catch (const std::invalid_argument& e) {
      throw ConfigError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }

  if (cfg.topology_file.empty()) throw ConfigError("scenario has no topology");
  if (cfg.torrent_members.empty()) throw ConfigError("scenario has no torrent members");
  if (file.candidates.empty() || file.seeds.empty()) throw ConfigError("scenario needs a candidate and a seed");
  if (cfg.piece_size_bytes < kMinPieceSize || cfg.piece_size_bytes > kMaxPieceSize)
    throw ConfigError("piece_size_bytes must lie in [32768, 4194304]");
  if (cfg.file_size_bytes <= 0) throw ConfigError("file_size_bytes must be positive");
  if (!(cfg.tick_s > 0) || !(cfg.round_interval_s > 0)) throw ConfigError("tick_s and round_interval_s must be positive");
  if (cfg.corrupt_probability < 0 || cfg.corrupt_probability >= 1) throw ConfigError("corrupt_probability must lie in [0, 1)");
  if (cfg.overhead.payload_per_packet_bytes == 0 || cfg.overhead.base_header_bytes == 0 ||
      cfg.overhead.scion_fixed_bytes == 0 || cfg.overhead.scion_per_hopfield_bytes == 0)
    throw ConfigError("overhead constants must be positive");
  return file;
}

inline ScenarioFile load_scenario(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot open scenario file " + file.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), file.parent_path());
}

inline Topology load_topology(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot open topology file " + file.string());
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_topology(buf.str());
  } catch (const TopologyError& e) {
    throw ConfigError(file.string() + ": " + e.what());
  }
}

struct MetricsRecord {
  std::string scenario;
  Candidate candidate{Candidate::bgp};
  std::size_t num_ases{};
  std::optional<std::size_t> outgoing_conns;
  std::string peer;
  double download_time_s{};
  double goodput_mbit{};
  std::size_t paths_used{};
  std::uint64_t seed{};
  bool seeder = false;

  bool operator==(const MetricsRecord&) const = default;
};

// Peers of a scenario in announce order: members in listed order, hosts in
// index order. The first one seeds.
inline std::vector<PeerAddr> scenario_peers(const ScenarioConfig& cfg, const Topology& topo) {
  std::vector<PeerAddr> out;
  for (auto asn : cfg.torrent_members) {
    const auto* node = topo.find_node(asn);
    if (!node) throw ConfigError("torrent member AS " + std::to_string(asn) + " is not in the topology");
    if (std::count(cfg.torrent_members.begin(), cfg.torrent_members.end(), asn) > 1)
      throw ConfigError("torrent member AS " + std::to_string(asn) + " listed twice");
    const auto hosts = cfg.hosts_per_member.value_or(node->host_count);
    for (std::uint32_t h = 0; h < hosts; ++h) out.push_back(PeerAddr{asn, h, kDefaultPeerPort});
  }
  if (out.empty()) throw ConfigError("torrent members host no peers");
  if (cfg.max_peers && *cfg.max_peers != out.size())
    throw ConfigError("max_peers=" + std::to_string(*cfg.max_peers) + " but members host " +
                      std::to_string(out.size()) + " peers");
  return out;
}

inline std::vector<MetricsRecord> run_scenario(const ScenarioConfig& cfg, const Topology& topo,
                                               const TorrentMeta& meta) {
  const auto peers = scenario_peers(cfg, topo);
  SwarmResult result;
  try {
    result = run_swarm(topo, peers, meta, cfg.swarm_config());
  } catch (const SwarmError& e) {
    throw SwarmError("scenario " + cfg.scenario_id + " (" + std::string(to_string(cfg.candidate)) + ", seed " +
                     std::to_string(cfg.seed) + "): " + e.what());
  }
  std::vector<MetricsRecord> out;
  const double file_mbit = static_cast<double>(meta.file_size_bytes) * 8.0 / 1e6;
  for (const auto& p : result.peers) {
    MetricsRecord r;
    r.scenario = cfg.scenario_id;
    r.candidate = cfg.candidate;
    r.num_ases = cfg.torrent_members.size();
    r.outgoing_conns = cfg.outgoing_conns;
    r.peer = to_string(p.addr);
    r.seeder = p.initial_role == Role::seeder;
    r.download_time_s = r.seeder ? 0.0 : p.download_time_s;
    r.goodput_mbit = r.seeder ? 0.0 : file_mbit / p.download_time_s;
    r.paths_used = p.paths_used;
    r.seed = cfg.seed;
    out.push_back(std::move(r));
  }
  return out;
}

// Loads the topology, validates it and generates the torrent, then runs.
inline std::vector<MetricsRecord> run_scenario(const ScenarioConfig& cfg) {
  const auto topo = load_topology(cfg.topology_file);
  if (auto v = validate(topo); !v.empty())
    throw ConfigError(cfg.topology_file.string() + ": " + std::string(to_string(v.front().kind)) + ": " + v.front().detail);
  const auto meta = make_torrent(cfg.file_size_bytes, cfg.piece_size_bytes, cfg.content_seed);
  return run_scenario(cfg, topo, meta);
}

// Runs many configurations, reusing parsed topologies and generated torrents,
// on up to `jobs` threads. Records come back in input order.
inline std::vector<MetricsRecord> run_batch(const std::vector<ScenarioConfig>& configs, unsigned jobs = 1) {
  std::map<std::filesystem::path, std::shared_ptr<const Topology>> topos;
  std::map<std::tuple<std::int64_t, std::int64_t, std::uint64_t>, std::shared_ptr<const TorrentMeta>> torrents;
  for (const auto& cfg : configs) {
    if (!topos.contains(cfg.topology_file)) {
      auto topo = std::make_shared<const Topology>(load_topology(cfg.topology_file));
      if (auto v = validate(*topo); !v.empty())
        throw ConfigError(cfg.topology_file.string() + ": " + std::string(to_string(v.front().kind)) + ": " +
                          v.front().detail);
      topos.emplace(cfg.topology_file, std::move(topo));
    }
    scenario_peers(cfg, *topos.at(cfg.topology_file));
    const auto key = std::tuple{cfg.file_size_bytes, cfg.piece_size_bytes, cfg.content_seed};
    if (!torrents.contains(key))
      torrents.emplace(key, std::make_shared<const TorrentMeta>(
                                make_torrent(cfg.file_size_bytes, cfg.piece_size_bytes, cfg.content_seed)));
  }

  std::vector<std::vector<MetricsRecord>> results(configs.size());
  std::vector<std::exception_ptr> errors(configs.size());
  std::size_t next = 0;
  std::mutex mu;
  auto worker = [&] {
    while (true) {
      std::size_t i = 0;
      {
        std::lock_guard lock(mu);
        if (next == configs.size()) return;
        i = next++;
      }
      const auto& cfg = configs[i];
      try {
        results[i] = run_scenario(cfg, *topos.at(cfg.topology_file),
                                  *torrents.at({cfg.file_size_bytes, cfg.piece_size_bytes, cfg.content_seed}));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  jobs = std::max(1U, std::min<unsigned>(jobs, static_cast<unsigned>(configs.size())));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  std::vector<MetricsRecord> out;
  for (auto& r : results) out.insert(out.end(), std::make_move_iterator(r.begin()), std::make_move_iterator(r.end()));
  return out;
}

// Configurations of an OutgoingConns sweep in (candidate, conns, seed) order.
inline std::vector<ScenarioConfig> sweep_configs(const ScenarioConfig& base, std::size_t lo, std::size_t hi,
                                                 const std::vector<Candidate>& candidates,
                                                 const std::vector<std::uint64_t>& seeds) {
  if (lo == 0 || hi < lo) throw ConfigError("invalid OutgoingConns range");
  std::vector<ScenarioConfig> out;
  for (auto c : candidates) {
    for (std::size_t conns = lo; conns <= hi; ++conns) {
      for (auto s : seeds) {
        auto cfg = base;
        cfg.candidate = c;
        cfg.outgoing_conns = conns;
        cfg.seed = s;
        out.push_back(std::move(cfg));
      }
    }
  }
  return out;
}

inline std::vector<MetricsRecord> sweep_outgoing_conns(const ScenarioConfig& base, std::size_t lo, std::size_t hi,
                                                       const std::vector<std::uint64_t>& seeds, unsigned jobs = 1) {
  return run_batch(sweep_configs(base, lo, hi, {Candidate::bgp, Candidate::bgpm, Candidate::scion}, seeds), jobs);
}

inline constexpr std::string_view kCsvHeader =
    "scenario,candidate,num_ases,outgoing_conns,seed,peer,download_time_s,goodput_mbit,paths_used";

inline std::string format_fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

inline std::string to_csv(const std::vector<MetricsRecord>& records) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const auto& r : records) {
    out += r.scenario;
    out += ',';
    out += to_string(r.candidate);
    out += ',' + std::to_string(r.num_ases) + ',';
    out += r.outgoing_conns ? std::to_string(*r.outgoing_conns) : "unbounded";
    out += ',' + std::to_string(r.seed) + ',' + r.peer + ',';
    out += format_fixed(r.download_time_s, 3) + ',' + format_fixed(r.goodput_mbit, 6) + ',';
    out += std::to_string(r.paths_used);
    out += '\n';
  }
  return out;
}

// Reads records back from CSV text with the exact header above. Seeder rows
// are recognised by a zero download time.
inline std::vector<MetricsRecord> parse_csv(std::string_view text) {
  auto lines = detail::split(text, '\n');
  auto strip = [](std::string_view l) {
    if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
    return l;
  };
  if (lines.empty() || strip(lines[0]) != kCsvHeader)
    throw ConfigError("CSV header mismatch: expected '" + std::string(kCsvHeader) + "'");
  std::vector<MetricsRecord> out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto line = strip(lines[i]);
    if (line.empty()) continue;
    const auto f = detail::split(line, ',');
    if (f.size() != 9) throw ConfigError("CSV row " + std::to_string(i + 1) + ": expected 9 columns");
    try {
      MetricsRecord r;
      r.scenario = std::string(f[0]);
      r.candidate = parse_candidate(f[1]);
      r.num_ases = detail::config_int<std::size_t>("num_ases", f[2]);
      if (f[3] != "unbounded") r.outgoing_conns = detail::config_int<std::size_t>("outgoing_conns", f[3]);
      r.seed = detail::config_int<std::uint64_t>("seed", f[4]);
      r.peer = std::string(f[5]);
      r.download_time_s = detail::config_double("download_time_s", f[6]);
      r.goodput_mbit = detail::config_double("goodput_mbit", f[7]);
      r.paths_used = detail::config_int<std::size_t>("paths_used", f[8]);
      r.seeder = r.download_time_s == 0.0;
      out.push_back(std::move(r));
    } catch (const std::invalid_argument& e) {
      throw ConfigError("CSV row " + std::to_string(i + 1) + ": " + e.what());
    }
  }
  return out;
}

struct MeanSd {
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation; NaN for a single value
  std::size_t n = 0;
};

inline MeanSd mean_sd(const std::vector<double>& xs) {
  MeanSd m;
  m.n = xs.size();
  if (xs.empty()) return m;
  m.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  if (xs.size() < 2) {
    m.sd = std::numeric_limits<double>::quiet_NaN();
    return m;
  }
  double ss = 0.0;
  for (double x : xs) ss += (x - m.mean) * (x - m.mean);
  m.sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  return m;
}

struct RelativeRow {
  std::string scenario;
  std::size_t num_ases{};
  std::optional<std::size_t> outgoing_conns;
  Candidate candidate{Candidate::bgp};
  MeanSd rel_goodput_pct;        // across seeds
  MeanSd rel_download_time_pct;  // across seeds
  MeanSd mean_download_time_s;   // across seeds, of the per-seed leecher mean
};

// Per (scenario, num_ases, outgoing_conns) group and seed: relative goodput is
// the candidate's summed per-peer goodput over the baseline's, relative
// download time the candidate's mean leecher download time over the
// baseline's, both in percent. Reported as mean and sample stddev across the
// seeds present for both.
inline std::vector<RelativeRow> aggregate_relative(const std::vector<MetricsRecord>& records,
                                                   Candidate baseline = Candidate::bgp) {
  using Group = std::tuple<std::string, std::size_t, std::optional<std::size_t>>;
  struct Acc {
    double goodput = 0.0;
    double time_sum = 0.0;
    std::size_t leechers = 0;
  };
  std::map<Group, std::map<Candidate, std::map<std::uint64_t, Acc>>> acc;
  for (const auto& r : records) {
    auto& a = acc[Group{r.scenario, r.num_ases, r.outgoing_conns}][r.candidate][r.seed];
    if (r.seeder) continue;
    a.goodput += r.goodput_mbit;
    a.time_sum += r.download_time_s;
    ++a.leechers;
  }

  std::vector<RelativeRow> out;
  for (const auto& [group, by_candidate] : acc) {
    const auto base_it = by_candidate.find(baseline);
    if (base_it == by_candidate.end())
      throw ConfigError("baseline " + std::string(to_string(baseline)) + " missing for scenario " + std::get<0>(group));
    for (const auto& [cand, by_seed] : by_candidate) {
      std::vector<double> goodput, dl, abs_dl;
      for (const auto& [seed, a] : by_seed) {
        const auto b = base_it->second.find(seed);
        if (b == base_it->second.end() || a.leechers == 0 || b->second.leechers == 0) continue;
        goodput.push_back(a.goodput / b->second.goodput * 100.0);
        const double mean_a = a.time_sum / static_cast<double>(a.leechers);
        const double mean_b = b->second.time_sum / static_cast<double>(b->second.leechers);
        dl.push_back(mean_a / mean_b * 100.0);
        abs_dl.push_back(mean_a);
      }
      if (goodput.empty()) continue;
      RelativeRow row;
      std::tie(row.scenario, row.num_ases, row.outgoing_conns) = group;
      row.candidate = cand;
      row.rel_goodput_pct = mean_sd(goodput);
      row.rel_download_time_pct = mean_sd(dl);
      row.mean_download_time_s = mean_sd(abs_dl);
      out.push_back(std::move(row));
    }
  }
  return out;
}

inline constexpr std::string_view kReportHeader =
    "scenario,num_ases,outgoing_conns,candidate,seeds,rel_goodput_pct,rel_goodput_sample_sd,"
    "rel_download_time_pct,rel_download_time_sample_sd,mean_download_time_s,mean_download_time_sample_sd";

inline std::string format_report(const std::vector<RelativeRow>& rows) {
  std::string out(kReportHeader);
  out += '\n';
  for (const auto& r : rows) {
    out += r.scenario + ',' + std::to_string(r.num_ases) + ',';
    out += r.outgoing_conns ? std::to_string(*r.outgoing_conns) : "unbounded";
    out += ',';
    out += to_string(r.candidate);
    out += ',' + std::to_string(r.rel_goodput_pct.n);
    for (const auto* m : {&r.rel_goodput_pct, &r.rel_download_time_pct, &r.mean_download_time_s})
      out += ',' + format_fixed(m->mean, 3) + ',' + format_fixed(m->sd, 3);
    out += '\n';
  }
  return out;
}

}  // namespace pathswarm
