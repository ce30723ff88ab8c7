#pragma once

// BitTorrent mechanics on top of the flow engine.
//
// Every peer that holds at least one verified piece acts as an uploader. At
// each connect-back round it looks at the interested peers (leechers in other
// ASes that miss a piece it has) and opens outgoing connections to them within
// its OutgoingConns budget:
//   BGP    one connection per peer over the BGP best path
//   BGPM   one connection per peer, path picked by 5-tuple hash over ECMP set
//   SCION  one connection per selected path-level peer (disjoint selection)
// Each connection carries at most one piece at a time. The downloading side
// picks the piece from its own seeded random queue. Pieces are hash-verified
// on arrival and re-queued at the tail if verification fails. Peers that
// finish stay in the swarm as seeders.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "pathswarm/address.hpp"
#include "pathswarm/flowsim.hpp"
#include "pathswarm/pathsel.hpp"
#include "pathswarm/rng.hpp"
#include "pathswarm/routing.hpp"
#include "pathswarm/sha256.hpp"
#include "pathswarm/topology.hpp"

namespace pathswarm {

inline constexpr std::int64_t kMinPieceSize = 32 * 1024;
inline constexpr std::int64_t kMaxPieceSize = 4 * 1024 * 1024;

struct TorrentMeta {
  std::int64_t file_size_bytes{};
  std::int64_t piece_size_bytes{};
  std::vector<Digest> piece_hashes;
  std::uint64_t content_seed{};
  Digest file_digest{};

  std::size_t piece_count() const { return piece_hashes.size(); }

  std::int64_t piece_length(std::size_t index) const {
    const auto start = static_cast<std::int64_t>(index) * piece_size_bytes;
    return std::min(piece_size_bytes, file_size_bytes - start);
  }
};

// Keyed pseudo-random content of piece `index`: a splitmix64 stream seeded by
// (content_seed, index), little-endian bytes.
inline void fill_piece_content(std::uint64_t content_seed, std::size_t index, std::span<std::uint8_t> out) {
  std::uint64_t state = derive_seed(content_seed, {index});
  std::size_t i = 0;
  while (i < out.size()) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    z ^= z >> 31;
    for (int b = 0; b < 8 && i < out.size(); ++b, ++i) out[i] = static_cast<std::uint8_t>(z >> (8 * b));
  }
}

inline std::vector<std::uint8_t> piece_content(const TorrentMeta& meta, std::size_t index) {
  std::vector<std::uint8_t> buf(static_cast<std::size_t>(meta.piece_length(index)));
  fill_piece_content(meta.content_seed, index, buf);
  return buf;
}

inline TorrentMeta make_torrent(std::int64_t file_size, std::int64_t piece_size, std::uint64_t content_seed) {
  if (file_size <= 0) throw std::invalid_argument("make_torrent: file size must be positive");
  if (piece_size < kMinPieceSize || piece_size > kMaxPieceSize)
    throw std::invalid_argument("make_torrent: piece size must lie in [32 KiB, 4 MiB]");
  TorrentMeta meta;
  meta.file_size_bytes = file_size;
  meta.piece_size_bytes = piece_size;
  meta.content_seed = content_seed;
  const auto count = static_cast<std::size_t>((file_size + piece_size - 1) / piece_size);
  meta.piece_hashes.resize(count);
  Sha256 whole;
  std::vector<std::uint8_t> buf(static_cast<std::size_t>(piece_size));
  for (std::size_t i = 0; i < count; ++i) {
    std::span<std::uint8_t> piece(buf.data(), static_cast<std::size_t>(meta.piece_length(i)));
    fill_piece_content(content_seed, i, piece);
    meta.piece_hashes[i] = sha256(piece);
    whole.update(piece);
  }
  meta.file_digest = whole.finish();
  return meta;
}

inline bool verify_piece(const TorrentMeta& meta, std::size_t index, std::span<const std::uint8_t> content) {
  if (index >= meta.piece_count()) throw std::out_of_range("verify_piece: piece index out of range");
  if (static_cast<std::int64_t>(content.size()) != meta.piece_length(index))
    throw std::invalid_argument("verify_piece: content length " + std::to_string(content.size()) +
                                " does not match piece length " + std::to_string(meta.piece_length(index)));
  return sha256(content) == meta.piece_hashes[index];
}

class Tracker {
 public:
  void announce(const PeerAddr& addr) {
    if (std::find(peers_.begin(), peers_.end(), addr) == peers_.end()) peers_.push_back(addr);
  }

  // All announced peers except the caller, in announce order.
  std::vector<PeerAddr> get_peers(const PeerAddr& caller) const {
    std::vector<PeerAddr> out;
    out.reserve(peers_.size());
    for (const auto& p : peers_)
      if (p != caller) out.push_back(p);
    return out;
  }

  std::size_t size() const { return peers_.size(); }

 private:
  std::vector<PeerAddr> peers_;
};

enum class PieceStatus : std::uint8_t { missing, in_flight, verified };
enum class Role { seeder, leecher };

struct PeerState {
  PeerAddr addr;
  Role role{Role::leecher};
  std::vector<PieceStatus> bitmap;
  // Request order. An entry is live only if queue_pos[piece] points at it;
  // re-queued pieces leave a stale entry behind.
  std::vector<std::uint32_t> queue;
  std::vector<std::size_t> queue_pos;
  std::size_t queue_head = 0;
  std::size_t verified_count = 0;
  std::vector<std::uint64_t> outgoing;  // connection ids
  std::optional<double> completed_at;
  std::int64_t bytes_received = 0;
  std::size_t pieces_failed = 0;
  std::uint64_t version = 0;  // bumped whenever the bitmap changes

  bool has(std::size_t piece) const { return bitmap[piece] == PieceStatus::verified; }
  bool complete() const { return verified_count == bitmap.size(); }

  static PeerState seeder(const PeerAddr& addr, std::size_t pieces) {
    PeerState s;
    s.addr = addr;
    s.role = Role::seeder;
    s.bitmap.assign(pieces, PieceStatus::verified);
    s.verified_count = pieces;
    s.completed_at = 0.0;
    return s;
  }

  template <typename Engine>
  static PeerState leecher(const PeerAddr& addr, std::size_t pieces, Engine& rng) {
    PeerState s;
    s.addr = addr;
    s.role = Role::leecher;
    s.bitmap.assign(pieces, PieceStatus::missing);
    s.queue.resize(pieces);
    for (std::size_t i = 0; i < pieces; ++i) s.queue[i] = static_cast<std::uint32_t>(i);
    seeded_shuffle(s.queue, rng);
    s.queue_pos.resize(pieces);
    for (std::size_t i = 0; i < pieces; ++i) s.queue_pos[s.queue[i]] = i;
    return s;
  }

  // Puts a piece back to missing and at the tail of the queue.
  void requeue(std::size_t piece) {
    bitmap[piece] = PieceStatus::missing;
    queue_pos[piece] = queue.size();
    queue.push_back(static_cast<std::uint32_t>(piece));
    ++version;
  }

  void mark_verified(std::size_t piece) {
    bitmap[piece] = PieceStatus::verified;
    ++verified_count;
    ++version;
  }
};

// Pops the first live missing piece in the leecher's queue that the uploader
// holds and marks it in flight.
inline std::optional<std::size_t> request_next_piece(PeerState& leecher, const PeerState& uploader) {
  auto live = [&](std::size_t pos) { return leecher.queue_pos[leecher.queue[pos]] == pos; };
  while (leecher.queue_head < leecher.queue.size()) {
    const std::size_t piece = leecher.queue[leecher.queue_head];
    if (live(leecher.queue_head) && leecher.bitmap[piece] != PieceStatus::verified) break;
    ++leecher.queue_head;
  }
  for (std::size_t pos = leecher.queue_head; pos < leecher.queue.size(); ++pos) {
    const std::size_t piece = leecher.queue[pos];
    if (!live(pos) || leecher.bitmap[piece] != PieceStatus::missing || !uploader.has(piece)) continue;
    leecher.bitmap[piece] = PieceStatus::in_flight;
    return piece;
  }
  return std::nullopt;
}

// True if `leecher` misses (not even in flight) some piece `uploader` holds.
inline bool is_interested(const PeerState& leecher, const PeerState& uploader) {
  if (leecher.complete()) return false;
  for (std::size_t i = 0; i < leecher.bitmap.size(); ++i)
    if (leecher.bitmap[i] == PieceStatus::missing && uploader.has(i)) return true;
  return false;
}

// Per-AS-pair routes, computed on first use.
class RouteTable {
 public:
  RouteTable(const Topology& topo, std::size_t bgpm_max_paths) : topo_(&topo), max_paths_(bgpm_max_paths) {}

  struct Entry {
    std::vector<Path> all;
    std::optional<Path> best;
    std::vector<Path> ecmp;
  };

  // Empty for ASes without a valley-free path and for src == dst.
  const Entry& get(Asn src, Asn dst) {
    auto [it, fresh] = cache_.try_emplace({src, dst});
    if (fresh && src != dst) {
      it->second.all = enumerate_valley_free_paths(*topo_, src, dst);
      if (!it->second.all.empty()) {
        it->second.best = bgp_best_path(it->second.all);
        it->second.ecmp = bgpm_equal_cost_set(it->second.all, max_paths_);
      }
    }
    return it->second;
  }

 private:
  const Topology* topo_;
  std::size_t max_paths_;
  std::map<std::pair<Asn, Asn>, Entry> cache_;
};

struct PlannedConnection {
  PathLevelPeer remote;
  FiveTuple tuple;
};

using PortSource = std::function<std::uint16_t()>;

// Connections an uploader wants to hold this round, in priority order.
// `interested` is taken in the given order for the BGP candidates.
inline std::vector<PlannedConnection> uploader_connect_back(Candidate candidate, const PeerAddr& uploader,
                                                            std::span<const PeerAddr> interested,
                                                            RouteTable& routes, std::size_t budget,
                                                            const PortSource& next_port,
                                                            SelectionOptions options = {}) {
  if (budget == 0) throw std::invalid_argument("uploader_connect_back: OutgoingConns must be >= 1");
  std::vector<PlannedConnection> out;
  auto tuple_to = [&](const PeerAddr& remote) { return FiveTuple{uploader, remote, next_port(), remote.port, kProtoUdp}; };

  if (candidate == Candidate::scion) {
    auto lookup = [&](const PeerAddr& peer) { return routes.get(uploader.asn, peer.asn).all; };
    auto sel = select_disjoint(interested, lookup, budget, options);
    for (auto& plp : sel.peers) {
      auto tuple = tuple_to(plp.addr);
      out.push_back(PlannedConnection{std::move(plp), tuple});
    }
    return out;
  }

  for (const auto& peer : interested) {
    if (out.size() == budget) break;
    const auto& entry = routes.get(uploader.asn, peer.asn);
    if (!entry.best) continue;
    auto tuple = tuple_to(peer);
    const Path& path = candidate == Candidate::bgp ? *entry.best : flow_hash_select(tuple, entry.ecmp);
    out.push_back(PlannedConnection{PathLevelPeer{peer, path}, tuple});
  }
  return out;
}

enum class VerifyMode {
  // Re-generate and hash every delivered piece.
  full,
  // Intact deliveries are accepted on the sender's digest; corrupted ones are
  // hashed and rejected.
  digest,
};

struct SwarmConfig {
  Candidate candidate = Candidate::scion;
  std::optional<std::size_t> outgoing_conns;  // nullopt: unbounded
  std::size_t bgpm_max_paths = 8;
  std::uint64_t seed = 1;
  double tick_s = 0.1;
  double round_interval_s = 5.0;
  OverheadModel overhead;
  CapacityMode capacity_mode = CapacityMode::shared;
  SelectionOptions selection;
  VerifyMode verify = VerifyMode::digest;
  double corrupt_probability = 0.0;
  double max_sim_time_s = 36000.0;
};

struct Connection {
  std::uint64_t id{};
  std::size_t uploader{};
  std::size_t remote{};
  PathLevelPeer remote_peer;
  FiveTuple tuple;
  std::optional<FlowId> flow;
  std::optional<std::size_t> piece;
  bool draining = false;
  std::uint64_t seen_uploader_version = 0;
  std::uint64_t seen_remote_version = 0;
};

struct PeerOutcome {
  PeerAddr addr;
  Role initial_role{Role::leecher};
  double download_time_s = 0.0;
  std::size_t paths_used = 0;
  std::int64_t bytes_received = 0;
  std::size_t pieces_failed = 0;
};

struct SwarmResult {
  std::vector<PeerOutcome> peers;
  double end_time_s = 0.0;
  std::size_t max_outgoing_seen = 0;
  std::vector<std::string> warnings;
};

class SwarmError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One simulated swarm. The first peer is the initial seeder; peers are
// announced to the tracker in the given order.
class Swarm {
 public:
  Swarm(const Topology& topo, std::span<const PeerAddr> peers, const TorrentMeta& meta, SwarmConfig config)
      : topo_(&topo),
        meta_(&meta),
        config_(config),
        routes_(topo, config.bgpm_max_paths),
        engine_(topo, config.overhead, config.capacity_mode, config.tick_s),
        port_rng_(derive_seed(config.seed, {0x706f7274})),
        fault_rng_(derive_seed(config.seed, {0x6661756c})) {
    if (peers.empty()) throw std::invalid_argument("swarm needs at least one peer");
    if (config.outgoing_conns && *config.outgoing_conns == 0)
      throw std::invalid_argument("OutgoingConns must be >= 1");
    if (!(config.round_interval_s > 0)) throw std::invalid_argument("round interval must be positive");
    for (std::size_t i = 0; i < peers.size(); ++i) {
      if (!topo.has_node(peers[i].asn))
        throw std::invalid_argument("peer " + to_string(peers[i]) + " is homed in an unknown AS");
      tracker_.announce(peers[i]);
      if (i == 0) {
        peers_.push_back(PeerState::seeder(peers[i], meta.piece_count()));
      } else {
        SimRng rng(derive_seed(config.seed, {0x71756575, i}));
        peers_.push_back(PeerState::leecher(peers[i], meta.piece_count(), rng));
      }
      index_.emplace(peers[i], i);
    }
    if (tracker_.size() != peers.size()) throw std::invalid_argument("duplicate peer address");
    received_paths_.resize(peers_.size());
    for (std::size_t i = 0; i < peers_.size(); ++i) {
      auto order = tracker_.get_peers(peers_[i].addr);
      SimRng rng(derive_seed(config.seed, {0x70726566, i}));
      seeded_shuffle(order, rng);
      preference_.push_back(std::move(order));
    }
  }

  Swarm(const Swarm&) = delete;
  Swarm& operator=(const Swarm&) = delete;

  // Advances one tick. Returns false once every peer holds the whole file.
  bool step() {
    if (all_complete()) return false;
    const double now = engine_.now_s();
    if (now + 1e-9 >= next_round_s_) {
      run_round();
      next_round_s_ += config_.round_interval_s;
      if (engine_.active_count() == 0 && !all_complete())
        throw SwarmError("no progress at t=" + std::to_string(now) + "s: no active transfers while " +
                         std::to_string(incomplete_count()) + " leechers are incomplete");
    }
    for (const auto& ev : engine_.advance(config_.tick_s)) on_flow_complete(ev);
    retry_idle_connections();
    return !all_complete();
  }

  SwarmResult run() {
    while (step()) {
      if (engine_.now_s() > config_.max_sim_time_s)
        throw SwarmError("simulation exceeded " + std::to_string(config_.max_sim_time_s) + "s");
    }
    return result();
  }

  SwarmResult result() const {
    SwarmResult r;
    r.end_time_s = engine_.now_s();
    r.max_outgoing_seen = max_outgoing_seen_;
    r.warnings = warnings_;
    for (std::size_t i = 0; i < peers_.size(); ++i) {
      const auto& p = peers_[i];
      PeerOutcome o;
      o.addr = p.addr;
      o.initial_role = i == 0 ? Role::seeder : Role::leecher;
      o.download_time_s = i == 0 ? 0.0 : p.completed_at.value_or(std::numeric_limits<double>::quiet_NaN());
      o.paths_used = received_paths_[i].size();
      o.bytes_received = p.bytes_received;
      o.pieces_failed = p.pieces_failed;
      r.peers.push_back(o);
    }
    return r;
  }

  bool all_complete() const { return incomplete_count() == 0; }

  std::size_t incomplete_count() const {
    return static_cast<std::size_t>(
        std::count_if(peers_.begin(), peers_.end(), [](const PeerState& p) { return !p.complete(); }));
  }

  const std::vector<PeerState>& peers() const { return peers_; }
  const FlowEngine& engine() const { return engine_; }
  const std::map<std::uint64_t, Connection>& connections() const { return connections_; }
  const Tracker& tracker() const { return tracker_; }
  std::size_t max_outgoing_seen() const { return max_outgoing_seen_; }

 private:
  std::size_t budget_for(std::size_t candidates) const {
    return config_.outgoing_conns ? *config_.outgoing_conns : std::max<std::size_t>(1, candidates);
  }

  std::uint16_t next_port() {
    return static_cast<std::uint16_t>(49152 + uniform_below(port_rng_, 65536 - 49152));
  }

  // Identity used to match planned against existing connections.
  bool same_target(const Connection& c, const PlannedConnection& p) const {
    if (c.remote_peer.addr != p.remote.addr) return false;
    return config_.candidate != Candidate::scion || c.remote_peer.path == p.remote.path;
  }

  void run_round() {
    for (std::size_t u = 0; u < peers_.size(); ++u) {
      if (peers_[u].verified_count == 0) continue;
      const auto& up = peers_[u];

      // Candidates in the uploader's own fixed seeded order of the tracker list.
      std::vector<PeerAddr> interested;
      std::size_t path_level_total = 0;
      for (const auto& addr : preference_[u]) {
        const auto v = index_.at(addr);
        if (addr.asn == up.addr.asn || !is_interested(peers_[v], up)) continue;
        const auto& route = routes_.get(up.addr.asn, addr.asn);
        if (route.all.empty()) {
          warn("no valley-free path from " + to_string(up.addr) + " to " + to_string(addr));
          continue;
        }
        interested.push_back(addr);
        path_level_total += config_.candidate == Candidate::scion ? route.all.size() : 1;
      }

      std::vector<PlannedConnection> planned;
      const std::size_t budget = budget_for(path_level_total);
      if (!interested.empty())
        planned = uploader_connect_back(config_.candidate, up.addr, interested, routes_, budget,
                                        [this] { return next_port(); }, config_.selection);

      std::vector<bool> matched(planned.size(), false);
      for (auto cid : std::vector<std::uint64_t>(peers_[u].outgoing)) {
        auto& c = connections_.at(cid);
        bool keep = false;
        for (std::size_t i = 0; i < planned.size(); ++i) {
          if (!matched[i] && same_target(c, planned[i])) {
            matched[i] = keep = true;
            break;
          }
        }
        if (keep) {
          c.draining = false;
        } else if (c.flow) {
          c.draining = true;
        } else {
          close(cid);
        }
      }
      for (std::size_t i = 0; i < planned.size(); ++i) {
        if (matched[i] || peers_[u].outgoing.size() >= budget) continue;
        open(u, planned[i]);
      }
      max_outgoing_seen_ = std::max(max_outgoing_seen_, peers_[u].outgoing.size());
      for (auto cid : std::vector<std::uint64_t>(peers_[u].outgoing)) {
        auto it = connections_.find(cid);
        if (it != connections_.end() && !it->second.flow && !it->second.draining) start_transfer(cid, 0.0);
      }
    }
  }

  void open(std::size_t u, const PlannedConnection& plan) {
    Connection c;
    c.id = next_conn_id_++;
    c.uploader = u;
    c.remote = index_.at(plan.remote.addr);
    c.remote_peer = plan.remote;
    c.tuple = plan.tuple;
    peers_[u].outgoing.push_back(c.id);
    connections_.emplace(c.id, std::move(c));
  }

  void close(std::uint64_t cid) {
    auto it = connections_.find(cid);
    if (it == connections_.end()) return;
    auto& out = peers_[it->second.uploader].outgoing;
    out.erase(std::remove(out.begin(), out.end(), cid), out.end());
    if (it->second.flow) {
      engine_.remove_flow(*it->second.flow);
      flow_owner_.erase(*it->second.flow);
    }
    if (it->second.piece) {
      auto& leecher = peers_[it->second.remote];
      if (leecher.bitmap[*it->second.piece] == PieceStatus::in_flight) {
        leecher.bitmap[*it->second.piece] = PieceStatus::missing;
        ++leecher.version;
      }
    }
    connections_.erase(it);
  }

  // Requests pieces over an idle connection until one needs an actual
  // transfer. `credit` is transfer budget left over from a piece that
  // finished earlier in the same tick.
  void start_transfer(std::uint64_t cid, double credit) {
    while (true) {
      auto& c = connections_.at(cid);
      auto& leecher = peers_[c.remote];
      const auto piece = request_next_piece(leecher, peers_[c.uploader]);
      if (!piece) {
        c.seen_uploader_version = peers_[c.uploader].version;
        c.seen_remote_version = leecher.version;
        return;
      }
      c.piece = *piece;
      const auto len = meta_->piece_length(*piece);
      if (credit >= static_cast<double>(len)) {
        credit -= static_cast<double>(len);
        if (!deliver(cid)) return;
        continue;
      }
      const auto whole = static_cast<std::int64_t>(std::floor(credit));
      c.flow = engine_.add_flow(c.tuple, c.remote_peer.path, config_.candidate, len - whole);
      flow_owner_[*c.flow] = cid;
      return;
    }
  }

  // Completes the piece on connection `cid`. Returns false if the connection
  // was closed as a consequence.
  bool deliver(std::uint64_t cid) {
    auto& c = connections_.at(cid);
    const std::size_t piece = *c.piece;
    auto& leecher = peers_[c.remote];
    leecher.bytes_received += meta_->piece_length(piece);
    c.piece.reset();
    c.flow.reset();

    if (piece_ok(piece)) {
      leecher.mark_verified(piece);
      received_paths_[c.remote].insert(c.remote_peer.path.hops);
      if (leecher.complete()) {
        leecher.completed_at = engine_.now_s();
        leecher.role = Role::seeder;
        // Nothing left to fetch: drop every connection into it.
        std::vector<std::uint64_t> into;
        for (const auto& [id, other] : connections_)
          if (other.remote == c.remote) into.push_back(id);
        for (auto id : into) close(id);
        return false;
      }
    } else {
      ++leecher.pieces_failed;
      leecher.requeue(piece);
    }
    if (c.draining) {
      close(cid);
      return false;
    }
    return true;
  }

  bool piece_ok(std::size_t piece) {
    bool corrupt = false;
    if (config_.corrupt_probability > 0) corrupt = uniform_unit(fault_rng_) < config_.corrupt_probability;
    if (config_.verify == VerifyMode::digest && !corrupt) return true;
    auto content = piece_content(*meta_, piece);
    if (corrupt) content[static_cast<std::size_t>(uniform_below(fault_rng_, content.size()))] ^= 0x01;
    return verify_piece(*meta_, piece, content);
  }

  void on_flow_complete(const CompletionEvent& ev) {
    const auto owner = flow_owner_.find(ev.flow_id);
    if (owner == flow_owner_.end()) return;
    const auto cid = owner->second;
    flow_owner_.erase(owner);
    if (!connections_.contains(cid)) return;
    if (deliver(cid)) start_transfer(cid, ev.unused_bytes);
  }

  void retry_idle_connections() {
    std::vector<std::uint64_t> idle;
    for (const auto& [id, c] : connections_) {
      if (c.flow || c.draining) continue;
      if (c.seen_uploader_version != peers_[c.uploader].version || c.seen_remote_version != peers_[c.remote].version)
        idle.push_back(id);
    }
    for (auto id : idle)
      if (connections_.contains(id)) start_transfer(id, 0.0);
  }

  void warn(std::string msg) {
    if (std::find(warnings_.begin(), warnings_.end(), msg) == warnings_.end()) warnings_.push_back(std::move(msg));
  }

  const Topology* topo_;
  const TorrentMeta* meta_;
  SwarmConfig config_;
  RouteTable routes_;
  FlowEngine engine_;
  Tracker tracker_;
  std::vector<PeerState> peers_;
  std::map<PeerAddr, std::size_t> index_;
  std::vector<std::vector<PeerAddr>> preference_;
  std::map<std::uint64_t, Connection> connections_;
  std::map<FlowId, std::uint64_t> flow_owner_;
  std::vector<std::set<std::vector<InterfaceId>>> received_paths_;
  SimRng port_rng_;
  SimRng fault_rng_;
  double next_round_s_ = 0.0;
  std::uint64_t next_conn_id_ = 1;
  std::size_t max_outgoing_seen_ = 0;
  std::vector<std::string> warnings_;
};

inline SwarmResult run_swarm(const Topology& topo, std::span<const PeerAddr> peers, const TorrentMeta& meta,
                             const SwarmConfig& config) {
  Swarm swarm(topo, peers, meta, config);
  return swarm.run();
}

}  // namespace pathswarm
