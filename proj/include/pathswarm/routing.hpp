#pragma once

// Valley-free path enumeration and the two BGP-based forwarding candidates:
// single best path and ECMP over the equal-length set with 5-tuple hashing.

#include <algorithm>
#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "pathswarm/address.hpp"
#include "pathswarm/topology.hpp"

namespace pathswarm {

// Inter-AS path as the list of interface IDs it crosses: for each traversed
// link, the egress interface of the upstream AS followed by the ingress
// interface of the downstream AS.
struct Path {
  Asn src_asn{};
  Asn dst_asn{};
  std::vector<InterfaceId> hops;

  // Number of ASes on the path, endpoints included.
  std::size_t as_path_len() const { return hops.size() / 2 + 1; }
  std::size_t link_count() const { return hops.size() / 2; }

  // ASN of the AS right after the source.
  Asn next_hop_asn() const { return hops.size() >= 2 ? hops[1].asn : dst_asn; }

  std::vector<Asn> as_sequence() const {
    std::vector<Asn> out{src_asn};
    for (std::size_t i = 1; i < hops.size(); i += 2) out.push_back(hops[i].asn);
    return out;
  }

  bool operator==(const Path&) const = default;
};

inline std::string to_string(const Path& p) {
  std::string s;
  for (std::size_t i = 0; i < p.hops.size(); ++i) {
    if (i) s += (i % 2 == 1) ? ">" : " ";
    s += to_string(p.hops[i]);
  }
  return s;
}

class RoutingError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Ascending AS-path length, then lexicographic on the hop list.
inline bool path_order(const Path& a, const Path& b) {
  if (a.as_path_len() != b.as_path_len()) return a.as_path_len() < b.as_path_len();
  return a.hops < b.hops;
}

// Checks the structural invariants of a path against a topology: even hop
// count of at least 2, every hop pair is a declared link, endpoints match,
// no AS repeated. Does not check valley-freeness.
inline bool is_well_formed(const Path& p, const Topology& topo) {
  if (p.hops.size() < 2 || p.hops.size() % 2 != 0) return false;
  if (p.hops.front().asn != p.src_asn || p.hops.back().asn != p.dst_asn) return false;
  for (std::size_t i = 0; i + 1 < p.hops.size(); i += 2) {
    const auto idx = topo.link_at(p.hops[i]);
    if (!idx) return false;
    if (topo.oriented_ends(*idx, p.hops[i].asn).second != p.hops[i + 1]) return false;
    if (i + 2 < p.hops.size() && p.hops[i + 1].asn != p.hops[i + 2].asn) return false;
  }
  auto ases = p.as_sequence();
  std::sort(ases.begin(), ases.end());
  return std::adjacent_find(ases.begin(), ases.end()) == ases.end();
}

namespace detail {

struct ValleyFreeSearch {
  const Topology& topo;
  Asn dst;
  std::vector<Asn> on_path;
  std::vector<InterfaceId> hops;
  std::vector<Path> found;

  // climbing: no peering or downhill link taken yet.
  void visit(Asn cur, bool climbing) {
    for (std::size_t idx : topo.incident_links(cur)) {
      const auto [egress, ingress] = topo.oriented_ends(idx, cur);
      const Asn next = ingress.asn;
      if (!topo.has_node(next) || std::find(on_path.begin(), on_path.end(), next) != on_path.end()) continue;
      const auto t = topo.traversal(idx, cur);
      if (!climbing && t != Traversal::down) continue;

      hops.push_back(egress);
      hops.push_back(ingress);
      if (next == dst) {
        found.push_back(Path{on_path.front(), dst, hops});
      } else {
        on_path.push_back(next);
        visit(next, climbing && t == Traversal::up);
        on_path.pop_back();
      }
      hops.resize(hops.size() - 2);
    }
  }
};

}  // namespace detail

// All loop-free paths from src to dst of the form up* peer? down*, sorted by
// path_order.
inline std::vector<Path> enumerate_valley_free_paths(const Topology& topo, Asn src, Asn dst) {
  if (!topo.has_node(src)) throw RoutingError("unknown source AS " + std::to_string(src));
  if (!topo.has_node(dst)) throw RoutingError("unknown destination AS " + std::to_string(dst));
  if (src == dst) throw RoutingError("source and destination AS must differ");

  detail::ValleyFreeSearch search{topo, dst, {src}, {}, {}};
  search.visit(src, true);
  std::sort(search.found.begin(), search.found.end(), path_order);
  return std::move(search.found);
}

// BGP decision order used here: shortest AS_PATH, then lowest next-hop ASN,
// then lexicographic hop list.
inline bool bgp_preference(const Path& a, const Path& b) {
  if (a.as_path_len() != b.as_path_len()) return a.as_path_len() < b.as_path_len();
  if (a.next_hop_asn() != b.next_hop_asn()) return a.next_hop_asn() < b.next_hop_asn();
  return a.hops < b.hops;
}

inline Path bgp_best_path(std::span<const Path> paths) {
  if (paths.empty()) throw RoutingError("bgp_best_path: empty path list");
  return *std::min_element(paths.begin(), paths.end(), bgp_preference);
}

// Shortest-length paths in BGP preference order, at most max_paths of them.
inline std::vector<Path> bgpm_equal_cost_set(std::span<const Path> paths, std::size_t max_paths) {
  if (paths.empty()) throw RoutingError("bgpm_equal_cost_set: empty path list");
  if (max_paths == 0) throw RoutingError("bgpm_equal_cost_set: max_paths must be positive");
  std::vector<Path> sorted(paths.begin(), paths.end());
  std::sort(sorted.begin(), sorted.end(), bgp_preference);
  const auto shortest = sorted.front().as_path_len();
  std::vector<Path> out;
  for (auto& p : sorted) {
    if (p.as_path_len() != shortest || out.size() == max_paths) break;
    out.push_back(std::move(p));
  }
  return out;
}

inline constexpr std::uint8_t kProtoUdp = 17;

struct FiveTuple {
  PeerAddr src_addr;
  PeerAddr dst_addr;
  std::uint16_t src_port{};
  std::uint16_t dst_port{};
  std::uint8_t l4{kProtoUdp};

  bool operator==(const FiveTuple&) const = default;
};

// Canonical encoding: fields in declaration order, integers big-endian.
// An address is asn (4 bytes), host (4 bytes), port (2 bytes).
inline std::array<std::uint8_t, 25> encode(const FiveTuple& t) {
  std::array<std::uint8_t, 25> out{};
  std::size_t i = 0;
  auto put = [&](std::uint64_t v, int bytes) {
    for (int b = bytes - 1; b >= 0; --b) out[i++] = static_cast<std::uint8_t>(v >> (8 * b));
  };
  for (const auto& a : {t.src_addr, t.dst_addr}) {
    put(a.asn, 4);
    put(a.host, 4);
    put(a.port, 2);
  }
  put(t.src_port, 2);
  put(t.dst_port, 2);
  put(t.l4, 1);
  return out;
}

inline std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (auto b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline const Path& flow_hash_select(const FiveTuple& t, std::span<const Path> pathset) {
  if (pathset.empty()) throw RoutingError("flow_hash_select: empty path set");
  const auto bytes = encode(t);
  return pathset[fnv1a64(bytes) % pathset.size()];
}

}  // namespace pathswarm
