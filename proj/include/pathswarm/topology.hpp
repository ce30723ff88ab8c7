#pragma once

// AS-level topology: nodes, capacity-annotated inter-AS links with interface
// IDs, the line-based file format, and structural validation.
//
// File grammar (one entity per line, tokens separated by single spaces, a
// token starting with '#' begins a comment):
//
//   as <asn> tier=<1|2> hosts=<n>
//   link <asnA>#<ifA> <asnB>#<ifB> type=<transit|peering> cap_mbit=<decimal> [provider=<asn>]

#include <algorithm>
#include <charconv>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "pathswarm/address.hpp"

namespace pathswarm {

struct InterfaceId {
  Asn asn{};
  std::uint32_t local_if{};

  auto operator<=>(const InterfaceId&) const = default;
};

inline std::string to_string(const InterfaceId& id) {
  return std::to_string(id.asn) + "#" + std::to_string(id.local_if);
}

struct AsNode {
  Asn asn{};
  int tier{2};
  std::uint32_t host_count{};

  bool operator==(const AsNode&) const = default;
};

enum class LinkKind { transit, peering };

struct LinkSpec {
  InterfaceId end_a;
  InterfaceId end_b;
  LinkKind kind{LinkKind::peering};
  double capacity_mbit{};
  std::optional<Asn> provider;  // set iff kind == transit

  bool operator==(const LinkSpec&) const = default;
};

// How a link is traversed when leaving `from` over it.
enum class Traversal { up, down, peer };

class TopologyError : public std::runtime_error {
 public:
  TopologyError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Immutable after construction. Index structures tolerate invalid input (first
// occurrence wins) so that validate() can report on arbitrary node/link sets.
class Topology {
 public:
  Topology() = default;

  Topology(std::vector<AsNode> nodes, std::vector<LinkSpec> links)
      : nodes_(std::move(nodes)), links_(std::move(links)) {
    for (std::size_t i = 0; i < nodes_.size(); ++i) node_index_.emplace(nodes_[i].asn, i);
    for (std::size_t i = 0; i < links_.size(); ++i) {
      const auto& l = links_[i];
      iface_index_.emplace(l.end_a, i);
      iface_index_.emplace(l.end_b, i);
      adjacency_[l.end_a.asn].push_back(i);
      if (l.end_b.asn != l.end_a.asn) adjacency_[l.end_b.asn].push_back(i);
    }
  }

  const std::vector<AsNode>& nodes() const { return nodes_; }
  const std::vector<LinkSpec>& links() const { return links_; }

  const AsNode* find_node(Asn asn) const {
    auto it = node_index_.find(asn);
    return it == node_index_.end() ? nullptr : &nodes_[it->second];
  }

  bool has_node(Asn asn) const { return node_index_.contains(asn); }

  std::optional<std::size_t> link_at(const InterfaceId& id) const {
    auto it = iface_index_.find(id);
    if (it == iface_index_.end()) return std::nullopt;
    return it->second;
  }

  // Link indices incident to `asn`, in declaration order.
  std::span<const std::size_t> incident_links(Asn asn) const {
    auto it = adjacency_.find(asn);
    if (it == adjacency_.end()) return {};
    return it->second;
  }

  // The interface on `from`'s side of link `idx` and the one on the far side.
  std::pair<InterfaceId, InterfaceId> oriented_ends(std::size_t idx, Asn from) const {
    const auto& l = links_[idx];
    return l.end_a.asn == from ? std::pair{l.end_a, l.end_b} : std::pair{l.end_b, l.end_a};
  }

  Traversal traversal(std::size_t idx, Asn from) const {
    const auto& l = links_[idx];
    if (l.kind == LinkKind::peering) return Traversal::peer;
    const Asn to = oriented_ends(idx, from).second.asn;
    return l.provider == to ? Traversal::up : Traversal::down;
  }

  bool operator==(const Topology& other) const {
    return nodes_ == other.nodes_ && links_ == other.links_;
  }

 private:
  std::vector<AsNode> nodes_;
  std::vector<LinkSpec> links_;
  std::map<Asn, std::size_t> node_index_;
  std::map<InterfaceId, std::size_t> iface_index_;
  std::map<Asn, std::vector<std::size_t>> adjacency_;
};

namespace detail {

inline std::vector<std::string_view> split_tokens(std::string_view line, std::size_t lineno) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos <= line.size()) {
    const auto next = line.find(' ', pos);
    const auto tok = line.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos);
    if (!tok.empty() && tok.front() == '#') break;
    if (tok.empty()) throw TopologyError(lineno, "empty token (tokens are separated by single spaces)");
    out.push_back(tok);
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

template <typename Int>
Int parse_uint(std::string_view s, std::size_t lineno, std::string_view what) {
  Int v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
    throw TopologyError(lineno, "invalid " + std::string(what) + " '" + std::string(s) + "'");
  return v;
}

inline std::string_view expect_key(std::string_view tok, std::string_view key, std::size_t lineno) {
  if (tok.size() <= key.size() || tok.substr(0, key.size()) != key || tok[key.size()] != '=')
    throw TopologyError(lineno, "expected '" + std::string(key) + "=...' but found '" + std::string(tok) + "'");
  return tok.substr(key.size() + 1);
}

inline double parse_decimal(std::string_view s, std::size_t lineno) {
  const bool shape_ok = !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return (c >= '0' && c <= '9') || c == '.';
  }) && std::count(s.begin(), s.end(), '.') <= 1 && s.front() != '.' && s.back() != '.';
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (!shape_ok || ec != std::errc{} || ptr != s.data() + s.size())
    throw TopologyError(lineno, "invalid decimal '" + std::string(s) + "'");
  return v;
}

inline InterfaceId parse_interface(std::string_view s, std::size_t lineno) {
  const auto hash = s.find('#');
  if (hash == std::string_view::npos) throw TopologyError(lineno, "expected <asn>#<if> but found '" + std::string(s) + "'");
  InterfaceId id{parse_uint<Asn>(s.substr(0, hash), lineno, "ASN"),
                 parse_uint<std::uint32_t>(s.substr(hash + 1), lineno, "interface number")};
  if (id.asn == 0 || id.local_if == 0) throw TopologyError(lineno, "ASN and interface number must be positive");
  return id;
}

inline std::string format_decimal(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed);
  return std::string(buf, ptr);
}

}  // namespace detail

// Parses topology-file text. Throws TopologyError (with the offending line)
// on syntax errors, duplicate ASNs or interfaces, malformed transit/provider
// annotations and links referencing undeclared ASes. Connectivity is left to
// validate().
inline Topology parse_topology(std::string_view text) {
  std::vector<AsNode> nodes;
  std::vector<LinkSpec> links;
  std::map<Asn, std::size_t> as_lines;
  std::map<InterfaceId, std::size_t> iface_lines;
  std::vector<std::size_t> link_lines;

  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    ++lineno;
    auto eol = text.find('\n', pos);
    auto line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() : eol + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    while (!line.empty() && line.back() == ' ') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;

    const auto toks = detail::split_tokens(line, lineno);
    if (toks.empty()) continue;
    if (toks[0] == "as") {
      if (toks.size() != 4) throw TopologyError(lineno, "expected 'as <asn> tier=<1|2> hosts=<n>'");
      AsNode n;
      n.asn = detail::parse_uint<Asn>(toks[1], lineno, "ASN");
      if (n.asn == 0) throw TopologyError(lineno, "ASN must be positive");
      n.tier = detail::parse_uint<int>(detail::expect_key(toks[2], "tier", lineno), lineno, "tier");
      if (n.tier != 1 && n.tier != 2) throw TopologyError(lineno, "tier must be 1 or 2");
      n.host_count = detail::parse_uint<std::uint32_t>(detail::expect_key(toks[3], "hosts", lineno), lineno, "host count");
      if (auto [it, fresh] = as_lines.emplace(n.asn, lineno); !fresh)
        throw TopologyError(lineno, "duplicate ASN " + std::to_string(n.asn) + " (first declared on line " +
                                        std::to_string(it->second) + ")");
      nodes.push_back(n);
    } else if (toks[0] == "link") {
      if (toks.size() != 5 && toks.size() != 6)
        throw TopologyError(lineno, "expected 'link <a>#<if> <b>#<if> type=<t> cap_mbit=<c> [provider=<asn>]'");
      LinkSpec l;
      l.end_a = detail::parse_interface(toks[1], lineno);
      l.end_b = detail::parse_interface(toks[2], lineno);
      const auto type = detail::expect_key(toks[3], "type", lineno);
      if (type == "transit") {
        l.kind = LinkKind::transit;
      } else if (type == "peering") {
        l.kind = LinkKind::peering;
      } else {
        throw TopologyError(lineno, "unknown link type '" + std::string(type) + "'");
      }
      l.capacity_mbit = detail::parse_decimal(detail::expect_key(toks[4], "cap_mbit", lineno), lineno);
      if (!(l.capacity_mbit > 0)) throw TopologyError(lineno, "capacity must be positive");
      if (toks.size() == 6)
        l.provider = detail::parse_uint<Asn>(detail::expect_key(toks[5], "provider", lineno), lineno, "provider ASN");

      if (l.end_a.asn == l.end_b.asn) throw TopologyError(lineno, "link endpoints must be in different ASes");
      if (l.kind == LinkKind::transit && !l.provider) throw TopologyError(lineno, "transit link without provider");
      if (l.kind == LinkKind::peering && l.provider) throw TopologyError(lineno, "peering link must not name a provider");
      if (l.provider && *l.provider != l.end_a.asn && *l.provider != l.end_b.asn)
        throw TopologyError(lineno, "provider " + std::to_string(*l.provider) + " is not an endpoint of the link");
      for (const auto& end : {l.end_a, l.end_b}) {
        if (auto [it, fresh] = iface_lines.emplace(end, lineno); !fresh)
          throw TopologyError(lineno, "duplicate interface " + to_string(end) + " (first used on line " +
                                          std::to_string(it->second) + ")");
      }
      links.push_back(l);
      link_lines.push_back(lineno);
    } else {
      throw TopologyError(lineno, "unknown directive '" + std::string(toks[0]) + "'");
    }
  }

  for (std::size_t i = 0; i < links.size(); ++i) {
    for (const auto& end : {links[i].end_a, links[i].end_b}) {
      if (!as_lines.contains(end.asn))
        throw TopologyError(link_lines[i], "link endpoint references undeclared AS " + std::to_string(end.asn));
    }
  }
  return Topology(std::move(nodes), std::move(links));
}

// Inverse of parse_topology: nodes first, then links, in stored order.
inline std::string serialize_topology(const Topology& topo) {
  std::ostringstream out;
  for (const auto& n : topo.nodes())
    out << "as " << n.asn << " tier=" << n.tier << " hosts=" << n.host_count << '\n';
  for (const auto& l : topo.links()) {
    out << "link " << to_string(l.end_a) << ' ' << to_string(l.end_b)
        << " type=" << (l.kind == LinkKind::transit ? "transit" : "peering")
        << " cap_mbit=" << detail::format_decimal(l.capacity_mbit);
    if (l.provider) out << " provider=" << *l.provider;
    out << '\n';
  }
  return out.str();
}

enum class ViolationKind {
  duplicate_asn,
  invalid_asn,
  invalid_tier,
  duplicate_interface,
  invalid_interface,
  self_link,
  nonpositive_capacity,
  transit_without_provider,
  provider_not_endpoint,
  provider_on_peering,
  dangling_endpoint,
  disconnected,
  unreachable_peer,
};

inline std::string_view to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::duplicate_asn: return "duplicate-asn";
    case ViolationKind::invalid_asn: return "invalid-asn";
    case ViolationKind::invalid_tier: return "invalid-tier";
    case ViolationKind::duplicate_interface: return "duplicate-interface";
    case ViolationKind::invalid_interface: return "invalid-interface";
    case ViolationKind::self_link: return "self-link";
    case ViolationKind::nonpositive_capacity: return "nonpositive-capacity";
    case ViolationKind::transit_without_provider: return "transit-without-provider";
    case ViolationKind::provider_not_endpoint: return "provider-not-endpoint";
    case ViolationKind::provider_on_peering: return "provider-on-peering";
    case ViolationKind::dangling_endpoint: return "dangling-endpoint";
    case ViolationKind::disconnected: return "disconnected";
    case ViolationKind::unreachable_peer: return "unreachable-peer";
  }
  return "unknown";
}

struct Violation {
  ViolationKind kind;
  std::string detail;
};

namespace detail {

// ASes reachable from `src` over valley-free walks. Phase 0 may still climb;
// phase 1 (after a peering or downhill link) may only descend.
inline std::set<Asn> valley_free_reachable(const Topology& topo, Asn src) {
  std::set<std::pair<Asn, int>> seen{{src, 0}};
  std::vector<std::pair<Asn, int>> stack{{src, 0}};
  std::set<Asn> out;
  while (!stack.empty()) {
    auto [cur, phase] = stack.back();
    stack.pop_back();
    out.insert(cur);
    for (std::size_t idx : topo.incident_links(cur)) {
      if (!topo.has_node(topo.oriented_ends(idx, cur).second.asn)) continue;
      const auto t = topo.traversal(idx, cur);
      if (phase == 1 && t != Traversal::down) continue;
      const int next_phase = (t == Traversal::up) ? 0 : 1;
      const Asn next = topo.oriented_ends(idx, cur).second.asn;
      if (seen.emplace(next, next_phase).second) stack.emplace_back(next, next_phase);
    }
  }
  return out;
}

}  // namespace detail

// Reports every violated structural invariant, plus missing valley-free
// reachability between host-bearing ASes. An empty result means the topology
// is usable for simulation.
inline std::vector<Violation> validate(const Topology& topo) {
  std::vector<Violation> out;
  auto report = [&](ViolationKind k, std::string d) { out.push_back({k, std::move(d)}); };

  std::map<Asn, int> asn_count;
  for (const auto& n : topo.nodes()) {
    if (++asn_count[n.asn] == 2) report(ViolationKind::duplicate_asn, "AS " + std::to_string(n.asn));
    if (n.asn == 0) report(ViolationKind::invalid_asn, "ASN 0");
    if (n.tier != 1 && n.tier != 2)
      report(ViolationKind::invalid_tier, "AS " + std::to_string(n.asn) + " tier " + std::to_string(n.tier));
  }

  std::map<InterfaceId, int> iface_count;
  for (const auto& l : topo.links()) {
    const std::string name = to_string(l.end_a) + "--" + to_string(l.end_b);
    for (const auto& end : {l.end_a, l.end_b}) {
      if (++iface_count[end] == 2) report(ViolationKind::duplicate_interface, to_string(end));
      if (end.local_if == 0) report(ViolationKind::invalid_interface, to_string(end));
      if (!asn_count.contains(end.asn))
        report(ViolationKind::dangling_endpoint, name + " references undeclared AS " + std::to_string(end.asn));
    }
    if (l.end_a.asn == l.end_b.asn) report(ViolationKind::self_link, name);
    if (!(l.capacity_mbit > 0)) report(ViolationKind::nonpositive_capacity, name);
    if (l.kind == LinkKind::transit && !l.provider) report(ViolationKind::transit_without_provider, name);
    if (l.kind == LinkKind::peering && l.provider) report(ViolationKind::provider_on_peering, name);
    if (l.provider && *l.provider != l.end_a.asn && *l.provider != l.end_b.asn)
      report(ViolationKind::provider_not_endpoint, name);
  }

  // Undirected components, over declared ASes only.
  std::map<Asn, int> component;
  int num_components = 0;
  for (const auto& n : topo.nodes()) {
    if (component.contains(n.asn)) continue;
    const int c = num_components++;
    std::vector<Asn> stack{n.asn};
    component[n.asn] = c;
    while (!stack.empty()) {
      const Asn cur = stack.back();
      stack.pop_back();
      for (std::size_t idx : topo.incident_links(cur)) {
        const Asn next = topo.oriented_ends(idx, cur).second.asn;
        if (topo.has_node(next) && component.emplace(next, c).second) stack.push_back(next);
      }
    }
  }
  std::vector<Asn> host_ases;
  std::set<int> host_components;
  for (const auto& n : topo.nodes()) {
    if (n.host_count > 0 && std::find(host_ases.begin(), host_ases.end(), n.asn) == host_ases.end()) {
      host_ases.push_back(n.asn);
      host_components.insert(component[n.asn]);
    }
  }
  // Components that hold no peers are reported directly; separation between
  // peer-holding ASes shows up as unreachable-peer below.
  if (num_components > 1) {
    std::set<int> reported;
    for (const auto& n : topo.nodes()) {
      const int c = component[n.asn];
      if (host_components.contains(c) || (host_components.empty() && c == 0)) continue;
      if (reported.insert(c).second)
        report(ViolationKind::disconnected, "AS " + std::to_string(n.asn) + " is not connected to the rest of the topology");
    }
  }

  for (std::size_t i = 0; i < host_ases.size(); ++i) {
    const auto reach = detail::valley_free_reachable(topo, host_ases[i]);
    for (std::size_t j = i + 1; j < host_ases.size(); ++j) {
      if (!reach.contains(host_ases[j]))
        report(ViolationKind::unreachable_peer, "no valley-free path between AS " + std::to_string(host_ases[i]) +
                                                    " and AS " + std::to_string(host_ases[j]));
    }
  }
  return out;
}

}  // namespace pathswarm
