#pragma once

// Hand-traced disjoint-selection fixtures.

#include <string>
#include <utility>
#include <vector>

#include "pathswarm/pathsel.hpp"
#include "pathswarm/routing.hpp"
#include "pathswarm/topology.hpp"

namespace fixture {

using namespace pathswarm;

// Three single-path peers over abstract hop lists. |A∩B| = 2, |A∩C| = 0,
// |B∩C| = 1, giving scores A = 2, B = 3, C = 1 and the order C, A, B.
struct ThreePath {
  PeerAddr a{201, 0}, b{202, 0}, c{203, 0};
  Path pa{10, 201, {{10, 1}, {1, 1}, {1, 2}, {201, 1}}};
  Path pb{10, 202, {{10, 1}, {1, 1}, {1, 3}, {202, 1}}};
  Path pc{10, 203, {{10, 2}, {2, 1}, {1, 3}, {203, 1}}};

  std::vector<PeerAddr> peers() const { return {a, b, c}; }

  PathLookup lookup() const {
    return [*this](const PeerAddr& p) -> std::vector<Path> {
      if (p == a) return {pa};
      if (p == b) return {pb};
      if (p == c) return {pc};
      return {};
    };
  }
};

// Uploader in AS 10, peers in AS 20 and AS 30, two valley-free paths each.
// Only the two routes over the 1-2 core link overlap (4 shared interface IDs).
//
//   P1  10 > 1 > 2 > 20   core      conflicts 4
//   P2  10 > 20           peering   conflicts 0
//   Q1  10 > 1 > 2 > 30   core      conflicts 4
//   Q2  10 > 40 > 30      provider  conflicts 0
//
// Sorted: P2, Q2, P1, Q1.
inline const char* kFourPathTopology =
    "as 1 tier=1 hosts=0\n"
    "as 2 tier=1 hosts=0\n"
    "as 10 tier=2 hosts=1\n"
    "as 20 tier=2 hosts=1\n"
    "as 30 tier=2 hosts=1\n"
    "as 40 tier=2 hosts=0\n"
    "link 1#1 2#1 type=peering cap_mbit=15\n"
    "link 10#1 1#2 type=transit cap_mbit=10 provider=1\n"
    "link 20#1 2#2 type=transit cap_mbit=10 provider=2\n"
    "link 30#1 2#3 type=transit cap_mbit=10 provider=2\n"
    "link 10#2 20#2 type=peering cap_mbit=10\n"
    "link 10#3 40#1 type=transit cap_mbit=10 provider=40\n"
    "link 40#2 30#2 type=transit cap_mbit=10 provider=40\n";

struct FourPath {
  Topology topo = parse_topology(kFourPathTopology);
  PeerAddr p{20, 0}, q{30, 0};
  Path p1{10, 20, {{10, 1}, {1, 2}, {1, 1}, {2, 1}, {2, 2}, {20, 1}}};
  Path p2{10, 20, {{10, 2}, {20, 2}}};
  Path q1{10, 30, {{10, 1}, {1, 2}, {1, 1}, {2, 1}, {2, 3}, {30, 1}}};
  Path q2{10, 30, {{10, 3}, {40, 1}, {40, 2}, {30, 2}}};

  std::vector<PeerAddr> peers() const { return {p, q}; }

  PathLookup lookup() const {
    return [this](const PeerAddr& peer) { return enumerate_valley_free_paths(topo, 10, peer.asn); };
  }
};

}  // namespace fixture
