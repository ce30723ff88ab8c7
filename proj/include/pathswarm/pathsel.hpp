#pragma once

// Path-level peers and uploader-side disjoint path selection.
//
// An uploader gathers every path to every interested peer into one pool,
// scores each path by the number of interface IDs it shares with all other
// paths in the pool, sorts by (conflicts, hops) and turns the first
// max_outgoing_conns entries into path-level peers. The pick is a greedy
// prefix of the sorted pool; nothing is re-scored after a pick unless the
// rescoring variant is requested explicitly.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "pathswarm/address.hpp"
#include "pathswarm/routing.hpp"

namespace pathswarm {

struct PathLevelPeer {
  PeerAddr addr;
  Path path;

  bool operator==(const PathLevelPeer&) const = default;
};

struct ScoredPath {
  Path path;
  std::uint64_t conflicts{};
  PeerAddr owner_addr;

  bool operator==(const ScoredPath&) const = default;
};

// Size of the multiset intersection of the two hop lists.
inline std::size_t num_conflicts(const Path& p1, const Path& p2) {
  if (p2.hops.size() <= 64) {
    std::uint64_t used = 0;
    std::size_t n = 0;
    for (const auto& id : p1.hops) {
      for (std::size_t j = 0; j < p2.hops.size(); ++j) {
        if (!(used >> j & 1U) && p2.hops[j] == id) {
          used |= std::uint64_t{1} << j;
          ++n;
          break;
        }
      }
    }
    return n;
  }
  std::vector<InterfaceId> a = p1.hops;
  std::vector<InterfaceId> b = p2.hops;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t n = 0;
  for (auto i = a.begin(), j = b.begin(); i != a.end() && j != b.end();) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++n, ++i, ++j;
    }
  }
  return n;
}

// Each entry is compared against every other entry by position, so two
// entries with identical routes still conflict with each other.
inline std::vector<ScoredPath> score_all(std::span<const std::pair<PeerAddr, Path>> all_paths) {
  std::vector<ScoredPath> out;
  out.reserve(all_paths.size());
  for (const auto& [owner, path] : all_paths) out.push_back(ScoredPath{path, 0, owner});
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (std::size_t j = i + 1; j < out.size(); ++j) {
      const auto c = num_conflicts(out[i].path, out[j].path);
      out[i].conflicts += c;
      out[j].conflicts += c;
    }
  }
  return out;
}

// Ascending conflicts, then AS-path length, then owner address and hop list.
// Stable, so complete ties keep their input order.
inline std::vector<ScoredPath> sort_by_conflicts_and_hops(std::vector<ScoredPath> scored) {
  std::stable_sort(scored.begin(), scored.end(), [](const ScoredPath& a, const ScoredPath& b) {
    if (a.conflicts != b.conflicts) return a.conflicts < b.conflicts;
    if (a.path.as_path_len() != b.path.as_path_len()) return a.path.as_path_len() < b.path.as_path_len();
    if (a.owner_addr != b.owner_addr) return a.owner_addr < b.owner_addr;
    return a.path.hops < b.path.hops;
  });
  return scored;
}

using PathLookup = std::function<std::vector<Path>(const PeerAddr&)>;

struct DisjointSelection {
  std::vector<PathLevelPeer> peers;
  // Peers for which the lookup returned no path; they are left out.
  std::vector<PeerAddr> skipped;
};

struct SelectionOptions {
  // Re-score the remaining pool against the already selected paths after
  // each pick instead of taking the static sorted prefix.
  bool rescore_after_pick = false;
};

namespace detail {

inline std::vector<PathLevelPeer> rescoring_pick(const std::vector<ScoredPath>& sorted, std::size_t budget) {
  std::vector<PathLevelPeer> out;
  std::vector<bool> taken(sorted.size(), false);
  while (out.size() < budget) {
    std::size_t best = sorted.size();
    std::size_t best_overlap = std::numeric_limits<std::size_t>::max();
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      if (taken[i]) continue;
      std::size_t overlap = 0;
      for (const auto& chosen : out) overlap += num_conflicts(sorted[i].path, chosen.path);
      // Strict comparison keeps the sorted order as the tie-break.
      if (overlap < best_overlap) {
        best_overlap = overlap;
        best = i;
      }
    }
    if (best == sorted.size()) break;
    taken[best] = true;
    out.push_back(PathLevelPeer{sorted[best].owner_addr, sorted[best].path});
  }
  return out;
}

}  // namespace detail

inline DisjointSelection select_disjoint(std::span<const PeerAddr> peers, const PathLookup& path_lookup,
                                         std::size_t max_outgoing_conns, SelectionOptions options = {}) {
  if (max_outgoing_conns == 0) throw std::invalid_argument("select_disjoint: max_outgoing_conns must be >= 1");

  DisjointSelection result;
  std::vector<std::pair<PeerAddr, Path>> all_paths;
  for (const auto& peer : peers) {
    auto paths = path_lookup(peer);
    if (paths.empty()) {
      result.skipped.push_back(peer);
      continue;
    }
    for (auto& p : paths) all_paths.emplace_back(peer, std::move(p));
  }

  const auto sorted = sort_by_conflicts_and_hops(score_all(all_paths));
  const std::size_t budget = std::min(max_outgoing_conns, sorted.size());
  if (options.rescore_after_pick) {
    result.peers = detail::rescoring_pick(sorted, budget);
  } else {
    result.peers.reserve(budget);
    for (std::size_t i = 0; i < budget; ++i)
      result.peers.push_back(PathLevelPeer{sorted[i].owner_addr, sorted[i].path});
  }
  return result;
}

}  // namespace pathswarm
