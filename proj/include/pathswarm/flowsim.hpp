#pragma once

// Time-stepped fluid engine. Every active flow is pinned to one path and gets
// a max-min fair rate; a flow's draw on each link it crosses is its goodput
// rate times the header overhead ratio of its candidate and path.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pathswarm/routing.hpp"
#include "pathswarm/topology.hpp"

namespace pathswarm {

enum class Candidate { bgp, bgpm, scion };

inline std::string_view to_string(Candidate c) {
  switch (c) {
    case Candidate::bgp: return "BGP";
    case Candidate::bgpm: return "BGPM";
    case Candidate::scion: return "SCION";
  }
  return "?";
}

inline Candidate parse_candidate(std::string_view s) {
  if (s == "BGP") return Candidate::bgp;
  if (s == "BGPM" || s == "BGP-M") return Candidate::bgpm;
  if (s == "SCION") return Candidate::scion;
  throw std::invalid_argument("unknown candidate '" + std::string(s) + "' (expected BGP, BGPM or SCION)");
}

struct OverheadModel {
  std::uint32_t payload_per_packet_bytes = 1200;
  std::uint32_t base_header_bytes = 62;
  std::uint32_t scion_fixed_bytes = 36;
  std::uint32_t scion_per_hopfield_bytes = 12;
  // When false every candidate is charged exactly its goodput.
  bool enabled = true;

  static OverheadModel none() {
    OverheadModel m;
    m.enabled = false;
    return m;
  }
};

// Wire bytes per payload byte. A SCION path over k links carries k + 1 hop
// fields.
inline double overhead_ratio(const OverheadModel& model, Candidate candidate, const Path& path) {
  if (!model.enabled) return 1.0;
  const double payload = model.payload_per_packet_bytes;
  double header = model.base_header_bytes;
  if (candidate == Candidate::scion) {
    const double hop_fields = static_cast<double>(path.hops.size() / 2 + 1);
    header += model.scion_fixed_bytes + model.scion_per_hopfield_bytes * hop_fields;
  }
  return (payload + header) / payload;
}

// shared: both directions of a link draw from one capacity.
// duplex: each direction has the full capacity of its own.
enum class CapacityMode { shared, duplex };

using FlowId = std::uint64_t;

struct Flow {
  FlowId id{};
  FiveTuple five_tuple;
  Path path;
  Candidate candidate{Candidate::bgp};
  std::int64_t bytes_remaining{};
  double rate_mbit{};
};

struct SimClock {
  std::uint64_t ticks = 0;
  double tick_s = 0.1;

  double now_s() const { return static_cast<double>(ticks) * tick_s; }
};

// Capacity resources of a topology under a capacity mode, and the resources a
// path consumes.
class ResourceMap {
 public:
  ResourceMap(const Topology& topo, CapacityMode mode) : topo_(&topo), mode_(mode) {
    for (const auto& l : topo.links()) {
      capacity_.push_back(l.capacity_mbit);
      if (mode == CapacityMode::duplex) capacity_.push_back(l.capacity_mbit);
    }
  }

  std::span<const double> capacities() const { return capacity_; }

  std::vector<std::uint32_t> resources_of(const Path& path) const {
    std::vector<std::uint32_t> out;
    out.reserve(path.link_count());
    for (std::size_t i = 0; i + 1 < path.hops.size(); i += 2) {
      const auto idx = topo_->link_at(path.hops[i]);
      if (!idx) throw std::invalid_argument("path uses unknown interface " + to_string(path.hops[i]));
      const auto& l = topo_->links()[*idx];
      if (mode_ == CapacityMode::shared) {
        out.push_back(static_cast<std::uint32_t>(*idx));
      } else {
        out.push_back(static_cast<std::uint32_t>(2 * *idx + (l.end_a == path.hops[i] ? 0 : 1)));
      }
    }
    return out;
  }

 private:
  const Topology* topo_;
  CapacityMode mode_;
  std::vector<double> capacity_;
};

struct FillDemand {
  std::span<const std::uint32_t> resources;
  double weight = 1.0;  // capacity drawn per unit of rate
};

// Progressive filling: all unfrozen flows rise at a common rate until some
// resource saturates; flows crossing a saturated resource are frozen at that
// rate and the remaining ones keep rising.
inline std::vector<double> water_fill(std::span<const double> capacity, std::span<const FillDemand> demands) {
  const std::size_t m = capacity.size();
  std::vector<double> rate(demands.size(), 0.0);
  std::vector<double> frozen_draw(m, 0.0);
  std::vector<double> weight_sum(m, 0.0);
  std::vector<std::uint32_t> unfrozen_count(m, 0);
  std::vector<std::vector<std::uint32_t>> flows_on(m);
  std::vector<bool> frozen(demands.size(), false);
  std::size_t remaining = 0;

  for (std::size_t f = 0; f < demands.size(); ++f) {
    if (demands[f].resources.empty()) {
      // Nothing limits it; treat as unconstrained.
      rate[f] = std::numeric_limits<double>::infinity();
      frozen[f] = true;
      continue;
    }
    ++remaining;
    for (auto r : demands[f].resources) {
      weight_sum[r] += demands[f].weight;
      ++unfrozen_count[r];
      flows_on[r].push_back(static_cast<std::uint32_t>(f));
    }
  }

  std::vector<double> level(m, 0.0);
  while (remaining > 0) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < m; ++r) {
      if (unfrozen_count[r] == 0) continue;
      level[r] = std::max(0.0, capacity[r] - frozen_draw[r]) / weight_sum[r];
      best = std::min(best, level[r]);
    }
    const double cutoff = best * (1.0 + 1e-12) + 1e-15;
    for (std::size_t r = 0; r < m; ++r) {
      if (unfrozen_count[r] == 0 || level[r] > cutoff) continue;
      for (auto f : flows_on[r]) {
        if (frozen[f]) continue;
        frozen[f] = true;
        rate[f] = best;
        --remaining;
        for (auto q : demands[f].resources) {
          frozen_draw[q] += best * demands[f].weight;
          weight_sum[q] -= demands[f].weight;
          --unfrozen_count[q];
        }
      }
    }
  }
  return rate;
}

inline std::vector<double> max_min_allocate(std::span<const Flow> flows, const Topology& topo,
                                            const OverheadModel& model = {},
                                            CapacityMode mode = CapacityMode::shared) {
  const ResourceMap resources(topo, mode);
  std::vector<std::vector<std::uint32_t>> per_flow;
  per_flow.reserve(flows.size());
  std::vector<FillDemand> demands;
  demands.reserve(flows.size());
  for (const auto& f : flows) per_flow.push_back(resources.resources_of(f.path));
  for (std::size_t i = 0; i < flows.size(); ++i)
    demands.push_back(FillDemand{per_flow[i], overhead_ratio(model, flows[i].candidate, flows[i].path)});
  return water_fill(resources.capacities(), demands);
}

struct CompletionEvent {
  FlowId flow_id{};
  std::int64_t bytes_delivered{};  // during the final tick
  double unused_bytes{};           // budget left over in the final tick
};

class FlowEngine {
 public:
  FlowEngine(const Topology& topo, OverheadModel model = {}, CapacityMode mode = CapacityMode::shared,
             double tick_s = 0.1)
      : resources_(topo, mode), model_(model) {
    if (!(tick_s > 0)) throw std::invalid_argument("tick length must be positive");
    clock_.tick_s = tick_s;
  }

  FlowId add_flow(const FiveTuple& tuple, const Path& path, Candidate candidate, std::int64_t bytes) {
    if (bytes <= 0) throw std::invalid_argument("flow must carry a positive byte count");
    const FlowId id = next_id_++;
    Entry e;
    e.flow = Flow{id, tuple, path, candidate, bytes, 0.0};
    e.resources = resources_.resources_of(path);
    e.weight = overhead_ratio(model_, candidate, path);
    flows_.emplace(id, std::move(e));
    dirty_ = true;
    return id;
  }

  void remove_flow(FlowId id) {
    if (flows_.erase(id)) dirty_ = true;
  }

  const Flow* find(FlowId id) const {
    auto it = flows_.find(id);
    return it == flows_.end() ? nullptr : &it->second.flow;
  }

  std::size_t active_count() const { return flows_.size(); }
  const SimClock& clock() const { return clock_; }
  double now_s() const { return clock_.now_s(); }

  // Delivers one tick's worth of bytes on every flow. Flows that finish are
  // removed and reported in id order.
  std::vector<CompletionEvent> advance(double dt) {
    if (std::abs(dt - clock_.tick_s) > 1e-12) throw std::invalid_argument("advance: dt must equal the tick length");
    if (dirty_) reallocate();
    std::vector<CompletionEvent> events;
    for (auto it = flows_.begin(); it != flows_.end();) {
      auto& e = it->second;
      const double budget = e.flow.rate_mbit * dt * 1e6 / 8.0 + e.carry;
      if (budget >= static_cast<double>(e.flow.bytes_remaining)) {
        events.push_back({it->first, e.flow.bytes_remaining, budget - static_cast<double>(e.flow.bytes_remaining)});
        it = flows_.erase(it);
        dirty_ = true;
        continue;
      }
      const double whole = std::floor(budget);
      e.flow.bytes_remaining -= static_cast<std::int64_t>(whole);
      e.carry = budget - whole;
      ++it;
    }
    ++clock_.ticks;
    return events;
  }

  // Current allocation, recomputed first if the flow set changed.
  void refresh() {
    if (dirty_) reallocate();
  }

  // Capacity drawn from each resource by the current allocation.
  std::vector<double> resource_draw() const {
    std::vector<double> draw(resources_.capacities().size(), 0.0);
    for (const auto& [id, e] : flows_)
      for (auto r : e.resources) draw[r] += e.flow.rate_mbit * e.weight;
    return draw;
  }

  std::span<const double> resource_capacity() const { return resources_.capacities(); }

  template <typename Fn>
  void for_each_flow(Fn&& fn) const {
    for (const auto& [id, e] : flows_) fn(e.flow);
  }

 private:
  struct Entry {
    Flow flow;
    std::vector<std::uint32_t> resources;
    double weight = 1.0;
    double carry = 0.0;  // fractional byte carried between ticks
  };

  void reallocate() {
    std::vector<FillDemand> demands;
    demands.reserve(flows_.size());
    for (const auto& [id, e] : flows_) demands.push_back({e.resources, e.weight});
    const auto rates = water_fill(resources_.capacities(), demands);
    std::size_t i = 0;
    for (auto& [id, e] : flows_) e.flow.rate_mbit = rates[i++];
    dirty_ = false;
  }

  ResourceMap resources_;
  OverheadModel model_;
  SimClock clock_;
  std::map<FlowId, Entry> flows_;
  FlowId next_id_ = 1;
  bool dirty_ = false;
};

}  // namespace pathswarm
