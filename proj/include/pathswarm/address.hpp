#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace pathswarm {

using Asn = std::uint32_t;

inline constexpr std::uint16_t kDefaultPeerPort = 6881;

// A peer's network address: the AS it is homed in, a host index within that
// AS and the listening port.
struct PeerAddr {
  Asn asn{};
  std::uint32_t host{};
  std::uint16_t port{kDefaultPeerPort};

  auto operator<=>(const PeerAddr&) const = default;
};

// Rendered as "<asn>-<host>:<port>", e.g. "102-0:6881".
inline std::string to_string(const PeerAddr& addr) {
  return std::to_string(addr.asn) + "-" + std::to_string(addr.host) + ":" +
         std::to_string(addr.port);
}

}  // namespace pathswarm
