#include <gtest/gtest.h>

#include <random>

#include "pathswarm/scenario.hpp"
#include "pathswarm/swarm.hpp"
#include "support/fixtures.hpp"

using namespace pathswarm;

namespace {

const char* kTwoAs =
    "as 1 tier=1 hosts=2\n"
    "as 2 tier=2 hosts=2\n"
    "link 1#1 2#1 type=transit cap_mbit=10 provider=1\n";

Topology fixture_topology() { return load_topology(std::string(PATHSWARM_DATA_DIR) + "/fig3like.topo"); }

std::vector<PeerAddr> five_as_peers(std::uint32_t hosts) {
  std::vector<PeerAddr> out;
  for (Asn asn : {102, 1002, 1004, 103, 1006})
    for (std::uint32_t h = 0; h < hosts; ++h) out.push_back(PeerAddr{asn, h});
  return out;
}

// Reference shuffle: mt19937_64, rejection-sampled index, swap back to front.
std::vector<std::uint32_t> reference_shuffle(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 eng(seed);
  std::vector<std::uint32_t> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<std::uint32_t>(i);
  for (std::size_t i = n; i > 1; --i) {
    const std::uint64_t bound = i;
    const std::uint64_t reject_from = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t x;
    do x = eng(); while (x >= reject_from);
    std::swap(v[i - 1], v[x % bound]);
  }
  return v;
}

}  // namespace

TEST(Rng, Mt19937_64StandardValue) {
  SimRng eng;
  eng.discard(9999);
  EXPECT_EQ(eng(), 9981545732273789042ULL);
}

TEST(Torrent, PieceCountAndBoundaries) {
  const auto meta = make_torrent(100'000'000, 262'144, 0);
  EXPECT_EQ(meta.piece_count(), 382u);
  EXPECT_EQ(meta.piece_length(381), 100'000'000 - 381 * 262'144);
  const auto tiny = make_torrent(1, 32 * 1024, 0);
  ASSERT_EQ(tiny.piece_count(), 1u);
  EXPECT_EQ(tiny.piece_length(0), 1);
  EXPECT_THROW(make_torrent(1, 1024, 0), std::invalid_argument);
  EXPECT_THROW(make_torrent(0, 32 * 1024, 0), std::invalid_argument);
}

TEST(Torrent, DeterministicHashes) {
  const auto a = make_torrent(1'000'000, 65'536, 42);
  const auto b = make_torrent(1'000'000, 65'536, 42);
  const auto c = make_torrent(1'000'000, 65'536, 43);
  EXPECT_EQ(a.piece_hashes, b.piece_hashes);
  EXPECT_EQ(a.file_digest, b.file_digest);
  EXPECT_NE(a.piece_hashes, c.piece_hashes);
}

TEST(Torrent, FileDigestCoversConcatenatedPieces) {
  const auto meta = make_torrent(200'000, 32 * 1024, 5);
  std::vector<std::uint8_t> whole;
  for (std::size_t i = 0; i < meta.piece_count(); ++i) {
    const auto p = piece_content(meta, i);
    whole.insert(whole.end(), p.begin(), p.end());
  }
  EXPECT_EQ(whole.size(), 200'000u);
  EXPECT_EQ(sha256(whole), meta.file_digest);
}

TEST(Sha256, KnownVector) {
  const std::string abc = "abc";
  EXPECT_EQ(to_hex(sha256(std::span(reinterpret_cast<const std::uint8_t*>(abc.data()), abc.size()))),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(VerifyPiece, Examples) {
  const auto meta = make_torrent(1'000'000, 65'536, 9);
  auto content = piece_content(meta, 5);
  EXPECT_TRUE(verify_piece(meta, 5, content));
  content[100] ^= 0x01;
  EXPECT_FALSE(verify_piece(meta, 5, content));
  EXPECT_THROW(verify_piece(meta, 5, std::vector<std::uint8_t>{}), std::invalid_argument);
  EXPECT_THROW(verify_piece(meta, 999, content), std::out_of_range);
}

TEST(Tracker, AnnounceOrderWithoutCaller) {
  Tracker t;
  const auto peers = five_as_peers(4);
  for (const auto& p : peers) t.announce(p);
  const auto list = t.get_peers(peers[7]);
  EXPECT_EQ(list.size(), 19u);
  EXPECT_EQ(std::count(list.begin(), list.end(), peers[7]), 0);
  EXPECT_EQ(list, t.get_peers(peers[7]));
  EXPECT_EQ(list.front(), peers[0]);

  Tracker sole;
  sole.announce(peers[0]);
  EXPECT_TRUE(sole.get_peers(peers[0]).empty());
}

TEST(RequestNextPiece, FollowsSeededShuffle) {
  for (std::uint64_t seed : {1ULL, 7ULL, 123456789ULL}) {
    SimRng rng(seed);
    auto leecher = PeerState::leecher(PeerAddr{2, 0}, 50, rng);
    const auto want = reference_shuffle(50, seed);
    EXPECT_EQ(leecher.queue, want);
    const auto seeder = PeerState::seeder(PeerAddr{1, 0}, 50);
    EXPECT_EQ(request_next_piece(leecher, seeder), want[0]);
    EXPECT_EQ(request_next_piece(leecher, seeder), want[1]);
  }
}

TEST(RequestNextPiece, NoneWhenNothingMissing) {
  SimRng rng(1);
  auto leecher = PeerState::leecher(PeerAddr{2, 0}, 3, rng);
  const auto seeder = PeerState::seeder(PeerAddr{1, 0}, 3);
  for (int i = 0; i < 3; ++i) ASSERT_TRUE(request_next_piece(leecher, seeder));
  EXPECT_FALSE(request_next_piece(leecher, seeder));
  leecher.mark_verified(leecher.queue[0]);
  EXPECT_FALSE(request_next_piece(leecher, seeder));
}

TEST(RequestNextPiece, FailedPieceGoesToTail) {
  SimRng rng(4);
  auto leecher = PeerState::leecher(PeerAddr{2, 0}, 4, rng);
  const auto seeder = PeerState::seeder(PeerAddr{1, 0}, 4);
  const auto order = leecher.queue;
  const auto first = *request_next_piece(leecher, seeder);
  leecher.requeue(first);
  EXPECT_EQ(leecher.queue.back(), first);
  std::vector<std::size_t> got;
  while (auto p = request_next_piece(leecher, seeder)) got.push_back(*p);
  EXPECT_EQ(got, (std::vector<std::size_t>{order[1], order[2], order[3], first}));
}

TEST(RequestNextPiece, OnlyPiecesTheUploaderHas) {
  SimRng rng(2);
  auto leecher = PeerState::leecher(PeerAddr{2, 0}, 6, rng);
  SimRng rng2(3);
  auto partial = PeerState::leecher(PeerAddr{3, 0}, 6, rng2);
  partial.mark_verified(leecher.queue[4]);
  EXPECT_TRUE(is_interested(leecher, partial));
  EXPECT_EQ(request_next_piece(leecher, partial), leecher.queue[4]);
  EXPECT_FALSE(request_next_piece(leecher, partial));
  EXPECT_FALSE(is_interested(leecher, partial));
}

TEST(ConnectBack, ScionTakesLowestConflictPaths) {
  const fixture::FourPath f;
  RouteTable routes(f.topo, 8);
  std::uint16_t port = 50000;
  const auto planned = uploader_connect_back(Candidate::scion, PeerAddr{10, 0}, f.peers(), routes, 3,
                                             [&] { return port++; });
  ASSERT_EQ(planned.size(), 3u);
  EXPECT_EQ(planned[0].remote, (PathLevelPeer{f.p, f.p2}));
  EXPECT_EQ(planned[1].remote, (PathLevelPeer{f.q, f.q2}));
  EXPECT_EQ(planned[2].remote, (PathLevelPeer{f.p, f.p1}));
  EXPECT_EQ(planned[2].tuple.src_port, 50002);
  EXPECT_EQ(planned[2].tuple.dst_addr, f.p);
}

TEST(ConnectBack, BgpTakesPeersInGivenOrder) {
  const auto topo = fixture_topology();
  RouteTable routes(topo, 8);
  const std::vector<PeerAddr> interested{{1002, 0}, {1004, 1}, {103, 0}, {1006, 2}, {1002, 3}};
  std::uint16_t port = 50000;
  const auto planned =
      uploader_connect_back(Candidate::bgp, PeerAddr{102, 0}, interested, routes, 3, [&] { return port++; });
  ASSERT_EQ(planned.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(planned[i].remote.addr, interested[i]);
    EXPECT_EQ(planned[i].remote.path, *routes.get(102, interested[i].asn).best);
  }
  EXPECT_THROW(uploader_connect_back(Candidate::bgp, PeerAddr{102, 0}, interested, routes, 0, [&] { return port++; }),
               std::invalid_argument);
}

TEST(ConnectBack, BgpmPathMatchesFlowHash) {
  const auto topo = fixture_topology();
  RouteTable routes(topo, 8);
  const std::vector<PeerAddr> interested{{1004, 0}, {1004, 1}, {1004, 2}, {1004, 3}};
  std::uint16_t port = 49152;
  const auto planned =
      uploader_connect_back(Candidate::bgpm, PeerAddr{1002, 0}, interested, routes, 4, [&] { return port += 77; });
  ASSERT_EQ(planned.size(), 4u);
  const auto& ecmp = routes.get(1002, 1004).ecmp;
  ASSERT_GE(ecmp.size(), 2u);
  for (const auto& p : planned) EXPECT_EQ(p.remote.path, flow_hash_select(p.tuple, ecmp));
}

TEST(RunSwarm, TwoPeerArithmetic) {
  // 10 MB over 10 Mbit/s is 8 s.
  const auto topo = parse_topology(kTwoAs);
  const auto meta = make_torrent(10'000'000, 262'144, 0);
  SwarmConfig cfg;
  cfg.overhead = OverheadModel::none();
  for (auto c : {Candidate::bgp, Candidate::bgpm, Candidate::scion}) {
    cfg.candidate = c;
    const std::vector<PeerAddr> peers{{1, 0}, {2, 0}};
    const auto r = run_swarm(topo, peers, meta, cfg);
    ASSERT_EQ(r.peers.size(), 2u);
    EXPECT_EQ(r.peers[0].initial_role, Role::seeder);
    EXPECT_NEAR(r.peers[1].download_time_s, 8.0, 0.1 + 1e-9) << to_string(c);
    EXPECT_EQ(r.peers[1].bytes_received, 10'000'000);
    EXPECT_EQ(r.peers[1].paths_used, 1u);
  }
}

TEST(RunSwarm, OverheadSlowsTransfer) {
  const auto topo = parse_topology(kTwoAs);
  const auto meta = make_torrent(10'000'000, 262'144, 0);
  SwarmConfig cfg;
  cfg.candidate = Candidate::bgp;
  const std::vector<PeerAddr> peers{{1, 0}, {2, 0}};
  const auto r = run_swarm(topo, peers, meta, cfg);
  EXPECT_NEAR(r.peers[1].download_time_s, 8.0 * 1262.0 / 1200.0, 0.1 + 1e-9);
}

TEST(RunSwarm, SameAsPeersNeverConnect) {
  const auto topo = parse_topology(kTwoAs);
  const auto meta = make_torrent(2'000'000, 262'144, 0);
  SwarmConfig cfg;
  const std::vector<PeerAddr> peers{{1, 0}, {2, 0}, {2, 1}};
  Swarm s(topo, peers, meta, cfg);
  while (s.step())
    for (const auto& [id, c] : s.connections()) EXPECT_NE(s.peers()[c.uploader].addr.asn, s.peers()[c.remote].addr.asn);
}

TEST(RunSwarm, DeadlockIsReported) {
  const auto topo = parse_topology(
      "as 2 tier=2 hosts=1\nas 3 tier=2 hosts=1\nas 4 tier=2 hosts=0\n"
      "link 2#1 4#1 type=transit cap_mbit=10 provider=2\n"
      "link 3#1 4#2 type=transit cap_mbit=10 provider=3\n");
  const auto meta = make_torrent(1'000'000, 262'144, 0);
  const std::vector<PeerAddr> peers{{2, 0}, {3, 0}};
  EXPECT_THROW(run_swarm(topo, peers, meta, SwarmConfig{}), SwarmError);
}

TEST(RunSwarm, RejectsBadConfig) {
  const auto topo = parse_topology(kTwoAs);
  const auto meta = make_torrent(1'000'000, 262'144, 0);
  const std::vector<PeerAddr> peers{{1, 0}, {2, 0}};
  SwarmConfig cfg;
  cfg.outgoing_conns = 0;
  EXPECT_THROW(run_swarm(topo, peers, meta, cfg), std::invalid_argument);
  const std::vector<PeerAddr> dup{{1, 0}, {1, 0}};
  EXPECT_THROW(run_swarm(topo, dup, meta, SwarmConfig{}), std::invalid_argument);
  const std::vector<PeerAddr> stranger{{1, 0}, {77, 0}};
  EXPECT_THROW(run_swarm(topo, stranger, meta, SwarmConfig{}), std::invalid_argument);
}

class SwarmInvariants : public ::testing::TestWithParam<std::tuple<Candidate, std::optional<std::size_t>>> {};

TEST_P(SwarmInvariants, CapacityBudgetConservation) {
  const auto [candidate, conns] = GetParam();
  const auto topo = fixture_topology();
  const auto meta = make_torrent(4'194'304, 131'072, 3);
  SwarmConfig cfg;
  cfg.candidate = candidate;
  cfg.outgoing_conns = conns;
  cfg.seed = 17;
  const auto peers = five_as_peers(4);
  Swarm s(topo, peers, meta, cfg);
  while (s.step()) {
    const auto draw = s.engine().resource_draw();
    for (std::size_t r = 0; r < draw.size(); ++r) ASSERT_LE(draw[r], s.engine().resource_capacity()[r] * (1 + 1e-9));
    if (conns) {
      for (const auto& p : s.peers()) ASSERT_LE(p.outgoing.size(), *conns);
    }
    std::size_t flows = 0;
    for (const auto& [id, c] : s.connections()) {
      flows += c.flow.has_value();
      if (c.piece) {
        ASSERT_EQ(s.peers()[c.remote].bitmap[*c.piece], PieceStatus::in_flight);
      }
    }
    ASSERT_EQ(flows, s.engine().active_count());
  }
  const auto r = s.result();
  if (conns) {
    EXPECT_LE(r.max_outgoing_seen, *conns);
  }
  for (std::size_t i = 1; i < r.peers.size(); ++i) {
    // Each piece is delivered exactly once.
    EXPECT_EQ(r.peers[i].bytes_received, meta.file_size_bytes);
    EXPECT_GT(r.peers[i].download_time_s, 0.0);
    EXPECT_GE(r.peers[i].paths_used, 1u);
  }
  EXPECT_EQ(r.peers[0].bytes_received, 0);
}

INSTANTIATE_TEST_SUITE_P(
    Candidates, SwarmInvariants,
    ::testing::Combine(::testing::Values(Candidate::bgp, Candidate::bgpm, Candidate::scion),
                       ::testing::Values(std::optional<std::size_t>{}, std::optional<std::size_t>{3},
                                         std::optional<std::size_t>{6})),
    [](const auto& info) {
      const auto& conns = std::get<1>(info.param);
      return std::string(to_string(std::get<0>(info.param))) + "_" +
             (conns ? std::to_string(*conns) : std::string("unbounded"));
    });

TEST(RunSwarm, CorruptPiecesAreRetried) {
  const auto topo = fixture_topology();
  const auto meta = make_torrent(2'097'152, 65'536, 8);
  for (auto verify : {VerifyMode::digest, VerifyMode::full}) {
    SwarmConfig cfg;
    cfg.candidate = Candidate::scion;
    cfg.corrupt_probability = 0.1;
    cfg.verify = verify;
    const auto peers = five_as_peers(2);
    const auto r = run_swarm(topo, peers, meta, cfg);
    std::size_t failed = 0;
    for (std::size_t i = 1; i < r.peers.size(); ++i) {
      failed += r.peers[i].pieces_failed;
      EXPECT_EQ(r.peers[i].bytes_received,
                meta.file_size_bytes + static_cast<std::int64_t>(r.peers[i].pieces_failed) * meta.piece_size_bytes);
    }
    EXPECT_GT(failed, 0u);
  }
}

TEST(RunSwarm, VerifyModesAgreeWithoutCorruption) {
  const auto topo = fixture_topology();
  const auto meta = make_torrent(2'000'000, 65'536, 8);
  SwarmConfig cfg;
  const auto peers = five_as_peers(2);
  const auto digest = run_swarm(topo, peers, meta, cfg);
  cfg.verify = VerifyMode::full;
  const auto full = run_swarm(topo, peers, meta, cfg);
  for (std::size_t i = 0; i < peers.size(); ++i)
    EXPECT_EQ(digest.peers[i].download_time_s, full.peers[i].download_time_s);
}

TEST(RunSwarm, Deterministic) {
  const auto topo = fixture_topology();
  const auto meta = make_torrent(3'000'000, 65'536, 1);
  for (auto c : {Candidate::bgp, Candidate::bgpm, Candidate::scion}) {
    SwarmConfig cfg;
    cfg.candidate = c;
    cfg.seed = 5;
    const auto peers = five_as_peers(4);
    const auto a = run_swarm(topo, peers, meta, cfg);
    const auto b = run_swarm(topo, peers, meta, cfg);
    ASSERT_EQ(a.peers.size(), b.peers.size());
    for (std::size_t i = 0; i < a.peers.size(); ++i) {
      EXPECT_EQ(a.peers[i].download_time_s, b.peers[i].download_time_s);
      EXPECT_EQ(a.peers[i].paths_used, b.peers[i].paths_used);
    }
    cfg.seed = 6;
    const auto other = run_swarm(topo, peers, meta, cfg);
    bool differs = false;
    for (std::size_t i = 0; i < a.peers.size(); ++i) differs |= a.peers[i].download_time_s != other.peers[i].download_time_s;
    EXPECT_TRUE(differs);
  }
}

TEST(RunSwarm, SinglePathScionMatchesBgp) {
  const auto topo = parse_topology(kTwoAs);
  const auto meta = make_torrent(5'000'000, 262'144, 0);
  const std::vector<PeerAddr> peers{{1, 0}, {2, 0}, {2, 1}, {1, 1}};
  SwarmConfig cfg;
  cfg.overhead = OverheadModel::none();
  cfg.candidate = Candidate::bgp;
  const auto bgp = run_swarm(topo, peers, meta, cfg);
  cfg.candidate = Candidate::scion;
  const auto scion = run_swarm(topo, peers, meta, cfg);
  for (std::size_t i = 1; i < peers.size(); ++i)
    EXPECT_NEAR(bgp.peers[i].download_time_s, scion.peers[i].download_time_s, cfg.tick_s + 1e-9);
}
