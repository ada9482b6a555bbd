#include <catch2/catch_amalgamated.hpp>

#include "cliquenet/topology.hpp"

using namespace cliquenet;

TEST_CASE("topology index arithmetic round-trips") {
  Topology t(100, 64);
  REQUIRE(t.cluster_count() == 100);
  REQUIRE(t.fanals_per_cluster() == 64);
  REQUIRE(t.fanal_count() == 6400);
  REQUIRE(t.bits_per_character() == 6);

  for (std::uint32_t c : {0u, 1u, 57u, 99u})
    for (std::uint32_t f : {0u, 1u, 63u}) {
      std::uint32_t g = t.global_index(c, f);
      REQUIRE(t.cluster_of(g) == c);
      REQUIRE(t.fanal_of(g) == f);
    }

  // consecutive globals walk fanals first, then clusters
  REQUIRE(t.global_index(0, 63) + 1 == t.global_index(1, 0));
}

TEST_CASE("binary resource counts inter-cluster pairs") {
  // chi*(chi-1)/2 cluster pairs, l*l fanal pairs each
  REQUIRE(Topology(100, 64).binary_resource_bits() == 20275200ull);
  REQUIRE(Topology(2, 1).binary_resource_bits() == 1ull);
  REQUIRE(Topology(8, 16).binary_resource_bits() == 8ull * 7 * 16 * 16 / 2);
}

TEST_CASE("character width follows the cluster size") {
  REQUIRE(Topology(4, 1).bits_per_character() == 0);
  REQUIRE(Topology(4, 2).bits_per_character() == 1);
  REQUIRE(Topology(4, 256).bits_per_character() == 8);
}

TEST_CASE("invalid shapes are rejected") {
  REQUIRE_THROWS_AS(Topology(1, 64), std::invalid_argument);
  REQUIRE_THROWS_AS(Topology(0, 64), std::invalid_argument);
  REQUIRE_THROWS_AS(Topology(100, 0), std::invalid_argument);
  REQUIRE_THROWS_AS(Topology(100, 48), std::invalid_argument);  // not a power of two
  REQUIRE_THROWS_AS(Topology(100, 63), std::invalid_argument);
  REQUIRE_THROWS_AS(Topology(1u << 20, 1u << 10), std::invalid_argument);  // too large
  REQUIRE_NOTHROW(Topology(2, 1));
}

TEST_CASE("topologies compare by shape") {
  REQUIRE(Topology(8, 16) == Topology(8, 16));
  REQUIRE(Topology(8, 16) != Topology(8, 32));
  REQUIRE(Topology(8, 16) != Topology(16, 8));
}
