#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <sstream>
#include <string>

#include "cliquenet/network.hpp"
#include "cliquenet/random.hpp"
#include "cliquenet/serialization.hpp"

using namespace cliquenet;

namespace {

std::string serialize(const CliqueNetwork& net) {
  std::ostringstream out(std::ios::binary);
  save_network(net, out);
  return out.str();
}

CliqueNetwork deserialize(const std::string& bytes) {
  std::istringstream in(bytes, std::ios::binary);
  return load_network(in);
}

SerializationError::Kind kind_of(const std::string& bytes) {
  try {
    deserialize(bytes);
  } catch (const SerializationError& e) {
    return e.kind();
  }
  FAIL("expected a SerializationError");
  return SerializationError::Kind::BadMagic;
}

}  // namespace

TEST_CASE("the empty 2x2 network has a pinned byte layout") {
  // 18-byte header, 1 payload byte (6 pair bits), 8-byte checksum
  const std::string golden{
      'C', 'L', 'Q', 'N',              // magic
      1, 0,                            // version
      2, 0, 0, 0,                      // clusters
      2, 0, 0, 0,                      // fanals per cluster
      0, 0, 0, 0,                      // reserved
      0,                               // payload: no edges
      0, 0, 0, 0, 0, 0, 0, 0};         // checksum
  REQUIRE(golden.size() == 27);

  CliqueNetwork net(Topology(2, 2));
  REQUIRE(serialize(net) == golden);
  REQUIRE(deserialize(golden) == net);
}

TEST_CASE("a single edge lands on the documented payload bit") {
  // pair (g=0, h=2) is the second bit of the strict upper triangle
  CliqueNetwork net(Topology(2, 2));
  net.learn(SparseMessage({{0, 0}, {1, 0}}));

  std::string bytes = serialize(net);
  REQUIRE(bytes.size() == 27);
  REQUIRE(bytes[18] == 0x02);  // payload byte, LSB-first bit 1
  REQUIRE(bytes[19] == 0x01);  // checksum low byte

  CliqueNetwork back = deserialize(bytes);
  REQUIRE(back == net);
  REQUIRE(back.edge_count() == 1);
}

TEST_CASE("round trip preserves arbitrary networks") {
  Topology t(13, 8);  // payload not byte-aligned: exercises the padding
  CliqueNetwork net(t);
  Rng rng(606);
  for (int i = 0; i < 120; ++i)
    net.learn(random_message(t, 4, Placement::UniformClusters, rng));

  CliqueNetwork back = deserialize(serialize(net));
  REQUIRE(back == net);
  REQUIRE(back.edge_count() == net.edge_count());
  REQUIRE(back.density() == net.density());
}

TEST_CASE("file helpers round trip through the filesystem") {
  Topology t(6, 4);
  CliqueNetwork net(t);
  Rng rng(5);
  for (int i = 0; i < 20; ++i)
    net.learn(random_message(t, 3, Placement::UniformClusters, rng));

  auto path = std::filesystem::temp_directory_path() / "cliquenet_codec_test.clqn";
  save_network_file(net, path);
  CliqueNetwork back = load_network_file(path);
  std::filesystem::remove(path);
  REQUIRE(back == net);

  REQUIRE_THROWS_AS(load_network_file(path), std::runtime_error);  // gone now
}

TEST_CASE("each corruption is reported as its own kind") {
  CliqueNetwork net(Topology(2, 2));
  net.learn(SparseMessage({{0, 0}, {1, 1}}));
  const std::string good = serialize(net);

  SECTION("bad magic") {
    std::string bad = good;
    bad[0] = 'X';
    REQUIRE(kind_of(bad) == SerializationError::Kind::BadMagic);
  }
  SECTION("unsupported version") {
    std::string bad = good;
    bad[4] = 2;
    REQUIRE(kind_of(bad) == SerializationError::Kind::BadVersion);
  }
  SECTION("impossible topology") {
    std::string bad = good;
    bad[6] = 1;  // one cluster
    REQUIRE(kind_of(bad) == SerializationError::Kind::BadTopology);
  }
  SECTION("nonzero reserved field") {
    std::string bad = good;
    bad[14] = 1;
    REQUIRE(kind_of(bad) == SerializationError::Kind::BadTopology);
  }
  SECTION("truncated header") {
    REQUIRE(kind_of(good.substr(0, 9)) == SerializationError::Kind::Truncated);
  }
  SECTION("truncated payload") {
    REQUIRE(kind_of(good.substr(0, 18)) == SerializationError::Kind::Truncated);
  }
  SECTION("missing checksum") {
    REQUIRE(kind_of(good.substr(0, good.size() - 8)) ==
            SerializationError::Kind::Truncated);
  }
  SECTION("checksum disagrees with the payload") {
    std::string bad = good;
    bad[bad.size() - 8] = static_cast<char>(bad[bad.size() - 8] + 1);
    REQUIRE(kind_of(bad) == SerializationError::Kind::ChecksumMismatch);
  }
  SECTION("payload with an intra-cluster weight") {
    std::string bad = good;
    bad[18] = 0x01;  // pair (0, 1): both fanals sit in cluster 0
    bad[19] = 0x01;
    REQUIRE(kind_of(bad) == SerializationError::Kind::IntraClusterEdge);
  }
  SECTION("empty stream") {
    REQUIRE(kind_of("") == SerializationError::Kind::BadMagic);
  }
}
