#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "cliquenet/bits.hpp"
#include "cliquenet/message.hpp"
#include "cliquenet/random.hpp"
#include "cliquenet/topology.hpp"

namespace cliquenet {

// Binary associative memory over a clustered topology. Messages are stored as
// cliques: learning a message switches on the weight of every pair of its
// fanals. Weights are binary and never decay, so learning is idempotent and
// order-independent; edges never join two fanals of the same cluster.
//
// Storage is a full symmetric adjacency bit matrix, one padded row of words
// per fanal, so that retrieval can scan a fanal's neighbourhood with whole
// 64-bit words. Learning requires exclusive write access; any number of
// readers may run concurrently once learning is done.
class CliqueNetwork {
 public:
  explicit CliqueNetwork(const Topology& t)
      : topo_(t),
        words_per_row_(bits::word_count(t.fanal_count())),
        rows_(static_cast<std::size_t>(t.fanal_count()) * words_per_row_, 0) {}

  const Topology& topology() const { return topo_; }
  std::size_t words_per_row() const { return words_per_row_; }

  // Adjacency row of fanal `g` as packed words (bit h = weight between g and h).
  std::span<const std::uint64_t> row(std::uint32_t g) const {
    return {rows_.data() + static_cast<std::size_t>(g) * words_per_row_, words_per_row_};
  }

  bool has_edge(std::uint32_t g, std::uint32_t h) const { return bits::test(row(g), h); }
  bool has_edge(const Entry& a, const Entry& b) const {
    return has_edge(topo_.global_index(a.cluster, a.fanal),
                    topo_.global_index(b.cluster, b.fanal));
  }

  // Stores one message; returns the number of edges that were newly created
  // (0 when the message's clique is already fully present).
  std::size_t learn(const SparseMessage& m) {
    if (!m.fits(topo_))
      throw std::invalid_argument("learn: message does not fit the topology");
    const auto& entries = m.entries();
    std::size_t created = 0;
    for (std::size_t i = 0; i < entries.size(); ++i) {
      std::uint32_t gi = topo_.global_index(entries[i].cluster, entries[i].fanal);
      for (std::size_t j = i + 1; j < entries.size(); ++j) {
        std::uint32_t gj = topo_.global_index(entries[j].cluster, entries[j].fanal);
        if (!bits::test(row(gi), gj)) {
          bits::set(mutable_row(gi), gj);
          bits::set(mutable_row(gj), gi);
          ++created;
        }
      }
    }
    edge_count_ += created;
    return created;
  }

  // Removes one stored edge (both directions). No-op if absent. Intended for
  // callers that overlay a temporary clique and want to restore the graph.
  void erase_edge(std::uint32_t g, std::uint32_t h) {
    if (!bits::test(row(g), h)) return;
    bits::clear(mutable_row(g), h);
    bits::clear(mutable_row(h), g);
    --edge_count_;
  }

  // Switches on every admissible edge independently with the given
  // probability, producing a graph at a prescribed expected density - the
  // reference model behind the closed-form error predictions. Existing edges
  // are kept. Skip-sampling visits only the edges it creates, so the cost is
  // proportional to density times the binary resource.
  void seed_random_edges(double density, Rng& rng) {
    if (!(density >= 0.0 && density <= 1.0))
      throw std::invalid_argument("seed_random_edges: density outside [0, 1]");
    if (density == 0.0) return;
    const std::uint32_t n = topo_.fanal_count();
    const std::uint32_t l = topo_.fanals_per_cluster();
    const double log_miss = std::log1p(-density);  // -inf when density == 1
    for (std::uint32_t g = 0; g + l < n; ++g) {
      // Candidate partners: everything in clusters after g's own.
      const std::uint64_t base = (topo_.cluster_of(g) + 1ull) * l;
      const std::uint64_t len = n - base;
      std::uint64_t pos = 0;
      while (pos < len) {
        if (density < 1.0) {
          double u = (rng.next() >> 11) * 0x1.0p-53 + 0x1.0p-54;
          double jump = std::log(u) / log_miss;
          if (jump >= static_cast<double>(len - pos)) break;
          pos += static_cast<std::uint64_t>(jump);
        }
        std::uint32_t h = static_cast<std::uint32_t>(base + pos);
        if (!bits::test(row(g), h)) {
          bits::set(mutable_row(g), h);
          bits::set(mutable_row(h), g);
          ++edge_count_;
        }
        ++pos;
      }
    }
  }

  std::uint64_t edge_count() const { return edge_count_; }

  // Fraction of the binary resource in use (stored edges / possible edges).
  double density() const {
    return static_cast<double>(edge_count_) /
           static_cast<double>(topo_.binary_resource_bits());
  }

  friend bool operator==(const CliqueNetwork& a, const CliqueNetwork& b) {
    return a.topo_ == b.topo_ && a.rows_ == b.rows_;
  }

 private:
  friend class NetworkCodec;

  std::span<std::uint64_t> mutable_row(std::uint32_t g) {
    return {rows_.data() + static_cast<std::size_t>(g) * words_per_row_, words_per_row_};
  }

  Topology topo_;
  std::size_t words_per_row_;
  std::vector<std::uint64_t> rows_;
  std::uint64_t edge_count_ = 0;
};

}  // namespace cliquenet
