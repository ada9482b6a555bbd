#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>

namespace cliquenet {

// Shape of a clustered binary network: `cluster_count` clusters of
// `fanals_per_cluster` units each. Fanal counts are powers of two so that one
// cluster encodes a fixed-width binary character.
class Topology {
 public:
  Topology(std::uint32_t cluster_count, std::uint32_t fanals_per_cluster)
      : chi_(cluster_count), l_(fanals_per_cluster) {
    if (chi_ < 2) throw std::invalid_argument("Topology: need at least 2 clusters");
    if (l_ < 1 || !std::has_single_bit(l_))
      throw std::invalid_argument("Topology: fanals per cluster must be a power of two");
    // Keeps index arithmetic comfortably inside 64 bits; a network this large
    // could not be allocated anyway.
    if (static_cast<std::uint64_t>(chi_) * l_ > (std::uint64_t{1} << 24))
      throw std::invalid_argument("Topology: too many fanals");
  }

  std::uint32_t cluster_count() const { return chi_; }
  std::uint32_t fanals_per_cluster() const { return l_; }

  // Bits carried by one character: log2 of the cluster size.
  std::uint32_t bits_per_character() const {
    return static_cast<std::uint32_t>(std::bit_width(l_) - 1);
  }

  std::uint32_t fanal_count() const { return chi_ * l_; }

  // Number of distinct inter-cluster fanal pairs, i.e. the count of binary
  // weights the network can store.
  std::uint64_t binary_resource_bits() const {
    return static_cast<std::uint64_t>(chi_) * (chi_ - 1) * l_ * l_ / 2;
  }

  std::uint32_t global_index(std::uint32_t cluster, std::uint32_t fanal) const {
    return cluster * l_ + fanal;
  }
  std::uint32_t cluster_of(std::uint32_t global) const { return global / l_; }
  std::uint32_t fanal_of(std::uint32_t global) const { return global % l_; }

  bool operator==(const Topology& other) const = default;

 private:
  std::uint32_t chi_;
  std::uint32_t l_;
};

}  // namespace cliquenet
