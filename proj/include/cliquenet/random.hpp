#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "cliquenet/message.hpp"
#include "cliquenet/topology.hpp"

namespace cliquenet {

// SplitMix64 finalizer; used to spread seeds before they reach the engine and
// to derive independent child seeds.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Deterministic child-seed derivation: children of distinct (seed, index)
// pairs get statistically independent streams. Experiments derive one seed
// per sweep point from the base seed, then one per trial from the point seed.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return mix64(mix64(seed) ^ mix64(index ^ 0xA5A5A5A5A5A5A5A5ull));
}

// Seedable, splittable random source. Draws come from a Mersenne engine whose
// sequence is fixed by the standard; bounded draws use rejection below, so a
// given seed yields the same stream on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(mix64(seed)) {}

  std::uint64_t seed() const { return seed_; }

  // Child generator number `index`; independent of this one and of siblings.
  Rng split(std::uint64_t index) const { return Rng(derive_seed(seed_, index)); }

  std::uint64_t next() { return engine_(); }

  // Uniform integer in [0, n). Multiply-shift with rejection (unbiased).
  std::uint32_t below(std::uint32_t n) {
    if (n == 0) throw std::invalid_argument("Rng::below: empty range");
    while (true) {
      std::uint64_t x = engine_() >> 32;
      std::uint64_t m = x * n;
      if ((m & 0xFFFFFFFFull) >= (0x100000000ull % n) || (0x100000000ull % n) == 0)
        return static_cast<std::uint32_t>(m >> 32);
    }
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

// Where a random message's clusters come from.
enum class Placement {
  UniformClusters,  // any c-subset of clusters, uniformly
  Contiguous,       // a run of c consecutive clusters, uniform start
};

// Draws c from the profile (uniform over the range when not constant).
inline std::uint32_t sample_order(const OrderProfile& profile, Rng& rng) {
  if (profile.is_constant()) return profile.min_order();
  return profile.min_order() + rng.below(profile.spread());
}

// Uniform random message of order `c` on topology `t`: cluster set per
// `placement`, fanal values independent uniform.
inline SparseMessage random_message(const Topology& t, std::uint32_t c,
                                    Placement placement, Rng& rng) {
  const std::uint32_t chi = t.cluster_count();
  const std::uint32_t l = t.fanals_per_cluster();
  if (c < 2 || c > chi)
    throw std::invalid_argument("random_message: order out of range");

  std::vector<Entry> entries;
  entries.reserve(c);
  if (placement == Placement::Contiguous) {
    std::uint32_t start = rng.below(chi - c + 1);
    for (std::uint32_t k = 0; k < c; ++k)
      entries.push_back({start + k, rng.below(l)});
  } else {
    // Floyd's subset sampling: c distinct clusters, each subset equally likely.
    std::vector<std::uint32_t> chosen;
    chosen.reserve(c);
    for (std::uint32_t j = chi - c; j < chi; ++j) {
      std::uint32_t v = rng.below(j + 1);
      bool seen = false;
      for (std::uint32_t u : chosen)
        if (u == v) { seen = true; break; }
      chosen.push_back(seen ? j : v);
    }
    for (std::uint32_t cluster : chosen) entries.push_back({cluster, rng.below(l)});
  }
  return SparseMessage(std::move(entries));
}

inline SparseMessage random_message(const Topology& t, const OrderProfile& profile,
                                    Placement placement, Rng& rng) {
  return random_message(t, sample_order(profile, rng), placement, rng);
}

}  // namespace cliquenet
