#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "cliquenet/bits.hpp"
#include "cliquenet/message.hpp"
#include "cliquenet/network.hpp"

namespace cliquenet {

// Reference decision: a probe is accepted iff its clique is fully stored,
// i.e. every pair of probe fanals is connected.
inline bool accept_oracle(const CliqueNetwork& net, const SparseMessage& probe) {
  if (!probe.fits(net.topology()))
    throw std::invalid_argument("accept_oracle: probe does not fit the topology");
  const auto& e = probe.entries();
  for (std::size_t i = 0; i < e.size(); ++i)
    for (std::size_t j = i + 1; j < e.size(); ++j)
      if (!net.has_edge(e[i], e[j])) return false;
  return true;
}

// Recognition of a probe message through the retrieval rule itself: activate
// the probe, run one propagate/select round with the probe's clusters held at
// threshold sigma = order (all other clusters unable to activate), and accept
// iff the active set comes back equal to the probe.
//
// Only the probe's clusters can activate and only they feed the global
// maximum, so scores are computed just for those clusters, as bit-plane
// counters over each cluster's word range. Reusing one Acceptor across
// probes of the same network avoids per-call allocation.
class Acceptor {
 public:
  explicit Acceptor(const CliqueNetwork& net) : net_(&net) {}

  bool accept(const SparseMessage& probe, std::uint32_t gamma = 1) {
    const CliqueNetwork& net = *net_;
    const Topology& t = net.topology();
    if (!probe.fits(t))
      throw std::invalid_argument("accept: probe does not fit the topology");

    const auto& entries = probe.entries();
    const std::uint32_t c = probe.order();
    const std::uint32_t l = t.fanals_per_cluster();
    const std::size_t nw = l >= bits::word_bits ? l / bits::word_bits : 1;

    std::size_t planes = 1;
    while ((std::uint64_t{1} << planes) <= c - 1 + gamma) ++planes;
    ++planes;
    scratch_.assign(static_cast<std::size_t>(c) * planes * nw, 0);

    // Pass 1: per probe cluster, count contributions from the other probe
    // fanals (plus gamma for the probe's own fanal) and find the global max.
    std::uint32_t v_max = 0;
    for (std::uint32_t k = 0; k < c; ++k) {
      std::uint64_t* cluster_planes = scratch_.data() + static_cast<std::size_t>(k) * planes * nw;
      const std::size_t w0 =
          static_cast<std::size_t>(entries[k].cluster) * l / bits::word_bits;
      for (std::uint32_t m = 0; m < c; ++m) {
        if (m == k) continue;
        std::uint32_t g = t.global_index(entries[m].cluster, entries[m].fanal);
        const std::uint64_t* row = net.row(g).data() + w0;
        for (std::size_t w = 0; w < nw; ++w) {
          std::uint64_t carry = row[w];
          for (std::size_t p = 0; carry != 0; ++p) {
            std::uint64_t word = cluster_planes[p * nw + w];
            cluster_planes[p * nw + w] = word ^ carry;
            carry &= word;
          }
        }
      }
      {  // self contribution: gamma at the probe fanal
        std::uint32_t g = t.global_index(entries[k].cluster, entries[k].fanal);
        std::size_t w = g / bits::word_bits - w0;
        std::uint64_t bit = std::uint64_t{1} << (g % bits::word_bits);
        for (std::uint32_t b = 0; b < 32 && (gamma >> b) != 0; ++b) {
          if (!((gamma >> b) & 1u)) continue;
          std::uint64_t carry = bit;
          for (std::size_t p = b; carry != 0; ++p) {
            std::uint64_t word = cluster_planes[p * nw + w];
            cluster_planes[p * nw + w] = word ^ carry;
            carry &= word;
          }
        }
      }
      v_max = std::max(v_max, cluster_max(cluster_planes, planes, nw, entries[k].cluster));
    }

    if (v_max < c) return false;  // thresholds sigma = order not reached, nothing fires

    // Pass 2: the fanals at v_max in each probe cluster must be exactly the
    // probe's own fanal.
    for (std::uint32_t k = 0; k < c; ++k) {
      const std::uint64_t* cluster_planes =
          scratch_.data() + static_cast<std::size_t>(k) * planes * nw;
      std::uint32_t g = t.global_index(entries[k].cluster, entries[k].fanal);
      const std::size_t lo = static_cast<std::size_t>(entries[k].cluster) * l % bits::word_bits;
      for (std::size_t w = 0; w < nw; ++w) {
        std::uint64_t eq = l >= bits::word_bits ? ~std::uint64_t{0}
                                                : bits::range_mask(lo, lo + l);
        for (std::size_t p = 0; p < planes; ++p) {
          std::uint64_t pw = cluster_planes[p * nw + w];
          eq &= ((v_max >> p) & 1u) ? pw : ~pw;
        }
        std::uint64_t want =
            (g / bits::word_bits == entries[k].cluster * l / bits::word_bits + w)
                ? std::uint64_t{1} << (g % bits::word_bits)
                : 0;
        if (eq != want) return false;
      }
    }
    return true;
  }

 private:
  std::uint32_t cluster_max(const std::uint64_t* cluster_planes, std::size_t planes,
                            std::size_t nw, std::uint32_t cluster) const {
    const std::uint32_t l = net_->topology().fanals_per_cluster();
    std::uint32_t value = 0;
    if (l >= bits::word_bits) {
      cand_.assign(nw, ~std::uint64_t{0});
      for (std::size_t p = planes; p-- > 0;) {
        std::uint64_t any = 0;
        for (std::size_t w = 0; w < nw; ++w) any |= cand_[w] & cluster_planes[p * nw + w];
        if (any != 0) {
          value |= std::uint32_t{1} << p;
          for (std::size_t w = 0; w < nw; ++w) cand_[w] &= cluster_planes[p * nw + w];
        }
      }
    } else {
      const std::size_t lo = static_cast<std::size_t>(cluster) * l % bits::word_bits;
      std::uint64_t cand = bits::range_mask(lo, lo + l);
      for (std::size_t p = planes; p-- > 0;) {
        std::uint64_t x = cand & cluster_planes[p * nw];
        if (x != 0) {
          value |= std::uint32_t{1} << p;
          cand = x;
        }
      }
    }
    return value;
  }

  const CliqueNetwork* net_;
  std::vector<std::uint64_t> scratch_;
  mutable std::vector<std::uint64_t> cand_;
};

inline bool accept(const CliqueNetwork& net, const SparseMessage& probe,
                   std::uint32_t gamma = 1) {
  Acceptor a(net);
  return a.accept(probe, gamma);
}

}  // namespace cliquenet
