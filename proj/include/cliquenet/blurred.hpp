#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "cliquenet/message.hpp"
#include "cliquenet/network.hpp"
#include "cliquenet/retrieval.hpp"

namespace cliquenet {

// Supported distortions of a contiguous message. Both keep the multiset of
// characters and move them between neighbouring (or arbitrary) positions.
enum class Distortion {
  PairwiseSwap,  // characters swapped two by two along the message
  Anagram,       // characters rearranged arbitrarily
};

// Swaps the fanal values of positions (0,1), (2,3), ... of a contiguous
// message; with odd order the last position keeps its value.
inline SparseMessage permute_pairwise(const SparseMessage& m) {
  if (!m.contiguous())
    throw std::invalid_argument("permute_pairwise: message must be contiguous");
  std::vector<Entry> entries = m.entries();
  for (std::size_t k = 0; k + 1 < entries.size(); k += 2)
    std::swap(entries[k].fanal, entries[k + 1].fanal);
  return SparseMessage(std::move(entries));
}

// Initial activation used to decode a distorted contiguous message.
//
// PairwiseSwap: the reader knows each received character sits at most one
// position away from home, so each received value lights its own cluster and
// both neighbouring clusters of the span (cyclically), giving up to three
// active fanals per cluster. Anagram: any position may hold any character, so
// every received value lights every span cluster, up to `order` actives each.
// Either way the original clique is contained in the activated set.
inline ActivationState init_distorted_state(const Topology& t,
                                            const SparseMessage& distorted,
                                            Distortion kind) {
  if (!distorted.contiguous())
    throw std::invalid_argument("init_distorted_state: message must be contiguous");
  if (!distorted.fits(t))
    throw std::invalid_argument("init_distorted_state: message does not fit");
  const auto& entries = distorted.entries();
  const std::uint32_t c = distorted.order();
  ActivationState state(t);
  std::vector<Entry> lit;
  if (kind == Distortion::PairwiseSwap) {
    for (std::uint32_t pos = 0; pos < c; ++pos) {
      std::uint32_t v = entries[pos].fanal;
      lit.push_back({entries[pos].cluster, v});
      lit.push_back({entries[(pos + 1) % c].cluster, v});
      lit.push_back({entries[(pos + c - 1) % c].cluster, v});
    }
  } else {
    for (std::uint32_t pos = 0; pos < c; ++pos)
      for (std::uint32_t other = 0; other < c; ++other)
        lit.push_back({entries[pos].cluster, entries[other].fanal});
  }
  state.activate(lit);
  return state;
}

// Decodes a distorted contiguous message: starts from the blurred activation
// above and iterates the retrieval dynamics with the span's clusters at
// threshold 0 and every other cluster unable to activate (the span is known
// from the received message, exactly as in guided recovery).
inline RetrievalOutcome decode_distorted(const CliqueNetwork& net,
                                         const SparseMessage& distorted, Distortion kind,
                                         std::uint32_t iterations, std::uint32_t gamma = 1) {
  ActivationState state = init_distorted_state(net.topology(), distorted, kind);
  std::vector<std::uint32_t> span;
  for (const Entry& e : distorted.entries()) span.push_back(e.cluster);
  RetrievalConfig cfg = RetrievalConfig::masked(net.topology().cluster_count(), span, 0,
                                                iterations, gamma);
  return run_dynamics(net, state, cfg);
}

// Snapshot variant for sweeps over several iteration budgets in one run.
inline std::vector<std::vector<Entry>> decode_distorted_snapshots(
    const CliqueNetwork& net, const SparseMessage& distorted, Distortion kind,
    std::span<const std::uint32_t> checkpoints, std::uint32_t gamma = 1) {
  ActivationState state = init_distorted_state(net.topology(), distorted, kind);
  std::vector<std::uint32_t> span;
  for (const Entry& e : distorted.entries()) span.push_back(e.cluster);
  RetrievalConfig cfg = RetrievalConfig::masked(net.topology().cluster_count(), span, 0,
                                                checkpoints.back(), gamma);
  return run_dynamics_snapshots(net, state, cfg, checkpoints);
}

}  // namespace cliquenet
