#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "cliquenet/bits.hpp"
#include "cliquenet/message.hpp"
#include "cliquenet/network.hpp"
#include "cliquenet/topology.hpp"

namespace cliquenet {

// How winners are picked from the scores.
enum class Selection {
  GlobalMax,      // one score bar for the whole network: the global maximum
  PerClusterMax,  // each cluster keeps its own local maxima
};

struct RetrievalConfig {
  // Threshold value meaning "this cluster can never activate".
  static constexpr std::uint32_t disabled = 0xFFFFFFFFu;

  std::uint32_t gamma = 1;  // memory effect: weight of a fanal's own activity
  Selection selection = Selection::GlobalMax;
  std::uint32_t max_iterations = 1;
  // Per-cluster activation thresholds (size cluster_count), each a finite
  // sigma or `disabled`. Empty means "all clusters enabled with sigma = 0".
  std::vector<std::uint32_t> thresholds;

  bool cluster_enabled(std::uint32_t i) const {
    return thresholds.empty() || thresholds[i] != disabled;
  }
  std::uint32_t sigma(std::uint32_t i) const {
    return thresholds.empty() ? 0 : thresholds[i];
  }

  // All clusters enabled at sigma = 0 (the erased-message setting).
  static RetrievalConfig open(std::uint32_t iterations, std::uint32_t gamma = 1) {
    RetrievalConfig cfg;
    cfg.gamma = gamma;
    cfg.max_iterations = iterations;
    return cfg;
  }

  // Only `clusters` participate, each at threshold `sigma`; the rest can
  // never activate.
  static RetrievalConfig masked(std::uint32_t cluster_count,
                                std::span<const std::uint32_t> clusters,
                                std::uint32_t sigma, std::uint32_t iterations,
                                std::uint32_t gamma = 1) {
    RetrievalConfig cfg;
    cfg.gamma = gamma;
    cfg.max_iterations = iterations;
    cfg.thresholds.assign(cluster_count, disabled);
    for (std::uint32_t i : clusters) {
      if (i >= cluster_count)
        throw std::invalid_argument("RetrievalConfig: cluster index out of range");
      cfg.thresholds[i] = sigma;
    }
    return cfg;
  }
};

// Activation state of one retrieval: a binary activity bit per fanal plus the
// integer score of every fanal kept as bit planes (plane p holds bit p of
// each score), so that propagation and selection run on whole 64-bit words.
class ActivationState {
 public:
  explicit ActivationState(const Topology& t)
      : topo_(t),
        n_(t.fanal_count()),
        words_(bits::word_count(n_)),
        active_(words_, 0),
        per_cluster_max_(t.cluster_count(), 0) {}

  const Topology& topology() const { return topo_; }

  void clear() {
    std::fill(active_.begin(), active_.end(), 0);
    std::fill(planes_.begin(), planes_.end(), 0);
    std::fill(per_cluster_max_.begin(), per_cluster_max_.end(), 0u);
    global_max_ = 0;
  }

  void activate(std::span<const Entry> fanals) {
    for (const Entry& e : fanals) {
      if (e.cluster >= topo_.cluster_count() || e.fanal >= topo_.fanals_per_cluster())
        throw std::invalid_argument("activate: fanal out of range");
      bits::set(active_, topo_.global_index(e.cluster, e.fanal));
    }
  }

  bool is_active(std::uint32_t cluster, std::uint32_t fanal) const {
    return bits::test(active_, topo_.global_index(cluster, fanal));
  }
  std::span<const std::uint64_t> active_words() const { return active_; }

  std::vector<Entry> active_entries() const {
    std::vector<Entry> out;
    bits::for_each_set(active_, [&](std::size_t g) {
      out.push_back({topo_.cluster_of(static_cast<std::uint32_t>(g)),
                     topo_.fanal_of(static_cast<std::uint32_t>(g))});
    });
    return out;
  }

  std::size_t active_count() const { return bits::popcount(active_); }

  // Score of one fanal, assembled from the planes (valid after propagate).
  std::uint32_t score(std::uint32_t cluster, std::uint32_t fanal) const {
    std::uint32_t g = topo_.global_index(cluster, fanal);
    std::uint32_t v = 0;
    for (std::size_t p = 0; p < plane_count_; ++p)
      v |= static_cast<std::uint32_t>(bits::test(plane(p), g)) << p;
    return v;
  }

  // Valid after select().
  std::uint32_t per_cluster_max(std::uint32_t cluster) const {
    return per_cluster_max_[cluster];
  }
  std::uint32_t global_max() const { return global_max_; }

  // One synchronous update of every score from the current activity snapshot:
  // each other cluster contributes 1 if it holds an active neighbour of the
  // target (max over that cluster's fanals of weight times activity), and an
  // active target keeps gamma for itself. Activities are left untouched.
  void propagate(const CliqueNetwork& net, std::uint32_t gamma) {
    if (net.topology() != topo_)
      throw std::invalid_argument("propagate: network/state topology mismatch");
    reserve_planes(topo_.cluster_count() + gamma);
    std::fill(planes_.begin(), planes_.end(), 0);

    // Active fanals come out in ascending order, so one pass groups them by
    // cluster; each cluster's contribution is the OR of its active rows.
    mask_.assign(words_, 0);
    std::uint32_t group_cluster = topo_.cluster_count();
    bool group_open = false;
    bits::for_each_set(active_, [&](std::size_t g) {
      std::uint32_t cluster = topo_.cluster_of(static_cast<std::uint32_t>(g));
      if (group_open && cluster != group_cluster) {
        add_one(mask_);
        std::fill(mask_.begin(), mask_.end(), 0);
        group_open = false;
      }
      group_cluster = cluster;
      group_open = true;
      std::span<const std::uint64_t> r = net.row(static_cast<std::uint32_t>(g));
      for (std::size_t w = 0; w < words_; ++w) mask_[w] |= r[w];
    });
    if (group_open) add_one(mask_);

    for (std::uint32_t bit = 0; bit < 32 && (gamma >> bit) != 0; ++bit)
      if ((gamma >> bit) & 1u) add_shifted(active_, bit);
  }

  // Rewrites the activity bits from the scores: under GlobalMax a fanal stays
  // active iff its score equals the maximum over all enabled clusters and
  // that maximum passes its cluster's threshold; under PerClusterMax each
  // enabled cluster applies the same rule to its own maximum. Disabled
  // clusters never activate and do not feed the global maximum.
  void select(const RetrievalConfig& cfg) {
    const std::uint32_t chi = topo_.cluster_count();
    if (!cfg.thresholds.empty() && cfg.thresholds.size() != chi)
      throw std::invalid_argument("select: thresholds size must match cluster count");

    bool any_enabled = false;
    global_max_ = 0;
    for (std::uint32_t i = 0; i < chi; ++i) {
      per_cluster_max_[i] = cluster_max(i);
      if (cfg.cluster_enabled(i)) {
        any_enabled = true;
        global_max_ = std::max(global_max_, per_cluster_max_[i]);
      }
    }
    if (!any_enabled) {
      std::fill(active_.begin(), active_.end(), 0);
      return;
    }

    if (cfg.selection == Selection::GlobalMax) {
      // Clusters that may activate: enabled and sigma_i <= v_max.
      std::fill(active_.begin(), active_.end(), 0);
      for (std::uint32_t i = 0; i < chi; ++i)
        if (cfg.cluster_enabled(i) && cfg.sigma(i) <= global_max_)
          set_cluster_range(active_, i);
      filter_equal(active_, global_max_);
    } else {
      std::fill(active_.begin(), active_.end(), 0);
      for (std::uint32_t i = 0; i < chi; ++i) {
        if (!cfg.cluster_enabled(i) || per_cluster_max_[i] < cfg.sigma(i)) continue;
        set_cluster_range(active_, i);
      }
      // Each allowed cluster keeps only its own maximum; do it per cluster.
      for (std::uint32_t i = 0; i < chi; ++i) {
        if (!cfg.cluster_enabled(i) || per_cluster_max_[i] < cfg.sigma(i)) continue;
        filter_equal_in_cluster(active_, i, per_cluster_max_[i]);
      }
    }
  }

 private:
  std::span<std::uint64_t> plane(std::size_t p) {
    return {planes_.data() + p * words_, words_};
  }
  std::span<const std::uint64_t> plane(std::size_t p) const {
    return {planes_.data() + p * words_, words_};
  }

  void reserve_planes(std::uint32_t max_score) {
    std::size_t needed = 1;
    while ((std::uint64_t{1} << needed) <= max_score) ++needed;
    ++needed;  // headroom so a carry can never fall off the top
    if (needed > plane_count_) {
      plane_count_ = needed;
      planes_.resize(plane_count_ * words_, 0);
    }
  }

  // planes += 1 at every set bit of mask (ripple-carry add of a 1-bit value).
  void add_one(std::span<const std::uint64_t> mask) { add_at_plane(mask, 0); }

  // planes += 2^p0 at every set bit of mask.
  void add_shifted(std::span<const std::uint64_t> mask, std::uint32_t p0) {
    add_at_plane(mask, p0);
  }

  void add_at_plane(std::span<const std::uint64_t> mask, std::uint32_t p0) {
    for (std::size_t w = 0; w < words_; ++w) {
      std::uint64_t carry = mask[w];
      for (std::size_t p = p0; carry != 0; ++p) {
        std::uint64_t word = planes_[p * words_ + w];
        planes_[p * words_ + w] = word ^ carry;
        carry &= word;
      }
    }
  }

  // Clusters are aligned: l >= 64 gives l/64 whole words per cluster, l < 64
  // gives 64/l clusters per word (l is a power of two).
  std::uint32_t cluster_max(std::uint32_t i) const {
    const std::uint32_t l = topo_.fanals_per_cluster();
    std::uint32_t value = 0;
    if (l >= bits::word_bits) {
      const std::size_t w0 = static_cast<std::size_t>(i) * (l / bits::word_bits);
      const std::size_t nw = l / bits::word_bits;
      cand_.assign(nw, ~std::uint64_t{0});
      for (std::size_t p = plane_count_; p-- > 0;) {
        std::uint64_t any = 0;
        for (std::size_t w = 0; w < nw; ++w) any |= cand_[w] & planes_[p * words_ + w0 + w];
        if (any != 0) {
          value |= std::uint32_t{1} << p;
          for (std::size_t w = 0; w < nw; ++w) cand_[w] &= planes_[p * words_ + w0 + w];
        }
      }
    } else {
      const std::size_t w0 = static_cast<std::size_t>(i) * l / bits::word_bits;
      const std::size_t lo = static_cast<std::size_t>(i) * l % bits::word_bits;
      std::uint64_t cand = bits::range_mask(lo, lo + l);
      for (std::size_t p = plane_count_; p-- > 0;) {
        std::uint64_t t = cand & planes_[p * words_ + w0];
        if (t != 0) {
          value |= std::uint32_t{1} << p;
          cand = t;
        }
      }
    }
    return value;
  }

  void set_cluster_range(std::vector<std::uint64_t>& dst, std::uint32_t i) const {
    const std::uint32_t l = topo_.fanals_per_cluster();
    if (l >= bits::word_bits) {
      const std::size_t w0 = static_cast<std::size_t>(i) * (l / bits::word_bits);
      for (std::size_t w = 0; w < l / bits::word_bits; ++w) dst[w0 + w] = ~std::uint64_t{0};
    } else {
      const std::size_t w0 = static_cast<std::size_t>(i) * l / bits::word_bits;
      const std::size_t lo = static_cast<std::size_t>(i) * l % bits::word_bits;
      dst[w0] |= bits::range_mask(lo, lo + l);
    }
  }

  // Keeps only bits whose score equals `value` (checked against every plane).
  void filter_equal(std::vector<std::uint64_t>& dst, std::uint32_t value) const {
    for (std::size_t p = 0; p < plane_count_; ++p) {
      bool bit = (value >> p) & 1u;
      for (std::size_t w = 0; w < words_; ++w)
        dst[w] &= bit ? planes_[p * words_ + w] : ~planes_[p * words_ + w];
    }
  }

  void filter_equal_in_cluster(std::vector<std::uint64_t>& dst, std::uint32_t i,
                               std::uint32_t value) const {
    const std::uint32_t l = topo_.fanals_per_cluster();
    const std::size_t w0 = static_cast<std::size_t>(i) * l / bits::word_bits;
    const std::size_t nw = l >= bits::word_bits ? l / bits::word_bits : 1;
    for (std::size_t p = 0; p < plane_count_; ++p) {
      bool bit = (value >> p) & 1u;
      for (std::size_t w = 0; w < nw; ++w) {
        std::uint64_t pw = planes_[p * words_ + w0 + w];
        std::uint64_t keep = bit ? pw : ~pw;
        if (l < bits::word_bits) {
          const std::size_t lo = static_cast<std::size_t>(i) * l % bits::word_bits;
          std::uint64_t m = bits::range_mask(lo, lo + l);
          keep = (keep & m) | ~m;  // leave other clusters' bits alone
        }
        dst[w0 + w] &= keep;
      }
    }
  }

  Topology topo_;
  std::uint32_t n_;
  std::size_t words_;
  std::vector<std::uint64_t> active_;
  std::vector<std::uint64_t> planes_;  // plane_count_ x words_
  std::size_t plane_count_ = 0;
  std::vector<std::uint64_t> mask_;          // propagate scratch
  mutable std::vector<std::uint64_t> cand_;  // cluster_max scratch
  std::vector<std::uint32_t> per_cluster_max_;
  std::uint32_t global_max_ = 0;
};

struct RetrievalOutcome {
  std::vector<Entry> final_active;
  std::uint32_t iterations_run = 0;
  bool converged = false;       // reached a fixed point within the budget
  bool cycle_detected = false;  // fell into a period-2 oscillation
  bool ambiguous = false;       // some cluster ended with several active fanals

  friend bool operator==(const RetrievalOutcome&, const RetrievalOutcome&) = default;
};

namespace detail {

inline bool any_cluster_crowded(std::span<const Entry> entries) {
  for (std::size_t i = 1; i < entries.size(); ++i)
    if (entries[i].cluster == entries[i - 1].cluster) return true;
  return false;
}

}  // namespace detail

// Runs propagate/select from the state's current activity until the active
// set repeats (fixed point), oscillates with period 2, or the iteration
// budget runs out. One iteration is one propagate followed by one select.
inline RetrievalOutcome run_dynamics(const CliqueNetwork& net, ActivationState& state,
                                     const RetrievalConfig& cfg) {
  if (cfg.max_iterations < 1)
    throw std::invalid_argument("run_dynamics: need at least one iteration");
  RetrievalOutcome out;
  std::vector<std::uint64_t> prev(state.active_words().begin(), state.active_words().end());
  std::vector<std::uint64_t> prev2;
  for (std::uint32_t it = 1; it <= cfg.max_iterations; ++it) {
    state.propagate(net, cfg.gamma);
    state.select(cfg);
    out.iterations_run = it;
    std::span<const std::uint64_t> cur = state.active_words();
    if (std::equal(cur.begin(), cur.end(), prev.begin(), prev.end())) {
      out.converged = true;
      break;
    }
    if (it >= 2 && std::equal(cur.begin(), cur.end(), prev2.begin(), prev2.end())) {
      out.cycle_detected = true;
      break;
    }
    prev2 = std::move(prev);
    prev.assign(cur.begin(), cur.end());
  }
  out.final_active = state.active_entries();
  out.ambiguous = detail::any_cluster_crowded(out.final_active);
  return out;
}

// Like run_dynamics, but records the active set after each iteration count in
// `checkpoints` (strictly ascending, all >= 1). A fixed point reached early
// simply persists; a period-2 oscillation alternates, so later checkpoints
// are filled in by parity instead of re-simulating.
inline std::vector<std::vector<Entry>> run_dynamics_snapshots(
    const CliqueNetwork& net, ActivationState& state, const RetrievalConfig& cfg,
    std::span<const std::uint32_t> checkpoints) {
  if (checkpoints.empty() || checkpoints.front() < 1 ||
      !std::is_sorted(checkpoints.begin(), checkpoints.end()))
    throw std::invalid_argument("run_dynamics_snapshots: bad checkpoint list");
  std::vector<std::vector<Entry>> snapshots;
  snapshots.reserve(checkpoints.size());
  std::vector<std::uint64_t> prev(state.active_words().begin(), state.active_words().end());
  std::vector<std::uint64_t> prev2;
  std::vector<Entry> prev_entries = state.active_entries();
  std::size_t next = 0;
  const std::uint32_t last = checkpoints.back();
  for (std::uint32_t it = 1; it <= last; ++it) {
    state.propagate(net, cfg.gamma);
    state.select(cfg);
    std::span<const std::uint64_t> cur = state.active_words();
    std::vector<Entry> cur_entries = state.active_entries();
    while (next < checkpoints.size() && checkpoints[next] == it) {
      snapshots.push_back(cur_entries);
      ++next;
    }
    if (std::equal(cur.begin(), cur.end(), prev.begin(), prev.end())) {
      while (next < checkpoints.size()) {
        snapshots.push_back(cur_entries);
        ++next;
      }
      break;
    }
    if (it >= 2 && std::equal(cur.begin(), cur.end(), prev2.begin(), prev2.end())) {
      while (next < checkpoints.size()) {
        bool even = (checkpoints[next] - it) % 2 == 0;
        snapshots.push_back(even ? cur_entries : prev_entries);
        ++next;
      }
      break;
    }
    prev2 = std::move(prev);
    prev.assign(cur.begin(), cur.end());
    prev_entries = std::move(cur_entries);
  }
  return snapshots;
}

// Full retrieval from a cue: activates exactly the cue's fanals, then runs
// the dynamics under `cfg`.
inline RetrievalOutcome retrieve(const CliqueNetwork& net, std::span<const Entry> cue,
                                 const RetrievalConfig& cfg) {
  ActivationState state(net.topology());
  state.activate(cue);
  return run_dynamics(net, state, cfg);
}

// Recovery when nothing is known about the missing characters: every cluster
// participates with threshold 0 under GlobalMax.
inline RetrievalOutcome blind_recover(const CliqueNetwork& net, std::span<const Entry> cue,
                                      std::uint32_t iterations, std::uint32_t gamma = 1) {
  return retrieve(net, cue, RetrievalConfig::open(iterations, gamma));
}

// Recovery when the clusters of the full message are known: clusters outside
// `known_clusters` can never activate.
inline RetrievalOutcome guided_recover(const CliqueNetwork& net, std::span<const Entry> cue,
                                       std::span<const std::uint32_t> known_clusters,
                                       std::uint32_t iterations, std::uint32_t gamma = 1) {
  for (const Entry& e : cue)
    if (std::find(known_clusters.begin(), known_clusters.end(), e.cluster) ==
        known_clusters.end())
      throw std::invalid_argument("guided_recover: cue cluster not in the known set");
  return retrieve(net, cue, RetrievalConfig::masked(net.topology().cluster_count(),
                                                    known_clusters, 0, iterations, gamma));
}

// Exact-recovery check: the outcome must activate the truth's fanals and
// nothing else anywhere in the network.
inline bool is_success(const RetrievalOutcome& outcome, const SparseMessage& truth) {
  return outcome.final_active == truth.entries();
}

// Cue construction: the message with the given clusters' entries removed.
inline std::vector<Entry> erase_clusters(const SparseMessage& m,
                                         std::span<const std::uint32_t> clusters) {
  std::vector<Entry> cue;
  for (const Entry& e : m.entries())
    if (std::find(clusters.begin(), clusters.end(), e.cluster) == clusters.end())
      cue.push_back(e);
  return cue;
}

}  // namespace cliquenet
