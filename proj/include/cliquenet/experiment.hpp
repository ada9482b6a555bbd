#pragma once

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "cliquenet/blurred.hpp"
#include "cliquenet/classify.hpp"
#include "cliquenet/message.hpp"
#include "cliquenet/network.hpp"
#include "cliquenet/random.hpp"
#include "cliquenet/retrieval.hpp"
#include "cliquenet/theory.hpp"
#include "cliquenet/topology.hpp"

// Monte Carlo sweeps over the clique memory: build a network per sweep point,
// learn a batch of random messages, then measure an error rate over many
// independent trials, alongside the matching closed-form prediction. Every
// random stream is derived from (base seed, point index, trial index), so a
// run is reproducible bit for bit and trials can be fanned out across threads
// without changing any count.

namespace cliquenet {

// A structurally valid experiment that asks for something the model cannot
// do (order above the cluster count, erasing every character, ...).
class SpecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ExperimentMode {
  Density,             // learning curve: measured density vs message count
  Blind,               // erased-character recovery, erased clusters unknown
  Guided,              // erased-character recovery, erased clusters known
  Classify,            // false-acceptance rate of never-learned probes
  DistortedPairwise,   // decoding after cyclic pairwise character swaps
  DistortedAnagram,    // decoding an anagram of the stored message
};

struct ExperimentSpec {
  std::string figure = "custom";  // label only; presets fill it in
  ExperimentMode mode = ExperimentMode::Blind;

  std::uint32_t clusters = 100;
  std::uint32_t fanals = 64;
  std::uint32_t order_min = 12;
  std::uint32_t order_max = 12;
  Placement placement = Placement::UniformClusters;

  // Erasure shape for the recovery modes: a fixed count when `alpha` is
  // negative, otherwise a fraction of each message's order (rounded
  // randomly so the mean stays alpha*c even when that is fractional).
  std::uint32_t erased = 0;
  double alpha = -1.0;

  std::vector<std::uint32_t> iterations{1};  // checkpoints, ascending
  std::uint32_t gamma = 1;

  std::vector<double> sweep;               // messages learned per point
  std::vector<std::uint32_t> order_sweep;  // optional per-point order; x = order

  std::uint64_t trials = 10000;    // per stopping round
  std::uint64_t min_errors = 0;    // 0 = single round
  std::uint32_t max_rounds = 10;
  std::uint64_t seed = 1;
  std::uint32_t threads = 0;  // 0 = hardware concurrency
  bool fresh_network_per_trial = false;

  bool uses_trials() const { return mode != ExperimentMode::Density; }
  bool uses_iterations() const {
    return mode == ExperimentMode::Blind || mode == ExperimentMode::Guided ||
           mode == ExperimentMode::DistortedPairwise ||
           mode == ExperimentMode::DistortedAnagram;
  }
  bool is_recovery() const {
    return mode == ExperimentMode::Blind || mode == ExperimentMode::Guided;
  }

  void validate() const {
    try {
      Topology probe(clusters, fanals);
    } catch (const std::invalid_argument& e) {
      throw SpecError(std::string("spec: ") + e.what());
    }
    if (sweep.empty()) throw SpecError("spec: empty sweep");
    for (double m : sweep)
      if (!(m >= 0.0) || m != std::floor(m) || m > 4.0e9)
        throw SpecError("spec: sweep entries must be whole non-negative message counts");
    if (!order_sweep.empty() && order_sweep.size() != sweep.size())
      throw SpecError("spec: order_sweep must pair up with sweep");
    for (std::uint32_t c : order_sweep)
      if (c < 2 || c > clusters) throw SpecError("spec: order_sweep entry out of range");
    if (order_min < 2 || order_max < order_min || order_max > clusters)
      throw SpecError("spec: order range must satisfy 2 <= min <= max <= clusters");
    if (uses_trials()) {
      if (trials == 0) throw SpecError("spec: trials must be positive");
      if (max_rounds == 0) throw SpecError("spec: max_rounds must be positive");
      for (double m : sweep)
        if (m == 0) throw SpecError("spec: trial modes need at least one learned message");
    }
    if (uses_iterations()) {
      if (iterations.empty() || iterations.front() < 1 ||
          !std::is_sorted(iterations.begin(), iterations.end()) ||
          std::adjacent_find(iterations.begin(), iterations.end()) != iterations.end())
        throw SpecError("spec: iterations must be strictly ascending and >= 1");
    }
    if (is_recovery()) {
      if (alpha >= 0.0 && erased > 0)
        throw SpecError("spec: give erased or alpha, not both");
      if (alpha < 0.0) {
        if (erased == 0) throw SpecError("spec: recovery needs erased >= 1 or alpha");
        std::uint32_t weakest = order_sweep.empty()
                                    ? order_min
                                    : *std::min_element(order_sweep.begin(), order_sweep.end());
        if (erased >= weakest)
          throw SpecError("spec: cannot erase a whole message (erased >= order)");
      } else {
        if (!(alpha < 1.0)) throw SpecError("spec: alpha must lie in [0, 1)");
        std::uint32_t strongest = order_sweep.empty()
                                      ? order_max
                                      : *std::max_element(order_sweep.begin(), order_sweep.end());
        // randomised rounding may erase floor(alpha*c) + 1 characters
        if (std::floor(alpha * strongest) + 1 >= strongest)
          throw SpecError("spec: alpha erases whole messages at the largest order");
      }
    }
    if (mode == ExperimentMode::DistortedPairwise || mode == ExperimentMode::DistortedAnagram) {
      if (placement != Placement::Contiguous)
        throw SpecError("spec: distorted decoding requires contiguous placement");
      if (order_min != order_max || !order_sweep.empty())
        throw SpecError("spec: distorted decoding requires a constant order");
    }
    if (mode == ExperimentMode::Density && placement == Placement::Contiguous &&
        order_min != order_max)
      throw SpecError("spec: contiguous placement requires a constant order");
    if (mode == ExperimentMode::Classify && gamma == 0)
      throw SpecError("spec: classification needs gamma >= 1");
    if (fresh_network_per_trial &&
        (mode == ExperimentMode::Classify || mode == ExperimentMode::Density))
      throw SpecError("spec: fresh_network only applies to recovery and decoding modes");
  }
};

struct CurvePoint {
  double x = 0.0;
  double sim_rate = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double theory = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t errors = 0;
  std::uint64_t seed = 0;
  std::uint32_t iteration = 1;   // checkpoint this row belongs to
  double wall_seconds = 0.0;     // bookkeeping only, not serialised
};

// 95% interval for a binomial rate: normal approximation, switching to the
// Wilson score interval when error events are scarce.
inline std::pair<double, double> rate_interval(std::uint64_t errors, std::uint64_t trials) {
  if (trials == 0) return {0.0, 0.0};
  const double z = 1.959963984540054;
  double n = static_cast<double>(trials);
  double p = static_cast<double>(errors) / n;
  double lo, hi;
  // at the extremes one bound is exact; the formulas below only reproduce
  // that up to rounding noise
  if (errors == 0) return {0.0, std::min(1.0, (z * z / n) / (1.0 + z * z / n))};
  if (errors == trials) return {std::max(0.0, 1.0 - (z * z / n) / (1.0 + z * z / n)), 1.0};
  if (errors >= 30) {
    double half = z * std::sqrt(p * (1.0 - p) / n);
    lo = p - half;
    hi = p + half;
  } else {
    double denom = 1.0 + z * z / n;
    double centre = (p + z * z / (2.0 * n)) / denom;
    double half = z * std::sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n)) / denom;
    lo = centre - half;
    hi = centre + half;
  }
  return {std::max(0.0, lo), std::min(1.0, hi)};
}

// Compact owner of the learned batch: all entries in one flat array.
class MessageStore {
 public:
  void reserve(std::size_t messages, std::size_t entries_hint) {
    offsets_.reserve(messages + 1);
    entries_.reserve(entries_hint);
  }
  void add(const SparseMessage& m) {
    entries_.insert(entries_.end(), m.entries().begin(), m.entries().end());
    offsets_.push_back(entries_.size());
  }
  std::size_t size() const { return offsets_.size() - 1; }
  std::span<const Entry> operator[](std::size_t i) const {
    return {entries_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
  }

 private:
  std::vector<Entry> entries_;
  std::vector<std::size_t> offsets_{0};
};

// Order-sensitive digest of a message's sorted entries, used to test probe
// membership without keeping a second copy of the batch.
inline std::uint64_t message_fingerprint(std::span<const Entry> entries) {
  std::uint64_t h = 0x9E3779B97F4A7C15ull;
  for (const Entry& e : entries)
    h = mix64(h ^ ((static_cast<std::uint64_t>(e.cluster) << 32) | e.fanal));
  return h;
}

namespace harness_detail {

inline bool same_entries(std::span<const Entry> a, std::span<const Entry> b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin());
}

// floor(x) + Bernoulli(frac(x)), so the mean equals x itself.
inline std::uint32_t randomised_round(double x, Rng& rng) {
  double base = std::floor(x);
  double frac = x - base;
  std::uint32_t v = static_cast<std::uint32_t>(base);
  if (frac > 0.0) {
    double u = (rng.next() >> 11) * 0x1.0p-53;
    if (u < frac) ++v;
  }
  return v;
}

struct PointContext {
  const ExperimentSpec& spec;
  Topology topo;
  std::uint64_t point_seed = 0;
  std::uint64_t messages = 0;
  OrderProfile orders;
  CliqueNetwork net;
  MessageStore store;
  std::vector<std::uint64_t> fingerprints;  // sorted; Classify only
};

inline void learn_batch(const Topology& t, const ExperimentSpec& spec,
                        const OrderProfile& orders, std::uint64_t messages, Rng& rng,
                        CliqueNetwork& net, MessageStore* store) {
  if (store)
    store->reserve(messages, static_cast<std::size_t>(messages) * orders.max_order());
  for (std::uint64_t i = 0; i < messages; ++i) {
    SparseMessage m = random_message(t, sample_order(orders, rng), spec.placement, rng);
    net.learn(m);
    if (store) store->add(m);
  }
}

// One recovery/decoding/classification trial; fills per-checkpoint error
// flags. Returns the per-trial error bitmask by checkpoint index.
class TrialRunner {
 public:
  TrialRunner(const PointContext& ctx)
      : ctx_(ctx), state_(ctx.topo), acceptor_(ctx.net) {}

  // `errors` has one slot per checkpoint (one slot total for Classify).
  void run(std::uint64_t trial_index, std::span<std::uint64_t> errors) {
    const ExperimentSpec& spec = ctx_.spec;
    Rng rng(derive_seed(ctx_.point_seed, 1 + trial_index));

    const CliqueNetwork* net = &ctx_.net;
    const MessageStore* store = &ctx_.store;
    CliqueNetwork local_net(ctx_.topo);
    MessageStore local_store;
    if (spec.fresh_network_per_trial) {
      Rng learn_rng(derive_seed(rng.seed(), 0));
      Rng ops_rng(derive_seed(rng.seed(), 1));
      learn_batch(ctx_.topo, spec, ctx_.orders, ctx_.messages, learn_rng, local_net,
                  &local_store);
      net = &local_net;
      store = &local_store;
      rng = ops_rng;
    }

    switch (spec.mode) {
      case ExperimentMode::Blind:
      case ExperimentMode::Guided: {
        std::span<const Entry> truth = (*store)[rng.below(static_cast<std::uint32_t>(store->size()))];
        const std::uint32_t c = static_cast<std::uint32_t>(truth.size());
        std::uint32_t c_e = spec.alpha < 0.0
                                ? spec.erased
                                : randomised_round(spec.alpha * c, rng);
        // choose c_e distinct positions to blank out
        idx_.resize(c);
        for (std::uint32_t k = 0; k < c; ++k) idx_[k] = k;
        for (std::uint32_t k = 0; k < c_e; ++k)
          std::swap(idx_[k], idx_[k + rng.below(c - k)]);
        erased_at_.assign(c, 0);
        for (std::uint32_t k = 0; k < c_e; ++k) erased_at_[idx_[k]] = 1;
        cue_.clear();
        for (std::uint32_t k = 0; k < c; ++k)
          if (!erased_at_[k]) cue_.push_back(truth[k]);

        RetrievalConfig cfg;
        if (spec.mode == ExperimentMode::Blind) {
          cfg = RetrievalConfig::open(spec.iterations.back(), spec.gamma);
        } else {
          known_.clear();
          for (const Entry& e : truth) known_.push_back(e.cluster);
          cfg = RetrievalConfig::masked(ctx_.topo.cluster_count(), known_, 0,
                                        spec.iterations.back(), spec.gamma);
        }
        state_.clear();
        state_.activate(cue_);
        auto snaps = run_dynamics_snapshots(*net, state_, cfg, spec.iterations);
        for (std::size_t k = 0; k < snaps.size(); ++k)
          if (!same_entries(snaps[k], truth)) ++errors[k];
        break;
      }
      case ExperimentMode::DistortedPairwise:
      case ExperimentMode::DistortedAnagram: {
        std::span<const Entry> truth = (*store)[rng.below(static_cast<std::uint32_t>(store->size()))];
        SparseMessage original(std::vector<Entry>(truth.begin(), truth.end()));
        Distortion kind = spec.mode == ExperimentMode::DistortedPairwise
                              ? Distortion::PairwiseSwap
                              : Distortion::Anagram;
        SparseMessage received =
            kind == Distortion::PairwiseSwap ? permute_pairwise(original) : original;
        auto snaps =
            decode_distorted_snapshots(*net, received, kind, spec.iterations, spec.gamma);
        for (std::size_t k = 0; k < snaps.size(); ++k)
          if (!same_entries(snaps[k], truth)) ++errors[k];
        break;
      }
      case ExperimentMode::Classify: {
        SparseMessage probe =
            random_message(ctx_.topo, sample_order(ctx_.orders, rng), spec.placement, rng);
        if (acceptor_.accept(probe, spec.gamma)) {
          std::uint64_t fp = message_fingerprint(probe.entries());
          bool learned = std::binary_search(ctx_.fingerprints.begin(),
                                            ctx_.fingerprints.end(), fp);
          if (!learned) ++errors[0];
        }
        break;
      }
      case ExperimentMode::Density:
        break;  // no trials
    }
  }

 private:
  const PointContext& ctx_;
  ActivationState state_;
  Acceptor acceptor_;
  std::vector<Entry> cue_;
  std::vector<std::uint32_t> known_;
  std::vector<std::uint32_t> idx_;
  std::vector<char> erased_at_;
};

inline double theory_value(const ExperimentSpec& spec, const PointContext& ctx) {
  const std::uint32_t chi = spec.clusters, l = spec.fanals;
  const double m = static_cast<double>(ctx.messages);
  const OrderProfile& orders = ctx.orders;
  const std::uint32_t c = orders.min_order();
  switch (spec.mode) {
    case ExperimentMode::Density:
      if (spec.placement == Placement::Contiguous)
        return theory::expected_density_contiguous_global(chi, l, c, m);
      if (orders.is_constant()) return theory::expected_density(chi, l, c, m);
      return theory::expected_density_uniform_range(chi, l, c, orders.max_order(), m);
    case ExperimentMode::Blind: {
      double d = orders.is_constant()
                     ? theory::expected_density(chi, l, c, m)
                     : theory::expected_density_uniform_range(chi, l, c, orders.max_order(), m);
      if (spec.alpha >= 0.0)
        return theory::p_error_blind_averaged(chi, l, c, orders.max_order(), spec.alpha, d);
      if (orders.is_constant()) return theory::p_error_blind(d, chi, l, c, spec.erased);
      double sum = 0.0;
      for (std::uint32_t k = c; k <= orders.max_order(); ++k)
        sum += theory::p_error_blind(d, chi, l, k, spec.erased);
      return sum / orders.spread();
    }
    case ExperimentMode::Guided: {
      double d = orders.is_constant()
                     ? theory::expected_density(chi, l, c, m)
                     : theory::expected_density_uniform_range(chi, l, c, orders.max_order(), m);
      if (spec.alpha >= 0.0)
        return theory::p_error_guided_averaged(chi, l, c, orders.max_order(), spec.alpha, d);
      if (orders.is_constant()) return theory::p_error_guided(d, l, c, spec.erased);
      double sum = 0.0;
      for (std::uint32_t k = c; k <= orders.max_order(); ++k)
        sum += theory::p_error_guided(d, l, k, spec.erased);
      return sum / orders.spread();
    }
    case ExperimentMode::Classify:
      return theory::p_type2(ctx.net.density(), c);
    case ExperimentMode::DistortedPairwise:
      return theory::p_error_distorted_pairwise(
          theory::expected_density_contiguous(chi, l, c, m), c);
    case ExperimentMode::DistortedAnagram:
      return theory::p_error_distorted_anagram(
          theory::expected_density_contiguous(chi, l, c, m), c);
  }
  return 0.0;
}

}  // namespace harness_detail

using PointSink = std::function<void(const CurvePoint&)>;

// Runs the whole sweep; emits one CurvePoint per (sweep point, checkpoint)
// through `sink` as soon as it is ready and also returns them all.
inline std::vector<CurvePoint> run_experiment(const ExperimentSpec& spec,
                                              const PointSink& sink = {}) {
  spec.validate();
  Topology topo(spec.clusters, spec.fanals);
  std::vector<CurvePoint> out;

  const std::size_t checkpoints =
      spec.uses_iterations() ? spec.iterations.size() : 1;
  std::uint32_t workers = spec.threads ? spec.threads
                                       : std::max(1u, std::thread::hardware_concurrency());

  for (std::size_t pi = 0; pi < spec.sweep.size(); ++pi) {
    auto started = std::chrono::steady_clock::now();
    harness_detail::PointContext ctx{
        spec,
        topo,
        derive_seed(spec.seed, pi),
        static_cast<std::uint64_t>(spec.sweep[pi]),
        spec.order_sweep.empty()
            ? (spec.order_min == spec.order_max
                   ? OrderProfile::constant(spec.order_min)
                   : OrderProfile::uniform_range(spec.order_min, spec.order_max))
            : OrderProfile::constant(spec.order_sweep[pi]),
        CliqueNetwork(topo),
        MessageStore{},
        {}};

    if (!spec.fresh_network_per_trial) {
      Rng learn_rng(derive_seed(ctx.point_seed, 0));
      harness_detail::learn_batch(topo, spec, ctx.orders, ctx.messages, learn_rng, ctx.net,
                                  spec.uses_trials() ? &ctx.store : nullptr);
    }
    if (spec.mode == ExperimentMode::Classify) {
      ctx.fingerprints.reserve(ctx.store.size());
      for (std::size_t i = 0; i < ctx.store.size(); ++i)
        ctx.fingerprints.push_back(message_fingerprint(ctx.store[i]));
      std::sort(ctx.fingerprints.begin(), ctx.fingerprints.end());
    }

    double x = !spec.order_sweep.empty() ? static_cast<double>(spec.order_sweep[pi])
                                         : static_cast<double>(ctx.messages);
    double theory = harness_detail::theory_value(spec, ctx);

    if (spec.mode == ExperimentMode::Density) {
      CurvePoint p;
      p.x = x;
      p.sim_rate = ctx.net.density();
      // per-edge binomial interval over the whole resource
      double q = static_cast<double>(topo.binary_resource_bits());
      double half = 1.959963984540054 * std::sqrt(p.sim_rate * (1 - p.sim_rate) / q);
      p.ci_low = std::max(0.0, p.sim_rate - half);
      p.ci_high = std::min(1.0, p.sim_rate + half);
      p.theory = theory;
      p.trials = 1;
      p.errors = ctx.net.edge_count();
      p.seed = ctx.point_seed;
      p.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                                     started)
                           .count();
      out.push_back(p);
      if (sink) sink(p);
      continue;
    }

    std::vector<std::uint64_t> errors(checkpoints, 0);
    std::uint64_t done = 0;
    for (std::uint32_t round = 0; round < spec.max_rounds; ++round) {
      const std::uint64_t lo = done, hi = done + spec.trials;
      std::uint32_t n = static_cast<std::uint32_t>(
          std::min<std::uint64_t>(workers, hi - lo));
      std::vector<std::vector<std::uint64_t>> partial(
          n, std::vector<std::uint64_t>(checkpoints, 0));
      std::vector<std::thread> pool;
      pool.reserve(n);
      const std::uint64_t chunk = (hi - lo + n - 1) / n;
      for (std::uint32_t w = 0; w < n; ++w) {
        std::uint64_t a = lo + w * chunk;
        std::uint64_t b = std::min(hi, a + chunk);
        pool.emplace_back([&, a, b, w] {
          harness_detail::TrialRunner runner(ctx);
          for (std::uint64_t tr = a; tr < b; ++tr) runner.run(tr, partial[w]);
        });
      }
      for (auto& th : pool) th.join();
      for (std::uint32_t w = 0; w < n; ++w)
        for (std::size_t k = 0; k < checkpoints; ++k) errors[k] += partial[w][k];
      done = hi;
      if (spec.min_errors == 0) break;
      if (*std::min_element(errors.begin(), errors.end()) >= spec.min_errors) break;
    }

    double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    for (std::size_t k = 0; k < checkpoints; ++k) {
      CurvePoint p;
      p.x = spec.mode == ExperimentMode::Classify ? ctx.net.density() : x;
      p.sim_rate = static_cast<double>(errors[k]) / static_cast<double>(done);
      std::tie(p.ci_low, p.ci_high) = rate_interval(errors[k], done);
      p.theory = theory;
      p.trials = done;
      p.errors = errors[k];
      p.seed = ctx.point_seed;
      p.iteration = spec.uses_iterations() ? spec.iterations[k] : 1;
      p.wall_seconds = wall;
      out.push_back(p);
      if (sink) sink(p);
    }
  }
  return out;
}

// ---- CSV ----

inline void emit_csv(std::span<const CurvePoint> points, std::ostream& os) {
  os << "x,sim_rate,ci_low,ci_high,theory,trials,errors,seed\n";
  char line[256];
  for (const CurvePoint& p : points) {
    std::snprintf(line, sizeof line, "%.10g,%.10g,%.10g,%.10g,%.10g,%llu,%llu,%llu\n", p.x,
                  p.sim_rate, p.ci_low, p.ci_high, p.theory,
                  static_cast<unsigned long long>(p.trials),
                  static_cast<unsigned long long>(p.errors),
                  static_cast<unsigned long long>(p.seed));
    os << line;
  }
}

// Rows that belong to one iteration checkpoint, in sweep order.
inline std::vector<CurvePoint> filter_iteration(std::span<const CurvePoint> points,
                                                std::uint32_t iteration) {
  std::vector<CurvePoint> rows;
  for (const CurvePoint& p : points)
    if (p.iteration == iteration) rows.push_back(p);
  return rows;
}

// ---- Spec file format ----
//
// Flat "key = value" lines; '#' starts a comment. Lists are comma separated,
// order ranges use "min..max". Keys: figure, mode, clusters, fanals, order,
// placement, erased, alpha, iterations, gamma, sweep, order_sweep, trials,
// min_errors, max_rounds, seed, threads, fresh_network.

namespace harness_detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

template <typename T>
inline T parse_number(std::string_view v, std::size_t line_no) {
  T out{};
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size())
    throw FormatError("spec line " + std::to_string(line_no) + ": bad number '" +
                      std::string(v) + "'");
  return out;
}

inline double parse_real(std::string_view v, std::size_t line_no) {
  std::string buf(v);
  char* end = nullptr;
  double out = std::strtod(buf.c_str(), &end);
  if (end != buf.c_str() + buf.size() || buf.empty())
    throw FormatError("spec line " + std::to_string(line_no) + ": bad number '" + buf + "'");
  return out;
}

template <typename T, typename F>
inline std::vector<T> parse_list(std::string_view v, F parse_one) {
  std::vector<T> out;
  while (!v.empty()) {
    std::size_t comma = v.find(',');
    std::string_view item = trim(v.substr(0, comma));
    if (!item.empty()) out.push_back(parse_one(item));
    if (comma == std::string_view::npos) break;
    v.remove_prefix(comma + 1);
  }
  return out;
}

inline ExperimentMode parse_mode(std::string_view v, std::size_t line_no) {
  if (v == "density") return ExperimentMode::Density;
  if (v == "blind") return ExperimentMode::Blind;
  if (v == "guided") return ExperimentMode::Guided;
  if (v == "classify") return ExperimentMode::Classify;
  if (v == "distorted_pairwise") return ExperimentMode::DistortedPairwise;
  if (v == "distorted_anagram") return ExperimentMode::DistortedAnagram;
  throw FormatError("spec line " + std::to_string(line_no) + ": unknown mode '" +
                    std::string(v) + "'");
}

}  // namespace harness_detail

inline ExperimentSpec parse_experiment_spec(std::istream& in) {
  using namespace harness_detail;
  ExperimentSpec spec;
  bool saw_mode = false, saw_sweep = false;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line(raw);
    if (std::size_t hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string_view::npos)
      throw FormatError("spec line " + std::to_string(line_no) + ": expected key = value");
    std::string_view key = trim(line.substr(0, eq));
    std::string_view value = trim(line.substr(eq + 1));
    if (value.empty())
      throw FormatError("spec line " + std::to_string(line_no) + ": empty value for '" +
                        std::string(key) + "'");

    if (key == "figure") {
      spec.figure = std::string(value);
    } else if (key == "mode") {
      spec.mode = parse_mode(value, line_no);
      saw_mode = true;
    } else if (key == "clusters") {
      spec.clusters = parse_number<std::uint32_t>(value, line_no);
    } else if (key == "fanals") {
      spec.fanals = parse_number<std::uint32_t>(value, line_no);
    } else if (key == "order") {
      if (std::size_t dots = value.find(".."); dots != std::string_view::npos) {
        spec.order_min = parse_number<std::uint32_t>(trim(value.substr(0, dots)), line_no);
        spec.order_max = parse_number<std::uint32_t>(trim(value.substr(dots + 2)), line_no);
        if (spec.order_min > spec.order_max)
          throw FormatError("spec line " + std::to_string(line_no) +
                            ": order range is inverted");
      } else {
        spec.order_min = spec.order_max = parse_number<std::uint32_t>(value, line_no);
      }
    } else if (key == "placement") {
      if (value == "uniform") {
        spec.placement = Placement::UniformClusters;
      } else if (value == "contiguous") {
        spec.placement = Placement::Contiguous;
      } else {
        throw FormatError("spec line " + std::to_string(line_no) + ": unknown placement '" +
                          std::string(value) + "'");
      }
    } else if (key == "erased") {
      spec.erased = parse_number<std::uint32_t>(value, line_no);
    } else if (key == "alpha") {
      spec.alpha = parse_real(value, line_no);
    } else if (key == "iterations") {
      spec.iterations = parse_list<std::uint32_t>(
          value, [&](std::string_view v) { return parse_number<std::uint32_t>(v, line_no); });
    } else if (key == "gamma") {
      spec.gamma = parse_number<std::uint32_t>(value, line_no);
    } else if (key == "sweep") {
      spec.sweep = parse_list<double>(
          value, [&](std::string_view v) { return parse_real(v, line_no); });
      saw_sweep = true;
    } else if (key == "order_sweep") {
      spec.order_sweep = parse_list<std::uint32_t>(
          value, [&](std::string_view v) { return parse_number<std::uint32_t>(v, line_no); });
    } else if (key == "trials") {
      spec.trials = parse_number<std::uint64_t>(value, line_no);
    } else if (key == "min_errors") {
      spec.min_errors = parse_number<std::uint64_t>(value, line_no);
    } else if (key == "max_rounds") {
      spec.max_rounds = parse_number<std::uint32_t>(value, line_no);
    } else if (key == "seed") {
      spec.seed = parse_number<std::uint64_t>(value, line_no);
    } else if (key == "threads") {
      spec.threads = parse_number<std::uint32_t>(value, line_no);
    } else if (key == "fresh_network") {
      if (value == "true") {
        spec.fresh_network_per_trial = true;
      } else if (value == "false") {
        spec.fresh_network_per_trial = false;
      } else {
        throw FormatError("spec line " + std::to_string(line_no) +
                          ": fresh_network must be true or false");
      }
    } else {
      throw FormatError("spec line " + std::to_string(line_no) + ": unknown key '" +
                        std::string(key) + "'");
    }
  }
  if (!saw_mode) throw FormatError("spec: missing required key 'mode'");
  if (!saw_sweep) throw FormatError("spec: missing required key 'sweep'");
  return spec;
}

inline ExperimentSpec parse_experiment_spec(const std::string& text) {
  std::istringstream in(text);
  return parse_experiment_spec(in);
}

}  // namespace cliquenet
