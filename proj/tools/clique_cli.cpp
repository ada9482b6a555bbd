// Command line front end for the clique memory library: build and persist
// networks, run recovery and membership queries on them, evaluate the
// closed-form model, and drive full measurement sweeps.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cliquenet/classify.hpp"
#include "cliquenet/experiment.hpp"
#include "cliquenet/message.hpp"
#include "cliquenet/network.hpp"
#include "cliquenet/plot.hpp"
#include "cliquenet/presets.hpp"
#include "cliquenet/random.hpp"
#include "cliquenet/retrieval.hpp"
#include "cliquenet/serialization.hpp"
#include "cliquenet/theory.hpp"

namespace {

using namespace cliquenet;

std::vector<SparseMessage> messages_from_path(const std::string& path) {
  if (path == "-") return read_messages(std::cin);
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open message file '" + path + "'");
  return read_messages(in);
}

Placement placement_from_name(const std::string& name) {
  if (name == "uniform") return Placement::UniformClusters;
  if (name == "contiguous") return Placement::Contiguous;
  throw CLI::ValidationError("placement", "must be 'uniform' or 'contiguous'");
}

std::pair<std::uint32_t, std::uint32_t> parse_order_range(const std::string& text) {
  ExperimentSpec probe;  // reuse the spec grammar for "c" / "a..b"
  std::istringstream in("mode = blind\nsweep = 1\norder = " + text + "\n");
  probe = parse_experiment_spec(in);
  return {probe.order_min, probe.order_max};
}

// ---- learn ----

struct LearnArgs {
  std::string in_path, out_path, messages_path, dump_path;
  std::uint32_t clusters = 0, fanals = 0;
  std::uint64_t random_count = 0;
  std::string order = "12";
  std::string placement = "uniform";
  std::uint64_t seed = 1;
};

void run_learn(const LearnArgs& a) {
  std::optional<CliqueNetwork> net;
  if (!a.in_path.empty()) {
    net.emplace(load_network_file(a.in_path));
  } else {
    if (a.clusters == 0 || a.fanals == 0)
      throw CLI::ValidationError("learn",
                                 "need --clusters and --fanals unless --in is given");
    net.emplace(Topology(a.clusters, a.fanals));
  }

  std::uint64_t learned = 0, new_edges = 0;
  if (!a.messages_path.empty()) {
    for (const SparseMessage& m : messages_from_path(a.messages_path)) {
      new_edges += net->learn(m);
      ++learned;
    }
  }
  if (a.random_count > 0) {
    auto [c_min, c_max] = parse_order_range(a.order);
    OrderProfile profile = c_min == c_max ? OrderProfile::constant(c_min)
                                          : OrderProfile::uniform_range(c_min, c_max);
    Placement place = placement_from_name(a.placement);
    Rng rng(a.seed);
    std::ofstream dump;
    if (!a.dump_path.empty()) {
      dump.open(a.dump_path);
      if (!dump) throw std::runtime_error("cannot open dump file '" + a.dump_path + "'");
    }
    for (std::uint64_t i = 0; i < a.random_count; ++i) {
      SparseMessage m = random_message(net->topology(), profile, place, rng);
      new_edges += net->learn(m);
      ++learned;
      if (dump.is_open()) dump << format_message(m) << '\n';
    }
  }

  save_network_file(*net, a.out_path);
  std::printf("learned %llu messages, %llu new edges, density %.6f -> %s\n",
              (unsigned long long)learned, (unsigned long long)new_edges, net->density(),
              a.out_path.c_str());
}

// ---- retrieve ----

struct RetrieveArgs {
  std::string network_path, cues_path, expect_path;
  std::vector<std::string> cues;
  std::string known;  // comma separated cluster list; empty = blind
  std::uint32_t iterations = 4;
  std::uint32_t gamma = 1;
};

void run_retrieve(const RetrieveArgs& a) {
  CliqueNetwork net = load_network_file(a.network_path);

  std::vector<std::vector<Entry>> cues;
  for (const std::string& c : a.cues) cues.push_back(parse_entry_list(c));
  if (!a.cues_path.empty())
    for (const SparseMessage& m : messages_from_path(a.cues_path))
      cues.emplace_back(m.entries().begin(), m.entries().end());
  if (cues.empty()) throw CLI::ValidationError("retrieve", "no cues given");

  std::vector<SparseMessage> expected;
  if (!a.expect_path.empty()) {
    expected = messages_from_path(a.expect_path);
    if (expected.size() != cues.size())
      throw FormatError("--expect holds " + std::to_string(expected.size()) +
                        " messages for " + std::to_string(cues.size()) + " cues");
  }

  std::vector<std::uint32_t> known_clusters;
  if (!a.known.empty()) {
    std::istringstream in(a.known);
    std::string item;
    while (std::getline(in, item, ','))
      known_clusters.push_back(
          static_cast<std::uint32_t>(std::stoul(item)));
  }

  std::uint64_t hits = 0;
  for (std::size_t i = 0; i < cues.size(); ++i) {
    RetrievalOutcome out =
        known_clusters.empty()
            ? blind_recover(net, cues[i], a.iterations, a.gamma)
            : guided_recover(net, cues[i], known_clusters, a.iterations, a.gamma);
    std::string flags;
    if (out.converged) flags += " converged";
    if (out.cycle_detected) flags += " cycle";
    if (out.ambiguous) flags += " ambiguous";
    std::printf("%s\t(%u iterations%s)", format_entries(out.final_active).c_str(),
                out.iterations_run, flags.c_str());
    if (!expected.empty()) {
      bool ok = is_success(out, expected[i]);
      hits += ok;
      std::printf("\t%s", ok ? "ok" : "MISS");
    }
    std::printf("\n");
  }
  if (!expected.empty())
    std::printf("recovered %llu / %zu\n", (unsigned long long)hits, cues.size());
}

// ---- classify ----

struct ClassifyArgs {
  std::string network_path, probes_path;
  std::vector<std::string> probes;
  std::uint32_t gamma = 1;
};

void run_classify(const ClassifyArgs& a) {
  CliqueNetwork net = load_network_file(a.network_path);
  std::vector<SparseMessage> probes;
  for (const std::string& p : a.probes) probes.push_back(parse_message(p));
  if (!a.probes_path.empty())
    for (SparseMessage& m : messages_from_path(a.probes_path)) probes.push_back(std::move(m));
  if (probes.empty()) throw CLI::ValidationError("classify", "no probes given");

  Acceptor acceptor(net);
  std::uint64_t accepted = 0;
  for (const SparseMessage& m : probes) {
    bool ok = acceptor.accept(m, a.gamma);
    accepted += ok;
    std::printf("%s\t%s\n", ok ? "accept" : "reject", format_message(m).c_str());
  }
  std::printf("accepted %llu / %zu\n", (unsigned long long)accepted, probes.size());
}

// ---- theory ----

struct TheoryArgs {
  std::uint32_t clusters = 100, fanals = 64;
  std::string order = "12";
  double messages = -1;
  double density = -1;
  std::int64_t erased = -1;
  double alpha = -1;
  double p0 = -1;
};

void run_theory(const TheoryArgs& a) {
  auto [c_min, c_max] = parse_order_range(a.order);
  const std::uint32_t chi = a.clusters, l = a.fanals;
  const bool mixed = c_min != c_max;

  std::printf("clusters = %u\nfanals = %u\n", chi, l);
  std::printf("order = %u..%u\n", c_min, c_max);
  std::printf("resource_bits = %.10g\n", theory::binary_resource(chi, l));
  if (!mixed)
    std::printf("edge_hit_probability = %.10g\n", theory::edge_hit_probability(chi, l, c_min));

  double d = a.density;
  if (a.messages >= 0) {
    d = mixed ? theory::expected_density_uniform_range(chi, l, c_min, c_max, a.messages)
              : theory::expected_density(chi, l, c_min, a.messages);
    std::printf("messages = %.10g\nexpected_density = %.10g\n", a.messages, d);
    if (mixed)
      std::printf("efficiency = %.10g\n",
                  theory::efficiency_uniform_range(chi, l, c_min, c_max, a.messages));
    else
      std::printf("efficiency = %.10g\ncapacity_bits = %.10g\n",
                  theory::efficiency(chi, l, c_min, a.messages),
                  theory::capacity_bits(chi, l, c_min, a.messages));
  } else if (d >= 0) {
    std::printf("density = %.10g\n", d);
    if (!mixed)
      std::printf("equivalent_messages = %.10g\n",
                  theory::diversity_from_density(chi, l, c_min, d));
  }

  if (mixed)
    std::printf("max_diversity = %.10g\n",
                theory::max_diversity_uniform_range(chi, l, c_min, c_max));
  else
    std::printf("max_diversity = %.10g\n", theory::max_diversity(chi, l, c_min));

  if (d >= 0) {
    if (a.erased >= 0) {
      std::uint32_t ce = static_cast<std::uint32_t>(a.erased);
      if (mixed) {
        double blind = 0, guided = 0;
        for (std::uint32_t c = c_min; c <= c_max; ++c) {
          blind += theory::p_error_blind(d, chi, l, c, ce);
          guided += theory::p_error_guided(d, l, c, ce);
        }
        std::printf("p_error_blind = %.10g\np_error_guided = %.10g\n",
                    blind / (c_max - c_min + 1), guided / (c_max - c_min + 1));
      } else {
        std::printf("p_error_blind = %.10g\np_error_guided = %.10g\n",
                    theory::p_error_blind(d, chi, l, c_min, ce),
                    theory::p_error_guided(d, l, c_min, ce));
      }
    }
    if (a.alpha >= 0)
      std::printf("p_error_blind_averaged = %.10g\np_error_guided_averaged = %.10g\n",
                  theory::p_error_blind_averaged(chi, l, c_min, c_max, a.alpha, d),
                  theory::p_error_guided_averaged(chi, l, c_min, c_max, a.alpha, d));
    if (!mixed)
      std::printf("p_type2 = %.10g\np_error_pairwise = %.10g\np_error_anagram = %.10g\n",
                  theory::p_type2(d, c_min), theory::p_error_distorted_pairwise(d, c_min),
                  theory::p_error_distorted_anagram(d, c_min));
  }
  if (a.alpha >= 0 && a.p0 > 0) {
    std::printf("optimal_order = %.10g\n", theory::optimal_order(chi, l, a.alpha, a.p0));
    if (!mixed)
      std::printf("diversity_at_p0 = %.10g\n",
                  theory::diversity_vs_order(chi, l, c_min, a.alpha, a.p0));
  }
}

// ---- experiment ----

struct ExperimentArgs {
  std::string preset_name, spec_path, out_dir = ".";
  std::uint32_t threads = 0;
  std::int64_t seed = -1;
  std::int64_t trials = -1;
  std::int64_t min_errors = -1;
  bool list = false;
  bool no_svg = false;
  bool quiet = false;
};

const char* mode_label(ExperimentMode m) {
  switch (m) {
    case ExperimentMode::Density: return "graph density";
    case ExperimentMode::Classify: return "acceptance rate of unknown probes";
    default: return "error rate";
  }
}

void write_figure_svg(const ExperimentSpec& spec, const std::vector<CurvePoint>& rows,
                      const std::filesystem::path& path) {
  std::vector<PlotSeries> series;
  const bool multi = spec.uses_iterations() && spec.iterations.size() > 1;
  const auto iterations =
      spec.uses_iterations() ? spec.iterations : std::vector<std::uint32_t>{1};
  for (std::uint32_t it : iterations) {
    PlotSeries s;
    s.label = multi ? "measured, " + std::to_string(it) + " iteration" + (it > 1 ? "s" : "")
                    : "measured";
    for (const CurvePoint& p : filter_iteration(rows, it)) {
      s.x.push_back(p.x);
      s.y.push_back(p.sim_rate);
      s.y_low.push_back(p.ci_low);
      s.y_high.push_back(p.ci_high);
    }
    series.push_back(std::move(s));
  }
  PlotSeries model;
  model.label = "predicted";
  model.dashed = true;
  model.markers = false;
  for (const CurvePoint& p : filter_iteration(rows, iterations.front())) {
    model.x.push_back(p.x);
    model.y.push_back(p.theory);
  }
  series.push_back(std::move(model));

  PlotOptions opt;
  opt.title = spec.figure;
  opt.x_label = !spec.order_sweep.empty()
                    ? "message order"
                    : (spec.mode == ExperimentMode::Classify ? "graph density"
                                                             : "learned messages");
  opt.y_label = mode_label(spec.mode);
  opt.log_y = spec.mode != ExperimentMode::Density;
  std::ofstream out(path);
  render_plot_svg(series, opt, out);
}

void run_experiment_cmd(const ExperimentArgs& a) {
  if (a.list) {
    for (const PresetEntry& e : builtin_presets()) {
      ExperimentSpec s = preset(e.name);
      std::printf("%-12s %zu points\n", std::string(e.name).c_str(), s.sweep.size());
    }
    return;
  }
  if (a.preset_name.empty() == a.spec_path.empty())
    throw CLI::ValidationError("experiment", "give exactly one of --preset or --spec");

  ExperimentSpec spec;
  if (!a.preset_name.empty()) {
    spec = preset(a.preset_name);
  } else {
    std::ifstream in(a.spec_path);
    if (!in) throw std::runtime_error("cannot open spec file '" + a.spec_path + "'");
    spec = parse_experiment_spec(in);
  }
  if (a.threads) spec.threads = a.threads;
  if (a.seed >= 0) spec.seed = static_cast<std::uint64_t>(a.seed);
  if (a.trials >= 0) spec.trials = static_cast<std::uint64_t>(a.trials);
  if (a.min_errors >= 0) spec.min_errors = static_cast<std::uint64_t>(a.min_errors);
  spec.validate();

  std::filesystem::create_directories(a.out_dir);
  PointSink sink;
  if (!a.quiet)
    sink = [&](const CurvePoint& p) {
      std::fprintf(stderr, "  x=%-10.10g it=%-3u rate=%-12.6g theory=%-12.6g (%llu/%llu) %.1fs\n",
                   p.x, p.iteration, p.sim_rate, p.theory, (unsigned long long)p.errors,
                   (unsigned long long)p.trials, p.wall_seconds);
    };

  std::vector<CurvePoint> rows = run_experiment(spec, sink);

  std::filesystem::path base = std::filesystem::path(a.out_dir) / spec.figure;
  {
    std::ofstream csv(base.string() + ".csv", std::ios::binary);
    emit_csv(rows, csv);
    std::printf("%s.csv\n", base.string().c_str());
  }
  if (spec.uses_iterations() && spec.iterations.size() > 1)
    for (std::uint32_t it : spec.iterations) {
      std::vector<CurvePoint> sub = filter_iteration(rows, it);
      std::ofstream csv(base.string() + "_it" + std::to_string(it) + ".csv",
                        std::ios::binary);
      emit_csv(sub, csv);
      std::printf("%s_it%u.csv\n", base.string().c_str(), it);
    }
  if (!a.no_svg) {
    write_figure_svg(spec, rows, base.string() + ".svg");
    std::printf("%s.svg\n", base.string().c_str());
  }
}

// ---- inspect ----

void run_inspect(const std::string& path) {
  CliqueNetwork net = load_network_file(path);
  const Topology& t = net.topology();
  std::printf("clusters = %u\nfanals_per_cluster = %u\n", t.cluster_count(),
              t.fanals_per_cluster());
  std::printf("edges = %llu\ndensity = %.10g\n", (unsigned long long)net.edge_count(),
              net.density());
  std::uint64_t min_deg = ~0ull, max_deg = 0, total = 0;
  for (std::uint32_t g = 0; g < t.fanal_count(); ++g) {
    std::uint64_t deg = bits::popcount(net.row(g));
    min_deg = std::min(min_deg, deg);
    max_deg = std::max(max_deg, deg);
    total += deg;
  }
  std::printf("fanal_degree_min = %llu\nfanal_degree_mean = %.2f\nfanal_degree_max = %llu\n",
              (unsigned long long)min_deg,
              static_cast<double>(total) / t.fanal_count(), (unsigned long long)max_deg);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"clustered clique memory: learn, retrieve, classify, model, measure"};
  app.require_subcommand(1);

  LearnArgs learn_args;
  CLI::App* learn = app.add_subcommand("learn", "build or extend a network from messages");
  learn->add_option("--clusters", learn_args.clusters, "clusters of a fresh network");
  learn->add_option("--fanals", learn_args.fanals, "fanals per cluster (power of two)");
  learn->add_option("--in", learn_args.in_path, "existing network to extend");
  learn->add_option("--out", learn_args.out_path, "where to save the network")->required();
  learn->add_option("--messages", learn_args.messages_path,
                    "message file, one cluster:fanal,... line each ('-' = stdin)");
  learn->add_option("--random", learn_args.random_count, "also learn N random messages");
  learn->add_option("--order", learn_args.order, "random message order, 'c' or 'min..max'");
  learn->add_option("--placement", learn_args.placement, "uniform or contiguous");
  learn->add_option("--seed", learn_args.seed, "random batch seed");
  learn->add_option("--dump-messages", learn_args.dump_path,
                    "write the random batch to this file");
  learn->callback([&] { run_learn(learn_args); });

  RetrieveArgs retrieve_args;
  CLI::App* retrieve = app.add_subcommand("retrieve", "recover messages from partial cues");
  retrieve->add_option("--network", retrieve_args.network_path, "network file")->required();
  retrieve->add_option("--cue", retrieve_args.cues, "cue as cluster:fanal,... (repeatable)");
  retrieve->add_option("--cues", retrieve_args.cues_path, "file of cues ('-' = stdin)");
  retrieve->add_option("--known", retrieve_args.known,
                       "comma separated clusters of the full message (guided mode)");
  retrieve->add_option("--iterations", retrieve_args.iterations, "iteration budget");
  retrieve->add_option("--gamma", retrieve_args.gamma, "memory strength of active fanals");
  retrieve->add_option("--expect", retrieve_args.expect_path,
                       "truth messages to score against, aligned with the cues");
  retrieve->callback([&] { run_retrieve(retrieve_args); });

  ClassifyArgs classify_args;
  CLI::App* classify =
      app.add_subcommand("classify", "test whether probes look like learned messages");
  classify->add_option("--network", classify_args.network_path, "network file")->required();
  classify->add_option("--probe", classify_args.probes, "probe message (repeatable)");
  classify->add_option("--probes", classify_args.probes_path, "file of probes ('-' = stdin)");
  classify->add_option("--gamma", classify_args.gamma, "memory strength of active fanals");
  classify->callback([&] { run_classify(classify_args); });

  TheoryArgs theory_args;
  CLI::App* theory = app.add_subcommand("theory", "evaluate the closed-form model");
  theory->add_option("--clusters", theory_args.clusters, "clusters");
  theory->add_option("--fanals", theory_args.fanals, "fanals per cluster");
  theory->add_option("--order", theory_args.order, "message order, 'c' or 'min..max'");
  theory->add_option("--messages", theory_args.messages, "learned message count");
  theory->add_option("--density", theory_args.density, "graph density (alternative)");
  theory->add_option("--erased", theory_args.erased, "erased characters per message");
  theory->add_option("--alpha", theory_args.alpha, "erased fraction of each message");
  theory->add_option("--p0", theory_args.p0, "target error rate for order planning");
  theory->callback([&] { run_theory(theory_args); });

  ExperimentArgs exp_args;
  CLI::App* experiment = app.add_subcommand("experiment", "run a measurement sweep");
  experiment->add_option("--preset", exp_args.preset_name, "built-in sweep name");
  experiment->add_option("--spec", exp_args.spec_path, "sweep description file");
  experiment->add_option("--out", exp_args.out_dir, "output directory");
  experiment->add_option("--threads", exp_args.threads, "worker threads (0 = all cores)");
  experiment->add_option("--seed", exp_args.seed, "override the sweep seed");
  experiment->add_option("--trials", exp_args.trials, "override trials per round");
  experiment->add_option("--min-errors", exp_args.min_errors,
                         "override the error target per point");
  experiment->add_flag("--list", exp_args.list, "list built-in sweeps");
  experiment->add_flag("--no-svg", exp_args.no_svg, "skip the chart");
  experiment->add_flag("--quiet", exp_args.quiet, "no per-point progress");
  experiment->callback([&] { run_experiment_cmd(exp_args); });

  CLI::App* inspect = app.add_subcommand("inspect", "summarise a saved network");
  static std::string inspect_path;
  inspect->add_option("--network", inspect_path, "network file")->required();
  inspect->callback([&] { run_inspect(inspect_path); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const SpecError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const FormatError& e) {  // covers SerializationError
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
