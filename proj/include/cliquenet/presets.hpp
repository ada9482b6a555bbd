#pragma once

#include <span>
#include <stdexcept>
#include <string_view>

#include "cliquenet/experiment.hpp"

// Canned sweeps covering the standard measurement set: density growth,
// erased-character recovery (blind and guided), efficiency across orders,
// false-acceptance rates, swap decoding and mixed-order batches. The same
// text ships as files under presets/, byte for byte.

namespace cliquenet {

struct PresetEntry {
  std::string_view name;
  std::string_view text;
};

inline std::span<const PresetEntry> builtin_presets() {
  static const PresetEntry table[] = {
      {"fig2_c8",
       "# Density of the learned graph as messages accumulate (order 8)\n"
       "figure = fig2_c8\n"
       "mode = density\n"
       "clusters = 100\n"
       "fanals = 64\n"
       "order = 8\n"
       "sweep = 50000, 100000, 150000, 200000, 250000, 300000, 350000, 400000\n"
       "seed = 2\n"},
      {"fig2_c12",
       "# Density of the learned graph as messages accumulate (order 12)\n"
       "figure = fig2_c12\n"
       "mode = density\n"
       "clusters = 100\n"
       "fanals = 64\n"
       "order = 12\n"
       "sweep = 50000, 100000, 150000, 200000, 250000, 300000, 350000, 400000\n"
       "seed = 3\n"},
      {"fig2_c16",
       "# Density of the learned graph as messages accumulate (order 16)\n"
       "figure = fig2_c16\n"
       "mode = density\n"
       "clusters = 100\n"
       "fanals = 64\n"
       "order = 16\n"
       "sweep = 50000, 100000, 150000, 200000, 250000, 300000, 350000, 400000\n"
       "seed = 4\n"},
      {"fig2_c20",
       "# Density of the learned graph as messages accumulate (order 20)\n"
       "figure = fig2_c20\n"
       "mode = density\n"
       "clusters = 100\n"
       "fanals = 64\n"
       "order = 20\n"
       "sweep = 50000, 100000, 150000, 200000, 250000, 300000, 350000, 400000\n"
       "seed = 5\n"},
      {"fig3_blind",
       "# Recovery error rate with 3 of 12 characters erased, clusters unknown\n"
       "figure = fig3_blind\n"
       "mode = blind\n"
       "clusters = 100\n"
       "fanals = 64\n"
       "order = 12\n"
       "erased = 3\n"
       "iterations = 1\n"
       "sweep = 45000, 60000, 75000, 90000, 105000, 120000, 135000\n"
       "trials = 20000\n"
       "min_errors = 30\n"
       "max_rounds = 10\n"
       "seed = 6\n"},
      {"fig3_guided",
       "# Recovery error rate with 3 of 12 characters erased, clusters known\n"
       "figure = fig3_guided\n"
       "mode = guided\n"
       "clusters = 100\n"
       "fanals = 64\n"
       "order = 12\n"
       "erased = 3\n"
       "iterations = 1, 4\n"
       "sweep = 45000, 60000, 75000, 90000, 105000, 120000, 135000\n"
       "trials = 20000\n"
       "min_errors = 30\n"
       "max_rounds = 10\n"
       "seed = 7\n"},
      {"fig4",
       "# Error rate across orders, each point loaded to a predicted 1e-2 rate\n"
       "# with a quarter of every message erased\n"
       "figure = fig4\n"
       "mode = blind\n"
       "clusters = 100\n"
       "fanals = 64\n"
       "alpha = 0.25\n"
       "iterations = 1\n"
       "order_sweep = 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18, 19, 20\n"
       "sweep = 46356, 58317, 65498, 68942, 69775, 68897, 66957, 64397, 61513, "
       "58497, 55472, 52514, 49668, 46960, 44402, 41997\n"
       "trials = 20000\n"
       "min_errors = 30\n"
       "max_rounds = 10\n"
       "seed = 8\n"},
      {"fig5_c6",
       "# False acceptance of never-learned probes, order 6\n"
       "figure = fig5_c6\n"
       "mode = classify\n"
       "clusters = 100\n"
       "fanals = 64\n"
       "order = 6\n"
       "gamma = 1\n"
       "sweep = 883907, 992095, 1109700, 1238530, 1380950, 1540150\n"
       "trials = 200000\n"
       "min_errors = 30\n"
       "max_rounds = 10\n"
       "seed = 9\n"},
      {"fig5_c9",
       "# False acceptance of never-learned probes, order 9\n"
       "figure = fig5_c9\n"
       "mode = classify\n"
       "clusters = 100\n"
       "fanals = 64\n"
       "order = 9\n"
       "gamma = 1\n"
       "sweep = 678077, 716934, 758667, 803752, 852751, 906429\n"
       "trials = 200000\n"
       "min_errors = 30\n"
       "max_rounds = 10\n"
       "seed = 10\n"},
      {"fig6",
       "# Decoding messages whose neighbouring characters were swapped in pairs,\n"
       "# contiguous placement, order 12\n"
       "figure = fig6\n"
       "mode = distorted_pairwise\n"
       "clusters = 100\n"
       "fanals = 64\n"
       "order = 12\n"
       "placement = contiguous\n"
       "iterations = 1, 6\n"
       "sweep = 15000, 20000, 25000, 30000, 35000, 40000, 50000, 60000\n"
       "trials = 20000\n"
       "min_errors = 30\n"
       "max_rounds = 10\n"
       "seed = 11\n"},
      {"fig7_low",
       "# Blind recovery with message orders mixed uniformly over 6..18\n"
       "figure = fig7_low\n"
       "mode = blind\n"
       "clusters = 100\n"
       "fanals = 64\n"
       "order = 6..18\n"
       "alpha = 0.25\n"
       "iterations = 1\n"
       "sweep = 10000, 15000, 20000, 30000, 40000, 50000, 60000\n"
       "trials = 20000\n"
       "min_errors = 30\n"
       "max_rounds = 10\n"
       "seed = 12\n"},
      {"fig7_high",
       "# Blind recovery with message orders mixed uniformly over 12..24\n"
       "figure = fig7_high\n"
       "mode = blind\n"
       "clusters = 100\n"
       "fanals = 64\n"
       "order = 12..24\n"
       "alpha = 0.25\n"
       "iterations = 1\n"
       "sweep = 60000, 80000, 100000, 120000, 140000, 160000\n"
       "trials = 20000\n"
       "min_errors = 30\n"
       "max_rounds = 10\n"
       "seed = 13\n"},
  };
  return table;
}

inline ExperimentSpec preset(std::string_view name) {
  for (const PresetEntry& e : builtin_presets())
    if (e.name == name) return parse_experiment_spec(std::string(e.text));
  throw std::invalid_argument("unknown preset '" + std::string(name) + "'");
}

}  // namespace cliquenet
