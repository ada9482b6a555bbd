#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numeric>
#include <utility>
#include <vector>

#include "cliquenet/network.hpp"
#include "cliquenet/random.hpp"
#include "cliquenet/theory.hpp"

using namespace cliquenet;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

// Reference values in this file were computed independently (arbitrary
// precision where it matters, IEEE double elsewhere) and are frozen here so a
// regression in any formula shows up as a numeric diff, not just a changed
// relationship between two functions that drifted together.

TEST_CASE("resource counting and edge probability") {
  CHECK(theory::binary_resource(100, 64) == 20275200.0);
  CHECK(theory::binary_resource(2, 1) == 1.0);
  CHECK(theory::binary_resource(50, 32) == 50.0 * 49.0 / 2.0 * 1024.0);

  // c(c-1) / (chi(chi-1) l^2) as an exact rational
  CHECK(theory::edge_hit_probability(100, 64, 12) == 132.0 / 40550400.0);
  CHECK_THAT(theory::edge_hit_probability(100, 64, 12),
             WithinRel(3.2552083333333335e-06, 1e-15));
  CHECK(theory::edge_hit_probability(100, 64, 2) == 2.0 / 40550400.0);

  // more expressed characters hit more edges
  double prev = 0.0;
  for (std::uint32_t c = 2; c <= 100; ++c) {
    double h = theory::edge_hit_probability(100, 64, c);
    CHECK(h > prev);
    prev = h;
  }

  CHECK_THROWS_AS(theory::edge_hit_probability(1, 64, 2), std::invalid_argument);
  CHECK_THROWS_AS(theory::edge_hit_probability(100, 0, 2), std::invalid_argument);
  CHECK_THROWS_AS(theory::edge_hit_probability(100, 64, 1), std::invalid_argument);
  CHECK_THROWS_AS(theory::edge_hit_probability(100, 64, 101), std::invalid_argument);
}

TEST_CASE("information per message") {
  // C(10,3) = 120 exactly
  CHECK_THAT(theory::log2_binomial(10, 3), WithinRel(std::log2(120.0), 1e-13));
  CHECK_THAT(theory::log2_binomial(10, 3), WithinRel(6.9068905956085169, 1e-12));
  CHECK(theory::log2_binomial(7, 0) == 0.0);
  CHECK(theory::log2_binomial(7, 7) == 0.0);
  CHECK_THROWS_AS(theory::log2_binomial(3, 4), std::invalid_argument);

  CHECK_THAT(theory::message_information_bits(100, 64, 16),
             WithinRel(156.22323472698938, 1e-12));
  // order 16 out of 100 clusters, 6 bits per character
  CHECK_THAT(theory::message_information_bits(100, 64, 16),
             WithinRel(theory::log2_binomial(100, 16) + 16 * 6.0, 1e-15));
  CHECK_THAT(theory::message_information_bits_range(100, 64, 16, 9),
             WithinRel(theory::message_information_bits(100, 64, 16) + std::log2(9.0),
                       1e-15));

  CHECK_THAT(theory::capacity_bits(100, 64, 16, 1000.0),
             WithinRel(1000.0 * 156.22323472698938, 1e-12));
}

TEST_CASE("density after learning uniform messages") {
  CHECK(theory::expected_density(100, 64, 12, 0.0) == 0.0);
  CHECK_THAT(theory::expected_density(100, 64, 12, 50000.0),
             WithinRel(0.15020546443042185, 1e-12));
  CHECK_THAT(theory::expected_density(100, 64, 12, 100000.0),
             WithinRel(0.27784924731608496, 1e-12));
  CHECK_THAT(theory::expected_density(100, 64, 12, 200000.0),
             WithinRel(0.47849829039805497, 1e-12));

  // strictly filling, never reaching 1 while the exponent stays representable
  double prev = -1.0;
  for (double m : {1e3, 1e4, 1e5, 1e6, 1e7}) {
    double d = theory::expected_density(100, 64, 12, m);
    CHECK(d > prev);
    CHECK(d < 1.0);
    prev = d;
  }

  CHECK_THROWS_AS(theory::expected_density(100, 64, 12, -1.0), std::invalid_argument);
}

TEST_CASE("density inverses") {
  const double m = 73000.0;
  double d = theory::expected_density(100, 64, 12, m);
  CHECK_THAT(theory::diversity_from_density(100, 64, 12, d), WithinRel(m, 1e-10));

  // the linearisation is accurate while the network is nearly empty
  CHECK_THAT(theory::density_linear(100, 64, 12, 2000.0),
             WithinRel(theory::expected_density(100, 64, 12, 2000.0), 4e-3));
  CHECK(theory::density_linear(100, 64, 12, 2000.0) >
        theory::expected_density(100, 64, 12, 2000.0));

  CHECK_THAT(theory::diversity_quadratic(100, 64, 12, 0.02),
             WithinRel(0.02 / (132.0 / 40550400.0), 1e-15));

  // message count for a fixed target density scales with (chi l)^2: doubling
  // both dimensions buys 16.16x the messages
  double ratio = theory::diversity_quadratic(100, 64, 8, 0.02) /
                 theory::diversity_quadratic(50, 32, 8, 0.02);
  CHECK_THAT(ratio, WithinRel(16.163265306122447, 1e-12));
  double exact_ratio = theory::diversity_from_density(100, 64, 8, 0.02) /
                       theory::diversity_from_density(50, 32, 8, 0.02);
  CHECK_THAT(exact_ratio, WithinRel(16.163265306122447, 2e-3));

  CHECK_THROWS_AS(theory::diversity_from_density(100, 64, 12, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(theory::diversity_from_density(100, 64, 12, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(theory::diversity_quadratic(100, 64, 12, 1.5), std::invalid_argument);
}

TEST_CASE("density under mixed and ranged orders") {
  std::vector<std::pair<std::uint32_t, double>> single{{12u, 50000.0}};
  CHECK_THAT(theory::expected_density_mixed(100, 64, single),
             WithinRel(theory::expected_density(100, 64, 12, 50000.0), 1e-13));

  // two batches combine through the shared vacancy probability
  std::vector<std::pair<std::uint32_t, double>> two{{8u, 30000.0}, {14u, 20000.0}};
  // pow on the rounded 1 - q differs from the log-space path in the last
  // couple of digits, hence the looser tolerance
  double vac = std::pow(1.0 - theory::edge_hit_probability(100, 64, 8), 30000.0) *
               std::pow(1.0 - theory::edge_hit_probability(100, 64, 14), 20000.0);
  CHECK_THAT(theory::expected_density_mixed(100, 64, two), WithinRel(1.0 - vac, 1e-9));

  CHECK_THAT(theory::expected_density_uniform_range(100, 64, 12, 12, 50000.0),
             WithinRel(theory::expected_density(100, 64, 12, 50000.0), 1e-13));

  // a uniform range is a mixed batch with M/lambda messages per order
  std::vector<std::pair<std::uint32_t, double>> spread;
  for (std::uint32_t c = 12; c <= 16; ++c) spread.emplace_back(c, 50000.0 / 5.0);
  CHECK_THAT(theory::expected_density_uniform_range(100, 64, 12, 16, 50000.0),
             WithinRel(theory::expected_density_mixed(100, 64, spread), 1e-12));

  CHECK_THROWS_AS(theory::expected_density_uniform_range(100, 64, 13, 12, 1.0),
                  std::invalid_argument);
  std::vector<std::pair<std::uint32_t, double>> bad{{12u, -3.0}};
  CHECK_THROWS_AS(theory::expected_density_mixed(100, 64, bad), std::invalid_argument);
}

TEST_CASE("capacity limits") {
  CHECK_THAT(theory::max_diversity(100, 64, 16), WithinRel(129783.51162317357, 1e-12));
  CHECK_THAT(theory::efficiency(100, 64, 16, theory::max_diversity(100, 64, 16)),
             WithinRel(1.0, 1e-13));
  CHECK_THAT(theory::expected_density(100, 64, 16, theory::max_diversity(100, 64, 16)),
             WithinRel(0.53612207420746516, 1e-12));

  CHECK_THAT(theory::max_diversity_uniform_range(100, 64, 12, 20),
             WithinRel(127482.7260699389, 1e-12));
  CHECK_THAT(theory::max_diversity_uniform_range(100, 64, 16, 16),
             WithinRel(theory::max_diversity(100, 64, 16), 1e-13));
  CHECK_THAT(theory::efficiency_uniform_range(
                 100, 64, 12, 20, theory::max_diversity_uniform_range(100, 64, 12, 20)),
             WithinRel(1.0, 1e-13));

  CHECK_THROWS_AS(theory::max_diversity_uniform_range(100, 64, 20, 12),
                  std::invalid_argument);
}

TEST_CASE("one-iteration recovery error") {
  CHECK_THAT(theory::p_error_blind(0.25, 100, 64, 12, 3),
             WithinRel(0.021960670102377674, 1e-12));
  CHECK_THAT(theory::p_error_blind(0.30, 100, 64, 12, 3),
             WithinRel(0.10825572132390379, 1e-12));
  CHECK_THAT(theory::p_error_guided(0.25, 64, 12, 3),
             WithinRel(0.00072071931534010091, 1e-12));

  // success and failure are complementary
  for (double d : {0.05, 0.2, 0.5, 0.8}) {
    CHECK_THAT(theory::p_retrieve_blind(d, 100, 64, 12, 3) +
                   theory::p_error_blind(d, 100, 64, 12, 3),
               WithinAbs(1.0, 1e-14));
  }

  // knowing where the gaps are removes the 97 * 64 outside impostors
  for (double d : {0.1, 0.3, 0.6}) {
    CHECK(theory::p_error_guided(d, 64, 12, 3) < theory::p_error_blind(d, 100, 64, 12, 3));
  }

  // error grows with density and with the number of erasures
  CHECK(theory::p_error_blind(0.2, 100, 64, 12, 3) < theory::p_error_blind(0.3, 100, 64, 12, 3));
  CHECK(theory::p_error_blind(0.3, 100, 64, 12, 2) < theory::p_error_blind(0.3, 100, 64, 12, 3));
  CHECK(theory::p_error_blind(0.3, 100, 64, 12, 3) < theory::p_error_blind(0.3, 100, 64, 12, 4));

  // union bound tracks the exact value when the per-impostor chance is tiny
  CHECK_THAT(theory::p_error_blind_approx(0.1, 100, 64, 12, 3),
             WithinRel(theory::p_error_blind(0.1, 100, 64, 12, 3), 1e-2));
  CHECK(theory::p_error_blind_approx(0.1, 100, 64, 12, 3) >
        theory::p_error_blind(0.1, 100, 64, 12, 3));

  CHECK_THROWS_AS(theory::p_error_blind(0.3, 100, 64, 12, 12), std::invalid_argument);
  CHECK_THROWS_AS(theory::p_error_blind(1.5, 100, 64, 12, 3), std::invalid_argument);
  CHECK_THROWS_AS(theory::p_error_guided(-0.1, 64, 12, 3), std::invalid_argument);
}

TEST_CASE("order tuning") {
  CHECK_THAT(theory::optimal_order(100, 64, 0.25, 1e-2),
             WithinRel(8.9128156368905689, 1e-12));
  CHECK_THAT(theory::optimal_order(100, 64, 0.25, 1e-6),
             WithinRel(15.053042551541358, 1e-12));
  CHECK(std::lround(theory::optimal_order(100, 64, 0.25, 1e-2)) == 9);
  CHECK(std::lround(theory::optimal_order(100, 64, 0.25, 1e-6)) == 15);

  CHECK_THAT(theory::diversity_vs_order(100, 64, 9, 0.25, 1e-2),
             WithinRel(69775.043855818134, 1e-12));
  CHECK_THAT(theory::diversity_vs_order(100, 64, 12, 0.25, 1e-2),
             WithinRel(64397.10555629892, 1e-12));

  // the discrete sweep peaks where the stationary point says it should
  std::uint32_t best = 0;
  double best_m = -1.0;
  for (std::uint32_t c = 5; c <= 20; ++c) {
    double m = theory::diversity_vs_order(100, 64, c, 0.25, 1e-2);
    if (m > best_m) {
      best_m = m;
      best = c;
    }
  }
  CHECK(best == 9);

  CHECK_THROWS_AS(theory::optimal_order(100, 64, 1.0, 1e-2), std::invalid_argument);
  CHECK_THROWS_AS(theory::optimal_order(100, 64, 0.25, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(theory::optimal_order(100, 64, 0.25, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(theory::diversity_vs_order(100, 64, 9, -0.1, 1e-2), std::invalid_argument);
}

TEST_CASE("acceptance of never-learned probes") {
  CHECK_THAT(theory::p_type2(0.68, 9), WithinRel(9.339440452561944e-07, 1e-12));
  CHECK(theory::p_type2(0.68, 9) < 1e-6);
  CHECK_THAT(theory::p_type2(0.80, 9), WithinRel(0.00032451855365842736, 1e-12));
  CHECK(theory::p_type2(0.37, 2) == 0.37);  // order 2 has a single edge

  CHECK_THAT(theory::p_type2_from_messages(100, 64, 9, 200000.0),
             WithinRel(theory::p_type2(theory::expected_density(100, 64, 9, 200000.0), 9),
                       1e-14));

  CHECK_THROWS_AS(theory::p_type2(1.2, 9), std::invalid_argument);
  CHECK_THROWS_AS(theory::p_type2(0.5, 1), std::invalid_argument);
}

TEST_CASE("decoding distorted inputs") {
  CHECK_THAT(theory::p_error_distorted_pairwise(0.42, 12),
             WithinRel(0.001720264373813741, 1e-12));
  CHECK_THAT(theory::p_error_distorted_pairwise(0.55, 12),
             WithinRel(0.032904735206573985, 1e-12));
  CHECK_THAT(theory::p_error_distorted_anagram(0.42, 12),
             WithinRel(0.0094249060200842297, 1e-12));

  // scrambling every character exposes (c-1)c wrong candidates against 2c
  for (double d : {0.2, 0.4, 0.6}) {
    CHECK(theory::p_error_distorted_anagram(d, 12) >
          theory::p_error_distorted_pairwise(d, 12));
  }
  CHECK(theory::p_error_distorted_pairwise(0.3, 12) <
        theory::p_error_distorted_pairwise(0.5, 12));

  CHECK_THROWS_AS(theory::p_error_distorted_pairwise(-0.1, 12), std::invalid_argument);
  CHECK_THROWS_AS(theory::p_error_distorted_anagram(0.5, 1), std::invalid_argument);
}

TEST_CASE("order-averaged recovery error") {
  // a single-order range with an integer erasure count collapses to the plain
  // formulas: alpha 0.25 of order 12 erases exactly 3 characters
  for (double d : {0.15, 0.35, 0.6}) {
    CHECK_THAT(theory::p_error_blind_averaged(100, 64, 12, 12, 0.25, d),
               WithinRel(theory::p_error_blind(d, 100, 64, 12, 3), 1e-13));
    CHECK_THAT(theory::p_error_guided_averaged(100, 64, 12, 12, 0.25, d),
               WithinRel(theory::p_error_guided(d, 64, 12, 3), 1e-13));
  }

  CHECK_THAT(theory::p_error_blind_averaged(100, 64, 12, 20, 0.25, 0.3),
             WithinRel(0.020441262882639342, 1e-12));
  CHECK_THAT(theory::p_error_guided_averaged(100, 64, 12, 20, 0.25, 0.3),
             WithinRel(0.00073328539435273858, 1e-12));

  CHECK_THROWS_AS(theory::p_error_blind_averaged(100, 64, 20, 12, 0.25, 0.3),
                  std::invalid_argument);
  CHECK_THROWS_AS(theory::p_error_blind_averaged(100, 64, 12, 20, 1.0, 0.3),
                  std::invalid_argument);
  CHECK_THROWS_AS(theory::p_error_guided_averaged(100, 64, 12, 20, 0.25, 1.5),
                  std::invalid_argument);
}

TEST_CASE("contiguous placement density") {
  CHECK_THAT(theory::expected_density_contiguous(30, 8, 6, 300.0),
             WithinRel(0.48303122589217568, 1e-12));
  CHECK_THAT(theory::expected_density_contiguous(100, 64, 12, 30000.0),
             WithinRel(0.45420983220087102, 1e-12));
  CHECK_THAT(theory::expected_density_contiguous_global(30, 8, 6, 300.0),
             WithinRel(0.11980683479220128, 1e-12));
  CHECK_THAT(theory::expected_density_contiguous_global(100, 64, 12, 30000.0),
             WithinRel(0.073622980583519931, 1e-12));

  // pairs farther apart than the span never connect, so the whole-network
  // figure sits below both the in-span mean and the uniform-placement value
  double in_span = theory::expected_density_contiguous(30, 8, 6, 300.0);
  double global = theory::expected_density_contiguous_global(30, 8, 6, 300.0);
  double uniform = theory::expected_density(30, 8, 6, 300.0);
  CHECK(global < uniform);
  CHECK(global < in_span);
  CHECK(uniform < in_span);

  CHECK(theory::expected_density_contiguous(30, 8, 6, 0.0) == 0.0);
  CHECK_THROWS_AS(theory::expected_density_contiguous(30, 8, 6, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(theory::expected_density_contiguous_global(30, 8, 31, 10.0),
                  std::invalid_argument);
}

TEST_CASE("contiguous density predictions match simulation") {
  const Topology t(30, 8);
  const std::uint32_t c = 6;
  const double messages = 300.0;
  const int nets = 24;

  // per-gap edge fraction restricted to cluster pairs whose covering window
  // count is not clipped by either end of the cluster range
  std::vector<std::vector<double>> gap_obs(c);
  std::vector<double> global_obs;
  for (int rep = 0; rep < nets; ++rep) {
    CliqueNetwork net(t);
    Rng rng(900 + static_cast<std::uint64_t>(rep));
    for (int m = 0; m < static_cast<int>(messages); ++m)
      net.learn(random_message(t, c, Placement::Contiguous, rng));
    global_obs.push_back(net.density());
    for (std::uint32_t g = 1; g < c; ++g) {
      std::uint64_t present = 0, total = 0;
      for (std::uint32_t i = c - 1; i + g <= t.cluster_count() - c; ++i) {
        for (std::uint32_t a = 0; a < t.fanals_per_cluster(); ++a)
          for (std::uint32_t b = 0; b < t.fanals_per_cluster(); ++b) {
            ++total;
            if (net.has_edge({i, a}, {i + g, b})) ++present;
          }
      }
      gap_obs[g].push_back(static_cast<double>(present) / static_cast<double>(total));
    }
  }

  auto mean_se = [](const std::vector<double>& v) {
    double mean = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
    double var = 0.0;
    for (double x : v) var += (x - mean) * (x - mean);
    var /= v.size() - 1.0;
    return std::pair{mean, std::sqrt(var / v.size())};
  };

  // each interior pair at gap g is hit by c - g of the chi - c + 1 windows
  double starts = t.cluster_count() - c + 1.0;
  double slots = static_cast<double>(t.fanals_per_cluster()) * t.fanals_per_cluster();
  for (std::uint32_t g = 1; g < c; ++g) {
    double hit = (c - g) / (starts * slots);
    double want = -std::expm1(messages * std::log1p(-hit));
    auto [mean, se] = mean_se(gap_obs[g]);
    INFO("gap " << g << " predicted " << want << " observed " << mean << " se " << se);
    CHECK_THAT(mean, WithinAbs(want, 5.0 * se + 1e-9));
  }

  auto [gmean, gse] = mean_se(global_obs);
  INFO("global predicted " << theory::expected_density_contiguous_global(30, 8, c, messages)
                           << " observed " << gmean << " se " << gse);
  CHECK_THAT(gmean, WithinAbs(theory::expected_density_contiguous_global(30, 8, c, messages),
                              5.0 * gse + 1e-9));
}
