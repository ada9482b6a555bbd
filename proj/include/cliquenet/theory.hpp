#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>

namespace cliquenet::theory {

// Closed-form performance model of the clique memory. Everything is a plain
// function of the network shape (chi clusters of l fanals), the message order
// c, and either the message count M or the connection density d. Products of
// the form (1 - x)^N run in log space so they stay exact for the very small x
// and very large N these networks produce.

namespace detail {

inline void check_shape(std::uint32_t chi, std::uint32_t l) {
  if (chi < 2) throw std::invalid_argument("theory: need at least 2 clusters");
  if (l < 1) throw std::invalid_argument("theory: need at least 1 fanal per cluster");
}

inline void check_order(std::uint32_t chi, std::uint32_t c) {
  if (c < 2 || c > chi) throw std::invalid_argument("theory: order out of range");
}

inline void check_density(double d) {
  if (!(d >= 0.0) || !(d <= 1.0)) throw std::invalid_argument("theory: density outside [0,1]");
}

// 1 - (1 - x)^n, computed in log space.
inline double one_minus_pow(double x, double n) {
  if (x >= 1.0) return 1.0;
  return -std::expm1(n * std::log1p(-x));
}

}  // namespace detail

// log2 of the binomial coefficient C(n, k).
inline double log2_binomial(std::uint32_t n, std::uint32_t k) {
  if (k > n) throw std::invalid_argument("log2_binomial: k > n");
  return (std::lgamma(static_cast<double>(n) + 1) - std::lgamma(static_cast<double>(k) + 1) -
          std::lgamma(static_cast<double>(n - k) + 1)) /
         std::log(2.0);
}

// Number of binary weights the network offers (inter-cluster fanal pairs).
inline double binary_resource(std::uint32_t chi, std::uint32_t l) {
  detail::check_shape(chi, l);
  return 0.5 * static_cast<double>(chi) * (chi - 1.0) * static_cast<double>(l) * l;
}

// Probability that one uniform message of order c creates one given
// inter-cluster edge: c(c-1) / (chi(chi-1) l^2).
inline double edge_hit_probability(std::uint32_t chi, std::uint32_t l, std::uint32_t c) {
  detail::check_shape(chi, l);
  detail::check_order(chi, c);
  return static_cast<double>(c) * (c - 1.0) /
         (static_cast<double>(chi) * (chi - 1.0) * static_cast<double>(l) * l);
}

// Density after learning M uniform messages of order c.
inline double expected_density(std::uint32_t chi, std::uint32_t l, std::uint32_t c,
                               double messages) {
  if (messages < 0) throw std::invalid_argument("expected_density: negative message count");
  return detail::one_minus_pow(edge_hit_probability(chi, l, c), messages);
}

// Density after learning a mix of orders: `counts` holds (order, messages).
inline double expected_density_mixed(
    std::uint32_t chi, std::uint32_t l,
    std::span<const std::pair<std::uint32_t, double>> counts) {
  double log_vacancy = 0.0;
  for (const auto& [c, m] : counts) {
    if (m < 0) throw std::invalid_argument("expected_density_mixed: negative message count");
    log_vacancy += m * std::log1p(-edge_hit_probability(chi, l, c));
  }
  return -std::expm1(log_vacancy);
}

// Density after M messages whose orders are uniform over [c_min, c_max].
inline double expected_density_uniform_range(std::uint32_t chi, std::uint32_t l,
                                             std::uint32_t c_min, std::uint32_t c_max,
                                             double messages) {
  if (c_max < c_min) throw std::invalid_argument("expected_density_uniform_range: empty range");
  double lambda = c_max - c_min + 1.0;
  double log_vacancy = 0.0;
  for (std::uint32_t c = c_min; c <= c_max; ++c)
    log_vacancy += (messages / lambda) * std::log1p(-edge_hit_probability(chi, l, c));
  return -std::expm1(log_vacancy);
}

// Contiguous placement is not uniform: a slot pair at cluster gap g is hit by
// one message with probability (c - g) / ((chi - c + 1) l^2), so close pairs
// saturate first and pairs beyond gap c - 1 never connect. This returns the
// edge probability as seen by a decoder working inside one message span: the
// mean of the per-gap densities weighted by how often each gap occurs among
// the span's C(c, 2) pairs. Interior approximation (spans clipped at the ends
// of the cluster range are ignored).
inline double expected_density_contiguous(std::uint32_t chi, std::uint32_t l, std::uint32_t c,
                                          double messages) {
  detail::check_shape(chi, l);
  detail::check_order(chi, c);
  if (messages < 0)
    throw std::invalid_argument("expected_density_contiguous: negative message count");
  double starts = static_cast<double>(chi) - c + 1.0;
  double pairs = 0.5 * c * (c - 1.0);
  double mean = 0.0;
  for (std::uint32_t g = 1; g < c; ++g) {
    double hit = (static_cast<double>(c) - g) / (starts * l * static_cast<double>(l));
    mean += ((static_cast<double>(c) - g) / pairs) * detail::one_minus_pow(hit, messages);
  }
  return mean;
}

// Expected whole-network density (stored edges over the full binary resource)
// under contiguous placement, with exact handling of the clipped spans near
// the ends of the cluster range. Pairs at gap >= c never connect, which is
// why this sits well below the uniform-placement value at equal M.
inline double expected_density_contiguous_global(std::uint32_t chi, std::uint32_t l,
                                                 std::uint32_t c, double messages) {
  detail::check_shape(chi, l);
  detail::check_order(chi, c);
  if (messages < 0)
    throw std::invalid_argument("expected_density_contiguous_global: negative message count");
  double starts = static_cast<double>(chi) - c + 1.0;
  double slots = static_cast<double>(l) * l;
  double sum = 0.0;
  for (std::uint32_t i = 0; i + 1 < chi; ++i)
    for (std::uint32_t j = i + 1; j < chi && j < i + c; ++j) {
      // starts whose c-cluster window covers both i and j
      std::int64_t lo = std::max<std::int64_t>(0, static_cast<std::int64_t>(j) - (c - 1));
      std::int64_t hi = std::min<std::int64_t>(i, chi - c);
      if (hi < lo) continue;
      double hit = static_cast<double>(hi - lo + 1) / (starts * slots);
      sum += detail::one_minus_pow(hit, messages);
    }
  return sum / (0.5 * static_cast<double>(chi) * (chi - 1.0));
}

// Inverse of expected_density: how many messages reach density d.
inline double diversity_from_density(std::uint32_t chi, std::uint32_t l, std::uint32_t c,
                                     double d) {
  detail::check_density(d);
  if (d >= 1.0) throw std::invalid_argument("diversity_from_density: density must be < 1");
  return std::log1p(-d) / std::log1p(-edge_hit_probability(chi, l, c));
}

// Low-density linearisation of expected_density.
inline double density_linear(std::uint32_t chi, std::uint32_t l, std::uint32_t c,
                             double messages) {
  return edge_hit_probability(chi, l, c) * messages;
}

// Low-density inverse: M grows as the square of the network size n = chi*l.
inline double diversity_quadratic(std::uint32_t chi, std::uint32_t l, std::uint32_t c,
                                  double d) {
  detail::check_density(d);
  return d / edge_hit_probability(chi, l, c);
}

// Information carried by one message: cluster-set choice plus c characters.
inline double message_information_bits(std::uint32_t chi, std::uint32_t l, std::uint32_t c) {
  detail::check_shape(chi, l);
  detail::check_order(chi, c);
  double kappa = std::log2(static_cast<double>(l));
  return log2_binomial(chi, c) + c * kappa;
}

// Total bits held after M messages, and the share of the binary resource used.
inline double capacity_bits(std::uint32_t chi, std::uint32_t l, std::uint32_t c,
                            double messages) {
  return messages * message_information_bits(chi, l, c);
}

inline double efficiency(std::uint32_t chi, std::uint32_t l, std::uint32_t c,
                         double messages) {
  return capacity_bits(chi, l, c, messages) / binary_resource(chi, l);
}

// Message count at efficiency 1: the diversity the resource could pay for.
inline double max_diversity(std::uint32_t chi, std::uint32_t l, std::uint32_t c) {
  return binary_resource(chi, l) / message_information_bits(chi, l, c);
}

// ---- Erased-message recovery, one iteration ----

namespace detail {

inline void check_erasures(std::uint32_t c, std::uint32_t c_e) {
  if (c_e >= c) throw std::invalid_argument("theory: erasures must leave at least one character");
}

}  // namespace detail

// Probability that a single iteration returns exactly the stored message when
// c_e of its c characters are erased and nothing is known about the missing
// clusters: every fanal of the erased clusters (other than the true ones) and
// of the chi - c outside clusters is a candidate impostor that survives iff
// it is connected to all c - c_e known fanals.
inline double p_retrieve_blind(double d, std::uint32_t chi, std::uint32_t l, std::uint32_t c,
                               std::uint32_t c_e) {
  detail::check_shape(chi, l);
  detail::check_order(chi, c);
  detail::check_erasures(c, c_e);
  detail::check_density(d);
  double impostors = static_cast<double>(c_e) * (l - 1.0) +
                     (static_cast<double>(chi) - c) * static_cast<double>(l);
  return std::exp(impostors * std::log1p(-std::pow(d, static_cast<double>(c - c_e))));
}

inline double p_error_blind(double d, std::uint32_t chi, std::uint32_t l, std::uint32_t c,
                            std::uint32_t c_e) {
  detail::check_shape(chi, l);
  detail::check_order(chi, c);
  detail::check_erasures(c, c_e);
  detail::check_density(d);
  double impostors = static_cast<double>(c_e) * (l - 1.0) +
                     (static_cast<double>(chi) - c) * static_cast<double>(l);
  return detail::one_minus_pow(std::pow(d, static_cast<double>(c - c_e)), impostors);
}

// First-order version of p_error_blind (small d^(c - c_e)).
inline double p_error_blind_approx(double d, std::uint32_t chi, std::uint32_t l,
                                   std::uint32_t c, std::uint32_t c_e) {
  detail::check_shape(chi, l);
  detail::check_order(chi, c);
  detail::check_erasures(c, c_e);
  double impostors = static_cast<double>(c_e) * (l - 1.0) +
                     (static_cast<double>(chi) - c) * static_cast<double>(l);
  return impostors * std::pow(d, static_cast<double>(c - c_e));
}

// Same event when the erased clusters are known, so impostors live only there.
inline double p_error_guided(double d, std::uint32_t l, std::uint32_t c, std::uint32_t c_e) {
  detail::check_erasures(c, c_e);
  detail::check_density(d);
  double impostors = (l - 1.0) * static_cast<double>(c_e);
  return detail::one_minus_pow(std::pow(d, static_cast<double>(c - c_e)), impostors);
}

// Diversity that keeps the one-iteration blind error near p0 when a fraction
// alpha of each message is erased, as a function of the order c.
inline double diversity_vs_order(std::uint32_t chi, std::uint32_t l, double c, double alpha,
                                 double p0) {
  detail::check_shape(chi, l);
  if (!(alpha >= 0.0) || !(alpha < 1.0)) throw std::invalid_argument("theory: bad alpha");
  if (!(p0 > 0.0) || !(p0 < 1.0)) throw std::invalid_argument("theory: bad target error");
  double n = static_cast<double>(chi) * l;
  return (n / c) * (n / c) * std::pow(p0 / n, 1.0 / ((1.0 - alpha) * c));
}

// Order maximising diversity_vs_order (real-valued stationary point).
inline double optimal_order(std::uint32_t chi, std::uint32_t l, double alpha, double p0) {
  detail::check_shape(chi, l);
  if (!(alpha >= 0.0) || !(alpha < 1.0)) throw std::invalid_argument("theory: bad alpha");
  if (!(p0 > 0.0) || !(p0 < 1.0)) throw std::invalid_argument("theory: bad target error");
  double n = static_cast<double>(chi) * l;
  return std::log(n / p0) / (2.0 * (1.0 - alpha));
}

// ---- Recognition of never-learned probes ----

// A full probe either is a stored clique (always accepted, no false negative)
// or gets accepted only when all c(c-1)/2 of its edges exist by accident.
inline double p_type2(double d, std::uint32_t c) {
  detail::check_density(d);
  if (c < 2) throw std::invalid_argument("theory: order out of range");
  return std::pow(d, 0.5 * static_cast<double>(c) * (c - 1.0));
}

inline double p_type2_from_messages(std::uint32_t chi, std::uint32_t l, std::uint32_t c,
                                    double messages) {
  return p_type2(expected_density(chi, l, c, messages), c);
}

// ---- Distorted-message decoding ----

// A pairwise-swapped message fails when one of the 2c wrong initial fanals is
// connected to the other c - 1 true ones; an anagram exposes (c-1)c wrong
// initial fanals instead.
inline double p_error_distorted_pairwise(double d, std::uint32_t c) {
  detail::check_density(d);
  if (c < 2) throw std::invalid_argument("theory: order out of range");
  return detail::one_minus_pow(std::pow(d, static_cast<double>(c - 1)), 2.0 * c);
}

inline double p_error_distorted_anagram(double d, std::uint32_t c) {
  detail::check_density(d);
  if (c < 2) throw std::invalid_argument("theory: order out of range");
  return detail::one_minus_pow(std::pow(d, static_cast<double>(c - 1)),
                               (c - 1.0) * static_cast<double>(c));
}

// ---- Variable message order ----

// With lambda = c_max - c_min + 1 admissible orders, a message also conveys
// which order it has.
inline double message_information_bits_range(std::uint32_t chi, std::uint32_t l,
                                             std::uint32_t c, std::uint32_t lambda) {
  return message_information_bits(chi, l, c) + std::log2(static_cast<double>(lambda));
}

inline double efficiency_uniform_range(std::uint32_t chi, std::uint32_t l,
                                       std::uint32_t c_min, std::uint32_t c_max,
                                       double messages) {
  if (c_max < c_min) throw std::invalid_argument("theory: empty order range");
  std::uint32_t lambda = c_max - c_min + 1;
  double sum = 0.0;
  for (std::uint32_t c = c_min; c <= c_max; ++c)
    sum += message_information_bits_range(chi, l, c, lambda);
  return messages * (sum / lambda) / binary_resource(chi, l);
}

inline double max_diversity_uniform_range(std::uint32_t chi, std::uint32_t l,
                                          std::uint32_t c_min, std::uint32_t c_max) {
  if (c_max < c_min) throw std::invalid_argument("theory: empty order range");
  std::uint32_t lambda = c_max - c_min + 1;
  double sum = 0.0;
  for (std::uint32_t c = c_min; c <= c_max; ++c)
    sum += message_information_bits_range(chi, l, c, lambda);
  return binary_resource(chi, l) * lambda / sum;
}

// Mean one-iteration blind error at density d when orders are uniform over
// [c_min, c_max] and a fraction alpha of each retrieved message is erased.
// The per-order term uses the real erasure count alpha*c.
inline double p_error_blind_averaged(std::uint32_t chi, std::uint32_t l, std::uint32_t c_min,
                                     std::uint32_t c_max, double alpha, double d) {
  detail::check_shape(chi, l);
  detail::check_density(d);
  if (c_max < c_min || c_min < 2 || c_max > chi)
    throw std::invalid_argument("theory: bad order range");
  if (!(alpha >= 0.0) || !(alpha < 1.0)) throw std::invalid_argument("theory: bad alpha");
  double lambda = c_max - c_min + 1.0;
  double sum = 0.0;
  for (std::uint32_t c = c_min; c <= c_max; ++c) {
    double known = (1.0 - alpha) * c;
    double impostors = alpha * c * (l - 1.0) + (static_cast<double>(chi) - c) * l;
    sum += detail::one_minus_pow(std::pow(d, known), impostors);
  }
  return sum / lambda;
}

// Guided counterpart: impostors live only in the erased clusters.
inline double p_error_guided_averaged(std::uint32_t chi, std::uint32_t l, std::uint32_t c_min,
                                      std::uint32_t c_max, double alpha, double d) {
  detail::check_shape(chi, l);
  detail::check_density(d);
  if (c_max < c_min || c_min < 2 || c_max > chi)
    throw std::invalid_argument("theory: bad order range");
  if (!(alpha >= 0.0) || !(alpha < 1.0)) throw std::invalid_argument("theory: bad alpha");
  double lambda = c_max - c_min + 1.0;
  double sum = 0.0;
  for (std::uint32_t c = c_min; c <= c_max; ++c)
    sum += detail::one_minus_pow(std::pow(d, (1.0 - alpha) * c), alpha * c * (l - 1.0));
  return sum / lambda;
}

}  // namespace cliquenet::theory
