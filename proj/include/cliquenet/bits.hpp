#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace cliquenet::bits {

inline constexpr std::size_t word_bits = 64;

constexpr std::size_t word_count(std::size_t nbits) {
  return (nbits + word_bits - 1) / word_bits;
}

constexpr bool test(std::span<const std::uint64_t> words, std::size_t i) {
  return (words[i / word_bits] >> (i % word_bits)) & 1u;
}

constexpr void set(std::span<std::uint64_t> words, std::size_t i) {
  words[i / word_bits] |= std::uint64_t{1} << (i % word_bits);
}

constexpr void clear(std::span<std::uint64_t> words, std::size_t i) {
  words[i / word_bits] &= ~(std::uint64_t{1} << (i % word_bits));
}

inline std::uint64_t popcount(std::span<const std::uint64_t> words) {
  std::uint64_t n = 0;
  for (std::uint64_t w : words) n += static_cast<std::uint64_t>(std::popcount(w));
  return n;
}

// Word mask covering bit positions [lo, hi) of a single word, 0 <= lo <= hi <= 64.
constexpr std::uint64_t range_mask(std::size_t lo, std::size_t hi) {
  std::uint64_t high = hi >= word_bits ? ~std::uint64_t{0} : (std::uint64_t{1} << hi) - 1;
  std::uint64_t low = (std::uint64_t{1} << lo) - 1;
  return high & ~low;
}

// Calls fn(index) for every set bit, in ascending order.
template <typename Fn>
void for_each_set(std::span<const std::uint64_t> words, Fn&& fn) {
  for (std::size_t wi = 0; wi < words.size(); ++wi) {
    std::uint64_t w = words[wi];
    while (w != 0) {
      fn(wi * word_bits + static_cast<std::size_t>(std::countr_zero(w)));
      w &= w - 1;
    }
  }
}

}  // namespace cliquenet::bits
