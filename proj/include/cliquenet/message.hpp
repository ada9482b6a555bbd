#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cliquenet/topology.hpp"

namespace cliquenet {

// One addressed unit: fanal `fanal` inside cluster `cluster`. Indices are
// 0-based everywhere.
struct Entry {
  std::uint32_t cluster = 0;
  std::uint32_t fanal = 0;

  friend bool operator==(const Entry&, const Entry&) = default;
  friend auto operator<=>(const Entry&, const Entry&) = default;
};

// Raised by the text parsers below and by the network deserializer.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A sparse message: one fanal in each of `order()` distinct clusters, kept
// sorted by cluster index. Two entries are the minimum, since a stored
// message must contribute at least one edge.
class SparseMessage {
 public:
  explicit SparseMessage(std::vector<Entry> entries) : entries_(std::move(entries)) {
    std::sort(entries_.begin(), entries_.end());
    if (entries_.size() < 2)
      throw std::invalid_argument("SparseMessage: order must be at least 2");
    for (std::size_t i = 1; i < entries_.size(); ++i)
      if (entries_[i].cluster == entries_[i - 1].cluster)
        throw std::invalid_argument("SparseMessage: duplicate cluster");
  }

  std::uint32_t order() const { return static_cast<std::uint32_t>(entries_.size()); }
  const std::vector<Entry>& entries() const { return entries_; }
  operator std::span<const Entry>() const { return entries_; }

  // True when the message occupies a contiguous run of clusters.
  bool contiguous() const {
    return entries_.back().cluster - entries_.front().cluster + 1 == entries_.size();
  }

  // All clusters and fanal values within `t`'s bounds?
  bool fits(const Topology& t) const {
    return entries_.back().cluster < t.cluster_count() &&
           std::all_of(entries_.begin(), entries_.end(),
                       [&](const Entry& e) { return e.fanal < t.fanals_per_cluster(); });
  }

  friend bool operator==(const SparseMessage&, const SparseMessage&) = default;

 private:
  std::vector<Entry> entries_;
};

// Message order distribution: either a single constant or an inclusive
// integer range sampled uniformly.
class OrderProfile {
 public:
  static OrderProfile constant(std::uint32_t c) { return OrderProfile(c, c); }
  static OrderProfile uniform_range(std::uint32_t c_min, std::uint32_t c_max) {
    return OrderProfile(c_min, c_max);
  }

  std::uint32_t min_order() const { return c_min_; }
  std::uint32_t max_order() const { return c_max_; }
  bool is_constant() const { return c_min_ == c_max_; }
  // Number of admissible orders.
  std::uint32_t spread() const { return c_max_ - c_min_ + 1; }

  friend bool operator==(const OrderProfile&, const OrderProfile&) = default;

 private:
  OrderProfile(std::uint32_t c_min, std::uint32_t c_max) : c_min_(c_min), c_max_(c_max) {
    if (c_min_ < 2) throw std::invalid_argument("OrderProfile: order must be at least 2");
    if (c_max_ < c_min_) throw std::invalid_argument("OrderProfile: empty order range");
  }

  std::uint32_t c_min_;
  std::uint32_t c_max_;
};

// ---- Text round trip ----
//
// A message is written as comma-separated `cluster:fanal` pairs in 0-based
// decimal, e.g. "3:17,9:0,41:63". Message files hold one message per line;
// blank lines and lines starting with '#' are skipped.

namespace detail {

inline std::uint32_t parse_u32_field(std::string_view text, std::string_view what) {
  std::uint32_t value = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last)
    throw FormatError("bad " + std::string(what) + ": '" + std::string(text) + "'");
  return value;
}

}  // namespace detail

inline std::string format_entries(std::span<const Entry> entries) {
  std::string out;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (i > 0) out += ',';
    out += std::to_string(entries[i].cluster);
    out += ':';
    out += std::to_string(entries[i].fanal);
  }
  return out;
}

inline std::string format_message(const SparseMessage& m) {
  return format_entries(m.entries());
}

inline std::vector<Entry> parse_entry_list(std::string_view text) {
  std::vector<Entry> entries;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    std::string_view item = text.substr(pos, comma == std::string_view::npos
                                                 ? std::string_view::npos
                                                 : comma - pos);
    std::size_t colon = item.find(':');
    if (colon == std::string_view::npos)
      throw FormatError("expected cluster:fanal pair, got '" + std::string(item) + "'");
    Entry e;
    e.cluster = detail::parse_u32_field(item.substr(0, colon), "cluster index");
    e.fanal = detail::parse_u32_field(item.substr(colon + 1), "fanal index");
    entries.push_back(e);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return entries;
}

inline SparseMessage parse_message(std::string_view text) {
  try {
    return SparseMessage(parse_entry_list(text));
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
}

inline std::vector<SparseMessage> read_messages(std::istream& in) {
  std::vector<SparseMessage> messages;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    while (!view.empty() && (view.back() == '\r' || view.back() == ' ')) view.remove_suffix(1);
    while (!view.empty() && view.front() == ' ') view.remove_prefix(1);
    if (view.empty() || view.front() == '#') continue;
    try {
      messages.push_back(parse_message(view));
    } catch (const FormatError& e) {
      throw FormatError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return messages;
}

inline void write_messages(std::ostream& out, std::span<const SparseMessage> messages) {
  for (const SparseMessage& m : messages) out << format_message(m) << '\n';
}

}  // namespace cliquenet
