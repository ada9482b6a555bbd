#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "cliquenet/bits.hpp"
#include "cliquenet/message.hpp"
#include "cliquenet/network.hpp"

namespace cliquenet {

// Network file layout (all integers little-endian):
//   "CLQN"  u16 version=1  u32 cluster_count  u32 fanals_per_cluster  u32 reserved=0
//   payload: strict upper triangle of the adjacency matrix in row-major
//     global-fanal order; the bit for pair (g, g'), g < g', sits at linear
//     position g*n - g*(g+1)/2 + (g'-g-1). Bits are packed LSB-first and the
//     last byte is zero-padded.
//   u64 checksum = number of set payload bits (the edge count).
class SerializationError : public FormatError {
 public:
  enum class Kind {
    BadMagic,
    BadVersion,
    BadTopology,
    Truncated,
    ChecksumMismatch,
    IntraClusterEdge,
  };

  SerializationError(Kind kind, const std::string& what)
      : FormatError(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

class NetworkCodec {
 public:
  static constexpr std::array<char, 4> magic = {'C', 'L', 'Q', 'N'};
  static constexpr std::uint16_t version = 1;

  static void save(const CliqueNetwork& net, std::ostream& out) {
    const Topology& t = net.topology();
    out.write(magic.data(), magic.size());
    write_le(out, version);
    write_le(out, t.cluster_count());
    write_le(out, t.fanals_per_cluster());
    write_le(out, std::uint32_t{0});

    const std::uint32_t n = t.fanal_count();
    std::uint64_t ones = 0;
    std::uint8_t byte = 0;
    int filled = 0;
    for (std::uint32_t g = 0; g < n; ++g) {
      for (std::uint32_t h = g + 1; h < n; ++h) {
        if (net.has_edge(g, h)) {
          byte |= static_cast<std::uint8_t>(1u << filled);
          ++ones;
        }
        if (++filled == 8) {
          out.put(static_cast<char>(byte));
          byte = 0;
          filled = 0;
        }
      }
    }
    if (filled > 0) out.put(static_cast<char>(byte));
    write_le(out, ones);
  }

  static CliqueNetwork load(std::istream& in) {
    std::array<char, 4> got{};
    in.read(got.data(), got.size());
    if (!in || got != magic)
      throw SerializationError(SerializationError::Kind::BadMagic,
                               "not a network file (bad magic)");
    std::uint16_t ver = read_le16(in);
    if (!in || ver != version)
      throw SerializationError(SerializationError::Kind::BadVersion,
                               "unsupported network file version " + std::to_string(ver));
    std::uint32_t chi = read_le32(in);
    std::uint32_t l = read_le32(in);
    std::uint32_t reserved = read_le32(in);
    if (!in)
      throw SerializationError(SerializationError::Kind::Truncated,
                               "network file truncated in header");
    Topology t = [&] {
      try {
        return Topology(chi, l);
      } catch (const std::invalid_argument& e) {
        throw SerializationError(SerializationError::Kind::BadTopology, e.what());
      }
    }();
    if (reserved != 0)
      throw SerializationError(SerializationError::Kind::BadTopology,
                               "reserved header field must be zero");

    CliqueNetwork net(t);
    const std::uint32_t n = t.fanal_count();
    std::uint64_t ones = 0;
    std::uint8_t byte = 0;
    int left = 0;
    for (std::uint32_t g = 0; g < n; ++g) {
      for (std::uint32_t h = g + 1; h < n; ++h) {
        if (left == 0) {
          int c = in.get();
          if (c == std::istream::traits_type::eof())
            throw SerializationError(SerializationError::Kind::Truncated,
                                     "network file truncated in payload");
          byte = static_cast<std::uint8_t>(c);
          left = 8;
        }
        bool bit = byte & 1u;
        byte >>= 1;
        --left;
        if (bit) {
          if (t.cluster_of(g) == t.cluster_of(h))
            throw SerializationError(SerializationError::Kind::IntraClusterEdge,
                                     "payload sets an intra-cluster weight");
          bits::set(net.mutable_row(g), h);
          bits::set(net.mutable_row(h), g);
          ++ones;
        }
      }
    }
    std::uint64_t checksum = read_le64(in);
    if (!in)
      throw SerializationError(SerializationError::Kind::Truncated,
                               "network file truncated before checksum");
    if (checksum != ones)
      throw SerializationError(
          SerializationError::Kind::ChecksumMismatch,
          "checksum mismatch: header says " + std::to_string(checksum) +
              " edges, payload holds " + std::to_string(ones));
    net.edge_count_ = ones;
    return net;
  }

 private:
  template <typename T>
  static void write_le(std::ostream& out, T value) {
    for (std::size_t i = 0; i < sizeof(T); ++i)
      out.put(static_cast<char>((value >> (8 * i)) & 0xFF));
  }

  static std::uint16_t read_le16(std::istream& in) { return read_le<std::uint16_t>(in); }
  static std::uint32_t read_le32(std::istream& in) { return read_le<std::uint32_t>(in); }
  static std::uint64_t read_le64(std::istream& in) { return read_le<std::uint64_t>(in); }

  template <typename T>
  static T read_le(std::istream& in) {
    T value = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      int c = in.get();
      if (c == std::istream::traits_type::eof()) {
        in.setstate(std::ios::failbit);
        return value;
      }
      value |= static_cast<T>(static_cast<std::uint8_t>(c)) << (8 * i);
    }
    return value;
  }
};

inline void save_network(const CliqueNetwork& net, std::ostream& out) {
  NetworkCodec::save(net, out);
}

inline CliqueNetwork load_network(std::istream& in) { return NetworkCodec::load(in); }

inline void save_network_file(const CliqueNetwork& net, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  save_network(net, out);
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

inline CliqueNetwork load_network_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return NetworkCodec::load(in);
}

}  // namespace cliquenet
