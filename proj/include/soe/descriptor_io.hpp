#pragma once

#include <filesystem>

#include "soe/network.hpp"

namespace soe {

/// Thrown on malformed descriptor files; carries the byte offset where
/// parsing failed.
struct DescriptorFormatError : std::runtime_error {
  std::size_t byte_offset;
  DescriptorFormatError(const std::string& msg, std::size_t offset)
      : std::runtime_error(msg + " (byte offset " + std::to_string(offset) + ")"),
        byte_offset(offset) {}
};

/// Binary descriptor file: magic "SOED", u16 version, u32 D, u16 scale
/// count, u16 per-scale layer counts, then D little-endian f64 values.
/// A sidecar "<path>.tags" text table records the channel tag per index.
void write_descriptor(const std::filesystem::path& path, const Descriptor& d);
Descriptor read_descriptor(const std::filesystem::path& path);

/// Human-readable channel table (index, scale, sign path, parent,
/// orientation and its direction vector), plus the 10 directions.
std::string describe_descriptor(const Descriptor& d);

}  // namespace soe
