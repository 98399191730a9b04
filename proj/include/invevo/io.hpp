#pragma once

#include "invevo/dataset.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace invevo {

/// Dataset file layout, all little-endian, no padding:
///
///   offset  size  field
///        0     4  magic "IEDA"
///        4     2  format version (u16)
///        6     1  dim (u8)
///        7     4  n, points per axis (u32)
///       11     8  pair count (u64)
///       19     8  dt (f64)
///       27     1  pde kind (u8: 0 heat, 1 burgers, 2 allen-cahn, 3 navier-stokes)
///       28     1  scheme order (u8: 1..3, 0 for reference-solver data)
///       29     1  disc (u8: 0 fd, 1 spectral)
///       30     …  payload: per pair, input then output, n^dim f64 each
///
/// A JSON sidecar at "<path>.meta" holds the full configuration, seeds,
/// provenance and the CRC-32 of the payload.
struct DatasetHeader {
    std::uint16_t version = 1;
    std::uint8_t dim = 1;
    std::uint32_t n = 0;
    std::uint64_t pair_count = 0;
    double dt = 0.0;
    std::uint8_t pde_kind = 0;
    std::uint8_t scheme_order = 0;
    std::uint8_t disc = 0;

    bool operator==(const DatasetHeader&) const = default;
};

inline constexpr std::array<char, 4> kMagic{'I', 'E', 'D', 'A'};
inline constexpr std::uint16_t kFormatVersion = 1;
inline constexpr std::size_t kHeaderBytes = 30;

std::array<std::uint8_t, kHeaderBytes> encode_header(const DatasetHeader& h);
/// Throws FormatError on bad magic, VersionError on an unsupported version.
DatasetHeader decode_header(std::span<const std::uint8_t> bytes);

/// Expected payload size pair_count·2·n^dim·8.
std::uint64_t payload_bytes(const DatasetHeader& h);

/// CRC-32 of the payload as 8 lowercase hex digits.
std::string payload_checksum(std::span<const std::uint8_t> payload);

std::filesystem::path sidecar_path(const std::filesystem::path& path);

/// Writes the binary file and its sidecar. Every pair must be accepted and
/// match the dataset configuration.
void write_dataset(const Dataset& ds, const std::filesystem::path& path);

/// Reads and validates a dataset. Errors: FormatError (magic, sidecar),
/// VersionError, CorruptionError (length checked before checksum).
Dataset read_dataset(const std::filesystem::path& path);

/// Header only, without touching the payload.
DatasetHeader read_header(const std::filesystem::path& path);

/// Checksum recorded in the sidecar of `path`.
std::string recorded_checksum(const std::filesystem::path& path);

/// Human-readable `key: value` summary; parse_info recovers the header.
std::string format_info(const DatasetHeader& h);
DatasetHeader parse_info(std::string_view text);

} // namespace invevo
