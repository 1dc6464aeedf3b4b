#pragma once

// Instance and allocation files.
//
// Both are JSON documents whose first field is "format_version". Agent and
// good indices in files are 1-based.
//
//   {"format_version": 1, "kind": "efx-instance", "n": 2, "m": 3,
//    "scale": 1000000, "values": [[...], [...]]}
//
//   {"format_version": 1, "kind": "efx-allocation",
//    "instance_digest": "fnv1a64:...", "owner": [1, 2, 2]}

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

#include "efx/core.hpp"

namespace efx {

inline constexpr int kFormatVersion = 1;

/// Malformed file content. The message names the offending field/row or the
/// line and column of a syntax error.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// FNV-1a over (n, m, values) as little-endian 64-bit words.
std::string instance_digest(const Instance& inst);

void write_instance(const Instance& inst, std::ostream& out);
Instance parse_instance(std::istream& in);
Instance parse_instance(const std::string& text);

struct AllocationFile {
  Allocation allocation;
  std::optional<std::string> instance_digest;
};

void write_allocation(const Instance& inst, const Allocation& alloc,
                      std::ostream& out);

/// Parses an allocation and, when `inst` is given, checks range and digest.
AllocationFile parse_allocation(std::istream& in, const Instance* inst = nullptr);
AllocationFile parse_allocation(const std::string& text,
                                const Instance* inst = nullptr);

Instance load_instance(const std::filesystem::path& path);
void save_instance(const Instance& inst, const std::filesystem::path& path);
AllocationFile load_allocation(const std::filesystem::path& path,
                               const Instance* inst = nullptr);
void save_allocation(const Instance& inst, const Allocation& alloc,
                     const std::filesystem::path& path);

}  // namespace efx
