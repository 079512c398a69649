#pragma once

#include <cstdint>
#include <string>

namespace chronomix {

// Shortest round-trip-safe decimal rendering used for every CSV/JSON number
// we emit, so identical doubles always produce identical bytes.
std::string format_double(double x);

// FNV-1a over a byte string; used to fingerprint configs in run manifests.
std::uint64_t fnv1a_hash(const std::string& bytes);

// Write a whole file, throwing IoFailure on any error.
void write_text_file(const std::string& path, const std::string& contents);

}  // namespace chronomix
