#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace moran {

/// SHA-256 digest of a byte string, lowercase hex.
std::string sha256_hex(const std::string& bytes);

/// Digest of a file's contents; throws argument_error when unreadable.
std::string sha256_file(const std::string& path);

/// Writes content to path atomically (temp file in the same directory + rename).
void write_atomic(const std::string& path, const std::string& content);

/**
 * Reproducibility record emitted alongside every CLI output: command,
 * resolved parameters, input digests, output paths, seed and library version.
 * Serialises to canonical JSON (sorted keys, no timestamps), so a rerun with
 * identical inputs produces a byte-identical manifest.
 */
struct RunManifest {
  std::string command;
  std::map<std::string, std::string> parameters;
  std::map<std::string, std::string> input_digests;  // path -> sha256
  std::vector<std::string> outputs;
  std::uint64_t seed = 0;
  std::string version;

  std::string to_json() const;

  /// Writes to `<output>.manifest.json` next to the named output file.
  void write_beside(const std::string& output_path) const;
};

}  // namespace moran
