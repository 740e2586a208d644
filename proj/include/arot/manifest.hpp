#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace arot {

inline constexpr const char* kArtifactVersion = "1.0.0";

std::uint64_t fnv1a64_file(const std::string& path);
std::uint64_t fnv1a64_bytes(const void* data, std::size_t len);
std::string to_hex(std::uint64_t v);

struct RunManifest {
  std::string subcommand;
  std::uint64_t master_seed = 0;
  std::map<std::string, std::string> config;       // resolved flag values
  std::map<std::string, std::string> input_digests; // path -> fnv1a64 hex

  void write(const std::string& out_dir) const;  // <out_dir>/manifest.json
};

}  // namespace arot
