#include "arot/manifest.hpp"

#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <stdexcept>

namespace arot {

std::uint64_t fnv1a64_bytes(const void* data, std::size_t len) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

std::uint64_t fnv1a64_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for digest: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  const std::string s = ss.str();
  return fnv1a64_bytes(s.data(), s.size());
}

std::string to_hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

void RunManifest::write(const std::string& out_dir) const {
  nlohmann::ordered_json j;
  j["artifact_version"] = kArtifactVersion;
  j["subcommand"] = subcommand;
  j["master_seed"] = master_seed;
  j["config"] = config;
  j["input_digests"] = input_digests;
  std::filesystem::create_directories(out_dir);
  std::ofstream out(std::filesystem::path(out_dir) / "manifest.json",
                    std::ios::binary);
  out << j.dump(2) << "\n";
}

}  // namespace arot
