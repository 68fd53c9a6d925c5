#include "synseg/manifest.hpp"

#include <cstdio>
#include <fstream>

#include "json.hpp"

namespace synseg {

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string RunManifest::hash() const { return hex64(fnv1a(subcommand + "\n" + inputs)); }

std::filesystem::path RunManifest::run_dir(const std::filesystem::path& root) const {
  return root / (subcommand + "-" + hash());
}

void RunManifest::write(const std::filesystem::path& dir) const {
  nlohmann::json j = {{"hash", hash()},
                      {"subcommand", subcommand},
                      {"inputs", inputs},
                      {"profile", {{"dim", profile.dim}, {"power", profile.power}, {"tol", profile.tol},
                                   {"w0", profile.w0}}},
                      {"outputs", outputs},
                      {"wall_seconds", wall_seconds}};
  std::ofstream(dir / "manifest.json") << j.dump(2) << "\n";
}

}  // namespace synseg
