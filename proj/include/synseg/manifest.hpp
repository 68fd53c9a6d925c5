#pragma once
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace synseg {

std::uint64_t fnv1a(std::string_view text);
std::string hex64(std::uint64_t v);

struct ProfileProvenance {
  int dim = 3;
  double power = 3.0;
  double tol = 0.0;
  double w0 = 0.0;
};

struct RunManifest {
  std::string subcommand;
  std::string inputs;  // canonical text of every input, including defaults
  ProfileProvenance profile;
  std::vector<std::string> outputs;
  double wall_seconds = 0.0;

  std::string hash() const;
  // <root>/<subcommand>-<hash>
  std::filesystem::path run_dir(const std::filesystem::path& root) const;
  void write(const std::filesystem::path& dir) const;
};

}  // namespace synseg
