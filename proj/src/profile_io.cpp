#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "synseg/io.hpp"

namespace synseg {
namespace {

std::filesystem::path with_ext(std::filesystem::path stem, const char* ext) {
  stem += ext;
  return stem;
}

double parse_field(std::string_view s, const std::string& where) {
  double x = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || p != s.data() + s.size())
    throw Error(Reason::io_error, "bad number '" + std::string(s) + "' in " + where);
  return x;
}

}  // namespace

void write_profile(const RadialProfile& p, const std::filesystem::path& stem) {
  const auto csv = with_ext(stem, ".csv");
  std::FILE* f = std::fopen(csv.c_str(), "w");
  if (!f) throw Error(Reason::io_error, "cannot write " + csv.string());
  std::fputs("r,w,dw\n", f);
  for (std::size_t i = 0; i < p.knots.size(); ++i)
    std::fprintf(f, "%.17g,%.17g,%.17g\n", p.knots[i], p.values[i], p.derivs[i]);
  std::fclose(f);

  nlohmann::json j = {{"dim", p.dim},
                      {"power", p.power},
                      {"tail_C", p.tail_C},
                      {"tail_start", p.tail_start},
                      {"shoot_lo", p.shoot_lo},
                      {"shoot_hi", p.shoot_hi},
                      {"match_radius", p.match_radius},
                      {"w0", p.w0()},
                      {"knots", p.knots.size()},
                      {"data", csv.filename().string()}};
  std::ofstream(with_ext(stem, ".json")) << j.dump(2) << "\n";
}

RadialProfile read_profile(const std::filesystem::path& stem) {
  std::ifstream hj(with_ext(stem, ".json"));
  if (!hj) throw Error(Reason::io_error, "missing profile header " + with_ext(stem, ".json").string());
  nlohmann::json j;
  try {
    hj >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Reason::io_error, std::string("profile header: ") + e.what());
  }
  RadialProfile p;
  p.dim = j.at("dim").get<int>();
  p.power = j.at("power").get<double>();
  p.tail_C = j.at("tail_C").get<double>();
  p.tail_start = j.at("tail_start").get<double>();
  p.shoot_lo = j.value("shoot_lo", 0.0);
  p.shoot_hi = j.value("shoot_hi", 0.0);
  p.match_radius = j.value("match_radius", 0.0);

  const auto csv = with_ext(stem, ".csv");
  std::ifstream in(csv);
  if (!in) throw Error(Reason::io_error, "missing profile data " + csv.string());
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto c1 = line.find(','), c2 = line.find(',', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
      throw Error(Reason::io_error, "malformed row in " + csv.string());
    const std::string_view s(line);
    p.knots.push_back(parse_field(s.substr(0, c1), csv.string()));
    p.values.push_back(parse_field(s.substr(c1 + 1, c2 - c1 - 1), csv.string()));
    p.derivs.push_back(parse_field(s.substr(c2 + 1), csv.string()));
  }
  if (p.knots.size() < 2) throw Error(Reason::io_error, "profile has fewer than two knots");
  return p;
}

}  // namespace synseg
