#include <fstream>

#include "json.hpp"
#include "synseg/io.hpp"

namespace synseg {
namespace {

std::filesystem::path with_ext(std::filesystem::path stem, const char* ext) {
  stem += ext;
  return stem;
}

}  // namespace

void write_field(const Field3& f, const std::filesystem::path& stem) {
  const auto& g = f.grid();
  const auto& d = g.desc();
  nlohmann::json sym = nlohmann::json::array();
  for (int c = 0; c < 3; ++c) {
    const auto s = component_symmetry(f.parity(), c);
    sym.push_back({{"odd_at_theta0", s.odd_lo}, {"odd_at_wedge_edge", s.odd_hi}, {"even_in_z", true}});
  }
  nlohmann::json j = {{"layout", "component-major (u, v, w); index (i_rho * n_theta + j_theta) * n_z + k_z"},
                      {"dtype", "float64"},
                      {"endianness", "native"},
                      {"shape", {3, g.n_rho(), g.n_theta(), g.n_z()}},
                      {"spacing", d.spacing},
                      {"theta_spacing", g.h_theta()},
                      {"ell", d.ell},
                      {"parity", parity_name(d.parity)},
                      {"rho_in", d.rho_in},
                      {"rho_out", d.rho_out},
                      {"z_top", d.z_top},
                      {"arc_radius", d.arc_radius},
                      {"order", d.order},
                      {"wedge_angle", d.wedge_angle()},
                      {"multiplicity", d.multiplicity()},
                      {"symmetry", sym},
                      {"data", with_ext(stem, ".bin").filename().string()}};
  std::ofstream(with_ext(stem, ".json")) << j.dump(2) << "\n";
  std::ofstream out(with_ext(stem, ".bin"), std::ios::binary);
  if (!out) throw Error(Reason::io_error, "cannot write " + with_ext(stem, ".bin").string());
  const auto data = f.data();
  out.write(reinterpret_cast<const char*>(data.data()),
            static_cast<std::streamsize>(data.size() * sizeof(double)));
}

Field3 read_field(const std::filesystem::path& stem) {
  std::ifstream hj(with_ext(stem, ".json"));
  if (!hj) throw Error(Reason::io_error, "missing field descriptor " + with_ext(stem, ".json").string());
  nlohmann::json j;
  hj >> j;
  GridDescriptor d;
  d.spacing = j.at("spacing").get<double>();
  d.ell = j.at("ell").get<int>();
  d.parity = parse_parity(j.at("parity").get<std::string>());
  d.rho_in = j.at("rho_in").get<double>();
  d.rho_out = j.at("rho_out").get<double>();
  d.z_top = j.at("z_top").get<double>();
  d.arc_radius = j.at("arc_radius").get<double>();
  d.order = j.at("order").get<int>();
  auto grid = std::make_shared<const WedgeGrid>(d);
  Field3 f(grid, d.parity);
  const auto shape = j.at("shape");
  if (shape.at(1).get<std::size_t>() != grid->n_rho() || shape.at(2).get<std::size_t>() != grid->n_theta() ||
      shape.at(3).get<std::size_t>() != grid->n_z())
    throw Error(Reason::io_error, "field descriptor shape does not match its grid");
  std::ifstream in(with_ext(stem, ".bin"), std::ios::binary);
  auto data = f.data();
  in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(data.size() * sizeof(double)));
  if (in.gcount() != static_cast<std::streamsize>(data.size() * sizeof(double)))
    throw Error(Reason::io_error, "field data truncated");
  return f;
}

}  // namespace synseg
