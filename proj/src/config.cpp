#include "synseg/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace synseg {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void fail(int line, const std::string& msg) {
  throw Error(Reason::config_error, "line " + std::to_string(line) + ": " + msg);
}

double to_double(const std::string& v, int line) {
  double x = 0.0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || p != v.data() + v.size()) fail(line, "not a number: '" + v + "'");
  return x;
}

int to_int(const std::string& v, int line) {
  int x = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || p != v.data() + v.size()) fail(line, "not an integer: '" + v + "'");
  return x;
}

bool to_bool(const std::string& v, int line) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  fail(line, "not a boolean: '" + v + "'");
}

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

PolygonConfig RunConfig::polygon(int ell) const {
  PolygonConfig p;
  p.ell = ell;
  p.parity = ring.parity;
  p.r = ring.r > 0.0 ? ring.r : radius_for_gap(ell, ring.parity, ring.gap);
  p.rho = ring.rho > 0.0 ? ring.rho : p.r;
  return p;
}

RunConfig parse_config(const std::string& text) {
  RunConfig c;
  std::istringstream in(text);
  std::string raw, section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (const auto h = raw.find('#'); h != std::string::npos) raw.erase(h);
    const std::string s = trim(raw);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') fail(line, "unterminated section header");
      section = trim(std::string_view(s).substr(1, s.size() - 2));
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) fail(line, "expected key = value");
    const std::string key = trim(std::string_view(s).substr(0, eq));
    const std::string val = trim(std::string_view(s).substr(eq + 1));
    if (val.empty()) fail(line, "empty value for '" + key + "'");
    auto unknown = [&] { fail(line, "unknown key '" + key + "' in [" + section + "]"); };

    if (section == "mu") {
      if (key == "mu1") c.mu[0] = to_double(val, line);
      else if (key == "mu2") c.mu[1] = to_double(val, line);
      else if (key == "mu3") c.mu[2] = to_double(val, line);
      else unknown();
    } else if (section == "beta") {
      if (key == "beta12") c.beta12 = to_double(val, line);
      else if (key == "beta13") c.beta13 = to_double(val, line);
      else if (key == "beta23") c.beta23 = to_double(val, line);
      else unknown();
    } else if (section.rfind("potential.", 0) == 0) {
      const std::string idx = section.substr(10);
      if (idx != "1" && idx != "2" && idx != "3") fail(line, "potential index must be 1, 2 or 3");
      auto& p = c.potentials[static_cast<std::size_t>(idx[0] - '1')];
      if (key == "a") p.a = to_double(val, line);
      else if (key == "m") p.m = to_double(val, line);
      else if (key == "sigma") p.sigma = to_double(val, line);
      else if (key == "r_cut") p.r_cut = to_double(val, line);
      else unknown();
    } else if (section == "ring") {
      if (key == "ell") c.ring.ell = to_int(val, line);
      else if (key == "parity") {
        try {
          c.ring.parity = parse_parity(val);
        } catch (const Error& e) {
          fail(line, e.what());
        }
      } else if (key == "r") c.ring.r = to_double(val, line);
      else if (key == "rho") c.ring.rho = to_double(val, line);
      else if (key == "gap") c.ring.gap = to_double(val, line);
      else unknown();
    } else if (section == "grid") {
      if (key == "h") c.grid.spacing = to_double(val, line);
      else if (key == "margin") c.grid.margin = to_double(val, line);
      else if (key == "order") c.grid.order = to_int(val, line);
      else unknown();
    } else if (section == "solver") {
      if (key == "max_iter") c.solver.max_iter = to_int(val, line);
      else if (key == "tol") c.solver.tol = to_double(val, line);
      else if (key == "waive_probe") c.solver.waive_probe = to_bool(val, line);
      else unknown();
    } else if (section == "ground_state") {
      if (key == "tol") c.ground_state.tol = to_double(val, line);
      else if (key == "r_max") c.ground_state.r_max = to_double(val, line);
      else unknown();
    } else {
      fail(line, section.empty() ? "key outside any section" : "unknown section [" + section + "]");
    }
  }
  try {
    (void)c.params();
    for (const auto& p : c.potentials) p.validate();
  } catch (const Error& e) {
    throw Error(e.reason() == Reason::inadmissible_coupling ? e.reason() : Reason::config_error,
                e.what());
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(Reason::io_error, "cannot open config " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

std::string canonical_text(const RunConfig& c) {
  std::ostringstream os;
  os << "[mu]\nmu1 = " << num(c.mu[0]) << "\nmu2 = " << num(c.mu[1]) << "\nmu3 = " << num(c.mu[2])
     << "\n[beta]\nbeta12 = " << num(c.beta12) << "\nbeta13 = " << num(c.beta13)
     << "\nbeta23 = " << num(c.beta23) << "\n";
  for (int j = 0; j < 3; ++j) {
    const auto& p = c.potentials[static_cast<std::size_t>(j)];
    os << "[potential." << j + 1 << "]\na = " << num(p.a) << "\nm = " << num(p.m)
       << "\nsigma = " << num(p.sigma) << "\nr_cut = " << num(p.r_cut) << "\n";
  }
  os << "[ring]\nell = " << c.ring.ell << "\nparity = " << parity_name(c.ring.parity)
     << "\nr = " << num(c.ring.r) << "\nrho = " << num(c.ring.rho) << "\ngap = " << num(c.ring.gap)
     << "\n[grid]\nh = " << num(c.grid.spacing) << "\nmargin = " << num(c.grid.margin)
     << "\norder = " << c.grid.order << "\n[solver]\nmax_iter = " << c.solver.max_iter
     << "\ntol = " << num(c.solver.tol) << "\nwaive_probe = " << (c.solver.waive_probe ? "true" : "false")
     << "\n[ground_state]\ntol = " << num(c.ground_state.tol) << "\nr_max = " << num(c.ground_state.r_max)
     << "\n";
  return os.str();
}

}  // namespace synseg
