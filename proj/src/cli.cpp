#include "synseg/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "synseg/config.hpp"
#include "synseg/io.hpp"
#include "synseg/kernels.hpp"
#include "synseg/linearized.hpp"
#include "synseg/manifest.hpp"
#include "synseg/reduced_energy.hpp"
#include "synseg/reduction_solver.hpp"

namespace synseg {
namespace {

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream f(p);
  if (!f) throw Error(Reason::io_error, "cannot write " + p.string());
  f << text << "\n";
}

struct Common {
  std::string config_path;
  std::string out_root = "runs";
};

RunConfig load(const Common& c) { return c.config_path.empty() ? RunConfig{} : load_config(c.config_path); }

RadialProfile profile_for(const RunConfig& cfg) {
  return solve_ground_state(3, 3.0, cfg.ground_state.tol, cfg.ground_state.r_max);
}

ProfileProvenance provenance(const RadialProfile& p, double tol) { return {p.dim, p.power, tol, p.w0()}; }

// Runs body inside a fresh run directory and records the manifest.
template <class Body>
int run(RunManifest m, const Common& common, Body body) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto dir = m.run_dir(common.out_root);
  std::filesystem::create_directories(dir);
  try {
    body(dir, m);
  } catch (const Error& e) {
    m.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    nlohmann::json j = {{"reason", std::string(reason_name(e.reason()))}, {"message", e.what()}};
    write_text(dir / "error.json", j.dump(2));
    m.outputs.push_back("error.json");
    m.write(dir);
    std::cerr << "error reason=" << reason_name(e.reason()) << " message=\"" << e.what() << "\"\n";
    std::cout << dir.string() << "\n";
    return 1;
  }
  m.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  m.write(dir);
  std::cout << dir.string() << "\n";
  return 0;
}

}  // namespace

int dispatch(const std::vector<std::string>& args) {
  std::vector<char*> argv;
  std::vector<std::string> copy = args;
  for (auto& s : copy) argv.push_back(s.data());
  return dispatch(static_cast<int>(argv.size()), argv.data());
}

int dispatch(int argc, char** argv) {
  kernels::configure_threads();
  CLI::App app{"Ring-spike constructions for three-component cubic Schroedinger systems"};
  app.require_subcommand(1);
  Common common;
  app.add_option("--out", common.out_root, "root directory for run outputs");

  auto* gs = app.add_subcommand("ground-state", "solve and export the radial ground state");
  int gs_dim = 3;
  double gs_power = 3.0, gs_tol = 1e-10, gs_rmax = 0.0;
  gs->add_option("--dim", gs_dim)->check(CLI::Range(1, 3));
  gs->add_option("--power", gs_power);
  gs->add_option("--tol", gs_tol);
  gs->add_option("--r-max", gs_rmax, "default 25 for d=3, 20 otherwise");

  auto* cons = app.add_subcommand("constants", "expansion constants of the reduced energy");
  cons->add_option("--config", common.config_path)->check(CLI::ExistingFile);

  auto* land = app.add_subcommand("landscape", "scan the reduced energy and locate its extremum");
  int land_ell = 200, land_grid = 96;
  std::string land_mode = "max", land_form = "pair";
  land->add_option("--ell", land_ell)->required()->check(CLI::PositiveNumber);
  land->add_option("--mode", land_mode)->check(CLI::IsMember({"max", "min"}));
  land->add_option("--grid", land_grid);
  land->add_option("--form", land_form)->check(CLI::IsMember({"pair", "asymptotic"}));
  land->add_option("--config", common.config_path)->check(CLI::ExistingFile);

  auto* cons_run = app.add_subcommand("construct", "refine the ring ansatz to a discrete solution");
  int c_ell = 0;
  std::string c_parity;
  double c_r = 0.0, c_rho = 0.0;
  cons_run->add_option("--ell", c_ell)->check(CLI::PositiveNumber);
  cons_run->add_option("--parity", c_parity)->check(CLI::IsMember({"positive", "sign-changing"}));
  cons_run->add_option("--r", c_r);
  cons_run->add_option("--rho", c_rho);
  cons_run->add_option("--config", common.config_path)->check(CLI::ExistingFile);

  auto* probe = app.add_subcommand("probe", "coercivity probe of the second variation");
  int p_ell = 4;
  double p_h = 0.25, p_margin = 8.0, p_r = 0.0;
  bool p_dense = false;
  probe->add_option("--ell", p_ell)->check(CLI::PositiveNumber);
  probe->add_option("--spacing", p_h, "grid spacing");
  probe->add_option("--margin", p_margin);
  probe->add_option("--r", p_r, "ring radius, default 2 ell ln ell");
  probe->add_flag("--dense", p_dense, "also run the dense eigensolver (small grids only)");
  probe->add_option("--config", common.config_path)->check(CLI::ExistingFile);

  auto* ver = app.add_subcommand("verify", "recompute residuals and symmetry of a saved solution");
  std::string v_field;
  ver->add_option("--field", v_field, "stem of a saved field (without .json/.bin)")->required();
  ver->add_option("--config", common.config_path)->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  RunConfig cfg;
  try {
    cfg = load(common);
    if (*cons_run) {
      if (c_ell > 0) cfg.ring.ell = c_ell;
      if (!c_parity.empty()) cfg.ring.parity = parse_parity(c_parity);
      if (c_r > 0.0) cfg.ring.r = c_r;
      if (c_rho > 0.0) cfg.ring.rho = c_rho;
    }
  } catch (const Error& e) {
    std::cerr << "error reason=" << reason_name(e.reason()) << " message=\"" << e.what() << "\"\n";
    return 2;
  }

  RunManifest m;
  if (*gs) {
    const double rmax = gs_rmax > 0.0 ? gs_rmax : (gs_dim == 3 ? 25.0 : 20.0);
    m.subcommand = "ground-state";
    m.inputs = "dim = " + std::to_string(gs_dim) + "\npower = " + num(gs_power) + "\ntol = " + num(gs_tol) +
               "\nr_max = " + num(rmax) + "\n";
    return run(m, common, [&](const std::filesystem::path& dir, RunManifest& man) {
      const auto p = solve_ground_state(gs_dim, gs_power, gs_tol, rmax);
      man.profile = provenance(p, gs_tol);
      write_profile(p, dir / "profile");
      nlohmann::json j = {{"w0", p.w0()}, {"tail_C", p.tail_C}, {"tail_start", p.tail_start},
                          {"ode_residual", ode_residual_sup(p)}, {"shoot_lo", p.shoot_lo},
                          {"shoot_hi", p.shoot_hi}};
      write_text(dir / "summary.json", j.dump(2));
      man.outputs = {"profile.csv", "profile.json", "summary.json"};
    });
  }
  if (*cons) {
    m.subcommand = "constants";
    m.inputs = canonical_text(cfg);
    return run(m, common, [&](const std::filesystem::path& dir, RunManifest& man) {
      const auto p = profile_for(cfg);
      man.profile = provenance(p, cfg.ground_state.tol);
      write_text(dir / "constants.json", to_json(expansion_constants(cfg.params(), p)));
      man.outputs = {"constants.json"};
    });
  }
  if (*land) {
    m.subcommand = "landscape";
    m.inputs = canonical_text(cfg) + "ell = " + std::to_string(land_ell) + "\nmode = " + land_mode +
               "\ngrid = " + std::to_string(land_grid) + "\nform = " + land_form + "\n";
    return run(m, common, [&](const std::filesystem::path& dir, RunManifest& man) {
      const auto p = profile_for(cfg);
      man.profile = provenance(p, cfg.ground_state.tol);
      const ReducedModel model{expansion_constants(cfg.params(), p), cfg.params(), cfg.potentials,
                               land_mode == "max" ? Parity::positive : Parity::sign_changing,
                               land_form == "pair" ? InteractionForm::pair_sum : InteractionForm::asymptotic};
      LandscapeOptions lo;
      lo.grid = land_grid;
      lo.allow_boundary = true;
      const auto s = find_extremum(model, land_ell, parse_mode(land_mode), lo);
      write_landscape_csv(s, (dir / "landscape.csv").string());
      write_text(dir / "extremum.json", to_json(s));
      man.outputs = {"landscape.csv", "extremum.json"};
      if (!s.interior)
        throw Error(Reason::boundary_extremum, "extremum lies on the edge of the admissible square");
    });
  }
  if (*cons_run) {
    m.subcommand = "construct";
    m.inputs = canonical_text(cfg);
    return run(m, common, [&](const std::filesystem::path& dir, RunManifest& man) {
      const auto p = profile_for(cfg);
      man.profile = provenance(p, cfg.ground_state.tol);
      RefineOptions ro;
      ro.max_iter = cfg.solver.max_iter;
      ro.tol = cfg.solver.tol;
      ro.grid = cfg.grid;
      ro.waive_probe = cfg.solver.waive_probe;
      const auto rep = refine(cfg.polygon(), cfg.params(), cfg.potentials, p, ro);
      write_text(dir / "report.json", to_json(rep));
      write_field(rep.solution, dir / "solution");
      man.outputs = {"report.json", "solution.json", "solution.bin"};
    });
  }
  if (*probe) {
    m.subcommand = "probe";
    const double r = p_r > 0.0 ? p_r : 2.0 * p_ell * std::log(static_cast<double>(p_ell));
    m.inputs = canonical_text(cfg) + "ell = " + std::to_string(p_ell) + "\nh = " + num(p_h) +
               "\nmargin = " + num(p_margin) + "\nr = " + num(r) + "\ndense = " + (p_dense ? "1" : "0") + "\n";
    return run(m, common, [&](const std::filesystem::path& dir, RunManifest& man) {
      const auto p = profile_for(cfg);
      man.profile = provenance(p, cfg.ground_state.tol);
      const PolygonConfig pc{p_ell, r, r, cfg.ring.parity};
      auto grid = std::make_shared<const WedgeGrid>(grid_for(pc, {p_h, p_margin, cfg.grid.order}));
      DiscreteFunctional fn(grid, pc.parity, cfg.params(), cfg.potentials);
      AnsatzOptions ao;
      ao.max_spacing = std::max(ao.max_spacing, p_h);
      const auto base = synthesize_ansatz(pc, cfg.params(), p, grid, ao);
      const auto basis = ConstraintBasis::build(pc, cfg.params(), p, grid);
      EigenprobeReport rep;
      rep.projected = rayleigh_min(fn, base, &basis);
      rep.unprojected = rayleigh_min(fn, base, nullptr);
      rep.alignment = near_zero_alignment(fn, rep.unprojected, basis, 1e-2);
      if (p_dense) {
        rep.dense_projected = dense_spectrum(fn, base, &basis);
        rep.dense_unprojected = dense_spectrum(fn, base, nullptr);
      }
      write_text(dir / "eigenprobe.json", to_json(rep));
      man.outputs = {"eigenprobe.json"};
    });
  }
  if (*ver) {
    m.subcommand = "verify";
    m.inputs = canonical_text(cfg) + "field = " + v_field + "\n";
    return run(m, common, [&](const std::filesystem::path& dir, RunManifest& man) {
      const Field3 f = read_field(v_field);
      DiscreteFunctional fn(f.grid_ptr(), f.parity(), cfg.params(), cfg.potentials);
      const auto met = fn.verification_metrics(f);
      const auto rot = check_rotation(f);
      nlohmann::json j = {{"energy", fn.energy(f).total},
                          {"sync_defect", met.sync_defect},
                          {"overlap", met.overlap},
                          {"int_u4", met.quartic_u},
                          {"sup", met.sup},
                          {"residual_l2", met.residual_l2},
                          {"rotation_defect", rot.max_defect},
                          {"min", rot.min},
                          {"max", rot.max}};
      write_text(dir / "verify.json", j.dump(2));
      man.outputs = {"verify.json"};
    });
  }
  return 2;
}

}  // namespace synseg
