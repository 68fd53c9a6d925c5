#pragma once
#include <string>
#include <vector>

#include "synseg/ansatz.hpp"
#include "synseg/ground_state.hpp"
#include "synseg/params.hpp"

namespace synseg {

// Gamma with  int W*^3(x) W*(x - y) dx ~ Gamma e^{-|y|} / |y|  for large |y|.
double interaction_coefficient(const RadialProfile& profile);

// int W*^3(x) W*(x - y) dx at |y| = d, by the two-centre radial reduction.
double pair_integral(const RadialProfile& profile, double d);

struct ExpansionConstants {
  double A0 = 0, A1 = 0, A2 = 0, A3 = 0, A4 = 0;
  double Gamma = 0;
  double moment2 = 0, moment4 = 0;  // int W*^2, int W*^4
  double beta12 = 0;
  double B1() const { return beta12 * A2 + A3; }
};

ExpansionConstants expansion_constants(const SystemParams& params, const RadialProfile& profile);
std::string to_json(const ExpansionConstants& k);

enum class InteractionForm { pair_sum, asymptotic };
enum class ExtremumMode { maximize, minimize };

const char* mode_name(ExtremumMode m);
ExtremumMode parse_mode(const std::string& s);

struct ReducedTerms {
  double leading = 0;    // n A0
  double potential = 0;  // n A1 (a1 alpha^2 / r^m1 + a2 gamma^2 / r^m2 + a3 / (mu3 rho^m3))
  double sync = 0;       // ring interaction of the (u, v) ring
  double seg = 0;        // ring interaction of the w ring
  double excess() const { return potential + sync + seg; }
  double total() const { return leading + excess(); }
};

// Reduced energy of the ring ansatz with the remainder terms dropped. For the alternating
// parity the rings carry 2 ell peaks and neighbouring interactions change sign.
struct ReducedModel {
  ExpansionConstants k;
  SystemParams params;
  Potentials pots;
  Parity parity = Parity::positive;
  InteractionForm form = InteractionForm::pair_sum;

  int peaks(int ell) const { return parity == Parity::positive ? ell : 2 * ell; }
  ReducedTerms terms(double r, double rho, int ell) const;
  // Coefficient of A1 / r^m in the ring potential term, and the same for the w ring.
  double sync_strength() const;
  double seg_strength() const;
};

// F(r, rho); throws OutOfDomain outside the box.
double F(const ReducedModel& model, double r, double rho, int ell, const DomainBox& box);

struct TRoot {
  double t = 0;
  double residual = 0;  // relative residual of the critical-point equation
  int iterations = 0;
};

// Large root of  m a A1 / (t^{m+1} ell^m) = 2 pi B1 e^{-2 pi t}/t + B1 e^{-2 pi t}/t^2.
// Throws NoRoot (message carries the smallest ell with a root) when ell is too small.
TRoot solve_t_ell(double m, double a_combo, double A1, double B1, double ell);
// Smallest ell for which the equation above has a root.
double minimal_ell(double m, double a_combo, double A1, double B1);

// Default square: delta = m/(8 pi), M the smallest power of two with a A1 < C1 M^m where
// C1 = g1(t_ell) (ell ln ell)^m / 2. Uses the peak count in place of ell.
DomainBox default_box(const ReducedModel& model, int ell);

struct LandscapeOptions {
  int grid = 96;
  int refine_rounds = 40;
  bool allow_boundary = false;
  const DomainBox* box = nullptr;
};

struct LandscapeSample {
  int ell = 0;
  ExtremumMode mode = ExtremumMode::maximize;
  DomainBox box{};
  std::vector<double> r, rho;
  std::vector<double> excess;  // F - n A0, row-major in (r, rho)
  double leading = 0;          // n A0
  double best_r = 0, best_rho = 0;
  ReducedTerms best{};
  bool interior = false;
  double margin = 0;       // distance to the box edge over (n ln n)
  double error_band = 0;   // size of the dropped remainder terms at the extremum
  double cross_scale_1 = 0, cross_scale_2 = 0;  // e^{-gap} and e^{-2 gap} times n^2/r
};

LandscapeSample find_extremum(const ReducedModel& model, int ell, ExtremumMode mode,
                              const LandscapeOptions& opts = {});

void write_landscape_csv(const LandscapeSample& s, const std::string& path);
std::string to_json(const LandscapeSample& s);

}  // namespace synseg
