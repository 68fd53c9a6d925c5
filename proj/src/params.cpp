#include "synseg/params.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace synseg {

std::string_view reason_name(Reason r) {
  switch (r) {
    case Reason::inadmissible_coupling: return "InadmissibleCoupling";
    case Reason::bracket_failure: return "BracketFailure";
    case Reason::non_decay: return "NonDecay";
    case Reason::grid_too_coarse: return "GridTooCoarse";
    case Reason::out_of_domain: return "OutOfDomain";
    case Reason::no_root: return "NoRoot";
    case Reason::boundary_extremum: return "BoundaryExtremum";
    case Reason::iteration_stall: return "IterationStall";
    case Reason::linear_solve_failure: return "LinearSolveFailure";
    case Reason::diverged: return "Diverged";
    case Reason::config_error: return "ConfigError";
    case Reason::io_error: return "IOError";
  }
  return "Unknown";
}

bool coupling_admissible(double mu1, double mu2, double beta12) {
  if (!(mu1 > 0.0) || !(mu2 > 0.0) || !std::isfinite(beta12)) return false;
  const double lo = -std::sqrt(mu1 * mu2);
  const bool lower = beta12 > lo && beta12 < std::min(mu1, mu2);
  const bool upper = beta12 > std::max(mu1, mu2);
  return lower || upper;
}

SyncAmplitudes derive_sync_coefficients(double mu1, double mu2, double beta12) {
  if (!coupling_admissible(mu1, mu2, beta12)) {
    std::ostringstream os;
    os << "beta12=" << beta12 << " outside the admissible intervals for mu1=" << mu1
       << ", mu2=" << mu2;
    throw Error(Reason::inadmissible_coupling, os.str());
  }
  const double det = mu1 * mu2 - beta12 * beta12;
  if (det == 0.0) throw Error(Reason::inadmissible_coupling, "mu1*mu2 == beta12^2");
  return {std::sqrt((mu2 - beta12) / det), std::sqrt((mu1 - beta12) / det)};
}

SystemParams::SystemParams(std::array<double, 3> mu, double beta12, double beta13, double beta23)
    : mu_(mu), beta12_(beta12), beta13_(beta13), beta23_(beta23) {
  for (double m : mu_)
    if (!(m > 0.0) || !std::isfinite(m))
      throw Error(Reason::inadmissible_coupling, "intraspecies coefficients must be positive");
  if (!std::isfinite(beta13) || !std::isfinite(beta23))
    throw Error(Reason::inadmissible_coupling, "non-finite cross coupling");
  amp_ = derive_sync_coefficients(mu_[0], mu_[1], beta12_);
}

SystemParams SystemParams::swapped12() const {
  return SystemParams({mu_[1], mu_[0], mu_[2]}, beta12_, beta23_, beta13_);
}

SystemParams SystemParams::with_cross(double beta13, double beta23) const {
  return SystemParams(mu_, beta12_, beta13, beta23);
}

void PotentialSpec::validate() const {
  if (!(m > 1.0)) throw Error(Reason::config_error, "potential exponent m must exceed 1");
  if (!(sigma > 0.0)) throw Error(Reason::config_error, "potential sigma must be positive");
  if (!(r_cut > 0.0)) throw Error(Reason::config_error, "potential r_cut must be positive");
  if (!std::isfinite(a)) throw Error(Reason::config_error, "potential coefficient not finite");
  // beyond r_cut the tail 1 + a/r^m must stay nonnegative
  if (1.0 + a / std::pow(r_cut, m) < 0.0)
    throw Error(Reason::config_error, "potential negative beyond r_cut");
}

Potentials trivial_potentials() { return {PotentialSpec{}, PotentialSpec{}, PotentialSpec{}}; }

const char* hypothesis_name(Hypothesis h) {
  switch (h) {
    case Hypothesis::Hm_i: return "Hm_i";
    case Hypothesis::Hm_ii: return "Hm_ii";
    case Hypothesis::Htilde_iii: return "Htilde_iii";
    case Hypothesis::Htilde_iv: return "Htilde_iv";
    case Hypothesis::none: return "none";
  }
  return "none";
}

Hypothesis classify_hypothesis(const SystemParams& params, const Potentials& pots) {
  const auto& [p1, p2, p3] = pots;
  const double a2 = params.alpha() * params.alpha();
  const double g2 = params.gamma() * params.gamma();
  if (p1.m != p2.m) {
    if (p3.m != std::min(p1.m, p2.m)) return Hypothesis::none;
    const double lead = p1.m < p2.m ? p1.a : p2.a;
    if (p3.a > 0.0 && lead > 0.0) return Hypothesis::Hm_i;
    if (p3.a < 0.0 && lead < 0.0) return Hypothesis::Htilde_iii;
    return Hypothesis::none;
  }
  if (p3.m != p1.m) return Hypothesis::none;
  const double combo = p1.a * a2 + p2.a * g2;
  if (combo > 0.0 && p3.a > 0.0) return Hypothesis::Hm_ii;
  if (combo < 0.0 && p3.a < 0.0) return Hypothesis::Htilde_iv;
  return Hypothesis::none;
}

}  // namespace synseg
