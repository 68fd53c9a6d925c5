#pragma once
#include <array>
#include <cmath>

#include "synseg/error.hpp"

namespace synseg {

struct SyncAmplitudes {
  double alpha;
  double gamma;
};

// Throws Reason::inadmissible_coupling outside the open admissible intervals.
SyncAmplitudes derive_sync_coefficients(double mu1, double mu2, double beta12);
bool coupling_admissible(double mu1, double mu2, double beta12);

class SystemParams {
 public:
  SystemParams(std::array<double, 3> mu, double beta12, double beta13, double beta23);

  const std::array<double, 3>& mu() const { return mu_; }
  double mu(int j) const { return mu_[j]; }
  double beta12() const { return beta12_; }
  double beta13() const { return beta13_; }
  double beta23() const { return beta23_; }
  double alpha() const { return amp_.alpha; }
  double gamma() const { return amp_.gamma; }

  // Same parameters with components 1 and 2 exchanged.
  SystemParams swapped12() const;
  SystemParams with_cross(double beta13, double beta23) const;

 private:
  std::array<double, 3> mu_;
  double beta12_, beta13_, beta23_;
  SyncAmplitudes amp_;
};

enum class TailForm { exact_power };

struct PotentialSpec {
  double a = 0.0;
  double m = 2.0;
  double sigma = 1.0;
  double r_cut = 1.0;
  TailForm tail_form = TailForm::exact_power;

  void validate() const;
  double operator()(double r) const {
    if (a == 0.0) return 1.0;
    if (r < r_cut) return clamp_value();
    return 1.0 + a / std::pow(r, m);
  }
  double clamp_value() const { return 1.0 + a > 0.0 ? 1.0 + a : 0.0; }
  bool trivial() const { return a == 0.0; }
};

using Potentials = std::array<PotentialSpec, 3>;

Potentials trivial_potentials();

enum class Hypothesis { Hm_i, Hm_ii, Htilde_iii, Htilde_iv, none };

const char* hypothesis_name(Hypothesis h);
Hypothesis classify_hypothesis(const SystemParams& params, const Potentials& pots);

}  // namespace synseg
