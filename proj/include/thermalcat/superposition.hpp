#pragma once

#include "thermalcat/dynamics.hpp"

namespace thermalcat {

// Momentum transfer of one reflected photon split into two branches.
struct KickSpec {
  double p_gamma = 0.0;  // = 2 hbar kappa, >= 0
  double phi = 0.0;      // interferometric phase in [0, 2 pi)

  void validate() const;
  double kappa(double hbar) const { return p_gamma / (2.0 * hbar); }
};

// Factor -i sin(2 kappa x - phi/2) multiplying the mirror wave function.
cplx kick_factor(double x, double kappa, double phi);

// Laguerre polynomial L_n(y) by forward recurrence.
double laguerre(int n, double y);

// O_n = integral |Psi_n(x,0)|^2 exp(-2 i p x / hbar) dx for a released
// eigenstate of width |s(0)| = abs_s0. Real by parity. Returns 0 once the
// Gaussian factor underflows (beta^2 > 700).
double momentum_overlap(int n, double abs_s0, double p_gamma, double hbar);

// Squared norm of the unnormalized two-branch combination,
// 2 - 2 Re(exp(i phi) O_n). Throws DegenerateSuperposition below 1e-12.
double superposition_norm_sq(double overlap, double phi);

// Normalized Upsilon_n = N_n [Psi_n(+p) - exp(i phi) Psi_n(-p)] for t >= 0.
class KickedState {
 public:
  KickedState(int n, TrapSchedule schedule, KickSpec kick);
  KickedState(int n, const OscillatorParams& params, double tau, KickSpec kick);

  int n() const { return n_; }
  const KickSpec& kick() const { return kick_; }
  const TrapSchedule& schedule() const { return schedule_; }
  double overlap() const { return overlap_; }
  double norm_const() const { return norm_const_; }

  cplx amplitude(double x, double t) const;
  double density(double x, double t) const;

 private:
  int n_;
  TrapSchedule schedule_;
  KickSpec kick_;
  double overlap_;
  double norm_const_;
};

inline cplx kicked_amplitude(const KickedState& state, double x, double t) {
  return state.amplitude(x, t);
}
inline double kicked_density(const KickedState& state, double x, double t) {
  return state.density(x, t);
}

}  // namespace thermalcat
