#include "thermalcat/superposition.hpp"

#include <cmath>
#include <string>

#include "thermalcat/error.hpp"

namespace thermalcat {

void KickSpec::validate() const {
  if (!std::isfinite(p_gamma) || p_gamma < 0.0)
    fail(ErrorCode::InvalidArgument, "photon momentum p_gamma must be >= 0");
  if (!(phi >= 0.0 && phi < 2.0 * kPi))
    fail(ErrorCode::InvalidArgument, "kick phase phi must lie in [0, 2 pi)");
}

cplx kick_factor(double x, double kappa, double phi) {
  return {0.0, -std::sin(2.0 * kappa * x - 0.5 * phi)};
}

double laguerre(int n, double y) {
  if (n < 0) fail(ErrorCode::Domain, "negative Laguerre order");
  double l_prev = 1.0;
  if (n == 0) return l_prev;
  double l = 1.0 - y;
  for (int k = 1; k < n; ++k) {
    const double next = ((2.0 * k + 1.0 - y) * l - k * l_prev) / (k + 1.0);
    l_prev = l;
    l = next;
  }
  return l;
}

double momentum_overlap(int n, double abs_s0, double p_gamma, double hbar) {
  const double q = p_gamma * abs_s0 / hbar;
  const double beta2 = 2.0 * q * q;
  if (beta2 > 700.0) return 0.0;
  return std::exp(-0.5 * beta2) * laguerre(n, beta2);
}

double superposition_norm_sq(double overlap, double phi) {
  const double norm_sq = 2.0 - 2.0 * std::cos(phi) * overlap;
  if (!(norm_sq >= 1e-12))
    fail(ErrorCode::DegenerateSuperposition,
         "momentum superposition has vanishing norm (p_gamma too small for phi)");
  return norm_sq;
}

KickedState::KickedState(int n, TrapSchedule schedule, KickSpec kick)
    : n_(n), schedule_(std::move(schedule)), kick_(kick) {
  if (n < 0 || n > kMaxHermiteOrder)
    fail(ErrorCode::Domain, "excitation index " + std::to_string(n) + " out of range");
  kick_.validate();
  const double abs_s0 = std::abs(schedule_.width(0.0).s);
  overlap_ = momentum_overlap(n, abs_s0, kick_.p_gamma, schedule_.params().hbar);
  norm_const_ = 1.0 / std::sqrt(superposition_norm_sq(overlap_, kick_.phi));
}

KickedState::KickedState(int n, const OscillatorParams& params, double tau, KickSpec kick)
    : KickedState(n, TrapSchedule(params, tau), kick) {}

cplx KickedState::amplitude(double x, double t) const {
  if (t < 0.0) fail(ErrorCode::ContractViolation, "kicked state evaluated before the kick");
  const cplx plus = released_amplitude(schedule_.frame(t, kick_.p_gamma), n_, x);
  const cplx minus = released_amplitude(schedule_.frame(t, -kick_.p_gamma), n_, x);
  return norm_const_ * (plus - std::polar(1.0, kick_.phi) * minus);
}

double KickedState::density(double x, double t) const { return std::norm(amplitude(x, t)); }

}  // namespace thermalcat
