#include "thermalcat/osc_core.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "thermalcat/error.hpp"

namespace thermalcat {

OscillatorParams OscillatorParams::natural(double mass, double K0, double k) {
  OscillatorParams p{1.0, 1.0, mass, K0, k, UnitSystem::Natural};
  p.validate();
  return p;
}

OscillatorParams OscillatorParams::si(double mass, double K0, double k) {
  OscillatorParams p{kHbarSI, kBoltzmannSI, mass, K0, k, UnitSystem::SI};
  p.validate();
  return p;
}

void OscillatorParams::validate() const {
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!positive(hbar) || !positive(kB) || !positive(mass) || !positive(K0))
    fail(ErrorCode::InvalidArgument, "hbar, kB, M and K0 must be finite and positive");
  if (!std::isfinite(k) || k < 0.0)
    fail(ErrorCode::InvalidArgument, "weak spring constant k must be >= 0");
  if (k > K0)
    fail(ErrorCode::InvalidArgument,
         "weak spring constant k must not exceed the stiff spring constant K0");
}

DerivedScales derive_scales(const OscillatorParams& p) {
  p.validate();
  DerivedScales d{};
  d.sigma0 = std::sqrt(p.hbar) / std::pow(p.K0 * p.mass, 0.25);
  d.Omega0 = std::sqrt(p.K0 / p.mass);
  d.omega = p.free() ? 0.0 : std::sqrt(p.k / p.mass);
  d.ThetaE = p.hbar * d.Omega0 / p.kB;
  d.v_expand = p.hbar / (d.sigma0 * p.mass);
  d.T_weak = p.free() ? std::numeric_limits<double>::infinity() : 2.0 * kPi / d.omega;
  return d;
}

double hermite(int n, double x) {
  if (n < 0 || n > kMaxHermiteOrder)
    fail(ErrorCode::Domain, "Hermite order " + std::to_string(n) + " outside [0, " +
                                std::to_string(kMaxHermiteOrder) + "]");
  double h_prev = 1.0;
  if (n == 0) return h_prev;
  double h = 2.0 * x;
  for (int m = 1; m < n; ++m) {
    const double next = 2.0 * x * h - 2.0 * m * h_prev;
    h_prev = h;
    h = next;
  }
  return h;
}

double log_eigen_norm(int n, double sigma0) {
  return 0.5 * std::log(kPi) + std::log(sigma0) + n * std::log(2.0) + std::lgamma(n + 1.0);
}

double eigenfunction(int n, double x, double sigma0) {
  if (!(sigma0 > 0.0)) fail(ErrorCode::InvalidArgument, "sigma0 must be positive");
  const double y = x / sigma0;
  if (std::abs(y) > 40.0) return 0.0;
  const double h = hermite(n, y);
  if (h == 0.0) return 0.0;
  const double log_mag = std::log(std::abs(h)) - 0.5 * y * y - 0.5 * log_eigen_norm(n, sigma0);
  return std::copysign(std::exp(log_mag), h);
}

void hermite_functions(double y, std::span<double> out) {
  if (out.empty()) return;
  if (out.size() > static_cast<std::size_t>(kMaxHermiteOrder) + 1)
    fail(ErrorCode::Domain, "too many Hermite functions requested");
  // pi^(-1/4)
  constexpr double kPiQuarterInv = 0.75112554446494248286;
  out[0] = kPiQuarterInv * std::exp(-0.5 * y * y);
  if (out.size() == 1) return;
  out[1] = std::sqrt(2.0) * y * out[0];
  for (std::size_t m = 1; m + 1 < out.size(); ++m) {
    const double md = static_cast<double>(m);
    out[m + 1] = std::sqrt(2.0 / (md + 1.0)) * y * out[m] - std::sqrt(md / (md + 1.0)) * out[m - 1];
  }
}

}  // namespace thermalcat
