#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "thermalcat/ensemble.hpp"
#include "thermalcat/scenario_file.hpp"

namespace testsupport {

using cplx = std::complex<double>;

// Composite trapezoid rule on [a, b] with n intervals. For smooth functions
// decaying at both ends this converges spectrally.
inline double trapz(const std::function<double(double)>& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double sum = 0.5 * (f(a) + f(b));
  for (int i = 1; i < n; ++i) sum += f(a + i * h);
  return sum * h;
}

inline cplx trapz_c(const std::function<cplx(double)>& f, double a, double b, int n) {
  const double h = (b - a) / n;
  cplx sum = 0.5 * (f(a) + f(b));
  for (int i = 1; i < n; ++i) sum += f(a + i * h);
  return sum * h;
}

// Free ground state written directly from the spreading-Gaussian formula with
// complex width sigma(t) = sigma0 + i hbar dt / (sigma0 M).
inline cplx free_gaussian(double x, double dt, double sigma0, double mass, double hbar) {
  const cplx sigma(sigma0, hbar * dt / (sigma0 * mass));
  return std::exp(-x * x / (2.0 * sigma0 * sigma)) / std::sqrt(std::sqrt(M_PI) * sigma);
}

// Scenario for a preset with the temperature replaced (units of ThetaE).
inline thermalcat::Scenario preset_at(const std::string& name, double theta_in_ThetaE) {
  thermalcat::ScenarioFile f = thermalcat::preset(name);
  f.theta_in_ThetaE = theta_in_ThetaE;
  f.pure_n.reset();
  return f.to_scenario_physics();
}

inline double weak_period(const thermalcat::OscillatorParams& p) {
  return thermalcat::derive_scales(p).T_weak;
}

}  // namespace testsupport
