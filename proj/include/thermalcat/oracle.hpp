#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "thermalcat/osc_core.hpp"

namespace thermalcat::oracle {

using cplx = std::complex<double>;

// Periodic uniform grid x_j = x_min + j dx, j < count, dx = (x_max - x_min)/count.
class GridState {
 public:
  GridState(double x_min, double x_max, std::size_t count, double time = 0.0);

  template <class F>
  static GridState sample(double x_min, double x_max, std::size_t count, double time, F&& f) {
    GridState g(x_min, x_max, count, time);
    for (std::size_t j = 0; j < count; ++j) g.psi_[j] = f(g.x(j));
    return g;
  }

  std::size_t size() const { return psi_.size(); }
  double x(std::size_t j) const { return x_min_ + dx_ * static_cast<double>(j); }
  double x_min() const { return x_min_; }
  double dx() const { return dx_; }
  double time() const { return time_; }
  void set_time(double t) { time_ = t; }

  std::span<const cplx> amplitudes() const { return psi_; }
  std::span<cplx> amplitudes() { return psi_; }

  // sum |psi_j|^2 dx
  double norm() const;
  // Rescales to unit discrete norm; returns the norm before rescaling.
  double normalize();
  // max(|psi_0|, |psi_last|) relative to max_j |psi_j|.
  double relative_edge_amplitude() const;

 private:
  double x_min_;
  double dx_;
  double time_;
  std::vector<cplx> psi_;
};

// Strang split-step evolution under H = p^2/(2M) + k x^2/2: half potential
// phase, kinetic phase in wavenumber space, half potential phase. Throws
// GridTooSmall when the wave reaches the grid edges (relative 1e-8).
GridState propagate(GridState state, const OscillatorParams& params, double k, double dt,
                    std::size_t steps);

// Evolves to t_end with steps of at most dt_max (equal steps).
GridState propagate_to(GridState state, const OscillatorParams& params, double k, double t_end,
                       double dt_max);

// L2 distance between propagations over the same interval with dt and dt/2,
// used to check that dt is converged.
double time_step_discrepancy(const GridState& state, const OscillatorParams& params, double k,
                             double dt, std::size_t steps);

struct KickResult {
  GridState state;
  double norm_before;  // discrete norm of the kicked, not yet renormalized state
};

// Multiplies by -i sin(2 kappa x - phi/2) and renormalizes. Throws
// DegenerateSuperposition when the kicked norm is below 1e-12.
KickResult apply_pointwise_kick(GridState state, double kappa, double phi);

// Multiplies by exp(i p x / hbar).
GridState apply_boost(GridState state, double p, double hbar);

// Relative L2 distance between a closed-form amplitude and the grid, after
// optimally aligning one global phase.
double compare(const std::function<cplx(double)>& closed_form, const GridState& grid);
double compare(const GridState& a, const GridState& b);

// <H> on the grid with the spectral kinetic term.
double energy(const GridState& state, const OscillatorParams& params, double k);

}  // namespace thermalcat::oracle
