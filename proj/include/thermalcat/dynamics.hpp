#pragma once

#include <complex>
#include <span>
#include <vector>

#include "thermalcat/osc_core.hpp"

namespace thermalcat {

using cplx = std::complex<double>;

// Complex width s(t) of a quenched stiff-trap eigenstate and its derivative.
// s obeys the classical oscillator equation of the current trap, starts at
// s(tau) = sigma0, sdot(tau) = i hbar/(M sigma0), and keeps Im(conj(s) sdot) = hbar/M.
struct ComplexWidth {
  cplx s;
  cplx sdot;
};

// Closed form for release at tau into a single trap of angular frequency omega
// (omega = 0: free expansion, handled by its exact analytic form). Requires t >= tau.
ComplexWidth complex_width(double t, double sigma0, double omega, double tau,
                           const OscillatorParams& params);

// Everything about the evolved state at one instant that does not depend on
// the excitation index or on x.
struct EvolutionFrame {
  double t = 0.0;
  double hbar = 1.0;
  double abs_s = 0.0;  // |s(t)|
  double phase = 0.0;  // arg s(t), unwrapped continuously from 0 at release
  double chirp = 0.0;  // M Re(sdot/s) / (2 hbar), coefficient of the quadratic phase
  double x_c = 0.0;    // classical displacement of the boost
  double p_c = 0.0;    // classical momentum of the boost
};

// Sudden switches of the weak spring constant after release. The first
// segment starts at the release time tau with the params' k; every switch
// replaces the spring constant from its time onward.
class TrapSchedule {
 public:
  struct Switch {
    double time;
    double k;
  };

  TrapSchedule(const OscillatorParams& params, double tau, std::vector<Switch> switches = {});

  const OscillatorParams& params() const { return params_; }
  double tau() const { return tau_; }
  double sigma0() const { return sigma0_; }

  ComplexWidth width(double t) const;
  // Unwrapped arg s(t).
  double width_phase(double t) const;
  // Classical (x, p) at t >= 0 of a trajectory starting at (0, p0) at t = 0.
  std::pair<double, double> trajectory(double t, double p0) const;

  // Throws ContractViolation when t < tau, or when p != 0 and t < 0.
  EvolutionFrame frame(double t, double p) const;

 private:
  struct Segment {
    double start;
    double omega;
    cplx s0;
    cplx sdot0;
    double phase0;
    // unit-momentum classical trajectory at segment start (only meaningful for start >= 0)
    double xc0;
    double pc0;
  };

  const Segment& segment_at(double t) const;
  void evolve_width(const Segment& seg, double t, cplx& s, cplx& sdot, double& phase) const;

  OscillatorParams params_;
  double tau_;
  double sigma0_;
  std::vector<Segment> segments_;
};

// Released (and, for p != 0, boosted at t = 0) eigenstate Psi_n(x, t; p).
struct ReleasedState {
  int n = 0;
  TrapSchedule schedule;
  double p = 0.0;

  ReleasedState(int n, const OscillatorParams& params, double tau, double p = 0.0);
  ReleasedState(int n, TrapSchedule schedule, double p = 0.0);
};

cplx released_amplitude(const ReleasedState& state, double x, double t);
double density_of_released(const ReleasedState& state, double x, double t);

// Single-index evaluation on a precomputed frame (log-normalized Hermite path).
cplx released_amplitude(const EvolutionFrame& frame, int n, double x);

// Psi_0..Psi_{out.size()-1} at x on one frame (normalized Hermite recurrence).
void released_amplitudes(const EvolutionFrame& frame, double x, std::span<cplx> out);

}  // namespace thermalcat
