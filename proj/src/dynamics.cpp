#include "thermalcat/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "thermalcat/error.hpp"

namespace thermalcat {
namespace {

double angular_frequency(double k, double mass) { return k == 0.0 ? 0.0 : std::sqrt(k / mass); }

// Increment of the unwrapped arg between two points of one monotone arc whose
// true increment lies in [0, pi).
double arc_increment(cplx from, cplx to) {
  double inc = std::arg(to * std::conj(from));
  if (inc < -0.5 * kPi) inc += 2.0 * kPi;
  return inc;
}

// Real classical oscillator step of duration dt.
std::pair<double, double> classical_step(double x, double p, double omega, double mass, double dt) {
  if (omega == 0.0) return {x + p * dt / mass, p};
  const double c = std::cos(omega * dt);
  const double sn = std::sin(omega * dt);
  return {x * c + p / (mass * omega) * sn, -mass * omega * x * sn + p * c};
}

}  // namespace

ComplexWidth complex_width(double t, double sigma0, double omega, double tau,
                           const OscillatorParams& params) {
  if (t < tau) fail(ErrorCode::ContractViolation, "complex width requested before release");
  const double dt = t - tau;
  const double v = params.hbar / (params.mass * sigma0);
  if (omega == 0.0) return {cplx(sigma0, v * dt), cplx(0.0, v)};
  const double c = std::cos(omega * dt);
  const double sn = std::sin(omega * dt);
  return {cplx(sigma0 * c, v / omega * sn), cplx(-sigma0 * omega * sn, v * c)};
}

TrapSchedule::TrapSchedule(const OscillatorParams& params, double tau, std::vector<Switch> switches)
    : params_(params), tau_(tau) {
  params_.validate();
  if (!std::isfinite(tau) || tau > 0.0)
    fail(ErrorCode::InvalidArgument, "release time tau must be finite and <= 0");
  sigma0_ = derive_scales(params_).sigma0;

  Segment first{};
  first.start = tau;
  first.omega = angular_frequency(params_.k, params_.mass);
  first.s0 = cplx(sigma0_, 0.0);
  first.sdot0 = cplx(0.0, params_.hbar / (params_.mass * sigma0_));
  first.phase0 = 0.0;
  segments_.push_back(first);

  for (const Switch& sw : switches) {
    if (!(sw.time > segments_.back().start))
      fail(ErrorCode::InvalidArgument, "trap switches must be strictly increasing and after release");
    if (!std::isfinite(sw.k) || sw.k < 0.0)
      fail(ErrorCode::InvalidArgument, "switched spring constant must be >= 0");
    Segment next{};
    next.start = sw.time;
    next.omega = angular_frequency(sw.k, params_.mass);
    evolve_width(segments_.back(), sw.time, next.s0, next.sdot0, next.phase0);
    segments_.push_back(next);
  }

  // Unit-momentum boost trajectory, launched at t = 0.
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    Segment& seg = segments_[i];
    if (seg.start <= 0.0) {
      seg.xc0 = 0.0;
      seg.pc0 = 1.0;
    } else {
      const Segment& prev = segments_[i - 1];
      const double prev_start = std::max(prev.start, 0.0);
      std::tie(seg.xc0, seg.pc0) =
          classical_step(prev.xc0, prev.pc0, prev.omega, params_.mass, seg.start - prev_start);
    }
  }
}

const TrapSchedule::Segment& TrapSchedule::segment_at(double t) const {
  auto it = std::upper_bound(segments_.begin(), segments_.end(), t,
                             [](double value, const Segment& s) { return value < s.start; });
  return *std::prev(it);
}

void TrapSchedule::evolve_width(const Segment& seg, double t, cplx& s, cplx& sdot,
                                double& phase) const {
  const double dt = t - seg.start;
  if (seg.omega == 0.0) {
    s = seg.s0 + seg.sdot0 * dt;
    sdot = seg.sdot0;
    phase = seg.phase0 + arc_increment(seg.s0, s);
    return;
  }
  // Over each half period s -> -s and arg s advances by exactly pi.
  const double half = kPi / seg.omega;
  const double m = std::floor(dt / half);
  const double r = dt - m * half;
  const double c = std::cos(seg.omega * r);
  const double sn = std::sin(seg.omega * r);
  const cplx s_r = seg.s0 * c + seg.sdot0 / seg.omega * sn;
  const cplx sdot_r = -seg.s0 * seg.omega * sn + seg.sdot0 * c;
  const double sign = std::fmod(m, 2.0) == 0.0 ? 1.0 : -1.0;
  s = sign * s_r;
  sdot = sign * sdot_r;
  phase = seg.phase0 + m * kPi + arc_increment(seg.s0, s_r);
}

ComplexWidth TrapSchedule::width(double t) const {
  if (t < tau_) fail(ErrorCode::ContractViolation, "state evaluated before its release time");
  ComplexWidth w{};
  double phase = 0.0;
  evolve_width(segment_at(t), t, w.s, w.sdot, phase);
  return w;
}

double TrapSchedule::width_phase(double t) const {
  if (t < tau_) fail(ErrorCode::ContractViolation, "state evaluated before its release time");
  cplx s, sdot;
  double phase = 0.0;
  evolve_width(segment_at(t), t, s, sdot, phase);
  return phase;
}

std::pair<double, double> TrapSchedule::trajectory(double t, double p0) const {
  if (t < 0.0) fail(ErrorCode::ContractViolation, "boost trajectory requested before the kick");
  const Segment& seg = segment_at(t);
  const double start = std::max(seg.start, 0.0);
  auto [x, p] = classical_step(seg.xc0, seg.pc0, seg.omega, params_.mass, t - start);
  return {x * p0, p * p0};
}

EvolutionFrame TrapSchedule::frame(double t, double p) const {
  if (t < tau_) fail(ErrorCode::ContractViolation, "state evaluated before its release time");
  if (p != 0.0 && t < 0.0)
    fail(ErrorCode::ContractViolation, "boosted state evaluated before the kick at t = 0");
  EvolutionFrame f{};
  f.t = t;
  f.hbar = params_.hbar;
  cplx s, sdot;
  evolve_width(segment_at(t), t, s, sdot, f.phase);
  f.abs_s = std::abs(s);
  f.chirp = params_.mass * std::real(sdot * std::conj(s)) / (2.0 * params_.hbar * std::norm(s));
  if (p != 0.0) std::tie(f.x_c, f.p_c) = trajectory(t, p);
  return f;
}

ReleasedState::ReleasedState(int n_, const OscillatorParams& params, double tau, double p_)
    : n(n_), schedule(params, tau), p(p_) {
  if (n < 0 || n > kMaxHermiteOrder)
    fail(ErrorCode::Domain, "excitation index " + std::to_string(n) + " out of range");
}

ReleasedState::ReleasedState(int n_, TrapSchedule schedule_, double p_)
    : n(n_), schedule(std::move(schedule_)), p(p_) {
  if (n < 0 || n > kMaxHermiteOrder)
    fail(ErrorCode::Domain, "excitation index " + std::to_string(n) + " out of range");
}

cplx released_amplitude(const EvolutionFrame& f, int n, double x) {
  const double xr = x - f.x_c;
  const double mag = eigenfunction(n, xr, f.abs_s);
  if (mag == 0.0) return {0.0, 0.0};
  const double phase =
      f.chirp * xr * xr - (n + 0.5) * f.phase + (f.p_c * x - 0.5 * f.p_c * f.x_c) / f.hbar;
  return std::polar(1.0, phase) * mag;
}

void released_amplitudes(const EvolutionFrame& f, double x, std::span<cplx> out) {
  std::array<double, kMaxHermiteOrder + 1> h{};
  if (out.size() > h.size()) fail(ErrorCode::Domain, "too many excitation indices requested");
  const double xr = x - f.x_c;
  hermite_functions(xr / f.abs_s, std::span<double>(h.data(), out.size()));
  const double base_phase =
      f.chirp * xr * xr - 0.5 * f.phase + (f.p_c * x - 0.5 * f.p_c * f.x_c) / f.hbar;
  cplx factor = std::polar(1.0 / std::sqrt(f.abs_s), base_phase);
  const cplx step = std::polar(1.0, -f.phase);
  for (std::size_t n = 0; n < out.size(); ++n) {
    out[n] = h[n] * factor;
    factor *= step;
  }
}

cplx released_amplitude(const ReleasedState& state, double x, double t) {
  return released_amplitude(state.schedule.frame(t, state.p), state.n, x);
}

double density_of_released(const ReleasedState& state, double x, double t) {
  return std::norm(released_amplitude(state, x, t));
}

}  // namespace thermalcat
