#include "thermalcat/ensemble.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "thermalcat/error.hpp"

namespace thermalcat {
namespace {

constexpr std::size_t kMaxLevels = kMaxHermiteOrder + 1;
using LevelBuffer = std::array<cplx, kMaxLevels>;

}  // namespace

ThermalWeights thermal_weights(double theta, double ThetaE, int cutoff) {
  if (std::isnan(theta) || theta < 0.0)
    fail(ErrorCode::InvalidArgument, "temperature theta must be >= 0");
  if (!(ThetaE > 0.0)) fail(ErrorCode::InvalidArgument, "Einstein temperature must be positive");
  if (cutoff < 0 || cutoff > kMaxHermiteOrder)
    fail(ErrorCode::InvalidArgument, "cutoff N outside [0, 64]");

  ThermalWeights w;
  w.theta = theta;
  w.cutoff = cutoff;
  w.weights.assign(static_cast<std::size_t>(cutoff) + 1, 0.0);
  if (theta == 0.0) {
    w.weights[0] = 1.0;
    w.tail_mass = 0.0;
    return w;
  }
  const double a = ThetaE / theta;  // level spacing in units of theta
  const int levels = cutoff + 1;
  if (a == 0.0) {
    std::fill(w.weights.begin(), w.weights.end(), 1.0 / levels);
    w.tail_mass = 1.0;
    return w;
  }
  // p_n = q^n (1 - q) / (1 - q^(N+1)), q = exp(-a)
  const double scale = std::expm1(-a) / std::expm1(-a * levels);
  for (int n = 0; n <= cutoff; ++n) w.weights[n] = std::exp(-a * n) * scale;
  w.tail_mass = std::exp(-a * levels);
  return w;
}

double UniformGrid::at(std::size_t i) const {
  if (count <= 1) return min;
  if (i + 1 == count) return max;
  return min + (max - min) * static_cast<double>(i) / static_cast<double>(count - 1);
}

std::vector<double> UniformGrid::nodes() const {
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = at(i);
  return out;
}

void UniformGrid::validate(const std::string& name) const {
  if (!std::isfinite(min) || !std::isfinite(max))
    fail(ErrorCode::InvalidArgument, name + ": bounds must be finite");
  if (count == 0) fail(ErrorCode::InvalidArgument, name + ": count must be >= 1");
  if (count == 1 ? min != max : !(min < max))
    fail(ErrorCode::InvalidArgument, name + ": grid must be strictly increasing");
}

void Scenario::validate_physics() const {
  params.validate();
  if (!std::isfinite(theta) || theta < 0.0)
    fail(ErrorCode::InvalidArgument, "temperature theta must be finite and >= 0");
  kick.validate();
  if (!std::isfinite(tau) || tau > 0.0)
    fail(ErrorCode::InvalidArgument, "release time tau must be <= 0");
  if (cutoff < 0 || cutoff > kMaxHermiteOrder)
    fail(ErrorCode::InvalidArgument, "cutoff N outside [0, 64]");
  if (pure_n && (*pure_n < 0 || *pure_n > kMaxHermiteOrder))
    fail(ErrorCode::InvalidArgument, "pure level index outside [0, 64]");
}

double Scenario::max_width_over_t_grid() const {
  const TrapSchedule schedule(params, tau);
  double widest = 0.0;
  for (std::size_t i = 0; i < t_grid.count; ++i)
    widest = std::max(widest, std::abs(schedule.width(t_grid.at(i)).s));
  return widest;
}

void Scenario::validate() const {
  validate_physics();
  x_grid.validate("x_grid");
  t_grid.validate("t_grid");
  if (t_grid.min < tau)
    fail(ErrorCode::InvalidArgument, "t_grid starts before the release time tau");
  const double reach = 8.0 * max_width_over_t_grid() * (1.0 - 1e-12);
  if (x_grid.min > -reach || x_grid.max < reach)
    fail(ErrorCode::GridTooSmall,
         "x_grid must span at least +-8 max|s(t)| = +-" + std::to_string(reach) +
             " over the t_grid");
}

ThermalModel::ThermalModel(const Scenario& scenario)
    : scenario_(scenario), schedule_(scenario.params, scenario.tau) {
  scenario_.validate_physics();
  if (scenario_.pure_n) {
    levels_ = *scenario_.pure_n + 1;
    weights_.theta = scenario_.theta;
    weights_.cutoff = *scenario_.pure_n;
    weights_.weights.assign(levels_, 0.0);
    weights_.weights.back() = 1.0;
  } else {
    levels_ = scenario_.cutoff + 1;
    weights_ = thermal_weights(scenario_.theta, derive_scales(scenario_.params).ThetaE,
                               scenario_.cutoff);
  }
  const double abs_s0 = std::abs(schedule_.width(0.0).s);
  overlaps_.resize(levels_);
  for (int n = 0; n < levels_; ++n)
    overlaps_[n] = momentum_overlap(n, abs_s0, scenario_.kick.p_gamma, scenario_.params.hbar);
  if (scenario_.mode == KickMode::Superposition) norms_ = norms_for(scenario_.kick.phi);
}

std::vector<double> ThermalModel::norms_for(double phi) const {
  std::vector<double> norms(levels_);
  for (int n = 0; n < levels_; ++n)
    norms[n] = weights_.weights[n] == 0.0
                   ? 0.0
                   : 1.0 / std::sqrt(superposition_norm_sq(overlaps_[n], phi));
  return norms;
}

std::vector<double> ThermalModel::level_densities(double x, double t) const {
  std::vector<double> out(levels_);
  const std::span<const double> w = weights_.weights;
  LevelBuffer plus{}, minus{};
  if (t < 0.0 || scenario_.mode == KickMode::Boost) {
    const double p = t < 0.0 ? 0.0 : scenario_.kick.p_gamma;
    released_amplitudes(schedule_.frame(t, p), x, std::span(plus.data(), levels_));
    for (int n = 0; n < levels_; ++n) out[n] = w[n] * std::norm(plus[n]);
    return out;
  }
  const double p = scenario_.kick.p_gamma;
  released_amplitudes(schedule_.frame(t, p), x, std::span(plus.data(), levels_));
  released_amplitudes(schedule_.frame(t, -p), x, std::span(minus.data(), levels_));
  const cplx branch = std::polar(1.0, scenario_.kick.phi);
  for (int n = 0; n < levels_; ++n)
    out[n] = w[n] * norms_[n] * norms_[n] * std::norm(plus[n] - branch * minus[n]);
  return out;
}

double ThermalModel::density(double x, double t) const {
  double total = 0.0;
  for (double v : level_densities(x, t)) total += v;
  return total;
}

void ThermalModel::density_slice(double t, std::span<const double> xs,
                                 std::span<double> out) const {
  if (out.size() != xs.size()) fail(ErrorCode::InvalidArgument, "slice buffer size mismatch");
  const std::span<const double> w = weights_.weights;
  LevelBuffer plus{}, minus{};
  const std::span<cplx> plus_span(plus.data(), levels_);
  const std::span<cplx> minus_span(minus.data(), levels_);

  if (t < 0.0 || scenario_.mode == KickMode::Boost) {
    const EvolutionFrame frame = schedule_.frame(t, t < 0.0 ? 0.0 : scenario_.kick.p_gamma);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      released_amplitudes(frame, xs[i], plus_span);
      double total = 0.0;
      for (int n = 0; n < levels_; ++n) total += w[n] * std::norm(plus[n]);
      out[i] = total;
    }
    return;
  }
  const EvolutionFrame frame_plus = schedule_.frame(t, scenario_.kick.p_gamma);
  const EvolutionFrame frame_minus = schedule_.frame(t, -scenario_.kick.p_gamma);
  const cplx branch = std::polar(1.0, scenario_.kick.phi);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    released_amplitudes(frame_plus, xs[i], plus_span);
    released_amplitudes(frame_minus, xs[i], minus_span);
    double total = 0.0;
    for (int n = 0; n < levels_; ++n)
      total += w[n] * norms_[n] * norms_[n] * std::norm(plus[n] - branch * minus[n]);
    out[i] = total;
  }
}

double ThermalModel::center_density(double t, double phi) const {
  const std::span<const double> w = weights_.weights;
  LevelBuffer plus{}, minus{};
  if (t < 0.0) {
    released_amplitudes(schedule_.frame(t, 0.0), 0.0, std::span(plus.data(), levels_));
    double total = 0.0;
    for (int n = 0; n < levels_; ++n) total += w[n] * std::norm(plus[n]);
    return total;
  }
  const std::vector<double> norms = norms_for(phi);
  const double p = scenario_.kick.p_gamma;
  released_amplitudes(schedule_.frame(t, p), 0.0, std::span(plus.data(), levels_));
  released_amplitudes(schedule_.frame(t, -p), 0.0, std::span(minus.data(), levels_));
  const cplx branch = std::polar(1.0, phi);
  double total = 0.0;
  for (int n = 0; n < levels_; ++n)
    total += w[n] * norms[n] * norms[n] * std::norm(plus[n] - branch * minus[n]);
  return total;
}

double ThermalModel::visibility(double t) const {
  const double node = center_density(t, 0.0);
  const double antinode = center_density(t, kPi);
  const double sum = node + antinode;
  if (!(sum > 1e-300))
    fail(ErrorCode::UndefinedVisibility, "visibility undefined: vanishing center density");
  return std::abs(node - antinode) / sum;
}

double ThermalModel::windowed_visibility(double t, double half_width, std::size_t samples) const {
  if (!(half_width > 0.0) || samples < 2)
    fail(ErrorCode::InvalidArgument, "windowed visibility needs a positive window and >= 2 samples");
  const UniformGrid window{-half_width, half_width, samples};
  const std::vector<double> xs = window.nodes();
  std::vector<double> p(xs.size());
  density_slice(t, xs, p);
  const auto [lo, hi] = std::minmax_element(p.begin(), p.end());
  if (!(*hi + *lo > 1e-300))
    fail(ErrorCode::UndefinedVisibility, "windowed visibility undefined: vanishing density");
  return (*hi - *lo) / (*hi + *lo);
}

double thermal_density(const Scenario& scenario, double x, double t) {
  return ThermalModel(scenario).density(x, t);
}

double visibility(const Scenario& scenario, double t) { return ThermalModel(scenario).visibility(t); }

double benchmark_A(double theta, double ThetaE, double omega, double t) {
  if (!(theta > 0.0) || !(ThetaE > 0.0) || !(omega > 0.0))
    fail(ErrorCode::InvalidArgument, "benchmark needs theta, ThetaE and omega > 0");
  const double q = std::exp(-ThetaE / theta);
  const double one_minus_q = -std::expm1(-ThetaE / theta);
  const double num = one_minus_q * one_minus_q;
  // 1 + q^2 - 2q cos(2wt) rewritten so that t = 0 gives exactly num
  const double s = std::sin(omega * t);
  return num / (num + 4.0 * q * s * s);
}

double heat_capacity_ratio(double x) {
  if (std::isnan(x) || x < 0.0) fail(ErrorCode::InvalidArgument, "heat capacity ratio needs x >= 0");
  if (x == 0.0) return 1.0;
  const double r = x / (2.0 * std::sinh(0.5 * x));
  return r * r;
}

}  // namespace thermalcat
