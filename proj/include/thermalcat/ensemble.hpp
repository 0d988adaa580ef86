#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "thermalcat/superposition.hpp"

namespace thermalcat {

inline constexpr int kDefaultCutoff = 13;

// Truncated Boltzmann distribution over stiff-trap levels 0..cutoff.
struct ThermalWeights {
  double theta = 0.0;
  int cutoff = 0;
  std::vector<double> weights;  // p_0..p_cutoff, renormalized to sum 1
  double tail_mass = 0.0;       // untruncated probability of levels above cutoff
};

// theta and ThetaE in the same temperature unit; theta = 0 is the ground-state limit.
ThermalWeights thermal_weights(double theta, double ThetaE, int cutoff);

struct UniformGrid {
  double min = 0.0;
  double max = 0.0;
  std::size_t count = 1;

  double at(std::size_t i) const;
  std::vector<double> nodes() const;
  // count >= 2 with min < max, or a single node with min == max.
  void validate(const std::string& name) const;
};

enum class KickMode { Superposition, Boost };

// Complete experiment: release at tau, kick at t = 0, thermal mixture of the
// kicked released eigenstates (or a single pure level when pure_n is set).
struct Scenario {
  OscillatorParams params;
  double theta = 0.0;  // absolute temperature, same unit as kB
  KickSpec kick;
  double tau = 0.0;
  int cutoff = kDefaultCutoff;
  KickMode mode = KickMode::Superposition;
  std::optional<int> pure_n;
  UniformGrid x_grid;
  UniformGrid t_grid;

  // Parameter checks only; grids are not inspected.
  void validate_physics() const;
  // Physics plus grid monotonicity, t >= tau and the +-8 max|s| coverage rule.
  void validate() const;
  double max_width_over_t_grid() const;
};

// Precomputed weights, overlaps and normalizations for one scenario. Cheap to
// evaluate from many threads.
class ThermalModel {
 public:
  explicit ThermalModel(const Scenario& scenario);

  const Scenario& scenario() const { return scenario_; }
  const ThermalWeights& weights() const { return weights_; }
  const TrapSchedule& schedule() const { return schedule_; }
  double overlap(int n) const { return overlaps_.at(n); }

  // P(x, t). For t < 0 the unkicked released mixture.
  double density(double x, double t) const;
  void density_slice(double t, std::span<const double> xs, std::span<double> out) const;
  // Per-level contributions p_n |Upsilon_n(x,t)|^2, summing to density(x,t).
  std::vector<double> level_densities(double x, double t) const;

  // Center contrast between phi = 0 and phi = pi.
  double visibility(double t) const;
  // Extension: (max - min)/(max + min) of P over [-half_width, half_width].
  double windowed_visibility(double t, double half_width, std::size_t samples) const;

 private:
  double center_density(double t, double phi) const;
  std::vector<double> norms_for(double phi) const;

  Scenario scenario_;
  ThermalWeights weights_;
  TrapSchedule schedule_;
  int levels_;
  std::vector<double> overlaps_;
  std::vector<double> norms_;  // N_n for the scenario phi (superposition mode)
};

double thermal_density(const Scenario& scenario, double x, double t);
double visibility(const Scenario& scenario, double t);

// Closed-form dephasing benchmark, periodic in t with period pi/omega.
double benchmark_A(double theta, double ThetaE, double omega, double t);

// Quantum over classical heat capacity of an oscillator, x = ThetaE/theta.
double heat_capacity_ratio(double x);

}  // namespace thermalcat
