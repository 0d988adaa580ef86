#pragma once

#include <optional>
#include <string>
#include <vector>

#include "thermalcat/ensemble.hpp"

namespace thermalcat {

// Time after release at which the released ground state reaches |s| = width.
// Throws Domain when a weak trap caps the width below the target.
double time_to_width(const OscillatorParams& params, double width);

struct ParamsReport {
  DerivedScales scales;
  double target_width = 0.0;
  double time_to_width = 0.0;

  std::string to_json() const;
};

// SI parameter summary. Throws ErrorCode::Units for natural-unit params.
ParamsReport params_report(const OscillatorParams& params, double target_width);

enum class Tier { Fast, Accurate };

struct ValidationCase {
  int n = 0;
  double err_pre_kick = 0.0;
  double err_post_kick = 0.0;
  double err_half_period = 0.0;
  // |grid kick norm - closed-form norm|, 0 in boost mode
  double kick_norm_mismatch = 0.0;
  // errors at half period with dt and dt/2; exponent = log2 of their ratio
  double err_half_period_fine = 0.0;
  std::optional<double> convergence_exponent;
  bool pass = false;
};

struct ValidationReport {
  Tier tier = Tier::Accurate;
  double x_min = 0.0;
  double x_max = 0.0;
  std::size_t x_count = 0;
  double dt = 0.0;
  double t_pre = 0.0;
  double t_post = 0.0;
  double t_half = 0.0;
  double tolerance = 1e-6;
  std::vector<ValidationCase> cases;
  bool pass = false;
  std::string suggestion;

  double max_error() const;
  std::string to_json() const;
};

// Closed form versus split-operator grid for every level of the scenario
// (pure_n, or 0..min(cutoff, max_level)). Checkpoints: t = 0 before the kick,
// T/4 and T/2 after it (free release: half and all of the t_grid span).
ValidationReport validate_scenario(const Scenario& scenario, Tier tier, unsigned threads,
                                   std::optional<int> max_level = std::nullopt);

}  // namespace thermalcat
