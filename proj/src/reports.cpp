#include "thermalcat/reports.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>

#include <json.hpp>

#include "thermalcat/error.hpp"
#include "thermalcat/oracle.hpp"
#include "thermalcat/parallel.hpp"

namespace thermalcat {

double time_to_width(const OscillatorParams& params, double width) {
  const DerivedScales d = derive_scales(params);
  if (!(width > 0.0)) fail(ErrorCode::InvalidArgument, "target width must be positive");
  if (width <= d.sigma0) return 0.0;
  // |s|^2 = sigma0^2 + (v t)^2 when free, sigma0^2 cos^2 + (v/omega)^2 sin^2 in a weak trap
  if (params.free()) return std::sqrt(width * width - d.sigma0 * d.sigma0) / d.v_expand;
  const double widest = d.v_expand / d.omega;
  if (width > widest)
    fail(ErrorCode::Domain, "the weak trap limits the released width to " + std::to_string(widest));
  const double s2 = (width * width - d.sigma0 * d.sigma0) / (widest * widest - d.sigma0 * d.sigma0);
  return std::asin(std::sqrt(s2)) / d.omega;
}

ParamsReport params_report(const OscillatorParams& params, double target_width) {
  if (params.units != UnitSystem::SI)
    fail(ErrorCode::Units,
         "params-report works on SI parameters; natural-unit scenarios are dimensionless, "
         "use density/visibility instead");
  ParamsReport r;
  r.scales = derive_scales(params);
  r.target_width = target_width;
  r.time_to_width = time_to_width(params, target_width);
  return r;
}

std::string ParamsReport::to_json() const {
  nlohmann::ordered_json j;
  j["sigma0_m"] = scales.sigma0;
  j["Omega0_per_s"] = scales.Omega0;
  j["omega_per_s"] = scales.omega;
  j["ThetaE_K"] = scales.ThetaE;
  j["v_expand_m_per_s"] = scales.v_expand;
  j["T_weak_s"] = std::isfinite(scales.T_weak) ? nlohmann::ordered_json(scales.T_weak)
                                                : nlohmann::ordered_json(nullptr);
  j["target_width_m"] = target_width;
  j["time_to_width_s"] = time_to_width;
  return j.dump(2) + "\n";
}

double ValidationReport::max_error() const {
  double worst = 0.0;
  for (const ValidationCase& c : cases)
    worst = std::max({worst, c.err_pre_kick, c.err_post_kick, c.err_half_period});
  return worst;
}

std::string ValidationReport::to_json() const {
  nlohmann::ordered_json j;
  j["tier"] = tier == Tier::Fast ? "fast" : "accurate";
  j["x_grid"] = {{"min", x_min}, {"max", x_max}, {"count", x_count}};
  j["dt"] = dt;
  j["checkpoints"] = {{"pre_kick", t_pre}, {"post_kick", t_post}, {"half_period", t_half}};
  j["tolerance"] = tolerance;
  auto cases_json = nlohmann::ordered_json::array();
  for (const ValidationCase& c : cases) {
    nlohmann::ordered_json cj;
    cj["n"] = c.n;
    cj["err_pre_kick"] = c.err_pre_kick;
    cj["err_post_kick"] = c.err_post_kick;
    cj["err_half_period"] = c.err_half_period;
    cj["err_half_period_half_dt"] = c.err_half_period_fine;
    cj["kick_norm_mismatch"] = c.kick_norm_mismatch;
    cj["convergence_exponent"] = c.convergence_exponent ? nlohmann::ordered_json(*c.convergence_exponent)
                                                        : nlohmann::ordered_json(nullptr);
    cj["pass"] = c.pass;
    cases_json.push_back(cj);
  }
  j["cases"] = cases_json;
  j["max_error"] = max_error();
  j["pass"] = pass;
  if (!suggestion.empty()) j["suggestion"] = suggestion;
  return j.dump(2) + "\n";
}

namespace {

std::size_t next_power_of_two(double n) {
  std::size_t p = 2;
  while (static_cast<double>(p) < n) p <<= 1;
  return p;
}

struct CaseErrors {
  double pre;
  double post;
  double half;
  double norm_mismatch;
};

CaseErrors run_case(const Scenario& sc, int n, const ValidationReport& layout, double dt) {
  using namespace oracle;
  const OscillatorParams& params = sc.params;
  const double sigma0 = derive_scales(params).sigma0;
  GridState g = GridState::sample(layout.x_min, layout.x_max, layout.x_count, sc.tau,
                                  [&](double x) { return cplx(eigenfunction(n, x, sigma0), 0.0); });
  g = propagate_to(std::move(g), params, params.k, layout.t_pre, dt);

  const ReleasedState released(n, params, sc.tau, 0.0);
  CaseErrors e{};
  e.pre = compare([&](double x) { return released_amplitude(released, x, layout.t_pre); }, g);

  std::function<cplx(double, double)> closed;
  if (sc.mode == KickMode::Superposition) {
    KickResult kicked = apply_pointwise_kick(std::move(g), sc.kick.kappa(params.hbar), sc.kick.phi);
    auto state = std::make_shared<KickedState>(n, params, sc.tau, sc.kick);
    e.norm_mismatch = std::abs(4.0 * kicked.norm_before -
                               superposition_norm_sq(state->overlap(), sc.kick.phi));
    g = std::move(kicked.state);
    closed = [state](double x, double t) { return state->amplitude(x, t); };
  } else {
    g = apply_boost(std::move(g), sc.kick.p_gamma, params.hbar);
    auto state = std::make_shared<ReleasedState>(n, params, sc.tau, sc.kick.p_gamma);
    closed = [state](double x, double t) { return released_amplitude(*state, x, t); };
  }
  g = propagate_to(std::move(g), params, params.k, layout.t_post, dt);
  e.post = compare([&](double x) { return closed(x, layout.t_post); }, g);
  g = propagate_to(std::move(g), params, params.k, layout.t_half, dt);
  e.half = compare([&](double x) { return closed(x, layout.t_half); }, g);
  return e;
}

}  // namespace

ValidationReport validate_scenario(const Scenario& sc, Tier tier, unsigned threads,
                                   std::optional<int> max_level) {
  sc.validate_physics();
  const OscillatorParams& params = sc.params;
  const DerivedScales d = derive_scales(params);
  if (!params.free() && params.K0 / params.k > 1e4)
    fail(ErrorCode::InvalidArgument, "grid oracle limited to K0/k <= 1e4");

  ValidationReport r;
  r.tier = tier;
  r.t_pre = 0.0;
  if (params.free()) {
    if (!(sc.t_grid.max > 0.0))
      fail(ErrorCode::InvalidArgument, "free release needs a t_grid reaching past t = 0");
    r.t_post = 0.5 * sc.t_grid.max;
    r.t_half = sc.t_grid.max;
  } else {
    r.t_post = 0.25 * d.T_weak;
    r.t_half = 0.5 * d.T_weak;
  }

  const TrapSchedule schedule(params, sc.tau);
  double widest = d.sigma0;
  constexpr int kWidthSamples = 4096;
  for (int i = 0; i <= kWidthSamples; ++i) {
    const double t = sc.tau + (r.t_half - sc.tau) * i / kWidthSamples;
    widest = std::max(widest, std::abs(schedule.width(t).s));
  }
  const double displacement = params.free() ? sc.kick.p_gamma * r.t_half / params.mass
                                            : sc.kick.p_gamma / (params.mass * d.omega);
  const double half_range = 12.0 * widest + displacement;
  const double p_max = sc.kick.p_gamma + 12.0 * params.hbar / d.sigma0;
  const double dx_max = kPi * params.hbar / p_max;
  const std::size_t tier_count = tier == Tier::Fast ? 2048 : 4096;
  r.x_count = std::max(tier_count, next_power_of_two(2.0 * half_range / dx_max));
  if (r.x_count > (std::size_t{1} << 20))
    fail(ErrorCode::InvalidArgument,
         "scenario too large for the grid oracle (needs " + std::to_string(r.x_count) + " points)");
  r.x_min = -half_range;
  r.x_max = half_range;
  r.dt = 2.0 * kPi / d.Omega0 / (tier == Tier::Fast ? 256.0 : 4096.0);

  std::vector<int> levels;
  if (sc.pure_n) {
    levels.push_back(*sc.pure_n);
  } else {
    const int top = max_level ? std::min(*max_level, sc.cutoff) : sc.cutoff;
    for (int n = 0; n <= top; ++n) levels.push_back(n);
  }

  r.cases.resize(levels.size());
  std::vector<std::string> failures(levels.size());
  parallel_for(levels.size(), threads, [&](std::size_t i) {
    ValidationCase& c = r.cases[i];
    c.n = levels[i];
    try {
      const CaseErrors coarse = run_case(sc, c.n, r, r.dt);
      const CaseErrors fine = run_case(sc, c.n, r, 0.5 * r.dt);
      c.err_pre_kick = coarse.pre;
      c.err_post_kick = coarse.post;
      c.err_half_period = coarse.half;
      c.err_half_period_fine = fine.half;
      c.kick_norm_mismatch = coarse.norm_mismatch;
      if (fine.half > 1e-12 && coarse.half > 0.0)
        c.convergence_exponent = std::log2(coarse.half / fine.half);
      c.pass = std::max({c.err_pre_kick, c.err_post_kick, c.err_half_period}) < r.tolerance &&
               c.kick_norm_mismatch < r.tolerance;
    } catch (const Error& e) {
      if (e.code() == ErrorCode::DegenerateSuperposition) throw;
      c.err_pre_kick = c.err_post_kick = c.err_half_period = std::numeric_limits<double>::infinity();
      c.pass = false;
      failures[i] = e.what();
    }
  });

  r.pass = std::all_of(r.cases.begin(), r.cases.end(), [](const ValidationCase& c) { return c.pass; });
  if (!r.pass) {
    for (const std::string& f : failures)
      if (!f.empty()) {
        r.suggestion = f;
        return r;
      }
    const double worst = r.max_error();
    if (tier == Tier::Fast) {
      r.suggestion = "rerun with --tier accurate";
    } else {
      // second-order splitting: error scales with dt^2
      const double factor = std::sqrt(worst / r.tolerance) * 1.5;
      r.suggestion = "reduce the time step by a factor of about " + std::to_string(factor);
    }
  }
  return r;
}

}  // namespace thermalcat
