#include "thermalcat/oracle.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <string>

#include "thermalcat/error.hpp"

namespace thermalcat::oracle {
namespace {

// The FFTW planner is not thread-safe; execution on distinct buffers is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

class FftPair {
 public:
  explicit FftPair(std::span<cplx> buffer) {
    auto* data = reinterpret_cast<fftw_complex*>(buffer.data());
    const int n = static_cast<int>(buffer.size());
    std::lock_guard lock(planner_mutex());
    forward_ = fftw_plan_dft_1d(n, data, data, FFTW_FORWARD, FFTW_ESTIMATE);
    backward_ = fftw_plan_dft_1d(n, data, data, FFTW_BACKWARD, FFTW_ESTIMATE);
    if (!forward_ || !backward_) fail(ErrorCode::Numerical, "FFTW plan creation failed");
  }
  FftPair(const FftPair&) = delete;
  FftPair& operator=(const FftPair&) = delete;
  ~FftPair() {
    std::lock_guard lock(planner_mutex());
    if (forward_) fftw_destroy_plan(forward_);
    if (backward_) fftw_destroy_plan(backward_);
  }

  void forward() const { fftw_execute(forward_); }
  void backward() const { fftw_execute(backward_); }

 private:
  fftw_plan forward_ = nullptr;
  fftw_plan backward_ = nullptr;
};

double wavenumber(std::size_t j, std::size_t n, double dx) {
  const double base = 2.0 * kPi / (static_cast<double>(n) * dx);
  const auto signed_j = j < n / 2 ? static_cast<double>(j) : static_cast<double>(j) - n;
  return base * signed_j;
}

bool is_power_of_two(std::size_t n) { return n >= 2 && (n & (n - 1)) == 0; }

constexpr double kEdgeTolerance = 1e-8;

void check_edges(const GridState& state) {
  const double edge = state.relative_edge_amplitude();
  if (!(edge < kEdgeTolerance))
    fail(ErrorCode::GridTooSmall, "wave function reached the grid edge (relative amplitude " +
                                      std::to_string(edge) + "); enlarge the x range");
}

}  // namespace

GridState::GridState(double x_min, double x_max, std::size_t count, double time)
    : x_min_(x_min), time_(time) {
  if (!is_power_of_two(count))
    fail(ErrorCode::InvalidArgument, "grid point count must be a power of two");
  if (!(x_max > x_min)) fail(ErrorCode::InvalidArgument, "grid range must be increasing");
  dx_ = (x_max - x_min) / static_cast<double>(count);
  psi_.assign(count, cplx(0.0, 0.0));
}

double GridState::norm() const {
  double sum = 0.0;
  for (const cplx& a : psi_) sum += std::norm(a);
  return sum * dx_;
}

double GridState::normalize() {
  const double n = norm();
  if (n > 0.0) {
    const double scale = 1.0 / std::sqrt(n);
    for (cplx& a : psi_) a *= scale;
  }
  return n;
}

double GridState::relative_edge_amplitude() const {
  double peak = 0.0;
  for (const cplx& a : psi_) peak = std::max(peak, std::abs(a));
  if (peak == 0.0) return 0.0;
  return std::max(std::abs(psi_.front()), std::abs(psi_.back())) / peak;
}

GridState propagate(GridState state, const OscillatorParams& params, double k, double dt,
                    std::size_t steps) {
  if (!(dt > 0.0)) fail(ErrorCode::InvalidArgument, "time step must be positive");
  if (k < 0.0) fail(ErrorCode::InvalidArgument, "spring constant must be >= 0");
  if (steps == 0) return state;

  const std::size_t n = state.size();
  const double hbar = params.hbar;
  std::vector<cplx> half_potential(n), full_potential(n), kinetic(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double x = state.x(j);
    const double phase = 0.5 * k * x * x * dt / hbar;
    half_potential[j] = std::polar(1.0, -0.5 * phase);
    full_potential[j] = std::polar(1.0, -phase);
    const double kj = wavenumber(j, n, state.dx());
    kinetic[j] = std::polar(1.0 / static_cast<double>(n), -hbar * kj * kj * dt / (2.0 * params.mass));
  }

  std::span<cplx> psi = state.amplitudes();
  const FftPair fft(psi);
  const bool has_potential = k != 0.0;

  if (has_potential)
    for (std::size_t j = 0; j < n; ++j) psi[j] *= half_potential[j];
  for (std::size_t step = 0; step < steps; ++step) {
    fft.forward();
    for (std::size_t j = 0; j < n; ++j) psi[j] *= kinetic[j];
    fft.backward();
    if (has_potential) {
      const auto& v = step + 1 == steps ? half_potential : full_potential;
      for (std::size_t j = 0; j < n; ++j) psi[j] *= v[j];
    }
    if (step % 16 == 15) check_edges(state);
  }
  check_edges(state);
  state.set_time(state.time() + dt * static_cast<double>(steps));
  return state;
}

GridState propagate_to(GridState state, const OscillatorParams& params, double k, double t_end,
                       double dt_max) {
  const double span = t_end - state.time();
  if (span < 0.0) fail(ErrorCode::InvalidArgument, "cannot propagate backwards in time");
  if (span == 0.0) return state;
  const auto steps = static_cast<std::size_t>(std::ceil(span / dt_max - 1e-9));
  GridState out = propagate(std::move(state), params, k, span / static_cast<double>(steps), steps);
  out.set_time(t_end);
  return out;
}

double time_step_discrepancy(const GridState& state, const OscillatorParams& params, double k,
                             double dt, std::size_t steps) {
  const GridState coarse = propagate(state, params, k, dt, steps);
  const GridState fine = propagate(state, params, k, 0.5 * dt, 2 * steps);
  double sum = 0.0;
  for (std::size_t j = 0; j < coarse.size(); ++j)
    sum += std::norm(coarse.amplitudes()[j] - fine.amplitudes()[j]);
  return std::sqrt(sum * state.dx());
}

KickResult apply_pointwise_kick(GridState state, double kappa, double phi) {
  std::span<cplx> psi = state.amplitudes();
  for (std::size_t j = 0; j < psi.size(); ++j)
    psi[j] *= cplx(0.0, -std::sin(2.0 * kappa * state.x(j) - 0.5 * phi));
  const double before = state.norm();
  if (!(before >= 1e-12))
    fail(ErrorCode::DegenerateSuperposition, "kick annihilates the state (norm below 1e-12)");
  state.normalize();
  return {std::move(state), before};
}

GridState apply_boost(GridState state, double p, double hbar) {
  std::span<cplx> psi = state.amplitudes();
  for (std::size_t j = 0; j < psi.size(); ++j) psi[j] *= std::polar(1.0, p * state.x(j) / hbar);
  return state;
}

namespace {

double aligned_distance(std::span<const cplx> a, std::span<const cplx> b) {
  cplx inner(0.0, 0.0);
  double norm_a = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    inner += std::conj(b[j]) * a[j];
    norm_a += std::norm(a[j]);
  }
  const double mag = std::abs(inner);
  const cplx align = mag > 0.0 ? inner / mag : cplx(1.0, 0.0);
  double diff = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) diff += std::norm(a[j] - align * b[j]);
  if (norm_a == 0.0) return diff == 0.0 ? 0.0 : std::sqrt(diff);
  return std::sqrt(diff / norm_a);
}

}  // namespace

double compare(const std::function<cplx(double)>& closed_form, const GridState& grid) {
  std::vector<cplx> a(grid.size());
  for (std::size_t j = 0; j < a.size(); ++j) a[j] = closed_form(grid.x(j));
  return aligned_distance(a, grid.amplitudes());
}

double compare(const GridState& a, const GridState& b) {
  if (a.size() != b.size()) fail(ErrorCode::InvalidArgument, "grids differ in size");
  return aligned_distance(a.amplitudes(), b.amplitudes());
}

double energy(const GridState& state, const OscillatorParams& params, double k) {
  const std::size_t n = state.size();
  std::vector<cplx> work(state.amplitudes().begin(), state.amplitudes().end());
  double potential = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double x = state.x(j);
    potential += 0.5 * k * x * x * std::norm(work[j]);
  }
  const FftPair fft(work);
  // planning with FFTW_ESTIMATE leaves the buffer untouched
  fft.forward();
  double kinetic = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double kj = wavenumber(j, n, state.dx());
    kinetic += params.hbar * params.hbar * kj * kj / (2.0 * params.mass) * std::norm(work[j]);
  }
  const double dx = state.dx();
  const double norm = state.norm();
  return (kinetic * dx / static_cast<double>(n) + potential * dx) / norm;
}

}  // namespace thermalcat::oracle
