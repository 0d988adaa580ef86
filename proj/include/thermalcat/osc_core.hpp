#pragma once

#include <span>

namespace thermalcat {

inline constexpr double kPi = 3.14159265358979323846;

// CODATA 2018 exact values.
inline constexpr double kHbarSI = 1.054571817e-34;
inline constexpr double kBoltzmannSI = 1.380649e-23;

// Highest excitation index the unnormalized Hermite recurrence is trusted for.
inline constexpr int kMaxHermiteOrder = 64;

enum class UnitSystem { Natural, SI };

// Mirror mass and the two spring constants. The stiff trap K0 holds the
// mirror before release; k is the weak trap it is released into (0 = free).
struct OscillatorParams {
  double hbar = 1.0;
  double kB = 1.0;
  double mass = 1.0;
  double K0 = 1.0;
  double k = 0.0;
  UnitSystem units = UnitSystem::Natural;

  static OscillatorParams natural(double mass, double K0, double k);
  static OscillatorParams si(double mass, double K0, double k);

  // Throws ErrorCode::InvalidArgument unless hbar, kB, M, K0 > 0 and 0 <= k <= K0.
  void validate() const;

  bool free() const { return k == 0.0; }
};

struct DerivedScales {
  double sigma0;    // ground-state position spread of the stiff trap
  double Omega0;    // stiff-trap angular frequency
  double omega;     // weak-trap angular frequency (0 when free)
  double ThetaE;    // Einstein temperature hbar*Omega0/kB
  double v_expand;  // ballistic expansion velocity hbar/(sigma0*M)
  double T_weak;    // weak-trap period, +inf when free
};

DerivedScales derive_scales(const OscillatorParams& params);

// Physicists' Hermite polynomial H_n(x) from the three-term recurrence.
// Throws ErrorCode::Domain for n > kMaxHermiteOrder.
double hermite(int n, double x);

// log(sqrt(pi) * sigma0 * 2^n * n!), the squared normalization of psi_n.
double log_eigen_norm(int n, double sigma0);

// Stiff-trap eigenfunction psi_n(x). Exactly 0 beyond 40 sigma0.
double eigenfunction(int n, double x, double sigma0);

// Dimensionless normalized Hermite functions h_0..h_{out.size()-1} at y,
// h_n(y) = H_n(y) exp(-y^2/2) / sqrt(sqrt(pi) 2^n n!), filled by the stable
// normalized recurrence. Used by the batched amplitude kernels.
void hermite_functions(double y, std::span<double> out);

}  // namespace thermalcat
