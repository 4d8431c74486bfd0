#ifndef PHASEDIFF_OBSERVABLES_HPP
#define PHASEDIFF_OBSERVABLES_HPP

#include <cmath>
#include <functional>
#include <numbers>

#include "phasediff/field.hpp"
#include "phasediff/params.hpp"
#include "phasediff/quantization.hpp"

namespace phasediff {

using PhaseFunction = std::function<double(double x, double p)>;

/// Average of F(x,p) against the W' density
///   W'_psi = (2 pi hbar)^{-n} int psi(x) psi*(y) e^{i(y-x)p/hbar} dy,
/// evaluated on the grid (n = 1). Complex in general.
cplx average_W(const PhaseFunction& f, const ConfigField& psi, const ModelParams& params);

/// Average of F(x,p) against the nonnegative density rho_psi = |lift psi|^2.
double average_rho(const PhaseFunction& f, const ConfigField& psi, const ModelParams& params,
                   const QuantizationMap& qmap);

/// Classical configuration-space average int F(x, 0) |psi(x)|^2 dx (the
/// hbar -> 0 limit of average_W).
double classical_average(const PhaseFunction& f, const ConfigField& psi);

/// CGS-Gaussian constants used by the parameter-estimate pipeline.
struct PhysicalConstants {
  double hbar = 1.054571817e-27;     ///< erg s
  double c = 2.99792458e10;          ///< cm/s
  double electron_mass = 9.1093837015e-28; ///< g
  double k_boltzmann = 1.380649e-16; ///< erg/K
  double fine_structure = 7.2973525693e-3; ///< e^2/(hbar c)

  double planck() const { return 2.0 * std::numbers::pi * hbar; }
  /// Compton wavelength hbar/(m c) in cm.
  double compton_length() const { return hbar / (electron_mass * c); }
};

/// Thermal parameters of the diffusion (Langevin/Fokker-Planck closure).
struct ThermalParams {
  double temperature = 0.0; ///< K
  double gamma = 0.0;       ///< friction per unit mass, 1/s
  double a_sq = 0.0;        ///< kT/(m gamma)
  double b_sq = 0.0;        ///< gamma kT m
  double ab = 0.0;          ///< = kT
  double a_over_b = 0.0;    ///< = 1/(gamma m)
  double transition_time = 0.0; ///< hbar/(kT)
};

/// First-order level shift delta E_n = -(a/b) m^3 alpha^4 c^4 / (n^3 hbar)
/// for the Coulomb problem (CGS units; a_over_b in s/g).
double delta_E_n(int n_level, double a_over_b, const PhysicalConstants& constants);

/// Inversion of delta_E_n at n = 2: a/b = |delta E| n^3 hbar/(m^3 alpha^4 c^4).
/// `delta_e_magnitude` in erg; result in s/g.
double invert_lamb_shift(double delta_e_magnitude, const PhysicalConstants& constants,
                         int n_level = 2);

/// Gaussian smoothing width sqrt(a hbar/(2b)) in cm for a/b in s/g.
double smoothing_width_cm(double a_over_b_s_per_g, const PhysicalConstants& constants);

/// Thermal coefficients at temperature T for a/b given in s/kg (SI output:
/// a^2 in m^2/s, b^2 in (kg m/s)^2/s).
ThermalParams thermal_params(double temperature_kelvin, double a_over_b_s_per_kg,
                             const PhysicalConstants& constants);

} // namespace phasediff

#endif
