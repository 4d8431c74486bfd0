#include "phasediff/observables.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "phasediff/fourier.hpp"

namespace phasediff {

cplx average_W(const PhaseFunction& f, const ConfigField& psi, const ModelParams& params) {
  if (psi.grid.dim() != 1)
    throw std::invalid_argument("average_W: only n = 1 grids are supported");
  require_finite(psi, "average_W");
  // W'(x,p) = (2 pi hbar)^{-1/2} psi(x) psi~*(p) e^{-i x p/hbar}
  const ConfigFourier cf(psi.grid, params.hbar);
  const ConfigField psi_tilde = cf.to_momentum(psi);
  const ConfigGrid& xg = psi.grid;
  const ConfigGrid& pg = cf.momentum_grid();
  const double weight = xg.cell_volume() * pg.cell_volume() /
                        std::sqrt(2.0 * std::numbers::pi * params.hbar);
  cplx acc(0.0, 0.0);
  for (std::size_t xi = 0; xi < xg.size(); ++xi) {
    const double x = xg.axis(0).value(xi);
    for (std::size_t pi = 0; pi < pg.size(); ++pi) {
      const double p = pg.axis(0).value(pi);
      acc += f(x, p) * psi.values[xi] * std::conj(psi_tilde.values[pi]) *
             std::polar(1.0, -x * p / params.hbar);
    }
  }
  return acc * weight;
}

double average_rho(const PhaseFunction& f, const ConfigField& psi, const ModelParams& params,
                   const QuantizationMap& qmap) {
  (void)params;
  const DensityField rho = qmap.rho_phase(psi);
  const AxisSpec& xa = rho.axes[0];
  const AxisSpec& pa = rho.axes[1];
  double acc = 0.0;
  for (std::size_t xi = 0; xi < xa.n; ++xi) {
    const double x = xa.value(xi);
    for (std::size_t pi = 0; pi < pa.n; ++pi)
      acc += f(x, pa.value(pi)) * rho.values[xi * pa.n + pi];
  }
  return acc * xa.spacing * pa.spacing;
}

double classical_average(const PhaseFunction& f, const ConfigField& psi) {
  double acc = 0.0;
  for (std::size_t i = 0; i < psi.values.size(); ++i)
    acc += f(psi.grid.axis(0).value(i), 0.0) * std::norm(psi.values[i]);
  return acc * psi.grid.cell_volume();
}

double delta_E_n(int n_level, double a_over_b, const PhysicalConstants& constants) {
  if (n_level < 1) throw std::invalid_argument("delta_E_n: n_level must be >= 1");
  const double m = constants.electron_mass;
  const double alpha = constants.fine_structure;
  const double n3 = std::pow(static_cast<double>(n_level), 3);
  return -a_over_b * m * m * m * std::pow(alpha, 4) * std::pow(constants.c, 4) /
         (n3 * constants.hbar);
}

double invert_lamb_shift(double delta_e_magnitude, const PhysicalConstants& constants,
                         int n_level) {
  if (!(delta_e_magnitude > 0.0))
    throw std::invalid_argument("invert_lamb_shift: shift magnitude must be > 0");
  const double m = constants.electron_mass;
  const double alpha = constants.fine_structure;
  const double n3 = std::pow(static_cast<double>(n_level), 3);
  return delta_e_magnitude * n3 * constants.hbar /
         (m * m * m * std::pow(alpha, 4) * std::pow(constants.c, 4));
}

double smoothing_width_cm(double a_over_b_s_per_g, const PhysicalConstants& constants) {
  return std::sqrt(a_over_b_s_per_g * constants.hbar / 2.0);
}

ThermalParams thermal_params(double temperature_kelvin, double a_over_b_s_per_kg,
                             const PhysicalConstants& constants) {
  if (!(temperature_kelvin > 0.0))
    throw std::invalid_argument("thermal_params: temperature must be > 0");
  ThermalParams out;
  out.temperature = temperature_kelvin;
  out.a_over_b = a_over_b_s_per_kg;
  // SI values derived from the CGS table at the boundary.
  const double k_si = constants.k_boltzmann * 1e-7;       // J/K
  const double m_si = constants.electron_mass * 1e-3;     // kg
  const double hbar_si = constants.hbar * 1e-7;           // J s
  out.gamma = 1.0 / (a_over_b_s_per_kg * m_si);
  const double kt = k_si * temperature_kelvin;
  out.a_sq = kt / (m_si * out.gamma);
  out.b_sq = out.gamma * kt * m_si;
  out.ab = std::sqrt(out.a_sq * out.b_sq);
  out.transition_time = hbar_si / kt;
  return out;
}

} // namespace phasediff
