#ifndef PHASEDIFF_QUANTIZATION_HPP
#define PHASEDIFF_QUANTIZATION_HPP

#include "phasediff/field.hpp"
#include "phasediff/fourier.hpp"
#include "phasediff/hermite.hpp"
#include "phasediff/params.hpp"

namespace phasediff {

/// The Gaussian kernel chi(u) = (b/(a pi hbar))^{n/4} e^{-b u^2/(2 a hbar)}
/// defining the lift; chi^2 is a normal density with per-axis variance
/// a hbar/(2b).
struct ChiKernel {
  ModelParams params;

  double scale() const { return params.chi_scale(); }
  double variance() const { return params.smoothing_variance(); }
  /// chi(u) for a displacement vector u (any dimension = params.dim).
  double value(const std::vector<double>& u) const;
  double value1d(double u) const; ///< n = 1 convenience
  /// chi^2 as a function of one displacement (n = 1).
  double squared1d(double u) const { return value1d(u) * value1d(u); }
};

// Free-function forms over caller-owned transform contexts (the evolvers
// share one FourierWorkspace/HermiteTransform pair across many calls).
PhaseField lift(const FourierWorkspace& ws, const HermiteTransform& transform,
                const ConfigField& psi);
ConfigField extract(const FourierWorkspace& ws, const HermiteTransform& transform,
                    const PhaseField& phi);
PhaseField project_p0(const FourierWorkspace& ws, const HermiteTransform& transform,
                      const PhaseField& phi);

/// Shared transform context for the configuration <-> phase space maps.
class QuantizationMap {
public:
  QuantizationMap(const PhaseGrid& grid, const ModelParams& params,
                  std::size_t hermite_cutoff = 64);

  const PhaseGrid& grid() const { return ws_.grid(); }
  const ModelParams& params() const { return params_; }
  const FourierWorkspace& workspace() const { return ws_; }
  const HermiteTransform& transform() const { return transform_; }

  /// Theorem-1 lift: phi0(x,p) = (2 pi hbar)^{-n/2} int psi(y) chi(x-y)
  /// e^{-i(y-x)p/hbar} dy. An isometry onto the stationary subspace.
  PhaseField lift(const ConfigField& psi) const;

  /// Left inverse of the lift: psi(y) = (2 pi hbar)^{-n/2}
  /// int phi(x,p) e^{i(y-x)p/hbar} chi(x-y) dp dx.
  ConfigField extract(const PhaseField& phi) const;

  /// P0 = lift o extract (the production path, two transform passes).
  PhaseField project_p0(const PhaseField& phi) const;

  /// Theorem-2 kernel form of P0 (dense double integral over the grid);
  /// the O(N^2) validation path for the composition form.
  PhaseField project_p0_kernel(const PhaseField& phi) const;

  /// Nonnegative phase-space density rho(x,p) = |lift psi|^2.
  DensityField rho_phase(const ConfigField& psi) const;

  /// Configuration-space density rho(x) = int |psi(y)|^2 chi^2(x-y) dy
  /// (Gaussian smoothing of |psi|^2).
  DensityField rho_config(const ConfigField& psi) const;

  /// Momentum marginal int rho(x,p) dp of rho_phase, on the x grid.
  DensityField rho_phase_x_marginal(const ConfigField& psi) const;

private:
  ModelParams params_;
  FourierWorkspace ws_;
  HermiteTransform transform_;
};

/// Wigner quasi-distribution
///   W(x,p) = (2 pi hbar)^{-n} int psi(x-u/2) psi*(x+u/2) e^{i u p/hbar} du,
/// sampled on the x grid and the half-spaced momentum grid natural to the
/// doubled phase (can be negative). n = 1 only.
DensityField wigner(const ConfigField& psi, const ModelParams& params);

/// Momentum marginal int W dp on the x grid (equals |psi(x)|^2).
DensityField wigner_x_marginal(const DensityField& w);

} // namespace phasediff

#endif
