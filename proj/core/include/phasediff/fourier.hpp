#ifndef PHASEDIFF_FOURIER_HPP
#define PHASEDIFF_FOURIER_HPP

#include <memory>
#include <vector>

#include "phasediff/field.hpp"
#include "phasediff/grid.hpp"

namespace phasediff {

/// Coordinate of axis `k` for every flat index of the block.
std::vector<double> coordinate_table(const ConfigGrid& block, std::size_t axis);

/// FFT plans and phase tables for one phase grid at a fixed hbar.
///
/// The p <-> y transforms match the continuum kernels
///   psi0(x,y) = (2 pi hbar)^{-n/2} int phi0(x,p) e^{+i y p / hbar} dp
///   phi0(x,p) = (2 pi hbar)^{-n/2} int psi0(x,y) e^{-i y p / hbar} dy
/// on centered grids via pre/post phase correction, so the pair is an exact
/// inverse and Parseval holds to machine precision.
///
/// A workspace keeps internal scratch buffers; use one instance per thread.
class FourierWorkspace {
public:
  FourierWorkspace(const PhaseGrid& grid, double hbar);
  ~FourierWorkspace();
  FourierWorkspace(const FourierWorkspace&) = delete;
  FourierWorkspace& operator=(const FourierWorkspace&) = delete;

  const PhaseGrid& grid() const;
  double hbar() const;

  /// phi -> phi0 = phi * e^{-i x p / hbar}
  PhaseField gauge_strip(const PhaseField& phi) const;
  /// phi0 -> phi = phi0 * e^{+i x p / hbar}
  PhaseField gauge_apply(const PhaseField& phi0) const;

  /// p -> y transform of a gauge-stripped field. Warns when the field does
  /// not decay below `decay_tol` at the p boundary (pass 0 to skip).
  MixedField to_mixed(const PhaseField& phi0, double decay_tol = 0.0) const;
  PhaseField from_mixed(const MixedField& psi0) const;

  /// Spectral derivative along coordinate axis k (order 1 or 2). The order-1
  /// multiplier zeroes the Nyquist mode so the operator stays exactly skew.
  PhaseField derivative_x(const PhaseField& f, std::size_t axis, int order = 1) const;
  PhaseField derivative_p(const PhaseField& f, std::size_t axis, int order = 1) const;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Same transform pair on a configuration grid: psi(y) <-> psi~(p) with
/// psi~(p) = (2 pi hbar)^{-n/2} int psi(y) e^{-i y p / hbar} dy.
class ConfigFourier {
public:
  ConfigFourier(const ConfigGrid& grid, double hbar);
  ~ConfigFourier();
  ConfigFourier(const ConfigFourier&) = delete;
  ConfigFourier& operator=(const ConfigFourier&) = delete;

  const ConfigGrid& grid() const;
  const ConfigGrid& momentum_grid() const;
  double hbar() const;

  ConfigField to_momentum(const ConfigField& psi) const;
  ConfigField from_momentum(const ConfigField& psi_tilde) const;

  ConfigField derivative(const ConfigField& f, std::size_t axis, int order) const;

  /// Apply a diagonal multiplier in momentum space: psi <- F^{-1}[m(p) F psi].
  /// The multiplier is evaluated on mechanical momenta hbar*kappa.
  ConfigField apply_momentum_multiplier(const ConfigField& psi,
                                        const std::vector<cplx>& multiplier) const;

  /// Mechanical momentum hbar*kappa_k for every flat index of the grid,
  /// in DFT frequency layout (used to build multipliers).
  std::vector<double> momentum_table(std::size_t axis) const;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

} // namespace phasediff

#endif
