#ifndef PHASEDIFF_HEISENBERG_HPP
#define PHASEDIFF_HEISENBERG_HPP

#include <memory>

#include "phasediff/field.hpp"
#include "phasediff/fourier.hpp"
#include "phasediff/hamiltonian.hpp"
#include "phasediff/hermite.hpp"
#include "phasediff/params.hpp"

namespace phasediff {

/// Eigenvalue of the gauge-transformed oscillator operator (per fiber) at
/// total mode index |j|: -(2|j| + n) ab/hbar. The |j| = 0 value -n ab/hbar
/// is the top of the spectrum.
double oscillator_eigenvalue(std::size_t total_index, const ModelParams& params);

/// Eigenvalue of the full diffusion operator (with the +abn/hbar term) on
/// mode |j|: -2|j| ab/hbar. Zero on the stationary subspace; the first
/// excited rung fixes the sharp relaxation rate 2ab/hbar.
double diffusion_eigenvalue(std::size_t total_index, const ModelParams& params);

/// Covariant derivative D_{x_k} = d/dx_k - i p_k/hbar (spectral + gauge term).
PhaseField apply_Dx(const FourierWorkspace& ws, const PhaseField& phi, std::size_t axis,
                    const ModelParams& params);
/// D_{p_k} = d/dp_k.
PhaseField apply_Dp(const FourierWorkspace& ws, const PhaseField& phi, std::size_t axis);

/// Diffusion operator
///   a^2 sum_k D_{x_k}^2 + b^2 sum_k d^2/dp_k^2 + ab n / hbar,
/// assembled from exactly Hermitian discrete pieces.
PhaseField apply_diffusion(const FourierWorkspace& ws, const PhaseField& phi,
                           const ModelParams& params);

/// Transport operator with precomputed Hamiltonian derivative tables:
///   A = sum_k (dH/dx_k d/dp_k - dH/dp_k d/dx_k) - (i/hbar)(H - sum_k p_k dH/dp_k).
class TransportOperator {
public:
  TransportOperator(const FourierWorkspace& ws, const HamiltonianSpec& hamiltonian,
                    const ModelParams& params);
  ~TransportOperator();
  TransportOperator(const TransportOperator&) = delete;
  TransportOperator& operator=(const TransportOperator&) = delete;

  PhaseField apply(const PhaseField& phi) const;

  /// Crude bound on the spectral radius (drives the CFL step bound).
  double spectral_rate() const;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// One-shot convenience form of TransportOperator::apply.
PhaseField apply_transport(const FourierWorkspace& ws, const PhaseField& phi,
                           const HamiltonianSpec& hamiltonian, const ModelParams& params);

struct TruncationError : std::runtime_error {
  TruncationError(const std::string& what, double discarded)
      : std::runtime_error(what), discarded_mass(discarded) {}
  double discarded_mass;
};

struct PropagateReport {
  double discarded_mass_fraction = 0.0;
};

/// Exact propagator of the diffusion semigroup e^{t Delta_{a,b}}: strips the
/// gauge, transforms p -> y, damps Hermite mode |j| by e^{-2|j| ab t/hbar},
/// and reassembles. Truncation is the only error source; discarded mass
/// above `trunc_tol` raises TruncationError.
class DiffusionPropagator {
public:
  DiffusionPropagator(const FourierWorkspace& ws, const ModelParams& params,
                      std::size_t hermite_cutoff = 64, double trunc_tol = 1e-9);
  ~DiffusionPropagator();
  DiffusionPropagator(const DiffusionPropagator&) = delete;
  DiffusionPropagator& operator=(const DiffusionPropagator&) = delete;

  PhaseField propagate(const PhaseField& phi, double t) const;
  PhaseField propagate(const PhaseField& phi, double t, PropagateReport* report) const;

  /// t -> infinity limit: the orthogonal projection onto the stationary
  /// subspace (mode 0 only).
  PhaseField project_stationary(const PhaseField& phi) const;

  const HermiteTransform& transform() const;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

} // namespace phasediff

#endif
