#ifndef PHASEDIFF_ORACLES_HPP
#define PHASEDIFF_ORACLES_HPP

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "phasediff/field.hpp"
#include "phasediff/fourier.hpp"
#include "phasediff/hamiltonian.hpp"
#include "phasediff/params.hpp"

namespace phasediff {

struct IdentityCheck {
  std::string name;
  cplx measured{0.0, 0.0};
  cplx expected{0.0, 0.0};
  double error = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct IdentityReport {
  std::vector<IdentityCheck> checks;
  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

/// Verify every closed form in Lemma 1 by quadrature: the chi-tilde formula,
/// both transform round trips, the shifted-kernel identities, the
/// factorization, the derivative relations, all second moments, and the
/// cross moments (the off-diagonal zero evaluated per axis at n = 2).
/// Oscillatory double integrals are evaluated with nested Gauss rules whose
/// order scales with `order_scale` (the doubling self-check).
IdentityReport verify_lemma1(const ModelParams& params, double tol = 1e-6,
                             std::size_t order_scale = 1);

/// Verify the 16 integrals of Lemma 2 against the kernel D. Zero targets use
/// an absolute tolerance scaled by the matching nonzero moment.
IdentityReport verify_lemma2(const ModelParams& params, double tol = 1e-6,
                             std::size_t order_scale = 1);

enum class OperatorKind { diffusion, transport, projector, full_generator };

/// Dense matrix of a transform-based operator over a flattened small grid,
/// assembled column by column (guarded to <= 2048 nodes).
struct DenseOperator {
  OperatorKind kind;
  Eigen::MatrixXcd matrix;
};

DenseOperator dense_generator(OperatorKind kind, const HamiltonianSpec& hamiltonian,
                              const ModelParams& params, const PhaseGrid& small_grid,
                              std::size_t hermite_cutoff = 0);

/// phi(t) = e^{t L} phi(0) by scaling-and-squaring matrix exponential.
PhaseField expm_propagate(const DenseOperator& op, double t, const PhaseField& phi);

/// Dense local-form effective Hamiltonian on a configuration grid (for
/// eigenvalue cross-checks).
Eigen::MatrixXcd dense_hatH_local(const ConfigGrid& grid, const HamiltonianSpec& hamiltonian,
                                  const ModelParams& params);

} // namespace phasediff

#endif
