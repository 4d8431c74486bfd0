#include "phasediff/heisenberg.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace phasediff {

double oscillator_eigenvalue(std::size_t total_index, const ModelParams& params) {
  return -(2.0 * static_cast<double>(total_index) + static_cast<double>(params.dim)) *
         params.relaxation_rate();
}

double diffusion_eigenvalue(std::size_t total_index, const ModelParams& params) {
  return -2.0 * static_cast<double>(total_index) * params.relaxation_rate();
}

PhaseField apply_Dx(const FourierWorkspace& ws, const PhaseField& phi, std::size_t axis,
                    const ModelParams& params) {
  PhaseField out = ws.derivative_x(phi, axis, 1);
  const auto p_coord = coordinate_table(phi.grid.p_block(), axis);
  const std::size_t num_p = phi.grid.num_p();
  const cplx minus_i_over_hbar(0.0, -1.0 / params.hbar);
  for (std::size_t xi = 0; xi < phi.grid.num_x(); ++xi)
    for (std::size_t pi = 0; pi < num_p; ++pi)
      out.values[xi * num_p + pi] += minus_i_over_hbar * p_coord[pi] * phi.values[xi * num_p + pi];
  return out;
}

PhaseField apply_Dp(const FourierWorkspace& ws, const PhaseField& phi, std::size_t axis) {
  return ws.derivative_p(phi, axis, 1);
}

PhaseField apply_diffusion(const FourierWorkspace& ws, const PhaseField& phi,
                           const ModelParams& params) {
  const PhaseGrid& grid = phi.grid;
  const std::size_t num_p = grid.num_p();
  const double a2 = params.a * params.a;
  const double b2 = params.b * params.b;
  const double hbar = params.hbar;

  PhaseField out = PhaseField::zero(grid);
  for (std::size_t k = 0; k < grid.dim(); ++k) {
    const PhaseField d1 = ws.derivative_x(phi, k, 1);
    const PhaseField d2 = ws.derivative_x(phi, k, 2);
    const PhaseField dp2 = ws.derivative_p(phi, k, 2);
    const auto p_coord = coordinate_table(grid.p_block(), k);
    const cplx two_i_over_hbar(0.0, 2.0 / hbar);
    for (std::size_t xi = 0; xi < grid.num_x(); ++xi) {
      for (std::size_t pi = 0; pi < num_p; ++pi) {
        const std::size_t idx = xi * num_p + pi;
        const double p = p_coord[pi];
        out.values[idx] += a2 * (d2.values[idx] - two_i_over_hbar * p * d1.values[idx] -
                                 (p * p / (hbar * hbar)) * phi.values[idx]) +
                           b2 * dp2.values[idx];
      }
    }
  }
  const double compensation =
      params.a * params.b * static_cast<double>(grid.dim()) / hbar;
  for (std::size_t i = 0; i < out.values.size(); ++i)
    out.values[i] += compensation * phi.values[i];
  return out;
}

struct TransportOperator::Impl {
  const FourierWorkspace* ws;
  ModelParams params;
  std::vector<std::vector<double>> dHdx; // per axis, per node
  std::vector<std::vector<double>> dHdp;
  std::vector<double> phase_fn; // H - sum_k p_k dH/dp_k per node
  double rate = 0.0;
};

TransportOperator::TransportOperator(const FourierWorkspace& ws,
                                     const HamiltonianSpec& hamiltonian,
                                     const ModelParams& params)
    : impl_(std::make_unique<Impl>()) {
  impl_->ws = &ws;
  impl_->params = params;
  const PhaseGrid& grid = ws.grid();
  const std::size_t n = grid.dim();
  const std::size_t num_x = grid.num_x();
  const std::size_t num_p = grid.num_p();

  impl_->dHdx.assign(n, std::vector<double>(grid.size()));
  impl_->dHdp.assign(n, std::vector<double>(grid.size()));
  impl_->phase_fn.assign(grid.size(), 0.0);

  std::vector<std::size_t> xi_idx(n), pi_idx(n);
  std::vector<double> x(n), p(n);
  double max_phase = 0.0;
  std::vector<double> max_dHdx(n, 0.0), max_dHdp(n, 0.0);
  for (std::size_t xi = 0; xi < num_x; ++xi) {
    grid.x_block().unflatten(xi, xi_idx.data());
    for (std::size_t k = 0; k < n; ++k) x[k] = grid.x_axis(k).value(xi_idx[k]);
    for (std::size_t pi = 0; pi < num_p; ++pi) {
      grid.p_block().unflatten(pi, pi_idx.data());
      for (std::size_t k = 0; k < n; ++k) p[k] = grid.p_axis(k).value(pi_idx[k]);
      const std::size_t idx = xi * num_p + pi;
      double h = hamiltonian.value(x, p);
      double phase = h;
      for (std::size_t k = 0; k < n; ++k) {
        const double gx = hamiltonian.ddx(x, p, k);
        const double gp = hamiltonian.ddp(x, p, k);
        impl_->dHdx[k][idx] = gx;
        impl_->dHdp[k][idx] = gp;
        phase -= p[k] * gp;
        max_dHdx[k] = std::max(max_dHdx[k], std::abs(gx));
        max_dHdp[k] = std::max(max_dHdp[k], std::abs(gp));
      }
      impl_->phase_fn[idx] = phase;
      max_phase = std::max(max_phase, std::abs(phase));
    }
  }

  double rate = max_phase / params.hbar;
  for (std::size_t k = 0; k < n; ++k) {
    rate += max_dHdx[k] * std::numbers::pi / grid.p_axis(k).spacing;
    rate += max_dHdp[k] * std::numbers::pi / grid.x_axis(k).spacing;
  }
  impl_->rate = rate;
}

TransportOperator::~TransportOperator() = default;

double TransportOperator::spectral_rate() const { return impl_->rate; }

PhaseField TransportOperator::apply(const PhaseField& phi) const {
  const FourierWorkspace& ws = *impl_->ws;
  if (phi.grid != ws.grid()) throw GridMismatchError("TransportOperator: field grid mismatch");
  const std::size_t n = phi.grid.dim();
  PhaseField out = PhaseField::zero(phi.grid);
  for (std::size_t k = 0; k < n; ++k) {
    const PhaseField dphi_dp = ws.derivative_p(phi, k, 1);
    const PhaseField dphi_dx = ws.derivative_x(phi, k, 1);
    const auto& gx = impl_->dHdx[k];
    const auto& gp = impl_->dHdp[k];
    for (std::size_t i = 0; i < out.values.size(); ++i)
      out.values[i] += gx[i] * dphi_dp.values[i] - gp[i] * dphi_dx.values[i];
  }
  const cplx minus_i_over_hbar(0.0, -1.0 / impl_->params.hbar);
  for (std::size_t i = 0; i < out.values.size(); ++i)
    out.values[i] += minus_i_over_hbar * impl_->phase_fn[i] * phi.values[i];
  return out;
}

PhaseField apply_transport(const FourierWorkspace& ws, const PhaseField& phi,
                           const HamiltonianSpec& hamiltonian, const ModelParams& params) {
  TransportOperator op(ws, hamiltonian, params);
  return op.apply(phi);
}

struct DiffusionPropagator::Impl {
  const FourierWorkspace* ws;
  ModelParams params;
  double trunc_tol;
  std::unique_ptr<HermiteTransform> transform;
};

DiffusionPropagator::DiffusionPropagator(const FourierWorkspace& ws, const ModelParams& params,
                                         std::size_t hermite_cutoff, double trunc_tol)
    : impl_(std::make_unique<Impl>()) {
  impl_->ws = &ws;
  impl_->params = params;
  impl_->trunc_tol = trunc_tol;
  impl_->transform = std::make_unique<HermiteTransform>(ws.grid(), params, hermite_cutoff);
}

DiffusionPropagator::~DiffusionPropagator() = default;

const HermiteTransform& DiffusionPropagator::transform() const { return *impl_->transform; }

PhaseField DiffusionPropagator::propagate(const PhaseField& phi, double t) const {
  PropagateReport report;
  PhaseField out = propagate(phi, t, &report);
  if (report.discarded_mass_fraction > impl_->trunc_tol)
    throw TruncationError("DiffusionPropagator: Hermite truncation discarded mass fraction " +
                              std::to_string(report.discarded_mass_fraction),
                          report.discarded_mass_fraction);
  return out;
}

PhaseField DiffusionPropagator::propagate(const PhaseField& phi, double t,
                                          PropagateReport* report) const {
  if (t < 0.0) throw std::invalid_argument("DiffusionPropagator: t must be >= 0");
  const FourierWorkspace& ws = *impl_->ws;
  const double rate = impl_->params.relaxation_rate();
  MixedField psi0 = ws.to_mixed(ws.gauge_strip(phi));
  const double discarded = impl_->transform->apply_mode_factor(psi0, [rate, t](std::size_t j) {
    return cplx(std::exp(-2.0 * static_cast<double>(j) * rate * t), 0.0);
  });
  if (report) report->discarded_mass_fraction = discarded;
  return ws.gauge_apply(ws.from_mixed(psi0));
}

PhaseField DiffusionPropagator::project_stationary(const PhaseField& phi) const {
  const FourierWorkspace& ws = *impl_->ws;
  MixedField psi0 = ws.to_mixed(ws.gauge_strip(phi));
  const ConfigField c0 = impl_->transform->mode_zero_coefficients(psi0);
  const MixedField ground =
      impl_->transform->synthesize_single(c0, std::vector<std::size_t>(phi.grid.dim(), 0));
  return ws.gauge_apply(ws.from_mixed(ground));
}

} // namespace phasediff
