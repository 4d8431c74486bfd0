#include "phasediff/dynamics.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "phasediff/quadrature.hpp"
#include "phasediff/quantization.hpp"
#include "phasediff/random_states.hpp"
#include "phasediff/warnings.hpp"

namespace phasediff {

namespace {

using Apply = std::function<PhaseField(const PhaseField&)>;

PhaseField rk4_step(const Apply& f, const PhaseField& phi, double dt) {
  const PhaseField k1 = f(phi);
  PhaseField stage = axpy(cplx(0.5 * dt, 0.0), k1, phi);
  const PhaseField k2 = f(stage);
  stage = axpy(cplx(0.5 * dt, 0.0), k2, phi);
  const PhaseField k3 = f(stage);
  stage = axpy(cplx(dt, 0.0), k3, phi);
  const PhaseField k4 = f(stage);
  PhaseField out = phi;
  const double w = dt / 6.0;
  for (std::size_t i = 0; i < out.values.size(); ++i)
    out.values[i] += w * (k1.values[i] + 2.0 * k2.values[i] + 2.0 * k3.values[i] + k4.values[i]);
  return out;
}

double diffusion_spectral_rate(const PhaseGrid& grid, const ModelParams& params) {
  double rate = params.a * params.b * static_cast<double>(grid.dim()) / params.hbar;
  for (std::size_t k = 0; k < grid.dim(); ++k) {
    const double kx = std::numbers::pi / grid.x_axis(k).spacing;
    const double kp = std::numbers::pi / grid.p_axis(k).spacing;
    const double p_max = std::max(std::abs(grid.p_axis(k).origin),
                                  std::abs(grid.p_axis(k).value(grid.p_axis(k).n - 1)));
    rate += params.a * params.a * (kx + p_max / params.hbar) * (kx + p_max / params.hbar);
    rate += params.b * params.b * kp * kp;
  }
  return rate;
}

void check_boundary(const PhaseField& phi, double decay_tol, double t) {
  const double boundary = boundary_max_abs(phi);
  if (boundary > decay_tol) {
    std::ostringstream msg;
    msg << "evolve_full: boundary magnitude " << boundary << " exceeds decay tolerance "
        << decay_tol << " at t = " << t;
    throw BoundaryDecayError(msg.str());
  }
}

std::vector<double> effective_potential_table(const ConfigGrid& grid, const SeparableForm& sep,
                                              const ModelParams& params) {
  const std::size_t dim = grid.dim();
  const double correction = params.a * params.hbar / (4.0 * params.b);
  const double constant = 3.0 * static_cast<double>(dim) * params.b * params.hbar /
                          (4.0 * sep.mass * params.a);
  std::vector<double> table(grid.size());
  std::vector<std::size_t> idx(dim);
  std::vector<double> y(dim);
  for (std::size_t flat = 0; flat < table.size(); ++flat) {
    grid.unflatten(flat, idx.data());
    for (std::size_t k = 0; k < dim; ++k) y[k] = grid.axis(k).value(idx[k]);
    double v2 = 0.0;
    for (std::size_t k = 0; k < dim; ++k) v2 += sep.potential_d2(y, k);
    table[flat] = sep.potential(y) - correction * v2 + constant;
  }
  return table;
}

} // namespace

PhaseField evolve_full(const FourierWorkspace& ws, const PhaseField& phi0,
                       const HamiltonianSpec& hamiltonian, const ModelParams& params,
                       const EvolutionConfig& cfg, const PhaseObserver& observer) {
  if (phi0.grid != ws.grid()) throw GridMismatchError("evolve_full: field not on workspace grid");
  if (!(cfg.dt > 0.0) || !(cfg.t_end >= 0.0))
    throw std::invalid_argument("evolve_full: dt and t_end must be positive");
  require_finite(phi0, "evolve_full");

  const std::size_t steps = (cfg.t_end == 0.0)
                                ? 0
                                : static_cast<std::size_t>(std::ceil(cfg.t_end / cfg.dt - 1e-12));
  const double dt = (steps == 0) ? 0.0 : cfg.t_end / static_cast<double>(steps);

  const TransportOperator transport(ws, hamiltonian, params);
  double rate = transport.spectral_rate();
  if (cfg.stepper == Stepper::rk4_generator)
    rate += diffusion_spectral_rate(ws.grid(), params);
  if (steps > 0 && dt * rate > cfg.cfl_max) {
    std::ostringstream msg;
    msg << "evolve_full: dt * spectral rate = " << dt * rate << " exceeds cfl_max = "
        << cfg.cfl_max << " (reduce dt below " << cfg.cfl_max / rate << ")";
    throw CflError(msg.str());
  }

  std::unique_ptr<DiffusionPropagator> diffusion;
  if (cfg.stepper == Stepper::strang)
    diffusion = std::make_unique<DiffusionPropagator>(ws, params, cfg.hermite_cutoff,
                                                      cfg.trunc_tol);

  const Apply transport_apply = [&](const PhaseField& f) { return transport.apply(f); };
  const Apply full_apply = [&](const PhaseField& f) {
    PhaseField out = transport.apply(f);
    const PhaseField d = apply_diffusion(ws, f, params);
    for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] += d.values[i];
    return out;
  };

  PhaseField phi = phi0;
  if (observer) observer(0.0, phi);
  for (std::size_t step = 1; step <= steps; ++step) {
    if (cfg.stepper == Stepper::strang) {
      phi = diffusion->propagate(phi, 0.5 * dt);
      phi = rk4_step(transport_apply, phi, dt);
      phi = diffusion->propagate(phi, 0.5 * dt);
    } else {
      phi = rk4_step(full_apply, phi, dt);
    }
    if (step % cfg.record_every == 0 || step == steps) {
      const double t = dt * static_cast<double>(step);
      check_boundary(phi, cfg.decay_tol, t);
      if (observer) observer(t, phi);
    }
  }
  return phi;
}

ConfigField apply_hatH_local(const ConfigFourier& cf, const ConfigField& psi,
                             const SeparableForm& sep, const ModelParams& params) {
  const ConfigGrid& grid = psi.grid;
  ConfigField out = ConfigField::zero(grid);
  const double kin = -params.hbar * params.hbar / (2.0 * sep.mass);
  for (std::size_t k = 0; k < grid.dim(); ++k) {
    const ConfigField d2 = cf.derivative(psi, k, 2);
    for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] += kin * d2.values[i];
  }
  const auto veff = effective_potential_table(grid, sep, params);
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] += veff[i] * psi.values[i];
  return out;
}

std::vector<double> smoothed_potential_table(const ConfigGrid& grid,
                                             const HamiltonianSpec& hamiltonian,
                                             const ModelParams& params) {
  const SeparableForm& sep = hamiltonian.separable();
  const std::size_t dim = grid.dim();
  const double sigma2 = params.smoothing_variance();
  const double sigma = std::sqrt(sigma2);
  const double box = 8.5 * sigma;

  std::vector<double> table(grid.size());
  std::vector<std::size_t> idx(dim);
  std::vector<double> y(dim), point(dim);
  const double norm1d = 1.0 / std::sqrt(2.0 * std::numbers::pi * sigma2);
  for (std::size_t flat = 0; flat < table.size(); ++flat) {
    grid.unflatten(flat, idx.data());
    for (std::size_t k = 0; k < dim; ++k) y[k] = grid.axis(k).value(idx[k]);
    const auto integrand = [&](const std::vector<double>& u) -> cplx {
      double weight = 1.0;
      for (std::size_t k = 0; k < dim; ++k) {
        weight *= norm1d * std::exp(-u[k] * u[k] / (2.0 * sigma2));
        point[k] = y[k] + u[k];
      }
      double value = sep.potential(point);
      for (std::size_t k = 0; k < dim; ++k) value -= sep.potential_d1(point, k) * u[k];
      return cplx(value * weight, 0.0);
    };
    const double scale = 1.0 + std::abs(sep.potential(y));
    if (dim == 1) {
      const QuadResult r = quad_1d([&](double u) { return integrand({u}); }, -box, box,
                                   1e-12 * scale);
      table[flat] = r.value.real();
    } else {
      const std::vector<double> lo(dim, -box), hi(dim, box);
      table[flat] = quad_nd(integrand, lo, hi, 1e-10 * scale).value.real();
    }
  }
  return table;
}

ConfigField apply_hatH_integral(const ConfigFourier& cf, const ConfigField& psi,
                                const HamiltonianSpec& hamiltonian, const ModelParams& params) {
  if (!hamiltonian.is_separable())
    throw std::invalid_argument(
        "apply_hatH_integral: requires H = p^2/2m + V(x); polynomial momentum dependence "
        "only reduces analytically for the separable form");
  const SeparableForm& sep = hamiltonian.separable();
  const ConfigGrid& grid = psi.grid;
  ConfigField out = ConfigField::zero(grid);
  const double kin = -params.hbar * params.hbar / (2.0 * sep.mass);
  for (std::size_t k = 0; k < grid.dim(); ++k) {
    const ConfigField d2 = cf.derivative(psi, k, 2);
    for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] += kin * d2.values[i];
  }
  const double constant = 3.0 * static_cast<double>(grid.dim()) * params.b * params.hbar /
                          (4.0 * sep.mass * params.a);
  const auto g = smoothed_potential_table(grid, hamiltonian, params);
  for (std::size_t i = 0; i < out.values.size(); ++i)
    out.values[i] += (g[i] + constant) * psi.values[i];
  return out;
}

ConfigField evolve_schrodinger(const ConfigField& psi0, const HamiltonianSpec& hamiltonian,
                               HatHForm form, const ModelParams& params,
                               const EvolutionConfig& cfg, const ConfigObserver& observer) {
  require_finite(psi0, "evolve_schrodinger");
  const ConfigGrid& grid = psi0.grid;
  const ConfigFourier cf(grid, params.hbar);
  const SeparableForm& sep = hamiltonian.separable();

  const std::size_t steps = (cfg.t_end == 0.0)
                                ? 0
                                : static_cast<std::size_t>(std::ceil(cfg.t_end / cfg.dt - 1e-12));
  const double dt = (steps == 0) ? 0.0 : cfg.t_end / static_cast<double>(steps);

  ConfigField psi = psi0;
  if (observer) observer(0.0, psi);

  if (form == HatHForm::local) {
    // Strang split: half potential, full kinetic, half potential.
    const auto veff = effective_potential_table(grid, sep, params);
    std::vector<cplx> half_v(grid.size());
    for (std::size_t i = 0; i < half_v.size(); ++i)
      half_v[i] = std::polar(1.0, -0.5 * dt * veff[i] / params.hbar);
    std::vector<cplx> kinetic(grid.size(), cplx(1.0, 0.0));
    for (std::size_t k = 0; k < grid.dim(); ++k) {
      const auto p = cf.momentum_table(k);
      for (std::size_t i = 0; i < kinetic.size(); ++i)
        kinetic[i] *= std::polar(1.0, -dt * p[i] * p[i] / (2.0 * sep.mass * params.hbar));
    }
    for (std::size_t step = 1; step <= steps; ++step) {
      for (std::size_t i = 0; i < psi.values.size(); ++i) psi.values[i] *= half_v[i];
      psi = cf.apply_momentum_multiplier(psi, kinetic);
      for (std::size_t i = 0; i < psi.values.size(); ++i) psi.values[i] *= half_v[i];
      if (observer && (step % cfg.record_every == 0 || step == steps))
        observer(dt * static_cast<double>(step), psi);
    }
    return psi;
  }

  // integral form: dense assembly + matrix exponential stepping
  const std::size_t n = grid.size();
  if (n > 2048)
    throw std::invalid_argument("evolve_schrodinger: integral form limited to 2048 points");
  Eigen::MatrixXcd h(n, n);
  ConfigField unit = ConfigField::zero(grid);
  for (std::size_t j = 0; j < n; ++j) {
    unit.values.assign(n, cplx(0.0, 0.0));
    unit.values[j] = cplx(1.0, 0.0);
    const ConfigField column = apply_hatH_integral(cf, unit, hamiltonian, params);
    for (std::size_t i = 0; i < n; ++i) h(i, j) = column.values[i];
  }
  const double asym = (h - h.adjoint()).cwiseAbs().maxCoeff();
  const double scale = h.cwiseAbs().maxCoeff();
  if (asym > 1e-8 * scale) {
    std::ostringstream msg;
    msg << "evolve_schrodinger: integral-form operator non-Hermitian residual " << asym
        << " (scale " << scale << ")";
    emit_warning(msg.str());
  }
  const Eigen::MatrixXcd u = (cplx(0.0, -dt / params.hbar) * h).exp();
  Eigen::VectorXcd v(n);
  for (std::size_t i = 0; i < n; ++i) v(i) = psi.values[i];
  for (std::size_t step = 1; step <= steps; ++step) {
    v = u * v;
    if (observer && (step % cfg.record_every == 0 || step == steps)) {
      for (std::size_t i = 0; i < n; ++i) psi.values[i] = v(i);
      observer(dt * static_cast<double>(step), psi);
    }
  }
  for (std::size_t i = 0; i < n; ++i) psi.values[i] = v(i);
  return psi;
}

double estimate_alpha_max(const FourierWorkspace& ws, const HermiteTransform& transform,
                          const HamiltonianSpec& hamiltonian, const ModelParams& params,
                          std::size_t samples, std::mt19937_64& rng) {
  const TransportOperator transport(ws, hamiltonian, params);
  double worst = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    ConfigField psi = random_config_state(ws.grid().config(), rng);
    PhaseField phi0 = lift(ws, transform, psi);
    const double nrm = std::sqrt(norm_sq(phi0));
    scale(phi0, cplx(1.0 / nrm, 0.0));
    const PhaseField a = transport.apply(phi0);
    const PhaseField pa = project_p0(ws, transform, a);
    double num = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) num += std::norm(a.values[i] - pa.values[i]);
    worst = std::max(worst, std::sqrt(num * ws.grid().cell_volume()));
  }
  return 2.0 * worst;
}

RapidSlowDiagnostics rapid_slow_experiment(const FourierWorkspace& ws, const PhaseField& phi0,
                                           const HamiltonianSpec& hamiltonian,
                                           const ModelParams& params, const EvolutionConfig& cfg,
                                           double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 0.5))
    throw std::invalid_argument("rapid_slow_experiment: epsilon must lie in (0, 1/2)");
  const HermiteTransform transform(ws.grid(), params, cfg.hermite_cutoff);
  const TransportOperator transport(ws, hamiltonian, params);

  PhaseField start = phi0;
  const double nrm0 = std::sqrt(norm_sq(start));
  if (nrm0 == 0.0) throw std::invalid_argument("rapid_slow_experiment: zero initial state");
  scale(start, cplx(1.0 / nrm0, 0.0));
  const PhaseField p0_start = project_p0(ws, transform, start);

  RapidSlowDiagnostics diag;
  diag.epsilon = epsilon;
  diag.beta_min = 2.0 * params.relaxation_rate();
  diag.t_epsilon_formula = -std::log(epsilon) / params.relaxation_rate();

  const PhaseObserver observer = [&](double t, const PhaseField& phi_raw) {
    // raw-flow distance to the projected initial state
    double dist2 = 0.0;
    for (std::size_t i = 0; i < phi_raw.values.size(); ++i)
      dist2 += std::norm(phi_raw.values[i] - p0_start.values[i]);
    dist2 *= phi_raw.grid.cell_volume();

    PhaseField phibar = phi_raw;
    const double nrm = std::sqrt(norm_sq(phibar));
    scale(phibar, cplx(1.0 / nrm, 0.0));
    const PhaseField comp0 = project_p0(ws, transform, phibar);
    PhaseField comp1 = phibar;
    for (std::size_t i = 0; i < comp1.values.size(); ++i) comp1.values[i] -= comp0.values[i];
    const double eta = norm_sq(comp0);
    const double n1 = std::sqrt(norm_sq(comp1));
    const double n0 = std::sqrt(eta);

    double alpha_t = 0.0, beta_t = 0.0;
    if (n0 > 1e-12 && n1 > 1e-12) {
      PhaseField b0 = comp0, b1 = comp1;
      scale(b0, cplx(1.0 / n0, 0.0));
      scale(b1, cplx(1.0 / n1, 0.0));
      alpha_t = -2.0 * inner(b1, transport.apply(b0)).real();
      beta_t = -2.0 * inner(apply_diffusion(ws, b1, params), b1).real();
    }
    diag.times.push_back(t);
    diag.eta.push_back(eta);
    diag.alpha_t.push_back(alpha_t);
    diag.beta_t.push_back(beta_t);
    diag.distance.push_back(std::sqrt(dist2));
  };

  (void)evolve_full(ws, start, hamiltonian, params, cfg, observer);

  // measured transition times from the recorded series
  double t_eps = -1.0;
  for (std::size_t i = 0; i < diag.times.size(); ++i) {
    if (t_eps < 0.0 && diag.eta[i] >= epsilon) t_eps = diag.times[i];
    if (diag.eta[i] >= 1.0 - epsilon) {
      diag.time_to_target = diag.times[i];
      if (t_eps >= 0.0) diag.time_eps_to_target = diag.times[i] - t_eps;
      break;
    }
  }

  // least-squares slope of log distance over a late relative window
  const double d0 = diag.distance.empty() ? 0.0 : diag.distance.front();
  auto fit_window = [&](double lo, double hi) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < diag.times.size(); ++i) {
      const double rel = diag.distance[i] / d0;
      if (rel < lo || rel > hi) continue;
      const double x = diag.times[i], y = std::log(diag.distance[i]);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      ++count;
    }
    if (count < 4) return 0.0;
    const double denom = static_cast<double>(count) * sxx - sx * sx;
    return (denom == 0.0) ? 0.0 : -(static_cast<double>(count) * sxy - sx * sy) / denom;
  };
  double exponent = fit_window(1e-5, 0.02);
  if (exponent == 0.0) exponent = fit_window(1e-6, 0.1);
  diag.fitted_decay_exponent = exponent;

  std::mt19937_64 rng(0x5eed);
  diag.alpha_max_sampled = estimate_alpha_max(ws, transform, hamiltonian, params, 6, rng);
  return diag;
}

SlowDynamicsReport slow_dynamics_agreement(const ConfigField& psi0,
                                           const HamiltonianSpec& hamiltonian,
                                           const ModelParams& params, const EvolutionConfig& cfg,
                                           double omega_classical, double separation_min) {
  SlowDynamicsReport report;
  report.scale_separation = (omega_classical > 0.0)
                                ? params.relaxation_rate() / omega_classical
                                : std::numeric_limits<double>::infinity();
  report.scale_separation_ok = report.scale_separation >= separation_min * (1.0 - 1e-12);
  if (!report.scale_separation_ok) {
    std::ostringstream msg;
    msg << "slow_dynamics_agreement: scale separation " << report.scale_separation
        << " below the configured minimum " << separation_min;
    emit_warning(msg.str());
  }

  ConfigField psi_start = psi0;
  const double nrm = std::sqrt(norm_sq(psi_start));
  scale(psi_start, cplx(1.0 / nrm, 0.0));

  const PhaseGrid grid = PhaseGrid::from_config(psi_start.grid, params.hbar);
  const FourierWorkspace ws(grid, params.hbar);
  const HermiteTransform transform(grid, params, cfg.hermite_cutoff);

  std::vector<double> times;
  std::vector<ConfigField> numeric;
  const PhaseObserver full_observer = [&](double t, const PhaseField& phi) {
    times.push_back(t);
    numeric.push_back(extract(ws, transform, phi));
  };
  const PhaseField phi0 = lift(ws, transform, psi_start);
  (void)evolve_full(ws, phi0, hamiltonian, params, cfg, full_observer);

  std::vector<ConfigField> reference;
  const ConfigObserver ref_observer = [&](double, const ConfigField& psi) {
    reference.push_back(psi);
  };
  (void)evolve_schrodinger(psi_start, hamiltonian, HatHForm::local, params, cfg, ref_observer);

  const std::size_t count = std::min(numeric.size(), reference.size());
  for (std::size_t i = 0; i < count; ++i) {
    const double nn = norm_sq(numeric[i]);
    const double nr = norm_sq(reference[i]);
    const double overlap = std::abs(inner(reference[i], numeric[i]));
    const double dev = std::sqrt(std::max(0.0, nn + nr - 2.0 * overlap));
    report.times.push_back(times[i]);
    report.deviation.push_back(dev);
    report.max_deviation = std::max(report.max_deviation, dev);
  }
  return report;
}

} // namespace phasediff
