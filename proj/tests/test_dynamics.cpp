#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "phasediff/dynamics.hpp"
#include "phasediff/quantization.hpp"
#include "phasediff/random_states.hpp"

using namespace phasediff;

namespace {

const ModelParams kParams{1.0, 1.0, 1.0, 2.0, 1};

double rel_distance(const std::vector<cplx>& f, const std::vector<cplx>& g) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    num += std::norm(f[i] - g[i]);
    den += std::norm(g[i]);
  }
  return std::sqrt(num / std::max(den, 1e-300));
}

HamiltonianSpec zero_hamiltonian() { return make_constant_hamiltonian(0.0, 1); }

} // namespace

TEST_CASE("evolve_full basics") {
  const PhaseGrid grid = PhaseGrid::conjugate(1, 128, 10.0, kParams.hbar);
  const FourierWorkspace ws(grid, kParams.hbar);
  const HermiteTransform transform(grid, kParams, 32);
  std::mt19937_64 rng(5);

  SUBCASE("lifted states are fixed points when H = 0") {
    const ConfigField psi = random_config_state(grid.config(), rng);
    const PhaseField phi0 = lift(ws, transform, psi);
    EvolutionConfig cfg;
    cfg.dt = 0.01;
    cfg.t_end = 1.0;
    cfg.hermite_cutoff = 32;
    const PhaseField out = evolve_full(ws, phi0, zero_hamiltonian(), kParams, cfg);
    CHECK(rel_distance(out.values, phi0.values) < 1e-10);
  }

  SUBCASE("constant H: splitting is exact against the diffusion propagator") {
    RandomStateOptions opts;
    opts.max_mode = 5;
    const PhaseField phi0 = random_phase_state(ws, transform, rng, opts);
    const double c = 0.9;
    EvolutionConfig cfg;
    cfg.dt = 0.05;
    cfg.t_end = 0.5;
    cfg.hermite_cutoff = 32;
    const PhaseField out = evolve_full(ws, phi0, make_constant_hamiltonian(c, 1), kParams, cfg);
    const DiffusionPropagator prop(ws, kParams, 32, 1e-6);
    PhaseField expect = prop.propagate(phi0, cfg.t_end);
    scale(expect, std::polar(1.0, -c * cfg.t_end / kParams.hbar));
    // splitting error vanishes ([A, Delta] = 0); only RK4's phase truncation
    // (c dt)^5/120 per step remains
    CHECK(rel_distance(out.values, expect.values) < 1e-7);
  }

  SUBCASE("CFL violation is rejected") {
    RandomStateOptions opts;
    const PhaseField phi0 = random_phase_state(ws, transform, rng, opts);
    EvolutionConfig cfg;
    cfg.dt = 1.0;
    cfg.t_end = 2.0;
    const HamiltonianSpec h = make_harmonic_hamiltonian(1.0, 1.0, 1);
    CHECK_THROWS_AS((void)evolve_full(ws, phi0, h, kParams, cfg), CflError);
  }

  SUBCASE("boundary growth is detected") {
    // momentum kick drives the packet across the box
    ConfigField psi = gaussian_packet(grid.config(), 5.0, 0.7, 6.0, kParams.hbar);
    const PhaseField phi0 = lift(ws, transform, psi);
    EvolutionConfig cfg;
    cfg.dt = 5e-4;
    cfg.t_end = 1.6;
    cfg.record_every = 100;
    cfg.decay_tol = 1e-10;
    const HamiltonianSpec h = make_free_hamiltonian(1.0, 1);
    CHECK_THROWS_AS((void)evolve_full(ws, phi0, h, kParams, cfg), BoundaryDecayError);
  }
}

TEST_CASE("Strang splitting is second order") {
  const PhaseGrid grid = PhaseGrid::conjugate(1, 64, 9.0, kParams.hbar);
  const FourierWorkspace ws(grid, kParams.hbar);
  const HermiteTransform transform(grid, kParams, 24);
  std::mt19937_64 rng(11);
  RandomStateOptions opts;
  opts.max_mode = 4;
  opts.components = 2;
  const PhaseField phi0 = random_phase_state(ws, transform, rng, opts);
  const HamiltonianSpec h = make_harmonic_hamiltonian(1.0, 1.0, 1);

  EvolutionConfig cfg;
  cfg.t_end = 0.1;
  cfg.hermite_cutoff = 24;
  cfg.trunc_tol = 1e-5;
  cfg.decay_tol = 1e-5;
  cfg.record_every = 1u << 20;

  cfg.dt = 1.25e-4;
  const PhaseField ref = evolve_full(ws, phi0, h, kParams, cfg);
  cfg.dt = 2e-3;
  const PhaseField coarse = evolve_full(ws, phi0, h, kParams, cfg);
  cfg.dt = 1e-3;
  const PhaseField fine = evolve_full(ws, phi0, h, kParams, cfg);

  const double e_coarse = rel_distance(coarse.values, ref.values);
  const double e_fine = rel_distance(fine.values, ref.values);
  const double ratio = e_coarse / e_fine;
  CHECK(ratio > 3.2);
  CHECK(ratio < 4.8);
}

TEST_CASE("Schrodinger reference dynamics") {
  const PhaseGrid grid = PhaseGrid::conjugate(1, 128, 10.0, kParams.hbar);
  const ConfigGrid cfg_grid = grid.config();

  SUBCASE("free packet spreading matches the closed form") {
    const double sigma0 = 0.8;
    const ConfigField psi0 = gaussian_packet(cfg_grid, 0.0, sigma0, 0.0, kParams.hbar);
    EvolutionConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_end = 1.0;
    const ConfigField psi =
        evolve_schrodinger(psi0, make_free_hamiltonian(1.0, 1), HatHForm::local, kParams, cfg);
    double m0 = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < psi.values.size(); ++i) {
      const double x = cfg_grid.axis(0).value(i);
      const double w = std::norm(psi.values[i]);
      m0 += w;
      m2 += x * x * w;
    }
    const double spread = kParams.hbar * cfg.t_end / (2.0 * 1.0 * sigma0 * sigma0);
    const double expected = sigma0 * sigma0 * (1.0 + spread * spread);
    CHECK(m2 / m0 == doctest::Approx(expected).epsilon(1e-8));
  }

  SUBCASE("Ehrenfest: coherent-state center follows the classical trajectory") {
    const double omega = 1.0, x0 = 1.0;
    const double sigma = std::sqrt(kParams.hbar / (2.0 * omega));
    const ConfigField psi0 = gaussian_packet(cfg_grid, x0, sigma, 0.0, kParams.hbar);
    EvolutionConfig cfg;
    cfg.dt = 2.0 * std::numbers::pi / 65536.0;
    cfg.t_end = 2.0 * std::numbers::pi;
    cfg.record_every = 8192;
    double worst = 0.0;
    const ConfigObserver obs = [&](double t, const ConfigField& psi) {
      double m0 = 0.0, m1 = 0.0;
      for (std::size_t i = 0; i < psi.values.size(); ++i) {
        const double x = cfg_grid.axis(0).value(i);
        const double w = std::norm(psi.values[i]);
        m0 += w;
        m1 += x * w;
      }
      worst = std::max(worst, std::abs(m1 / m0 - x0 * std::cos(omega * t)));
    };
    (void)evolve_schrodinger(psi0, make_harmonic_hamiltonian(1.0, omega, 1), HatHForm::local,
                             kParams, cfg, obs);
    CHECK(worst < 1e-6);
  }

  SUBCASE("adding a constant to V only rotates the global phase") {
    const ConfigField psi0 = gaussian_packet(cfg_grid, 0.5, 0.8, 0.3, kParams.hbar);
    EvolutionConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_end = 0.5;
    const HamiltonianSpec h = make_harmonic_hamiltonian(1.0, 1.0, 1);
    HamiltonianSpec h_shift = make_harmonic_hamiltonian(1.0, 1.0, 1);
    {
      SeparableForm form = h_shift.separable();
      auto base = form.potential;
      const double c = 1.3;
      form.potential = [base, c](const std::vector<double>& x) { return base(x) + c; };
      h_shift.set_separable(std::move(form));
    }
    const ConfigField a = evolve_schrodinger(psi0, h, HatHForm::local, kParams, cfg);
    const ConfigField b = evolve_schrodinger(psi0, h_shift, HatHForm::local, kParams, cfg);
    CHECK(std::abs(inner(b, a)) == doctest::Approx(1.0).epsilon(1e-10));
  }

  SUBCASE("norm and energy are conserved") {
    const ConfigField psi0 = gaussian_packet(cfg_grid, 0.7, 0.75, 0.4, kParams.hbar);
    const HamiltonianSpec h = make_harmonic_hamiltonian(1.0, 1.0, 1);
    const ConfigFourier cf(cfg_grid, kParams.hbar);
    const ConfigField h0 = apply_hatH_local(cf, psi0, h.separable(), kParams);
    const double e0 = inner(psi0, h0).real();
    EvolutionConfig cfg;
    cfg.dt = 2.0 * std::numbers::pi / 65536.0;
    cfg.t_end = 2.0 * std::numbers::pi;
    const ConfigField psi = evolve_schrodinger(psi0, h, HatHForm::local, kParams, cfg);
    CHECK(norm_sq(psi) == doctest::Approx(norm_sq(psi0)).epsilon(1e-8));
    const ConfigField h1 = apply_hatH_local(cf, psi, h.separable(), kParams);
    CHECK(inner(psi, h1).real() == doctest::Approx(e0).epsilon(1e-8));
  }
}

TEST_CASE("rapid/slow diagnostics") {
  const PhaseGrid grid = PhaseGrid::conjugate(1, 128, 10.0, kParams.hbar);
  const FourierWorkspace ws(grid, kParams.hbar);
  const HermiteTransform transform(grid, kParams, 32);
  std::mt19937_64 rng(3);

  SUBCASE("states already in the subspace keep eta = 1") {
    const ConfigField psi = random_config_state(grid.config(), rng);
    const PhaseField phi0 = lift(ws, transform, psi);
    EvolutionConfig cfg;
    cfg.dt = 0.01;
    cfg.t_end = 0.5;
    cfg.hermite_cutoff = 32;
    cfg.record_every = 5;
    const RapidSlowDiagnostics diag =
        rapid_slow_experiment(ws, phi0, zero_hamiltonian(), kParams, cfg);
    for (double eta : diag.eta) CHECK(std::abs(eta - 1.0) < 1e-8);
  }

  SUBCASE("diffusion-dominated relaxation") {
    // eta(0) small: sqrt(eta0) lifted + sqrt(1-eta0) excited
    const double eta0 = 0.002;
    const ConfigField psi = random_config_state(grid.config(), rng);
    PhaseField kernel_part = lift(ws, transform, psi);
    scale(kernel_part, cplx(std::sqrt(eta0) / std::sqrt(norm_sq(kernel_part)), 0.0));
    RandomStateOptions opts;
    opts.min_mode = 1;
    opts.max_mode = 6;
    opts.mode_decay = 0.35;
    PhaseField excited = random_phase_state(ws, transform, rng, opts);
    // remove any kernel residue so eta(0) is exact
    const PhaseField residue = project_p0(ws, transform, excited);
    for (std::size_t i = 0; i < excited.values.size(); ++i)
      excited.values[i] -= residue.values[i];
    scale(excited, cplx(std::sqrt(1.0 - eta0) / std::sqrt(norm_sq(excited)), 0.0));
    const PhaseField phi0 = axpy(cplx(1.0, 0.0), kernel_part, excited);

    EvolutionConfig cfg;
    cfg.dt = 0.005;
    cfg.t_end = 3.2;
    cfg.hermite_cutoff = 32;
    cfg.record_every = 4;
    cfg.decay_tol = 1e-8; // random mode-6 states carry ~1e-10 tails
    const RapidSlowDiagnostics diag =
        rapid_slow_experiment(ws, phi0, zero_hamiltonian(), kParams, cfg, 0.01);

    // paper bound and derived sharp rate
    CHECK(diag.fitted_decay_exponent >= kParams.relaxation_rate());
    CHECK(diag.fitted_decay_exponent ==
          doctest::Approx(2.0 * kParams.relaxation_rate()).epsilon(0.05));
    // transition time within a factor 2 of the Statement-3 leading term
    CHECK(diag.time_to_target > 0.0);
    const double ratio = diag.t_epsilon_formula / diag.time_to_target;
    CHECK(ratio > 0.5);
    CHECK(ratio < 2.0);
    // Statement-3 bound on the recorded eps -> 1-eps span
    CHECK(diag.time_eps_to_target <= diag.t_epsilon_formula);

    // eta-ODE consistency: with A = 0, d(eta)/dt = beta(t)(1-eta)eta
    for (std::size_t i = 2; i + 2 < diag.times.size(); i += 7) {
      const double dt_rec = diag.times[i + 1] - diag.times[i - 1];
      const double etadot = (diag.eta[i + 1] - diag.eta[i - 1]) / dt_rec;
      const double rhs = diag.beta_t[i] * (1.0 - diag.eta[i]) * diag.eta[i];
      const double scale_i = std::max(std::abs(rhs), 1e-6);
      CHECK(std::abs(etadot - rhs) <
            0.02 * scale_i + std::abs(diag.alpha_t[i]) *
                                 std::sqrt((1.0 - diag.eta[i]) * diag.eta[i]));
    }
    // beta(t) never falls below the paper bound while the state relaxes
    for (std::size_t i = 0; i + 1 < diag.times.size(); ++i) {
      if (diag.eta[i] < 0.999)
        CHECK(diag.beta_t[i] >= diag.beta_min * (1.0 - 1e-6));
    }
  }
}

TEST_CASE("slow dynamics agreement") {
  SUBCASE("H = 0: both sides are stationary") {
    const PhaseGrid grid = PhaseGrid::conjugate(1, 128, 10.0, kParams.hbar);
    const ConfigField psi0 = gaussian_packet(grid.config(), 0.4, 0.8, 0.0, kParams.hbar);
    EvolutionConfig cfg;
    cfg.dt = 0.01;
    cfg.t_end = 0.3;
    cfg.hermite_cutoff = 32;
    cfg.record_every = 10;
    cfg.decay_tol = 1e-10;
    const SlowDynamicsReport report =
        slow_dynamics_agreement(psi0, zero_hamiltonian(), kParams, cfg, 0.0);
    CHECK(report.max_deviation < 1e-8);
  }

  SUBCASE("harmonic segment at 50x separation stays close") {
    const double omega = 1.0;
    const double ab = 50.0;
    const ModelParams params{1.0, 1.0, std::sqrt(ab), std::sqrt(ab), 1};
    const PhaseGrid grid = PhaseGrid::conjugate(1, 128, 11.0, params.hbar);
    const double sigma = std::sqrt(params.hbar / (2.0 * omega));
    const ConfigField psi0 = gaussian_packet(grid.config(), 1.0, sigma, 0.0, params.hbar);
    EvolutionConfig cfg;
    cfg.dt = 2.0 * std::numbers::pi / 8192.0;
    cfg.t_end = 2.0 * std::numbers::pi / 8.0; // one eighth of a period
    cfg.hermite_cutoff = 48;
    cfg.record_every = 128;
    cfg.decay_tol = 1e-10;
    const SlowDynamicsReport report = slow_dynamics_agreement(
        psi0, make_harmonic_hamiltonian(1.0, omega, 1), params, cfg, omega);
    CHECK(report.scale_separation_ok);
    CHECK(report.max_deviation < 0.05);
  }
}
