#include "doctest.h"

#include <cmath>
#include <random>

#include "phasediff/heisenberg.hpp"
#include "phasediff/random_states.hpp"

using namespace phasediff;

namespace {

const ModelParams kParams{1.0, 1.0, 1.0, 2.0, 1};

struct Setup {
  PhaseGrid grid;
  FourierWorkspace ws;
  HermiteTransform transform;
  std::mt19937_64 rng;

  explicit Setup(std::size_t n = 128, double half = 10.0, std::size_t cutoff = 32,
                 std::uint64_t seed = 42)
      : grid(PhaseGrid::conjugate(1, n, half, kParams.hbar)), ws(grid, kParams.hbar),
        transform(grid, kParams, cutoff), rng(seed) {}

  PhaseField smooth_state(std::size_t max_mode = 6) {
    RandomStateOptions opts;
    opts.max_mode = max_mode;
    return random_phase_state(ws, transform, rng, opts);
  }
};

double rel_distance(const PhaseField& f, const PhaseField& g) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    num += std::norm(f.values[i] - g.values[i]);
    den += std::norm(g.values[i]);
  }
  return std::sqrt(num / std::max(den, 1e-300));
}

} // namespace

TEST_CASE("covariant derivative commutators") {
  Setup s;
  const PhaseField phi = s.smooth_state();

  SUBCASE("[D_p, D_x] = -i/hbar") {
    const PhaseField dxp = apply_Dp(s.ws, apply_Dx(s.ws, phi, 0, kParams), 0);
    const PhaseField dpx = apply_Dx(s.ws, apply_Dp(s.ws, phi, 0), 0, kParams);
    PhaseField expect = phi;
    scale(expect, cplx(0.0, -1.0 / kParams.hbar));
    PhaseField comm = PhaseField::zero(s.grid);
    for (std::size_t i = 0; i < comm.values.size(); ++i)
      comm.values[i] = dxp.values[i] - dpx.values[i];
    CHECK(rel_distance(comm, expect) < 1e-8);
  }

  SUBCASE("gauge covariance: D_x acts as d/dx under the gauge factor") {
    // phi = e^{ixp/hbar} g(x) with g a Gaussian: D_x phi = e^{ixp/hbar} g'(x)
    PhaseField g0 = PhaseField::zero(s.grid);
    for (std::size_t xi = 0; xi < s.grid.num_x(); ++xi) {
      const double x = s.grid.x_axis(0).value(xi);
      for (std::size_t pi = 0; pi < s.grid.num_p(); ++pi)
        g0.at(xi, pi) = std::exp(-0.5 * x * x);
    }
    const PhaseField phi_g = s.ws.gauge_apply(g0);
    const PhaseField d = apply_Dx(s.ws, phi_g, 0, kParams);
    const PhaseField d0 = s.ws.gauge_strip(d);
    double worst = 0.0;
    for (std::size_t xi = 8; xi < s.grid.num_x() - 8; xi += 3) {
      const double x = s.grid.x_axis(0).value(xi);
      worst = std::max(worst, std::abs(d0.at(xi, 40) - cplx(-x * std::exp(-0.5 * x * x), 0.0)));
    }
    CHECK(worst < 1e-8);
  }
}

TEST_CASE("mixed-axis commutator vanishes in 2D") {
  const ModelParams params{1.0, 1.0, 1.0, 2.0, 2};
  const PhaseGrid grid = PhaseGrid::conjugate(2, 16, 8.0, params.hbar);
  const FourierWorkspace ws(grid, params.hbar);
  const HermiteTransform transform(grid, params, 4);
  std::mt19937_64 rng(9);
  RandomStateOptions opts;
  opts.max_mode = 2;
  const PhaseField phi = random_phase_state(ws, transform, rng, opts);
  const PhaseField dxp = apply_Dp(ws, apply_Dx(ws, phi, 1, params), 0);
  const PhaseField dpx = apply_Dx(ws, apply_Dp(ws, phi, 0), 1, params);
  double num = 0.0;
  for (std::size_t i = 0; i < phi.values.size(); ++i)
    num += std::norm(dxp.values[i] - dpx.values[i]);
  CHECK(std::sqrt(num * grid.cell_volume()) < 1e-8);
}

TEST_CASE("diffusion operator") {
  Setup s;

  SUBCASE("zero field maps to zero") {
    const PhaseField z = apply_diffusion(s.ws, PhaseField::zero(s.grid), kParams);
    CHECK(norm_sq(z) == 0.0);
  }

  SUBCASE("self-adjoint and nonpositive") {
    const PhaseField f = s.smooth_state();
    const PhaseField g = s.smooth_state();
    const PhaseField df = apply_diffusion(s.ws, f, kParams);
    const PhaseField dg = apply_diffusion(s.ws, g, kParams);
    CHECK(std::abs(inner(df, g) - inner(f, dg)) < 1e-8);
    CHECK(inner(df, f).real() <= 1e-10);
    CHECK(std::abs(inner(df, f).imag()) < 1e-10);
  }

  SUBCASE("Hermite mode j has eigenvalue -2 j ab/hbar") {
    for (std::size_t j : {std::size_t{1}, std::size_t{2}, std::size_t{5}}) {
      ConfigField profile = gaussian_packet(s.grid.config(), 0.3, 0.9, 0.0, kParams.hbar);
      const MixedField mixed = s.transform.synthesize_single(profile, {j});
      const PhaseField mode = s.ws.gauge_apply(s.ws.from_mixed(mixed));
      const PhaseField dmode = apply_diffusion(s.ws, mode, kParams);
      PhaseField expect = mode;
      scale(expect, cplx(diffusion_eigenvalue(j, kParams), 0.0));
      CHECK(rel_distance(dmode, expect) < 1e-8);
    }
  }

  SUBCASE("stationary subspace is the kernel") {
    ConfigField psi = random_config_state(s.grid.config(), s.rng);
    const MixedField mixed = s.transform.synthesize_single(psi, {0});
    const PhaseField lifted = s.ws.gauge_apply(s.ws.from_mixed(mixed));
    const PhaseField d = apply_diffusion(s.ws, lifted, kParams);
    CHECK(std::sqrt(norm_sq(d) / norm_sq(lifted)) < 1e-8);
  }
}

TEST_CASE("transport operator") {
  Setup s;

  SUBCASE("constant Hamiltonian rotates the phase") {
    const double c = 1.7;
    const HamiltonianSpec hc = make_constant_hamiltonian(c, 1);
    const PhaseField phi = s.smooth_state();
    const PhaseField a = apply_transport(s.ws, phi, hc, kParams);
    PhaseField expect = phi;
    scale(expect, cplx(0.0, -c / kParams.hbar));
    CHECK(rel_distance(a, expect) < 1e-12);
  }

  SUBCASE("free Hamiltonian matches the symbolic expansion") {
    // H = p^2/2m: A phi = -(p/m) dphi/dx + (i/hbar)(p^2/2m) phi
    const HamiltonianSpec hf = make_free_hamiltonian(kParams.mass, 1);
    const PhaseField phi = s.smooth_state();
    const PhaseField a = apply_transport(s.ws, phi, hf, kParams);
    const PhaseField dx = s.ws.derivative_x(phi, 0, 1);
    PhaseField expect = PhaseField::zero(s.grid);
    for (std::size_t xi = 0; xi < s.grid.num_x(); ++xi) {
      for (std::size_t pi = 0; pi < s.grid.num_p(); ++pi) {
        const double p = s.grid.p_axis(0).value(pi);
        expect.at(xi, pi) = -(p / kParams.mass) * dx.at(xi, pi) +
                            cplx(0.0, p * p / (2.0 * kParams.mass * kParams.hbar)) *
                                phi.at(xi, pi);
      }
    }
    CHECK(rel_distance(a, expect) < 1e-12);
  }

  SUBCASE("skew-Hermitian for harmonic H") {
    const HamiltonianSpec hh = make_harmonic_hamiltonian(1.0, 1.0, 1);
    hh.validate(s.grid);
    const TransportOperator op(s.ws, hh, kParams);
    const PhaseField phi = s.smooth_state();
    const PhaseField g = s.smooth_state();
    const PhaseField aphi = op.apply(phi);
    CHECK(std::abs(inner(aphi, phi).real()) < 1e-8 * norm_sq(phi));
    // <A f, g> = -<f, A g>
    const PhaseField ag = op.apply(g);
    CHECK(std::abs(inner(aphi, g) + inner(phi, ag)) < 1e-8);
  }
}

TEST_CASE("exact diffusion propagator") {
  Setup s;
  const DiffusionPropagator prop(s.ws, kParams, 32, 1e-6);

  SUBCASE("t = 0 is the identity") {
    const PhaseField phi = s.smooth_state();
    const PhaseField out = prop.propagate(phi, 0.0);
    CHECK(rel_distance(out, phi) < 1e-10);
  }

  SUBCASE("lifted states are stationary") {
    ConfigField psi = random_config_state(s.grid.config(), s.rng);
    const MixedField mixed = s.transform.synthesize_single(psi, {0});
    const PhaseField lifted = s.ws.gauge_apply(s.ws.from_mixed(mixed));
    const PhaseField out = prop.propagate(lifted, 3.0);
    CHECK(rel_distance(out, lifted) < 1e-10);
  }

  SUBCASE("long times converge to the stationary projection") {
    const PhaseField phi = s.smooth_state();
    const PhaseField p0 = prop.project_stationary(phi);
    const PhaseField out = prop.propagate(phi, 12.0 / kParams.relaxation_rate());
    double num = 0.0;
    for (std::size_t i = 0; i < out.values.size(); ++i)
      num += std::norm(out.values[i] - p0.values[i]);
    CHECK(std::sqrt(num * s.grid.cell_volume()) < 1e-6);
  }

  SUBCASE("matches the generator for small times") {
    const PhaseField phi = s.smooth_state();
    const double h = 1e-5;
    const PhaseField fwd = prop.propagate(phi, h);
    const PhaseField gen = apply_diffusion(s.ws, phi, kParams);
    // (e^{h D} - 1)/h = D + O(h)
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < phi.values.size(); ++i) {
      const cplx fd = (fwd.values[i] - phi.values[i]) / h;
      num += std::norm(fd - gen.values[i]);
      den += std::norm(gen.values[i]);
    }
    CHECK(std::sqrt(num / den) < 1e-3);
  }

  SUBCASE("truncation above tolerance raises with the discarded mass") {
    // narrow feature in x has content far beyond a low cutoff
    PhaseField spiky = PhaseField::zero(s.grid);
    for (std::size_t xi = 0; xi < s.grid.num_x(); ++xi) {
      const double x = s.grid.x_axis(0).value(xi);
      for (std::size_t pi = 0; pi < s.grid.num_p(); ++pi) {
        const double p = s.grid.p_axis(0).value(pi);
        spiky.at(xi, pi) = std::exp(-18.0 * x * x - 0.2 * p * p);
      }
    }
    const DiffusionPropagator tight(s.ws, kParams, 8, 1e-9);
    CHECK_THROWS_AS((void)tight.propagate(spiky, 0.1), TruncationError);
  }
}

TEST_CASE("norm is non-increasing under the diffusion semigroup") {
  Setup s;
  const DiffusionPropagator prop(s.ws, kParams, 32, 1e-6);
  PhaseField phi = s.smooth_state();
  double prev = norm_sq(phi);
  for (int step = 0; step < 5; ++step) {
    phi = prop.propagate(phi, 0.05);
    const double now = norm_sq(phi);
    CHECK(now <= prev * (1.0 + 1e-12));
    prev = now;
  }
}
