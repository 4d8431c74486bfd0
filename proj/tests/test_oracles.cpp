#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "phasediff/dynamics.hpp"
#include "phasediff/oracles.hpp"
#include "phasediff/quadrature.hpp"
#include "phasediff/quantization.hpp"
#include "phasediff/random_states.hpp"

using namespace phasediff;

namespace {
const ModelParams kParams{1.0, 1.0, 1.0, 2.0, 1};
}

TEST_CASE("quadrature building blocks") {
  SUBCASE("chi^2 normalization and second moment") {
    const double s2 = kParams.a * kParams.hbar / kParams.b;
    const auto chi2 = [&](double u) {
      return cplx(std::exp(-u * u / s2) / std::sqrt(std::numbers::pi * s2), 0.0);
    };
    const QuadResult n0 = quad_1d(chi2, -8.0, 8.0, 1e-12);
    CHECK(std::abs(n0.value - cplx(1.0, 0.0)) < 1e-10);
    const QuadResult m2 = quad_1d([&](double u) { return u * u * chi2(u); }, -8.0, 8.0, 1e-12);
    CHECK(std::abs(m2.value - cplx(kParams.smoothing_variance(), 0.0)) < 1e-10);
  }

  SUBCASE("known Gaussian volume in 2D") {
    const auto g = [](const std::vector<double>& u) {
      return cplx(std::exp(-u[0] * u[0] - 2.0 * u[1] * u[1]), 0.0);
    };
    const double expected = std::numbers::pi / std::sqrt(2.0);
    const QuadResult r = quad_nd(g, {-7.0, -6.0}, {7.0, 6.0}, 1e-10);
    CHECK(std::abs(r.value.real() - expected) < 1e-9);
    // fixed-order companion doubles cleanly once converged
    const cplx a = tensor_gauss(g, {-7.0, -6.0}, {7.0, 6.0}, 64);
    const cplx b = tensor_gauss(g, {-7.0, -6.0}, {7.0, 6.0}, 128);
    CHECK(std::abs(a - b) < 1e-10);
  }

  SUBCASE("nonconvergence raises") {
    // |x|^(-1/2) near 0 defeats the depth-limited panels at tiny tolerance
    const auto sharp = [](double x) { return cplx(1.0 / std::sqrt(std::abs(x) + 1e-15), 0.0); };
    CHECK_THROWS_AS((void)quad_1d(sharp, -1.0, 1.0, 1e-14, 6), QuadratureError);
  }
}

TEST_CASE("lemma 1 identities") {
  const IdentityReport report = verify_lemma1(kParams);
  CHECK(report.checks.size() == 9);
  for (const auto& c : report.checks) {
    INFO(c.name, " err=", c.error);
    CHECK(c.pass);
  }
  // cross moment hits i hbar/2 on the nose
  for (const auto& c : report.checks) {
    if (c.name == "cross_moments") {
      CHECK(std::abs(c.measured - cplx(0.0, 0.5)) < 1e-8);
    }
  }

  SUBCASE("holds away from the acceptance parameter point") {
    const ModelParams other{0.8, 1.0, 0.7, 1.3, 1};
    const IdentityReport r2 = verify_lemma1(other, 1e-5);
    for (const auto& c : r2.checks) {
      INFO(c.name, " err=", c.error);
      CHECK(c.pass);
    }
  }
}

TEST_CASE("lemma 2 integrals") {
  const IdentityReport report = verify_lemma2(kParams);
  CHECK(report.checks.size() == 16);
  for (const auto& c : report.checks) {
    INFO(c.name, " err=", c.error, " measured=", c.measured.real(), "+", c.measured.imag(), "i");
    CHECK(c.pass);
  }

  SUBCASE("closed-form targets") {
    const double m_chi = 0.25;   // a hbar/(2b)
    const double m_tilde = 1.0;  // b hbar/(2a)
    for (const auto& c : report.checks) {
      if (c.name == "item01_normalization") CHECK(std::abs(c.expected - cplx(1, 0)) == 0.0);
      if (c.name == "item08_eta_sq") CHECK(c.expected.real() == doctest::Approx(m_chi));
      if (c.name == "item10_xi_sq") CHECK(c.expected.real() == doctest::Approx(m_tilde));
      if (c.name == "item14_eta_sum_xi") CHECK(c.expected.imag() == doctest::Approx(0.5));
      if (c.name == "item16_sum_sum") CHECK(c.expected.imag() == doctest::Approx(1.0));
    }
  }

  SUBCASE("doubling the quadrature order moves nothing") {
    const IdentityReport fine = verify_lemma2(kParams, 1e-6, 2);
    for (std::size_t i = 0; i < report.checks.size(); ++i)
      CHECK(std::abs(report.checks[i].measured - fine.checks[i].measured) < 1e-8);
  }
}

TEST_CASE("dense operator oracle on a 16x16 grid") {
  // balanced half-width: x and p resolve the chi scale equally well, the
  // best a 16-point conjugate grid can do
  const PhaseGrid grid = PhaseGrid::conjugate(1, 16, 3.54, kParams.hbar);
  const HamiltonianSpec harmonic = make_harmonic_hamiltonian(1.0, 1.0, 1);

  SUBCASE("diffusion: Hermitian, nonpositive, near-kernel dimension = N") {
    const DenseOperator d = dense_generator(OperatorKind::diffusion, harmonic, kParams, grid);
    const double asym = (d.matrix - d.matrix.adjoint()).cwiseAbs().maxCoeff();
    CHECK(asym < 1e-8);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
        0.5 * (d.matrix + d.matrix.adjoint()));
    const auto& eigs = es.eigenvalues();
    CHECK(eigs.maxCoeff() < 1e-8);
    // stationary directions representable on the grid: count above the
    // midpoint of the gap (the coarse grid smears a couple of them)
    std::size_t kernel_dim = 0;
    for (Eigen::Index i = 0; i < eigs.size(); ++i)
      if (eigs(i) > -kParams.relaxation_rate()) ++kernel_dim;
    CHECK(kernel_dim >= grid.num_x() - 2);
    CHECK(kernel_dim <= grid.num_x());
    // everything below the midpoint decays at least at the sharp rate
    for (Eigen::Index i = 0; i < eigs.size(); ++i)
      if (eigs(i) <= -kParams.relaxation_rate())
        CHECK(eigs(i) < -2.0 * kParams.relaxation_rate() * (1.0 - 0.01));
  }

  SUBCASE("transport is anti-Hermitian") {
    const DenseOperator a = dense_generator(OperatorKind::transport, harmonic, kParams, grid);
    const double sym = (a.matrix + a.matrix.adjoint()).cwiseAbs().maxCoeff();
    const double scale = a.matrix.cwiseAbs().maxCoeff();
    CHECK(sym < 1e-8 * scale);
  }

  SUBCASE("projector spectrum sits on {0, 1}") {
    const DenseOperator p = dense_generator(OperatorKind::projector, harmonic, kParams, grid);
    const double asym = (p.matrix - p.matrix.adjoint()).cwiseAbs().maxCoeff();
    CHECK(asym < 1e-8);
    const double idem = (p.matrix * p.matrix - p.matrix).cwiseAbs().maxCoeff();
    CHECK(idem < 1e-8);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
        0.5 * (p.matrix + p.matrix.adjoint()));
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
      const double lambda = es.eigenvalues()(i);
      CHECK(std::min(std::abs(lambda), std::abs(lambda - 1.0)) < 1e-8);
    }
  }

  SUBCASE("dense columns reproduce the transform-based application") {
    const DenseOperator d = dense_generator(OperatorKind::full_generator, harmonic, kParams, grid);
    const FourierWorkspace ws(grid, kParams.hbar);
    const TransportOperator transport(ws, harmonic, kParams);
    std::mt19937_64 rng(77);
    std::normal_distribution<double> dist(0.0, 1.0);
    for (int trial = 0; trial < 3; ++trial) {
      PhaseField f = PhaseField::zero(grid);
      for (auto& v : f.values) v = cplx(dist(rng), dist(rng));
      PhaseField direct = transport.apply(f);
      const PhaseField diff = apply_diffusion(ws, f, kParams);
      for (std::size_t i = 0; i < direct.values.size(); ++i) direct.values[i] += diff.values[i];
      Eigen::VectorXcd v(f.values.size());
      for (std::size_t i = 0; i < f.values.size(); ++i) v(i) = f.values[i];
      const Eigen::VectorXcd mv = d.matrix * v;
      double worst = 0.0;
      for (std::size_t i = 0; i < f.values.size(); ++i)
        worst = std::max(worst, std::abs(mv(i) - direct.values[i]));
      CHECK(worst < 1e-8 * d.matrix.cwiseAbs().maxCoeff());
    }
  }

  SUBCASE("matrix exponential vs Strang: 16-point resolution floor") {
    // At N = 16 the continuum-exact Hermite semigroup and the semigroup of
    // the discrete generator differ by grid truncation at the 1e-4 level
    // (measured across regimes); the equivalence tightens at N = 32 below.
    PhaseField phi0 = PhaseField::zero(grid);
    for (std::size_t xi = 0; xi < grid.num_x(); ++xi) {
      const double x = grid.x_axis(0).value(xi);
      for (std::size_t pi = 0; pi < grid.num_p(); ++pi) {
        const double p = grid.p_axis(0).value(pi);
        phi0.at(xi, pi) = std::exp(-(x - 0.2) * (x - 0.2) / (4.0 * 0.45 * 0.45) -
                                   (p - 0.3) * (p - 0.3) / (4.0 * 0.8 * 0.8));
      }
    }
    scale(phi0, cplx(1.0 / std::sqrt(norm_sq(phi0)), 0.0));
    const DenseOperator gen =
        dense_generator(OperatorKind::full_generator, harmonic, kParams, grid);
    const PhaseField reference = expm_propagate(gen, 0.5, phi0);

    EvolutionConfig cfg;
    cfg.dt = 2.5e-4;
    cfg.t_end = 0.5;
    cfg.hermite_cutoff = 16;
    cfg.trunc_tol = 1.0;
    cfg.decay_tol = 1.0;
    cfg.record_every = 1u << 20;
    const FourierWorkspace ws(grid, kParams.hbar);
    const PhaseField evolved = evolve_full(ws, phi0, harmonic, kParams, cfg);

    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < evolved.values.size(); ++i) {
      num += std::norm(evolved.values[i] - reference.values[i]);
      den += std::norm(reference.values[i]);
    }
    CHECK(std::sqrt(num / den) < 5e-4);
  }
}

TEST_CASE("matrix exponential matches the Strang evolution on a resolved grid") {
  const ModelParams params = kParams;
  const HamiltonianSpec harmonic = make_harmonic_hamiltonian(1.0, 1.0, 1);
  const PhaseGrid grid = PhaseGrid::conjugate(1, 32, 5.01, params.hbar);
  PhaseField phi0 = PhaseField::zero(grid);
  for (std::size_t xi = 0; xi < grid.num_x(); ++xi) {
    const double x = grid.x_axis(0).value(xi);
    for (std::size_t pi = 0; pi < grid.num_p(); ++pi) {
      const double p = grid.p_axis(0).value(pi);
      phi0.at(xi, pi) = std::exp(-(x - 0.3) * (x - 0.3) / (4.0 * 0.6 * 0.6) -
                                 (p - 0.4) * (p - 0.4) / (4.0 * 1.1 * 1.1));
    }
  }
  scale(phi0, cplx(1.0 / std::sqrt(norm_sq(phi0)), 0.0));
  const DenseOperator gen =
      dense_generator(OperatorKind::full_generator, harmonic, params, grid);
  const PhaseField reference = expm_propagate(gen, 0.5, phi0);

  EvolutionConfig cfg;
  cfg.dt = 1.25e-4;
  cfg.t_end = 0.5;
  cfg.hermite_cutoff = 32;
  cfg.trunc_tol = 1.0;
  cfg.decay_tol = 1.0;
  cfg.record_every = 1u << 20;
  const FourierWorkspace ws(grid, params.hbar);
  const PhaseField evolved = evolve_full(ws, phi0, harmonic, params, cfg);

  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < evolved.values.size(); ++i) {
    num += std::norm(evolved.values[i] - reference.values[i]);
    den += std::norm(reference.values[i]);
  }
  CHECK(std::sqrt(num / den) < 5e-6);
}
