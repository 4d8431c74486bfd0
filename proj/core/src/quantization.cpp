#include "phasediff/quantization.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace phasediff {

namespace {

std::size_t auto_cutoff(const PhaseGrid& grid, std::size_t requested) {
  if (requested > 0) return requested;
  std::size_t n_min = grid.x_axis(0).n;
  for (std::size_t k = 1; k < grid.dim(); ++k) n_min = std::min(n_min, grid.x_axis(k).n);
  return std::min<std::size_t>(64, n_min);
}

} // namespace

double ChiKernel::value1d(double u) const {
  const double s2 = params.a * params.hbar / params.b;
  return std::pow(params.b / (params.a * std::numbers::pi * params.hbar), 0.25) *
         std::exp(-u * u / (2.0 * s2));
}

double ChiKernel::value(const std::vector<double>& u) const {
  double prod = 1.0;
  for (double uk : u) prod *= value1d(uk);
  return prod;
}

PhaseField lift(const FourierWorkspace& ws, const HermiteTransform& transform,
                const ConfigField& psi) {
  require_finite(psi, "lift");
  const MixedField mixed =
      transform.synthesize_single(psi, std::vector<std::size_t>(ws.grid().dim(), 0));
  return ws.gauge_apply(ws.from_mixed(mixed));
}

ConfigField extract(const FourierWorkspace& ws, const HermiteTransform& transform,
                    const PhaseField& phi) {
  require_finite(phi, "extract");
  const MixedField mixed = ws.to_mixed(ws.gauge_strip(phi));
  return transform.mode_zero_coefficients(mixed);
}

PhaseField project_p0(const FourierWorkspace& ws, const HermiteTransform& transform,
                      const PhaseField& phi) {
  return lift(ws, transform, extract(ws, transform, phi));
}

QuantizationMap::QuantizationMap(const PhaseGrid& grid, const ModelParams& params,
                                 std::size_t hermite_cutoff)
    : params_(params), ws_(grid, params.hbar),
      transform_(grid, params, auto_cutoff(grid, hermite_cutoff)) {
  params_.validate();
  if (!grid.is_conjugate(params.hbar))
    throw GridMismatchError("QuantizationMap: grid must be conjugate (dx dp = 2 pi hbar / N)");
}

PhaseField QuantizationMap::lift(const ConfigField& psi) const {
  return phasediff::lift(ws_, transform_, psi);
}

ConfigField QuantizationMap::extract(const PhaseField& phi) const {
  return phasediff::extract(ws_, transform_, phi);
}

PhaseField QuantizationMap::project_p0(const PhaseField& phi) const {
  return lift(extract(phi));
}

PhaseField QuantizationMap::project_p0_kernel(const PhaseField& phi) const {
  const PhaseGrid& g = phi.grid;
  if (g.dim() != 1)
    throw std::invalid_argument("project_p0_kernel: only the 1D validation path is provided");
  if (phi.grid != grid()) throw GridMismatchError("project_p0_kernel: field grid mismatch");
  const std::size_t nx = g.num_x(), np = g.num_p();
  const double hbar = params_.hbar;
  const double dx = g.x_axis(0).spacing, dp = g.p_axis(0).spacing;

  // Gaussian factor tables over index differences.
  std::vector<double> gx(2 * nx - 1), gp(2 * np - 1);
  for (std::size_t d = 0; d < gx.size(); ++d) {
    const double diff = (static_cast<double>(d) - static_cast<double>(nx - 1)) * dx;
    gx[d] = std::exp(-params_.b * diff * diff / (4.0 * params_.a * hbar));
  }
  for (std::size_t d = 0; d < gp.size(); ++d) {
    const double diff = (static_cast<double>(d) - static_cast<double>(np - 1)) * dp;
    gp[d] = std::exp(-params_.a * diff * diff / (4.0 * params_.b * hbar));
  }

  PhaseField out = PhaseField::zero(g);
  const double scale = std::pow(2.0 * std::numbers::pi * hbar, -1.0) * dx * dp;
  const double kernel_cut = 1e-16; // kernel tail truncation, well below tolerances
  for (std::size_t xi = 0; xi < nx; ++xi) {
    const double x = g.x_axis(0).value(xi);
    for (std::size_t pi = 0; pi < np; ++pi) {
      const double p = g.p_axis(0).value(pi);
      cplx acc(0.0, 0.0);
      for (std::size_t xj = 0; xj < nx; ++xj) {
        const double xp = g.x_axis(0).value(xj);
        const double gxv = gx[xi - xj + nx - 1];
        if (gxv < kernel_cut) continue;
        for (std::size_t pj = 0; pj < np; ++pj) {
          const double gpv = gp[pi - pj + np - 1];
          if (gpv < kernel_cut) continue;
          const double pp = g.p_axis(0).value(pj);
          const double phase = (x - xp) * (p + pp) / (2.0 * hbar);
          acc += phi.values[xj * np + pj] * gxv * gpv * std::polar(1.0, phase);
        }
      }
      out.values[xi * np + pi] = acc * scale;
    }
  }
  return out;
}

DensityField QuantizationMap::rho_phase(const ConfigField& psi) const {
  const PhaseField phi = lift(psi);
  DensityField rho;
  rho.axes = grid().x_block().axes();
  for (const auto& pa : grid().p_block().axes()) rho.axes.push_back(pa);
  rho.values.resize(phi.values.size());
  for (std::size_t i = 0; i < phi.values.size(); ++i) rho.values[i] = std::norm(phi.values[i]);
  return rho;
}

DensityField QuantizationMap::rho_config(const ConfigField& psi) const {
  if (psi.grid != grid().config()) throw GridMismatchError("rho_config: psi not on the x grid");
  if (grid().dim() != 1)
    throw std::invalid_argument("rho_config: only n = 1 grids are supported");
  const std::size_t n = psi.grid.size();
  // Smoothing with the same periodic chi^2 kernel the lift uses, so the
  // identity rho(x) = int rho_phase dp holds to machine precision.
  const HermiteBasis& basis = transform_.basis(0);
  DensityField rho;
  rho.axes = {psi.grid.axis(0)};
  rho.values.assign(n, 0.0);
  const double dy = psi.grid.axis(0).spacing;
  for (std::size_t xi = 0; xi < n; ++xi) {
    double acc = 0.0;
    for (std::size_t yi = 0; yi < n; ++yi) {
      const double chi = basis.mode_row(0)[(xi + n - yi) % n];
      acc += std::norm(psi.values[yi]) * chi * chi;
    }
    rho.values[xi] = acc * dy;
  }
  return rho;
}

DensityField QuantizationMap::rho_phase_x_marginal(const ConfigField& psi) const {
  const DensityField rho = rho_phase(psi);
  const std::size_t nx = grid().num_x(), np = grid().num_p();
  DensityField marginal;
  marginal.axes = grid().x_block().axes();
  marginal.values.assign(nx, 0.0);
  const double dp_vol = grid().p_block().cell_volume();
  for (std::size_t xi = 0; xi < nx; ++xi) {
    double acc = 0.0;
    for (std::size_t pi = 0; pi < np; ++pi) acc += rho.values[xi * np + pi];
    marginal.values[xi] = acc * dp_vol;
  }
  return marginal;
}

DensityField wigner(const ConfigField& psi, const ModelParams& params) {
  if (psi.grid.dim() != 1)
    throw std::invalid_argument("wigner: only n = 1 grids are supported");
  require_finite(psi, "wigner");
  const std::size_t n = psi.grid.size();
  const double dx = psi.grid.axis(0).spacing;
  const double hbar = params.hbar;
  // W(x, p) = (pi hbar)^{-1} int psi(x-u) psi*(x+u) e^{2iup/hbar} du with u
  // on the x lattice; the natural momentum grid is half-spaced.
  const double dp_half = std::numbers::pi * hbar / (dx * static_cast<double>(n));

  DensityField w;
  w.axes = {psi.grid.axis(0),
            AxisSpec{-0.5 * dp_half * static_cast<double>(n), dp_half, n}};
  w.values.assign(n * n, 0.0);

  // twiddle table e^{2 pi i k / n}
  std::vector<cplx> twiddle(n);
  for (std::size_t k = 0; k < n; ++k)
    twiddle[k] = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) /
                                     static_cast<double>(n));

  const double scale = dx / (std::numbers::pi * hbar);
  const long nn = static_cast<long>(n);
  for (std::size_t xi = 0; xi < n; ++xi) {
    for (std::size_t pj = 0; pj < n; ++pj) {
      const long jt = static_cast<long>(pj) - nn / 2; // signed momentum index
      cplx acc(0.0, 0.0);
      for (long a = -nn / 2; a < nn / 2; ++a) {
        const long il = static_cast<long>(xi) - a;
        const long ir = static_cast<long>(xi) + a;
        if (il < 0 || il >= nn || ir < 0 || ir >= nn) continue;
        const cplx prod = psi.values[static_cast<std::size_t>(il)] *
                          std::conj(psi.values[static_cast<std::size_t>(ir)]);
        const long k = ((a * jt) % nn + nn) % nn;
        acc += prod * twiddle[static_cast<std::size_t>(k)];
      }
      w.values[xi * n + pj] = acc.real() * scale;
    }
  }
  return w;
}

DensityField wigner_x_marginal(const DensityField& w) {
  if (w.axes.size() != 2) throw std::invalid_argument("wigner_x_marginal: expected a 2D field");
  const std::size_t nx = w.axes[0].n, np = w.axes[1].n;
  DensityField marginal;
  marginal.axes = {w.axes[0]};
  marginal.values.assign(nx, 0.0);
  for (std::size_t xi = 0; xi < nx; ++xi) {
    double acc = 0.0;
    for (std::size_t pi = 0; pi < np; ++pi) acc += w.values[xi * np + pi];
    marginal.values[xi] = acc * w.axes[1].spacing;
  }
  return marginal;
}

} // namespace phasediff
