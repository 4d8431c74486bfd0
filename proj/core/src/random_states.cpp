#include "phasediff/random_states.hpp"

#include <cmath>
#include <stdexcept>

namespace phasediff {

namespace {

void enumerate_modes(std::size_t dim, std::size_t min_total, std::size_t max_total,
                     std::vector<std::size_t>& current,
                     std::vector<std::vector<std::size_t>>& out) {
  if (current.size() == dim) {
    std::size_t total = 0;
    for (std::size_t m : current) total += m;
    if (total >= min_total && total <= max_total) out.push_back(current);
    return;
  }
  for (std::size_t m = 0; m <= max_total; ++m) {
    current.push_back(m);
    enumerate_modes(dim, min_total, max_total, current, out);
    current.pop_back();
  }
}

} // namespace

ConfigField gaussian_packet(const ConfigGrid& grid, double center, double sigma,
                            double momentum, double hbar) {
  if (!(sigma > 0.0)) throw std::invalid_argument("gaussian_packet: sigma must be > 0");
  ConfigField psi = ConfigField::zero(grid);
  const std::size_t dim = grid.dim();
  std::vector<std::size_t> idx(dim);
  for (std::size_t flat = 0; flat < psi.values.size(); ++flat) {
    grid.unflatten(flat, idx.data());
    double env = 0.0, phase = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
      const double y = grid.axis(k).value(idx[k]);
      env += (y - center) * (y - center);
      phase += momentum * y / hbar;
    }
    psi.values[flat] = std::polar(std::exp(-env / (4.0 * sigma * sigma)), phase);
  }
  const double nrm = std::sqrt(norm_sq(psi));
  if (nrm > 0.0) scale(psi, cplx(1.0 / nrm, 0.0));
  return psi;
}

ConfigField random_config_state(const ConfigGrid& grid, std::mt19937_64& rng,
                                std::size_t components) {
  std::uniform_real_distribution<double> center(-1.5, 1.5);
  std::uniform_real_distribution<double> width(0.5, 0.8);
  std::uniform_real_distribution<double> momentum(-1.5, 1.5);
  std::normal_distribution<double> amp(0.0, 1.0);

  ConfigField psi = ConfigField::zero(grid);
  const std::size_t dim = grid.dim();
  std::vector<std::size_t> idx(dim);
  for (std::size_t c = 0; c < components; ++c) {
    const double mu = center(rng);
    const double sigma = width(rng);
    const double k0 = momentum(rng);
    const cplx weight(amp(rng), amp(rng));
    for (std::size_t flat = 0; flat < psi.values.size(); ++flat) {
      grid.unflatten(flat, idx.data());
      double env = 0.0, phase = 0.0;
      for (std::size_t k = 0; k < dim; ++k) {
        const double y = grid.axis(k).value(idx[k]);
        env += (y - mu) * (y - mu);
        phase += k0 * y;
      }
      psi.values[flat] += weight * std::polar(std::exp(-env / (4.0 * sigma * sigma)), phase);
    }
  }
  const double nrm = std::sqrt(norm_sq(psi));
  if (nrm > 0.0) scale(psi, cplx(1.0 / nrm, 0.0));
  return psi;
}

PhaseField random_phase_state(const FourierWorkspace& ws, const HermiteTransform& transform,
                              std::mt19937_64& rng, const RandomStateOptions& options) {
  const PhaseGrid& grid = ws.grid();
  if (options.max_mode + 1 > transform.cutoff())
    throw std::invalid_argument("random_phase_state: max_mode beyond Hermite cutoff");
  if (options.min_mode > options.max_mode)
    throw std::invalid_argument("random_phase_state: min_mode > max_mode");

  std::vector<std::vector<std::size_t>> modes;
  std::vector<std::size_t> scratch;
  enumerate_modes(grid.dim(), options.min_mode, options.max_mode, scratch, modes);

  std::normal_distribution<double> amp(0.0, 1.0);
  MixedField sum;
  sum.grid = grid;
  sum.y_grid = grid.conjugate_of_p(ws.hbar());
  sum.values.assign(grid.size(), cplx(0.0, 0.0));
  for (const auto& mode : modes) {
    std::size_t total = 0;
    for (std::size_t m : mode) total += m;
    const double w = std::pow(options.mode_decay, static_cast<double>(total));
    ConfigField profile = random_config_state(sum.y_grid, rng, options.components);
    const cplx weight = w * cplx(amp(rng), amp(rng));
    const MixedField part = transform.synthesize_single(profile, mode);
    for (std::size_t i = 0; i < sum.values.size(); ++i)
      sum.values[i] += weight * part.values[i];
  }
  PhaseField phi = ws.gauge_apply(ws.from_mixed(sum));
  const double nrm = std::sqrt(norm_sq(phi));
  if (nrm > 0.0) scale(phi, cplx(1.0 / nrm, 0.0));
  return phi;
}

} // namespace phasediff
