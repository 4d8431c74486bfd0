#ifndef PHASEDIFF_RANDOM_STATES_HPP
#define PHASEDIFF_RANDOM_STATES_HPP

#include <random>

#include "phasediff/field.hpp"
#include "phasediff/fourier.hpp"
#include "phasediff/hermite.hpp"

namespace phasediff {

/// Normalized random superposition of displaced Gaussian wave packets with
/// bounded centers/widths/momenta, so states stay below the boundary-decay
/// tolerance on grids with half-width >= 8 (in chi-scale units of order 1).
ConfigField random_config_state(const ConfigGrid& grid, std::mt19937_64& rng,
                                std::size_t components = 3);

/// Gaussian of given center/width/momentum, normalized on the grid.
ConfigField gaussian_packet(const ConfigGrid& grid, double center, double sigma,
                            double momentum, double hbar);

struct RandomStateOptions {
  std::size_t min_mode = 0;  ///< lowest Hermite mode per total index
  std::size_t max_mode = 8;  ///< highest total mode index (inclusive)
  double mode_decay = 0.5;   ///< weight ratio between consecutive modes
  std::size_t components = 3;
};

/// Normalized random phase-space state assembled in the mixed representation
/// from Hermite modes with random smooth y-profiles. min_mode = 1 yields a
/// state orthogonal to the stationary subspace (up to grid precision).
PhaseField random_phase_state(const FourierWorkspace& ws, const HermiteTransform& transform,
                              std::mt19937_64& rng, const RandomStateOptions& options = {});

} // namespace phasediff

#endif
