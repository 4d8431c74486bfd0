#ifndef PHASEDIFF_PARAMS_HPP
#define PHASEDIFF_PARAMS_HPP

#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace phasediff {

/// Physical/nondimensional constants of the model. The default unit system
/// is hbar = mass = 1; CGS values only enter the parameter-estimate pipeline
/// in observables.hpp.
struct ModelParams {
  double hbar = 1.0;   ///< action scale
  double mass = 1.0;   ///< particle mass
  double a = 1.0;      ///< diffusion amplitude w.r.t. coordinates
  double b = 1.0;      ///< diffusion amplitude w.r.t. momenta
  std::size_t dim = 1; ///< configuration-space dimension n

  /// Gaussian smoothing variance a*hbar/(2b) of the chi^2 kernel.
  double smoothing_variance() const { return a * hbar / (2.0 * b); }
  /// Width scale sqrt(a*hbar/b) of the chi kernel.
  double chi_scale() const { return std::sqrt(a * hbar / b); }
  /// Relaxation rate unit a*b/hbar.
  double relaxation_rate() const { return a * b / hbar; }

  void validate() const {
    if (!(hbar > 0.0)) throw std::invalid_argument("ModelParams: hbar must be > 0");
    if (!(mass > 0.0)) throw std::invalid_argument("ModelParams: mass must be > 0");
    if (!(a > 0.0)) throw std::invalid_argument("ModelParams: a must be > 0");
    if (!(b > 0.0)) throw std::invalid_argument("ModelParams: b must be > 0");
    if (dim < 1) throw std::invalid_argument("ModelParams: dim must be >= 1");
  }
};

} // namespace phasediff

#endif
