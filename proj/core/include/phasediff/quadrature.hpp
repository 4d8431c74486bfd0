#ifndef PHASEDIFF_QUADRATURE_HPP
#define PHASEDIFF_QUADRATURE_HPP

#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

namespace phasediff {

struct QuadratureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Gauss-Legendre nodes and weights on [-1, 1]; cached per order.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussRule& gauss_legendre(std::size_t order);

struct QuadResult {
  std::complex<double> value{0.0, 0.0};
  double error_estimate = 0.0;
  std::size_t evaluations = 0;
};

/// Adaptive 1D Gauss quadrature (embedded 15/30-point estimate with panel
/// bisection). Throws QuadratureError when the error estimate cannot be
/// brought below `tol` within the depth limit.
QuadResult quad_1d(const std::function<std::complex<double>(double)>& f, double lo, double hi,
                   double tol, int max_depth = 28);

/// Adaptive tensor quadrature over a box, nesting quad_1d per axis.
/// Intended for smooth (Gaussian-decay) integrands in low dimension.
QuadResult quad_nd(const std::function<std::complex<double>(const std::vector<double>&)>& f,
                   const std::vector<double>& lo, const std::vector<double>& hi, double tol);

/// Fixed-order tensor Gauss rule over a box; the order-doubling companion of
/// quad_nd used by the self-consistency checks.
std::complex<double>
tensor_gauss(const std::function<std::complex<double>(const std::vector<double>&)>& f,
             const std::vector<double>& lo, const std::vector<double>& hi, std::size_t order);

} // namespace phasediff

#endif
