#ifndef PHASEDIFF_HERMITE_HPP
#define PHASEDIFF_HERMITE_HPP

#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

#include "phasediff/field.hpp"
#include "phasediff/grid.hpp"
#include "phasediff/params.hpp"

namespace phasediff {

/// L2-normalized Hermite functions h_j((x-y)/s)/sqrt(s) tabulated on one
/// grid axis over the periodic (minimum-image) displacement x-y, then
/// re-orthonormalized in the discrete dx-weighted inner product so that
/// analysis/synthesis is an exact orthogonal projection on any grid. Mode 0
/// is the paper's chi kernel when s^2 = a*hbar/b; mode j is the oscillator
/// eigenfunction with eigenvalue -(2j+1)*ab/hbar per axis.
class HermiteBasis {
public:
  HermiteBasis(const AxisSpec& axis, double scale, std::size_t cutoff);

  const AxisSpec& axis() const { return axis_; }
  double scale() const { return scale_; }
  std::size_t cutoff() const { return cutoff_; }

  /// Mode-j value at periodic displacement index d = (xi - yi) mod n.
  double value(std::size_t j, std::size_t d) const { return table_[j * axis_.n + d]; }
  const double* mode_row(std::size_t j) const { return table_.data() + j * axis_.n; }

  /// Max |Gram - I| over the first `upto` modes with dx-weighted sums
  /// (measured on the basis in use; ~1e-15 after re-orthonormalization).
  double gram_max_deviation(std::size_t upto) const;

  /// Max |Gram - I| of the raw sampled continuum functions before
  /// re-orthonormalization: the resolution diagnostic of the grid.
  double sampling_gram_deviation() const { return sampling_gram_deviation_; }

  /// Largest mode count whose classical support fits the axis with decay
  /// margin and whose oscillation is sampled by at least ~4 points.
  std::size_t resolved_cutoff() const;

  /// h_0..h_{count-1}(u) by the stable three-term recurrence (unit scale).
  static std::vector<double> function_values(std::size_t count, double u);

private:
  AxisSpec axis_;
  double scale_;
  std::size_t cutoff_;
  double sampling_gram_deviation_ = 0.0;
  std::vector<double> table_; // [j * n + d]
};

/// Expansion of mixed-representation fields psi0(x, y) over the tensor
/// Hermite basis centered at y with scale sqrt(a*hbar/b), axis by axis.
/// This is the eigenbasis in which the diffusion acts diagonally with
/// factor depending only on the total mode index |j|.
class HermiteTransform {
public:
  HermiteTransform(const PhaseGrid& grid, const ModelParams& params, std::size_t cutoff);
  ~HermiteTransform();
  HermiteTransform(const HermiteTransform&) = delete;
  HermiteTransform& operator=(const HermiteTransform&) = delete;

  const PhaseGrid& grid() const;
  std::size_t cutoff() const;
  const HermiteBasis& basis(std::size_t axis) const;

  /// Replace psi0 by sum_j factor(|j|) c_j(y) h_j, truncated at the cutoff.
  /// Returns the relative L2 mass discarded by the truncation.
  double apply_mode_factor(MixedField& psi0,
                           const std::function<cplx(std::size_t)>& factor) const;

  /// c_0(y): the projection of each y-fiber onto the ground mode (the
  /// extract integrand, psi(y) = int psi0(x,y) chi(x-y) dx).
  ConfigField mode_zero_coefficients(const MixedField& psi0) const;

  /// psi0(x,y) = c(y) * prod_k h_{mode[k]}((x_k-y_k)/s); mode 0 everywhere
  /// is the lift integrand psi(y) chi(x-y).
  MixedField synthesize_single(const ConfigField& c,
                               const std::vector<std::size_t>& mode_per_axis) const;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

} // namespace phasediff

#endif
