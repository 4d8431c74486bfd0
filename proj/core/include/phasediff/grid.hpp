#ifndef PHASEDIFF_GRID_HPP
#define PHASEDIFF_GRID_HPP

#include <cstddef>
#include <vector>

namespace phasediff {

/// One uniform periodic axis: points origin + i*spacing, i = 0..n-1.
/// The stated extent [origin, origin + n*spacing) is the periodic cell.
struct AxisSpec {
  double origin = 0.0;
  double spacing = 1.0;
  std::size_t n = 0;

  double value(std::size_t i) const { return origin + spacing * static_cast<double>(i); }
  double length() const { return spacing * static_cast<double>(n); }

  /// Centered axis of n points covering [-half_width, half_width).
  static AxisSpec centered(double half_width, std::size_t n);

  bool operator==(const AxisSpec&) const = default;
};

/// Tensor grid over the configuration axes.
class ConfigGrid {
public:
  ConfigGrid() = default;
  explicit ConfigGrid(std::vector<AxisSpec> axes);

  std::size_t dim() const { return axes_.size(); }
  const AxisSpec& axis(std::size_t k) const { return axes_[k]; }
  const std::vector<AxisSpec>& axes() const { return axes_; }

  std::size_t size() const;
  double cell_volume() const;

  /// Decompose a flat row-major index into per-axis indices.
  void unflatten(std::size_t flat, std::size_t* out) const;

  bool operator==(const ConfigGrid&) const = default;

private:
  std::vector<AxisSpec> axes_;
};

/// Tensor grid over phase space: n coordinate axes followed by n momentum
/// axes. Fields are stored row-major with the momentum block fastest.
class PhaseGrid {
public:
  PhaseGrid() = default;
  PhaseGrid(std::vector<AxisSpec> x_axes, std::vector<AxisSpec> p_axes);

  /// The standard construction: centered x axes of n points on
  /// [-x_half_width, x_half_width) and conjugate momentum axes with
  /// dp = 2*pi*hbar/(n*dx), so that the hbar-scaled transform pair maps
  /// the p block onto the x block exactly.
  static PhaseGrid conjugate(std::size_t dim, std::size_t points_per_axis,
                             double x_half_width, double hbar);

  /// Phase grid whose x block is the given configuration grid and whose p
  /// axes are the conjugates of its axes.
  static PhaseGrid from_config(const ConfigGrid& config, double hbar);

  std::size_t dim() const { return x_.dim(); }
  const AxisSpec& x_axis(std::size_t k) const { return x_.axis(k); }
  const AxisSpec& p_axis(std::size_t k) const { return p_.axis(k); }
  const ConfigGrid& x_block() const { return x_; }
  const ConfigGrid& p_block() const { return p_; }

  std::size_t num_x() const { return x_.size(); }
  std::size_t num_p() const { return p_.size(); }
  std::size_t size() const { return num_x() * num_p(); }
  double cell_volume() const { return x_.cell_volume() * p_.cell_volume(); }

  /// Whether dx*dp = 2*pi*hbar/N holds on every axis pair (required by the
  /// transform-based operator paths).
  bool is_conjugate(double hbar, double rel_tol = 1e-12) const;

  /// Configuration grid sharing the x axes.
  ConfigGrid config() const { return x_; }

  /// The y grid produced by the p -> y transform. For conjugate grids this
  /// equals the x block.
  ConfigGrid conjugate_of_p(double hbar) const;

  bool operator==(const PhaseGrid&) const = default;

private:
  ConfigGrid x_;
  ConfigGrid p_;
};

} // namespace phasediff

#endif
