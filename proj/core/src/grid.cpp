#include "phasediff/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace phasediff {

AxisSpec AxisSpec::centered(double half_width, std::size_t n) {
  if (n < 2) throw std::invalid_argument("AxisSpec: need at least 2 points");
  if (!(half_width > 0.0)) throw std::invalid_argument("AxisSpec: half_width must be > 0");
  AxisSpec axis;
  axis.spacing = 2.0 * half_width / static_cast<double>(n);
  axis.origin = -half_width;
  axis.n = n;
  return axis;
}

ConfigGrid::ConfigGrid(std::vector<AxisSpec> axes) : axes_(std::move(axes)) {
  for (const auto& axis : axes_) {
    if (axis.n == 0) throw std::invalid_argument("ConfigGrid: empty axis");
    if (!(axis.spacing > 0.0)) throw std::invalid_argument("ConfigGrid: spacing must be > 0");
  }
}

std::size_t ConfigGrid::size() const {
  std::size_t total = 1;
  for (const auto& axis : axes_) total *= axis.n;
  return total;
}

double ConfigGrid::cell_volume() const {
  double v = 1.0;
  for (const auto& axis : axes_) v *= axis.spacing;
  return v;
}

void ConfigGrid::unflatten(std::size_t flat, std::size_t* out) const {
  for (std::size_t k = axes_.size(); k-- > 0;) {
    out[k] = flat % axes_[k].n;
    flat /= axes_[k].n;
  }
}

PhaseGrid::PhaseGrid(std::vector<AxisSpec> x_axes, std::vector<AxisSpec> p_axes)
    : x_(std::move(x_axes)), p_(std::move(p_axes)) {
  if (x_.dim() != p_.dim())
    throw std::invalid_argument("PhaseGrid: coordinate/momentum dimension mismatch");
  if (x_.dim() == 0) throw std::invalid_argument("PhaseGrid: dimension must be >= 1");
}

PhaseGrid PhaseGrid::conjugate(std::size_t dim, std::size_t points_per_axis,
                               double x_half_width, double hbar) {
  if (points_per_axis < 8)
    throw std::invalid_argument("PhaseGrid: need at least 8 points per axis");
  if ((points_per_axis & (points_per_axis - 1)) != 0)
    throw std::invalid_argument("PhaseGrid: points per axis must be a power of two");
  if (!(hbar > 0.0)) throw std::invalid_argument("PhaseGrid: hbar must be > 0");

  std::vector<AxisSpec> xs(dim, AxisSpec::centered(x_half_width, points_per_axis));
  const double dx = xs[0].spacing;
  const double dp = 2.0 * std::numbers::pi * hbar / (static_cast<double>(points_per_axis) * dx);
  AxisSpec p_axis;
  p_axis.spacing = dp;
  p_axis.n = points_per_axis;
  p_axis.origin = -0.5 * dp * static_cast<double>(points_per_axis);
  std::vector<AxisSpec> ps(dim, p_axis);
  return PhaseGrid(std::move(xs), std::move(ps));
}

PhaseGrid PhaseGrid::from_config(const ConfigGrid& config, double hbar) {
  if (!(hbar > 0.0)) throw std::invalid_argument("PhaseGrid: hbar must be > 0");
  std::vector<AxisSpec> ps;
  ps.reserve(config.dim());
  for (std::size_t k = 0; k < config.dim(); ++k) {
    const AxisSpec& x = config.axis(k);
    AxisSpec p;
    p.n = x.n;
    p.spacing = 2.0 * std::numbers::pi * hbar / (x.spacing * static_cast<double>(x.n));
    p.origin = -0.5 * p.spacing * static_cast<double>(x.n);
    ps.push_back(p);
  }
  return PhaseGrid(config.axes(), std::move(ps));
}

bool PhaseGrid::is_conjugate(double hbar, double rel_tol) const {
  for (std::size_t k = 0; k < dim(); ++k) {
    const double target = 2.0 * std::numbers::pi * hbar / static_cast<double>(p_axis(k).n);
    if (x_axis(k).n != p_axis(k).n) return false;
    if (std::abs(x_axis(k).spacing * p_axis(k).spacing - target) > rel_tol * target)
      return false;
  }
  return true;
}

ConfigGrid PhaseGrid::conjugate_of_p(double hbar) const {
  std::vector<AxisSpec> ys;
  ys.reserve(dim());
  for (std::size_t k = 0; k < dim(); ++k) {
    const auto& p = p_axis(k);
    AxisSpec y;
    y.n = p.n;
    y.spacing = 2.0 * std::numbers::pi * hbar / (p.spacing * static_cast<double>(p.n));
    y.origin = -0.5 * y.spacing * static_cast<double>(p.n);
    ys.push_back(y);
  }
  return ConfigGrid(std::move(ys));
}

} // namespace phasediff
