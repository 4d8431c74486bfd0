#include "phasediff/field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace phasediff {

namespace {

double sum_abs2(const std::vector<cplx>& values) {
  double total = 0.0;
  for (const cplx& v : values) total += std::norm(v);
  return total;
}

bool finite_vec(const std::vector<cplx>& values) {
  return std::all_of(values.begin(), values.end(), [](const cplx& v) {
    return std::isfinite(v.real()) && std::isfinite(v.imag());
  });
}

// True when any per-axis index of `flat` within `grid` touches 0 or n-1.
bool on_shell(const ConfigGrid& grid, std::size_t flat) {
  for (std::size_t k = grid.dim(); k-- > 0;) {
    const std::size_t n = grid.axis(k).n;
    const std::size_t i = flat % n;
    if (i == 0 || i + 1 == n) return true;
    flat /= n;
  }
  return false;
}

} // namespace

PhaseField PhaseField::zero(const PhaseGrid& grid) {
  PhaseField f;
  f.grid = grid;
  f.values.assign(grid.size(), cplx(0.0, 0.0));
  return f;
}

ConfigField ConfigField::zero(const ConfigGrid& grid) {
  ConfigField f;
  f.grid = grid;
  f.values.assign(grid.size(), cplx(0.0, 0.0));
  return f;
}

double DensityField::cell_volume() const {
  double v = 1.0;
  for (const auto& axis : axes) v *= axis.spacing;
  return v;
}

double DensityField::integral() const {
  double total = 0.0;
  for (double v : values) total += v;
  return total * cell_volume();
}

double DensityField::min_value() const {
  return *std::min_element(values.begin(), values.end());
}

double DensityField::max_value() const {
  return *std::max_element(values.begin(), values.end());
}

double norm_sq(const PhaseField& f) {
  require_finite(f, "norm_sq");
  return sum_abs2(f.values) * f.grid.cell_volume();
}

double norm_sq(const ConfigField& f) {
  require_finite(f, "norm_sq");
  return sum_abs2(f.values) * f.grid.cell_volume();
}

double norm_sq(const MixedField& f) {
  return sum_abs2(f.values) * f.grid.x_block().cell_volume() * f.y_grid.cell_volume();
}

cplx inner(const PhaseField& f, const PhaseField& g) {
  if (f.grid != g.grid) throw GridMismatchError("inner: phase fields live on different grids");
  cplx total(0.0, 0.0);
  for (std::size_t i = 0; i < f.values.size(); ++i) total += std::conj(f.values[i]) * g.values[i];
  return total * f.grid.cell_volume();
}

cplx inner(const ConfigField& f, const ConfigField& g) {
  if (f.grid != g.grid) throw GridMismatchError("inner: config fields live on different grids");
  cplx total(0.0, 0.0);
  for (std::size_t i = 0; i < f.values.size(); ++i) total += std::conj(f.values[i]) * g.values[i];
  return total * f.grid.cell_volume();
}

void scale(PhaseField& f, cplx factor) {
  for (cplx& v : f.values) v *= factor;
}

void scale(ConfigField& f, cplx factor) {
  for (cplx& v : f.values) v *= factor;
}

PhaseField axpy(cplx alpha, const PhaseField& x, const PhaseField& y) {
  if (x.grid != y.grid) throw GridMismatchError("axpy: phase fields live on different grids");
  PhaseField out = y;
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] += alpha * x.values[i];
  return out;
}

double boundary_max_abs(const PhaseField& f) {
  double worst = 0.0;
  const std::size_t np = f.grid.num_p();
  for (std::size_t xi = 0; xi < f.grid.num_x(); ++xi) {
    const bool x_shell = on_shell(f.grid.x_block(), xi);
    for (std::size_t pi = 0; pi < np; ++pi) {
      if (!x_shell && !on_shell(f.grid.p_block(), pi)) continue;
      worst = std::max(worst, std::abs(f.values[xi * np + pi]));
    }
  }
  return worst;
}

double boundary_max_abs(const ConfigField& f) {
  double worst = 0.0;
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    if (on_shell(f.grid, i)) worst = std::max(worst, std::abs(f.values[i]));
  }
  return worst;
}

bool all_finite(const PhaseField& f) { return finite_vec(f.values); }
bool all_finite(const ConfigField& f) { return finite_vec(f.values); }

void require_finite(const PhaseField& f, const char* where) {
  if (!all_finite(f)) throw NonFiniteError(std::string(where) + ": phase field has NaN/Inf entries");
}

void require_finite(const ConfigField& f, const char* where) {
  if (!all_finite(f)) throw NonFiniteError(std::string(where) + ": config field has NaN/Inf entries");
}

} // namespace phasediff
