#ifndef PHASEDIFF_FIELD_HPP
#define PHASEDIFF_FIELD_HPP

#include <complex>
#include <vector>

#include "phasediff/grid.hpp"

namespace phasediff {

using cplx = std::complex<double>;

/// phi(x, p) on a PhaseGrid, momentum block fastest.
struct PhaseField {
  PhaseGrid grid;
  std::vector<cplx> values;

  static PhaseField zero(const PhaseGrid& grid);
  cplx& at(std::size_t xi, std::size_t pi) { return values[xi * grid.num_p() + pi]; }
  const cplx& at(std::size_t xi, std::size_t pi) const { return values[xi * grid.num_p() + pi]; }
};

/// Gauge-stripped, p-transformed representation psi0(x, y). The y block has
/// the same layout position as the p block of the source field.
struct MixedField {
  PhaseGrid grid;   ///< grid of the source field; y axes = conjugate of p
  ConfigGrid y_grid;
  std::vector<cplx> values;

  cplx& at(std::size_t xi, std::size_t yi) { return values[xi * y_grid.size() + yi]; }
  const cplx& at(std::size_t xi, std::size_t yi) const { return values[xi * y_grid.size() + yi]; }
};

/// psi(y) on the configuration grid.
struct ConfigField {
  ConfigGrid grid;
  std::vector<cplx> values;

  static ConfigField zero(const ConfigGrid& grid);
};

/// Real-valued density on an arbitrary tensor grid (phase or configuration).
struct DensityField {
  std::vector<AxisSpec> axes;
  std::vector<double> values;

  double cell_volume() const;
  double integral() const;
  double min_value() const;
  double max_value() const;
};

// L2 machinery. Sums run sequentially over the flat index (left to right),
// so results are bitwise reproducible for a given binary.
double norm_sq(const PhaseField& f);
double norm_sq(const ConfigField& f);
double norm_sq(const MixedField& f);

/// <f, g> with the conjugation on the first argument.
cplx inner(const PhaseField& f, const PhaseField& g);
cplx inner(const ConfigField& f, const ConfigField& g);

void scale(PhaseField& f, cplx factor);
void scale(ConfigField& f, cplx factor);
PhaseField axpy(cplx alpha, const PhaseField& x, const PhaseField& y); // alpha*x + y

/// Largest |value| on the outermost grid shell (first/last index of every axis).
double boundary_max_abs(const PhaseField& f);
double boundary_max_abs(const ConfigField& f);

bool all_finite(const PhaseField& f);
bool all_finite(const ConfigField& f);

/// Throws NonFiniteError when a field contains NaN/Inf.
void require_finite(const PhaseField& f, const char* where);
void require_finite(const ConfigField& f, const char* where);

struct NonFiniteError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct GridMismatchError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

} // namespace phasediff

#endif
