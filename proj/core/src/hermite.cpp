#include "phasediff/hermite.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace phasediff {

std::vector<double> HermiteBasis::function_values(std::size_t count, double u) {
  std::vector<double> h(count);
  if (count == 0) return h;
  const double h0 = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * u * u);
  h[0] = h0;
  if (count > 1) h[1] = std::sqrt(2.0) * u * h0;
  for (std::size_t j = 1; j + 1 < count; ++j) {
    const double jd = static_cast<double>(j);
    h[j + 1] = std::sqrt(2.0 / (jd + 1.0)) * u * h[j] - std::sqrt(jd / (jd + 1.0)) * h[j - 1];
  }
  return h;
}

HermiteBasis::HermiteBasis(const AxisSpec& axis, double scale, std::size_t cutoff)
    : axis_(axis), scale_(scale), cutoff_(cutoff) {
  if (!(scale > 0.0)) throw std::invalid_argument("HermiteBasis: scale must be > 0");
  if (cutoff == 0) throw std::invalid_argument("HermiteBasis: cutoff must be >= 1");
  if (cutoff > axis.n)
    throw std::invalid_argument("HermiteBasis: cutoff exceeds points per axis");
  table_.resize(cutoff * axis.n);
  const double inv_sqrt_s = 1.0 / std::sqrt(scale);
  const double half = 0.5 * static_cast<double>(axis.n);
  for (std::size_t d = 0; d < axis.n; ++d) {
    // minimum-image signed displacement
    double steps = static_cast<double>(d);
    if (steps >= half) steps -= static_cast<double>(axis.n);
    const double u = steps * axis.spacing / scale;
    const auto h = function_values(cutoff, u);
    for (std::size_t j = 0; j < cutoff; ++j) table_[j * axis.n + d] = h[j] * inv_sqrt_s;
  }
  sampling_gram_deviation_ = gram_max_deviation(cutoff);

  // Modified Gram-Schmidt in the dx-weighted inner product. On resolved
  // grids this changes nothing beyond roundoff; on coarse grids it keeps
  // analysis/synthesis an exact orthogonal projection (no amplification).
  const std::size_t n = axis.n;
  const double dx = axis.spacing;
  for (std::size_t j = 0; j < cutoff; ++j) {
    double* row_j = table_.data() + j * n;
    for (std::size_t k = 0; k < j; ++k) {
      const double* row_k = table_.data() + k * n;
      double dot = 0.0;
      for (std::size_t d = 0; d < n; ++d) dot += row_k[d] * row_j[d];
      dot *= dx;
      for (std::size_t d = 0; d < n; ++d) row_j[d] -= dot * row_k[d];
    }
    double nrm = 0.0;
    for (std::size_t d = 0; d < n; ++d) nrm += row_j[d] * row_j[d];
    nrm = std::sqrt(nrm * dx);
    if (nrm < 1e-12)
      throw std::invalid_argument(
          "HermiteBasis: modes beyond the grid resolution are degenerate; lower the cutoff");
    for (std::size_t d = 0; d < n; ++d) row_j[d] /= nrm;
  }
}

double HermiteBasis::gram_max_deviation(std::size_t upto) const {
  if (upto > cutoff_) upto = cutoff_;
  double worst = 0.0;
  for (std::size_t j = 0; j < upto; ++j) {
    for (std::size_t k = j; k < upto; ++k) {
      double dot = 0.0;
      for (std::size_t d = 0; d < axis_.n; ++d)
        dot += table_[j * axis_.n + d] * table_[k * axis_.n + d];
      dot *= axis_.spacing;
      const double target = (j == k) ? 1.0 : 0.0;
      worst = std::max(worst, std::abs(dot - target));
    }
  }
  return worst;
}

std::size_t HermiteBasis::resolved_cutoff() const {
  const double half_width = 0.5 * axis_.length();
  for (std::size_t j = 0; j < cutoff_; ++j) {
    const double classical = std::sqrt(2.0 * static_cast<double>(j) + 1.0);
    const bool contained = (classical + 4.5) * scale_ <= half_width;
    const bool sampled = std::numbers::pi * scale_ / classical >= 2.0 * axis_.spacing;
    if (!contained || !sampled) return j;
  }
  return cutoff_;
}

struct HermiteTransform::Impl {
  PhaseGrid grid;
  ConfigGrid y_grid;
  std::size_t cutoff;
  std::vector<HermiteBasis> bases; // one per axis
  mutable std::vector<cplx> work_a, work_b;
};

HermiteTransform::HermiteTransform(const PhaseGrid& grid, const ModelParams& params,
                                   std::size_t cutoff)
    : impl_(std::make_unique<Impl>()) {
  params.validate();
  impl_->grid = grid;
  impl_->y_grid = grid.conjugate_of_p(params.hbar);
  impl_->cutoff = cutoff;
  const double scale = params.chi_scale();
  for (std::size_t k = 0; k < grid.dim(); ++k) {
    const AxisSpec& xa = grid.x_axis(k);
    const AxisSpec& ya = impl_->y_grid.axis(k);
    if (xa.n != ya.n || std::abs(xa.spacing - ya.spacing) > 1e-12 * xa.spacing ||
        std::abs(xa.origin - ya.origin) > 1e-12 * (std::abs(xa.origin) + xa.spacing))
      throw GridMismatchError(
          "HermiteTransform: grid is not conjugate (y axes must coincide with x axes)");
    impl_->bases.emplace_back(xa, scale, cutoff);
  }
  const std::size_t max_words = std::max(grid.num_x(), impl_->y_grid.size());
  impl_->work_a.resize(max_words);
  impl_->work_b.resize(max_words);
}

HermiteTransform::~HermiteTransform() = default;

const PhaseGrid& HermiteTransform::grid() const { return impl_->grid; }
std::size_t HermiteTransform::cutoff() const { return impl_->cutoff; }
const HermiteBasis& HermiteTransform::basis(std::size_t axis) const {
  return impl_->bases.at(axis);
}

namespace {

// Contract axis `k` of a tensor (current per-axis extents in `shape`) against
// the basis table centered at y index `yc`: analysis (N -> J) or synthesis
// (J -> N). Input in `in`, output written to `out`; shape[k] updated.
void contract_axis(const HermiteBasis& basis, std::size_t yc, bool analysis,
                   const cplx* in, cplx* out, std::vector<std::size_t>& shape, std::size_t k) {
  const std::size_t n = basis.axis().n;
  const std::size_t jmax = basis.cutoff();
  const double dx = basis.axis().spacing;
  std::size_t outer = 1, inner = 1;
  for (std::size_t a = 0; a < k; ++a) outer *= shape[a];
  for (std::size_t a = k + 1; a < shape.size(); ++a) inner *= shape[a];
  const std::size_t in_len = shape[k];
  const std::size_t out_len = analysis ? jmax : n;
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t t = 0; t < out_len; ++t) {
      for (std::size_t i = 0; i < inner; ++i) out[(o * out_len + t) * inner + i] = cplx(0, 0);
      if (analysis) {
        const double* row = basis.mode_row(t);
        for (std::size_t a = 0; a < n; ++a) {
          const double w = row[(a + n - yc) % n] * dx;
          if (w == 0.0) continue;
          const cplx* src = in + (o * in_len + a) * inner;
          cplx* dst = out + (o * out_len + t) * inner;
          for (std::size_t i = 0; i < inner; ++i) dst[i] += w * src[i];
        }
      } else {
        // t indexes grid points; sum over modes
        for (std::size_t j = 0; j < jmax; ++j) {
          const double w = basis.mode_row(j)[(t + n - yc) % n];
          if (w == 0.0) continue;
          const cplx* src = in + (o * in_len + j) * inner;
          cplx* dst = out + (o * out_len + t) * inner;
          for (std::size_t i = 0; i < inner; ++i) dst[i] += w * src[i];
        }
      }
    }
  }
  shape[k] = out_len;
}

} // namespace

double HermiteTransform::apply_mode_factor(
    MixedField& psi0, const std::function<cplx(std::size_t)>& factor) const {
  const auto& grid = impl_->grid;
  const std::size_t dim = grid.dim();
  const std::size_t num_x = grid.num_x();
  const std::size_t num_y = impl_->y_grid.size();
  if (psi0.values.size() != num_x * num_y)
    throw GridMismatchError("HermiteTransform: mixed field size mismatch");

  std::vector<std::size_t> yc(dim);
  std::vector<cplx> fiber(num_x);
  const std::size_t jmax = impl_->cutoff;
  std::size_t coeff_count = 1;
  for (std::size_t k = 0; k < dim; ++k) coeff_count *= jmax;

  // Precompute factor per total index (bounded by dim*(jmax-1)).
  std::vector<cplx> factors(dim * (jmax - 1) + 1);
  for (std::size_t j = 0; j < factors.size(); ++j) factors[j] = factor(j);

  const double x_vol = grid.x_block().cell_volume();
  const double y_vol = impl_->y_grid.cell_volume();
  double mass_in = 0.0, mass_discarded = 0.0;

  cplx* a = impl_->work_a.data();
  cplx* b = impl_->work_b.data();
  std::vector<std::size_t> shape(dim);

  for (std::size_t yflat = 0; yflat < num_y; ++yflat) {
    impl_->y_grid.unflatten(yflat, yc.data());
    for (std::size_t xi = 0; xi < num_x; ++xi) fiber[xi] = psi0.values[xi * num_y + yflat];
    double fiber_mass = 0.0;
    for (const cplx& v : fiber) fiber_mass += std::norm(v);
    fiber_mass *= x_vol;
    mass_in += fiber_mass * y_vol;

    // analysis passes
    for (std::size_t k = 0; k < dim; ++k) shape[k] = grid.x_axis(k).n;
    const cplx* src = fiber.data();
    for (std::size_t k = 0; k < dim; ++k) {
      contract_axis(impl_->bases[k], yc[k], true, src, (k % 2 == 0) ? a : b, shape, k);
      src = (k % 2 == 0) ? a : b;
    }
    cplx* coeffs = const_cast<cplx*>(src);

    // mode factors + kept mass
    double kept = 0.0;
    for (std::size_t c = 0; c < coeff_count; ++c) {
      std::size_t rem = c, total = 0;
      for (std::size_t k = dim; k-- > 0;) {
        total += rem % jmax;
        rem /= jmax;
      }
      kept += std::norm(coeffs[c]);
      coeffs[c] *= factors[total];
    }
    mass_discarded += std::max(0.0, fiber_mass - kept) * y_vol;

    // synthesis passes
    const cplx* s = coeffs;
    for (std::size_t k = 0; k < dim; ++k) {
      cplx* dst = (s == a) ? b : a;
      contract_axis(impl_->bases[k], yc[k], false, s, dst, shape, k);
      s = dst;
    }
    for (std::size_t xi = 0; xi < num_x; ++xi) psi0.values[xi * num_y + yflat] = s[xi];
  }
  return (mass_in > 0.0) ? mass_discarded / mass_in : 0.0;
}

ConfigField HermiteTransform::mode_zero_coefficients(const MixedField& psi0) const {
  const auto& grid = impl_->grid;
  const std::size_t dim = grid.dim();
  const std::size_t num_x = grid.num_x();
  const std::size_t num_y = impl_->y_grid.size();
  ConfigField out = ConfigField::zero(impl_->y_grid);
  std::vector<std::size_t> yc(dim), xc(dim);
  for (std::size_t yflat = 0; yflat < num_y; ++yflat) {
    impl_->y_grid.unflatten(yflat, yc.data());
    cplx acc(0.0, 0.0);
    for (std::size_t xi = 0; xi < num_x; ++xi) {
      grid.x_block().unflatten(xi, xc.data());
      double w = 1.0;
      for (std::size_t k = 0; k < dim; ++k) {
        const std::size_t n = grid.x_axis(k).n;
        w *= impl_->bases[k].mode_row(0)[(xc[k] + n - yc[k]) % n];
      }
      acc += w * psi0.values[xi * num_y + yflat];
    }
    out.values[yflat] = acc * grid.x_block().cell_volume();
  }
  return out;
}

MixedField HermiteTransform::synthesize_single(
    const ConfigField& c, const std::vector<std::size_t>& mode_per_axis) const {
  const auto& grid = impl_->grid;
  const std::size_t dim = grid.dim();
  if (c.grid != impl_->y_grid)
    throw GridMismatchError("HermiteTransform: coefficient field not on the y grid");
  if (mode_per_axis.size() != dim)
    throw std::invalid_argument("HermiteTransform: one mode index per axis required");
  for (std::size_t m : mode_per_axis)
    if (m >= impl_->cutoff)
      throw std::invalid_argument("HermiteTransform: mode index beyond cutoff");
  const std::size_t num_x = grid.num_x();
  const std::size_t num_y = impl_->y_grid.size();
  MixedField psi0;
  psi0.grid = grid;
  psi0.y_grid = impl_->y_grid;
  psi0.values.assign(num_x * num_y, cplx(0.0, 0.0));
  std::vector<std::size_t> yc(dim), xc(dim);
  for (std::size_t yflat = 0; yflat < num_y; ++yflat) {
    impl_->y_grid.unflatten(yflat, yc.data());
    const cplx amp = c.values[yflat];
    if (amp == cplx(0.0, 0.0)) continue;
    for (std::size_t xi = 0; xi < num_x; ++xi) {
      grid.x_block().unflatten(xi, xc.data());
      double w = 1.0;
      for (std::size_t k = 0; k < dim; ++k) {
        const std::size_t n = grid.x_axis(k).n;
        w *= impl_->bases[k].mode_row(mode_per_axis[k])[(xc[k] + n - yc[k]) % n];
      }
      psi0.values[xi * num_y + yflat] = amp * w;
    }
  }
  return psi0;
}

} // namespace phasediff
