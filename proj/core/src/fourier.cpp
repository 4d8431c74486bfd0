#include "phasediff/fourier.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "phasediff/warnings.hpp"

namespace phasediff {

namespace {

// FFTW plan creation/destruction is not thread-safe.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_complex* as_fftw(cplx* p) { return reinterpret_cast<fftw_complex*>(p); }

struct PlanDeleter {
  void operator()(fftw_plan p) const {
    if (p) {
      std::lock_guard<std::mutex> lock(planner_mutex());
      fftw_destroy_plan(p);
    }
  }
};

class Plan {
public:
  Plan() = default;
  Plan(fftw_plan p) : p_(p) {}
  Plan(Plan&& o) noexcept : p_(o.p_) { o.p_ = nullptr; }
  Plan& operator=(Plan&& o) noexcept {
    std::swap(p_, o.p_);
    return *this;
  }
  Plan(const Plan&) = delete;
  Plan& operator=(const Plan&) = delete;
  ~Plan() { PlanDeleter{}(p_); }
  void execute(cplx* in, cplx* out) const { fftw_execute_dft(p_, as_fftw(in), as_fftw(out)); }

private:
  fftw_plan p_ = nullptr;
};

// Plan a rank-`dims.size()` transform embedded in a larger array. Uses
// FFTW_ESTIMATE so the chosen algorithm (and hence rounding) is reproducible,
// and FFTW_UNALIGNED so the plan applies to any buffer of the right shape.
Plan make_plan(const std::vector<int>& dims, int howmany, int stride, int dist,
               int sign, std::vector<cplx>& proto) {
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_plan p = fftw_plan_many_dft(static_cast<int>(dims.size()), dims.data(), howmany,
                                   as_fftw(proto.data()), nullptr, stride, dist,
                                   as_fftw(proto.data()), nullptr, stride, dist,
                                   sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (!p) throw std::runtime_error("FourierWorkspace: fftw plan creation failed");
  return Plan(p);
}

// Per-flat-index product of per-axis phase factors.
std::vector<cplx> tensor_phase(const ConfigGrid& block,
                               const std::vector<std::vector<cplx>>& per_axis) {
  std::vector<cplx> out(block.size(), cplx(1.0, 0.0));
  for (std::size_t flat = 0; flat < out.size(); ++flat) {
    std::size_t rem = flat;
    cplx v(1.0, 0.0);
    for (std::size_t k = block.dim(); k-- > 0;) {
      const std::size_t i = rem % block.axis(k).n;
      rem /= block.axis(k).n;
      v *= per_axis[k][i];
    }
    out[flat] = v;
  }
  return out;
}

// DFT angular wavenumber for index m of an n-point axis with spacing d.
// Order-1 multipliers zero the Nyquist bin.
double wavenumber(std::size_t m, std::size_t n, double d) {
  const double two_pi = 2.0 * std::numbers::pi;
  const auto half = n / 2;
  const double m_signed = (m < half) ? static_cast<double>(m)
                                     : static_cast<double>(m) - static_cast<double>(n);
  return two_pi * m_signed / (d * static_cast<double>(n));
}

std::vector<cplx> derivative_multiplier(const AxisSpec& axis, int order) {
  std::vector<cplx> mult(axis.n);
  for (std::size_t m = 0; m < axis.n; ++m) {
    const bool nyquist = (axis.n % 2 == 0) && (m == axis.n / 2);
    double k = wavenumber(m, axis.n, axis.spacing);
    if (order == 1) {
      mult[m] = nyquist ? cplx(0.0, 0.0) : cplx(0.0, k);
    } else if (order == 2) {
      if (nyquist) k = std::numbers::pi / axis.spacing;
      mult[m] = cplx(-k * k, 0.0);
    } else {
      throw std::invalid_argument("derivative: order must be 1 or 2");
    }
  }
  return mult;
}

} // namespace

std::vector<double> coordinate_table(const ConfigGrid& block, std::size_t axis) {
  std::vector<double> out(block.size());
  std::size_t inner = 1;
  for (std::size_t k = block.dim(); k-- > axis + 1;) inner *= block.axis(k).n;
  for (std::size_t flat = 0; flat < out.size(); ++flat) {
    const std::size_t i = (flat / inner) % block.axis(axis).n;
    out[flat] = block.axis(axis).value(i);
  }
  return out;
}

struct FourierWorkspace::Impl {
  PhaseGrid grid;
  ConfigGrid y_grid;
  double hbar;

  Plan p_fwd, p_bwd; // over the p block (contiguous), howmany = num_x
  Plan x_fwd, x_bwd; // over the x block (strided), howmany = num_p

  std::vector<cplx> gauge;      // e^{+i x p / hbar} per node
  std::vector<cplx> pre_py;     // p -> y input phases (per p flat index)
  std::vector<cplx> post_py;    // p -> y output phases (per y flat index)
  std::vector<cplx> pre_yp;     // y -> p input phases
  std::vector<cplx> post_yp;    // y -> p output phases
  double scale_py = 1.0;
  double scale_yp = 1.0;

  mutable std::vector<cplx> scratch_a, scratch_b;

  // per-axis derivative multipliers, built lazily would complicate; build all
  std::vector<std::vector<cplx>> dx1, dx2, dp1, dp2;
};

FourierWorkspace::FourierWorkspace(const PhaseGrid& grid, double hbar)
    : impl_(std::make_unique<Impl>()) {
  if (!(hbar > 0.0)) throw std::invalid_argument("FourierWorkspace: hbar must be > 0");
  impl_->grid = grid;
  impl_->hbar = hbar;
  impl_->y_grid = grid.conjugate_of_p(hbar);

  const std::size_t n = grid.dim();
  const std::size_t num_x = grid.num_x();
  const std::size_t num_p = grid.num_p();
  impl_->scratch_a.resize(grid.size());
  impl_->scratch_b.resize(grid.size());

  std::vector<int> p_dims(n), x_dims(n);
  for (std::size_t k = 0; k < n; ++k) {
    p_dims[k] = static_cast<int>(grid.p_axis(k).n);
    x_dims[k] = static_cast<int>(grid.x_axis(k).n);
  }
  impl_->p_fwd = make_plan(p_dims, static_cast<int>(num_x), 1, static_cast<int>(num_p),
                           FFTW_FORWARD, impl_->scratch_a);
  impl_->p_bwd = make_plan(p_dims, static_cast<int>(num_x), 1, static_cast<int>(num_p),
                           FFTW_BACKWARD, impl_->scratch_a);
  impl_->x_fwd = make_plan(x_dims, static_cast<int>(num_p), static_cast<int>(num_p), 1,
                           FFTW_FORWARD, impl_->scratch_a);
  impl_->x_bwd = make_plan(x_dims, static_cast<int>(num_p), static_cast<int>(num_p), 1,
                           FFTW_BACKWARD, impl_->scratch_a);

  // gauge table e^{+i x.p / hbar}
  impl_->gauge.resize(grid.size());
  {
    std::vector<std::vector<double>> xc(n), pc(n);
    for (std::size_t k = 0; k < n; ++k) {
      xc[k] = coordinate_table(grid.x_block(), k);
      pc[k] = coordinate_table(grid.p_block(), k);
    }
    for (std::size_t xi = 0; xi < num_x; ++xi) {
      for (std::size_t pi = 0; pi < num_p; ++pi) {
        double dot = 0.0;
        for (std::size_t k = 0; k < n; ++k) dot += xc[k][xi] * pc[k][pi];
        impl_->gauge[xi * num_p + pi] = std::polar(1.0, dot / hbar);
      }
    }
  }

  // Continuum-kernel phase corrections, per axis then tensorized.
  std::vector<std::vector<cplx>> pre_py(n), post_py(n), pre_yp(n), post_yp(n);
  double vol_p = 1.0, vol_y = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    const AxisSpec& p = grid.p_axis(k);
    const AxisSpec& y = impl_->y_grid.axis(k);
    vol_p *= p.spacing;
    vol_y *= y.spacing;
    pre_py[k].resize(p.n);
    post_py[k].resize(y.n);
    pre_yp[k].resize(y.n);
    post_yp[k].resize(p.n);
    for (std::size_t j = 0; j < p.n; ++j)
      pre_py[k][j] = std::polar(1.0, y.origin * p.spacing * static_cast<double>(j) / hbar);
    for (std::size_t m = 0; m < y.n; ++m)
      post_py[k][m] = std::polar(1.0, y.value(m) * p.origin / hbar);
    for (std::size_t m = 0; m < y.n; ++m)
      pre_yp[k][m] = std::polar(1.0, -y.spacing * static_cast<double>(m) * p.origin / hbar);
    for (std::size_t j = 0; j < p.n; ++j)
      post_yp[k][j] = std::polar(1.0, -y.origin * p.value(j) / hbar);
  }
  impl_->pre_py = tensor_phase(grid.p_block(), pre_py);
  impl_->post_py = tensor_phase(impl_->y_grid, post_py);
  impl_->pre_yp = tensor_phase(impl_->y_grid, pre_yp);
  impl_->post_yp = tensor_phase(grid.p_block(), post_yp);
  const double norm = std::pow(2.0 * std::numbers::pi * hbar, -0.5 * static_cast<double>(n));
  impl_->scale_py = norm * vol_p;
  impl_->scale_yp = norm * vol_y;

  impl_->dx1.resize(n);
  impl_->dx2.resize(n);
  impl_->dp1.resize(n);
  impl_->dp2.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    impl_->dx1[k] = derivative_multiplier(grid.x_axis(k), 1);
    impl_->dx2[k] = derivative_multiplier(grid.x_axis(k), 2);
    impl_->dp1[k] = derivative_multiplier(grid.p_axis(k), 1);
    impl_->dp2[k] = derivative_multiplier(grid.p_axis(k), 2);
  }
}

FourierWorkspace::~FourierWorkspace() = default;

const PhaseGrid& FourierWorkspace::grid() const { return impl_->grid; }
double FourierWorkspace::hbar() const { return impl_->hbar; }

PhaseField FourierWorkspace::gauge_strip(const PhaseField& phi) const {
  if (phi.grid != impl_->grid) throw GridMismatchError("gauge_strip: field not on workspace grid");
  PhaseField out = phi;
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] *= std::conj(impl_->gauge[i]);
  return out;
}

PhaseField FourierWorkspace::gauge_apply(const PhaseField& phi0) const {
  if (phi0.grid != impl_->grid) throw GridMismatchError("gauge_apply: field not on workspace grid");
  PhaseField out = phi0;
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] *= impl_->gauge[i];
  return out;
}

MixedField FourierWorkspace::to_mixed(const PhaseField& phi0, double decay_tol) const {
  if (phi0.grid != impl_->grid) throw GridMismatchError("to_mixed: field not on workspace grid");
  if (decay_tol > 0.0) {
    const double boundary = boundary_max_abs(phi0);
    if (boundary > decay_tol) {
      std::ostringstream msg;
      msg << "to_mixed: boundary magnitude " << boundary << " exceeds decay tolerance "
          << decay_tol;
      emit_warning(msg.str());
    }
  }
  const std::size_t num_x = impl_->grid.num_x();
  const std::size_t num_p = impl_->grid.num_p();
  auto& in = impl_->scratch_a;
  auto& out = impl_->scratch_b;
  for (std::size_t xi = 0; xi < num_x; ++xi)
    for (std::size_t pi = 0; pi < num_p; ++pi)
      in[xi * num_p + pi] = phi0.values[xi * num_p + pi] * impl_->pre_py[pi];
  impl_->p_bwd.execute(in.data(), out.data());
  MixedField psi0;
  psi0.grid = impl_->grid;
  psi0.y_grid = impl_->y_grid;
  psi0.values.resize(impl_->grid.size());
  for (std::size_t xi = 0; xi < num_x; ++xi)
    for (std::size_t yi = 0; yi < num_p; ++yi)
      psi0.values[xi * num_p + yi] = out[xi * num_p + yi] * impl_->post_py[yi] * impl_->scale_py;
  return psi0;
}

PhaseField FourierWorkspace::from_mixed(const MixedField& psi0) const {
  if (psi0.grid != impl_->grid) throw GridMismatchError("from_mixed: field not on workspace grid");
  const std::size_t num_x = impl_->grid.num_x();
  const std::size_t num_p = impl_->grid.num_p();
  auto& in = impl_->scratch_a;
  auto& out = impl_->scratch_b;
  for (std::size_t xi = 0; xi < num_x; ++xi)
    for (std::size_t yi = 0; yi < num_p; ++yi)
      in[xi * num_p + yi] = psi0.values[xi * num_p + yi] * impl_->pre_yp[yi];
  impl_->p_fwd.execute(in.data(), out.data());
  PhaseField phi0;
  phi0.grid = impl_->grid;
  phi0.values.resize(impl_->grid.size());
  for (std::size_t xi = 0; xi < num_x; ++xi)
    for (std::size_t pi = 0; pi < num_p; ++pi)
      phi0.values[xi * num_p + pi] = out[xi * num_p + pi] * impl_->post_yp[pi] * impl_->scale_yp;
  return phi0;
}

PhaseField FourierWorkspace::derivative_x(const PhaseField& f, std::size_t axis, int order) const {
  if (f.grid != impl_->grid) throw GridMismatchError("derivative_x: field not on workspace grid");
  const auto& mult = (order == 1) ? impl_->dx1.at(axis) : impl_->dx2.at(axis);
  if (order != 1 && order != 2) throw std::invalid_argument("derivative_x: order must be 1 or 2");
  const std::size_t num_x = impl_->grid.num_x();
  const std::size_t num_p = impl_->grid.num_p();
  auto& buf = impl_->scratch_a;
  auto& buf2 = impl_->scratch_b;
  std::copy(f.values.begin(), f.values.end(), buf.begin());
  impl_->x_fwd.execute(buf.data(), buf2.data());
  // stride of axis within the x block
  std::size_t inner = 1;
  for (std::size_t k = impl_->grid.dim(); k-- > axis + 1;) inner *= impl_->grid.x_axis(k).n;
  const std::size_t n_axis = impl_->grid.x_axis(axis).n;
  const double inv = 1.0 / static_cast<double>(num_x);
  for (std::size_t xi = 0; xi < num_x; ++xi) {
    const cplx m = mult[(xi / inner) % n_axis] * inv;
    for (std::size_t pi = 0; pi < num_p; ++pi) buf2[xi * num_p + pi] *= m;
  }
  impl_->x_bwd.execute(buf2.data(), buf.data());
  PhaseField out;
  out.grid = impl_->grid;
  out.values.assign(buf.begin(), buf.end());
  return out;
}

PhaseField FourierWorkspace::derivative_p(const PhaseField& f, std::size_t axis, int order) const {
  if (f.grid != impl_->grid) throw GridMismatchError("derivative_p: field not on workspace grid");
  const auto& mult = (order == 1) ? impl_->dp1.at(axis) : impl_->dp2.at(axis);
  if (order != 1 && order != 2) throw std::invalid_argument("derivative_p: order must be 1 or 2");
  const std::size_t num_x = impl_->grid.num_x();
  const std::size_t num_p = impl_->grid.num_p();
  auto& buf = impl_->scratch_a;
  auto& buf2 = impl_->scratch_b;
  std::copy(f.values.begin(), f.values.end(), buf.begin());
  impl_->p_fwd.execute(buf.data(), buf2.data());
  std::size_t inner = 1;
  for (std::size_t k = impl_->grid.dim(); k-- > axis + 1;) inner *= impl_->grid.p_axis(k).n;
  const std::size_t n_axis = impl_->grid.p_axis(axis).n;
  const double inv = 1.0 / static_cast<double>(num_p);
  for (std::size_t xi = 0; xi < num_x; ++xi) {
    for (std::size_t pi = 0; pi < num_p; ++pi) {
      const cplx m = mult[(pi / inner) % n_axis] * inv;
      buf2[xi * num_p + pi] *= m;
    }
  }
  impl_->p_bwd.execute(buf2.data(), buf.data());
  PhaseField out;
  out.grid = impl_->grid;
  out.values.assign(buf.begin(), buf.end());
  return out;
}

struct ConfigFourier::Impl {
  ConfigGrid grid;
  ConfigGrid momentum;
  double hbar;
  Plan fwd, bwd;
  std::vector<cplx> pre_yp, post_yp, pre_py, post_py;
  double scale_yp = 1.0, scale_py = 1.0;
  std::vector<std::vector<cplx>> d1, d2;
  mutable std::vector<cplx> scratch_a, scratch_b;
};

ConfigFourier::ConfigFourier(const ConfigGrid& grid, double hbar)
    : impl_(std::make_unique<Impl>()) {
  if (!(hbar > 0.0)) throw std::invalid_argument("ConfigFourier: hbar must be > 0");
  impl_->grid = grid;
  impl_->hbar = hbar;
  const std::size_t n = grid.dim();
  const std::size_t size = grid.size();
  impl_->scratch_a.resize(size);
  impl_->scratch_b.resize(size);

  std::vector<AxisSpec> momentum_axes;
  momentum_axes.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const AxisSpec& y = grid.axis(k);
    AxisSpec p;
    p.n = y.n;
    p.spacing = 2.0 * std::numbers::pi * hbar / (y.spacing * static_cast<double>(y.n));
    p.origin = -0.5 * p.spacing * static_cast<double>(y.n);
    momentum_axes.push_back(p);
  }
  impl_->momentum = ConfigGrid(std::move(momentum_axes));

  std::vector<int> dims(n);
  for (std::size_t k = 0; k < n; ++k) dims[k] = static_cast<int>(grid.axis(k).n);
  impl_->fwd = make_plan(dims, 1, 1, static_cast<int>(size), FFTW_FORWARD, impl_->scratch_a);
  impl_->bwd = make_plan(dims, 1, 1, static_cast<int>(size), FFTW_BACKWARD, impl_->scratch_a);

  std::vector<std::vector<cplx>> pre_yp(n), post_yp(n), pre_py(n), post_py(n);
  double vol_y = 1.0, vol_p = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    const AxisSpec& y = grid.axis(k);
    const AxisSpec& p = impl_->momentum.axis(k);
    vol_y *= y.spacing;
    vol_p *= p.spacing;
    pre_yp[k].resize(y.n);
    post_yp[k].resize(p.n);
    pre_py[k].resize(p.n);
    post_py[k].resize(y.n);
    for (std::size_t m = 0; m < y.n; ++m)
      pre_yp[k][m] = std::polar(1.0, -y.spacing * static_cast<double>(m) * p.origin / hbar);
    for (std::size_t j = 0; j < p.n; ++j)
      post_yp[k][j] = std::polar(1.0, -y.origin * p.value(j) / hbar);
    for (std::size_t j = 0; j < p.n; ++j)
      pre_py[k][j] = std::polar(1.0, y.origin * p.spacing * static_cast<double>(j) / hbar);
    for (std::size_t m = 0; m < y.n; ++m)
      post_py[k][m] = std::polar(1.0, y.value(m) * p.origin / hbar);
  }
  impl_->pre_yp = tensor_phase(grid, pre_yp);
  impl_->post_yp = tensor_phase(impl_->momentum, post_yp);
  impl_->pre_py = tensor_phase(impl_->momentum, pre_py);
  impl_->post_py = tensor_phase(grid, post_py);
  const double norm = std::pow(2.0 * std::numbers::pi * hbar, -0.5 * static_cast<double>(n));
  impl_->scale_yp = norm * vol_y;
  impl_->scale_py = norm * vol_p;

  impl_->d1.resize(n);
  impl_->d2.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    impl_->d1[k] = derivative_multiplier(grid.axis(k), 1);
    impl_->d2[k] = derivative_multiplier(grid.axis(k), 2);
  }
}

ConfigFourier::~ConfigFourier() = default;

const ConfigGrid& ConfigFourier::grid() const { return impl_->grid; }
const ConfigGrid& ConfigFourier::momentum_grid() const { return impl_->momentum; }
double ConfigFourier::hbar() const { return impl_->hbar; }

ConfigField ConfigFourier::to_momentum(const ConfigField& psi) const {
  if (psi.grid != impl_->grid) throw GridMismatchError("to_momentum: field not on workspace grid");
  auto& in = impl_->scratch_a;
  auto& out = impl_->scratch_b;
  for (std::size_t i = 0; i < in.size(); ++i) in[i] = psi.values[i] * impl_->pre_yp[i];
  impl_->fwd.execute(in.data(), out.data());
  ConfigField res;
  res.grid = impl_->momentum;
  res.values.resize(out.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    res.values[i] = out[i] * impl_->post_yp[i] * impl_->scale_yp;
  return res;
}

ConfigField ConfigFourier::from_momentum(const ConfigField& psi_tilde) const {
  if (psi_tilde.grid != impl_->momentum)
    throw GridMismatchError("from_momentum: field not on momentum grid");
  auto& in = impl_->scratch_a;
  auto& out = impl_->scratch_b;
  for (std::size_t i = 0; i < in.size(); ++i) in[i] = psi_tilde.values[i] * impl_->pre_py[i];
  impl_->bwd.execute(in.data(), out.data());
  ConfigField res;
  res.grid = impl_->grid;
  res.values.resize(out.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    res.values[i] = out[i] * impl_->post_py[i] * impl_->scale_py;
  return res;
}

ConfigField ConfigFourier::derivative(const ConfigField& f, std::size_t axis, int order) const {
  if (f.grid != impl_->grid) throw GridMismatchError("derivative: field not on workspace grid");
  const auto& mult = (order == 1) ? impl_->d1.at(axis) : impl_->d2.at(axis);
  if (order != 1 && order != 2) throw std::invalid_argument("derivative: order must be 1 or 2");
  auto& in = impl_->scratch_a;
  auto& out = impl_->scratch_b;
  std::copy(f.values.begin(), f.values.end(), in.begin());
  impl_->fwd.execute(in.data(), out.data());
  std::size_t inner = 1;
  for (std::size_t k = impl_->grid.dim(); k-- > axis + 1;) inner *= impl_->grid.axis(k).n;
  const std::size_t n_axis = impl_->grid.axis(axis).n;
  const double inv = 1.0 / static_cast<double>(impl_->grid.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= mult[(i / inner) % n_axis] * inv;
  impl_->bwd.execute(out.data(), in.data());
  ConfigField res;
  res.grid = impl_->grid;
  res.values.assign(in.begin(), in.end());
  return res;
}

ConfigField ConfigFourier::apply_momentum_multiplier(const ConfigField& psi,
                                                     const std::vector<cplx>& multiplier) const {
  if (psi.grid != impl_->grid)
    throw GridMismatchError("apply_momentum_multiplier: field not on workspace grid");
  if (multiplier.size() != impl_->grid.size())
    throw std::invalid_argument("apply_momentum_multiplier: multiplier size mismatch");
  auto& in = impl_->scratch_a;
  auto& out = impl_->scratch_b;
  std::copy(psi.values.begin(), psi.values.end(), in.begin());
  impl_->fwd.execute(in.data(), out.data());
  const double inv = 1.0 / static_cast<double>(impl_->grid.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= multiplier[i] * inv;
  impl_->bwd.execute(out.data(), in.data());
  ConfigField res;
  res.grid = impl_->grid;
  res.values.assign(in.begin(), in.end());
  return res;
}

std::vector<double> ConfigFourier::momentum_table(std::size_t axis) const {
  const auto& grid = impl_->grid;
  std::vector<double> out(grid.size());
  std::size_t inner = 1;
  for (std::size_t k = grid.dim(); k-- > axis + 1;) inner *= grid.axis(k).n;
  const AxisSpec& ax = grid.axis(axis);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const std::size_t m = (i / inner) % ax.n;
    out[i] = impl_->hbar * wavenumber(m, ax.n, ax.spacing);
  }
  return out;
}

} // namespace phasediff
