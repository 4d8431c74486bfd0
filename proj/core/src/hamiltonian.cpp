#include "phasediff/hamiltonian.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace phasediff {

HamiltonianSpec::HamiltonianSpec(std::string name, Fn value, FnAxis ddx, FnAxis ddp)
    : name_(std::move(name)), value_(std::move(value)), ddx_(std::move(ddx)),
      ddp_(std::move(ddp)) {}

const SeparableForm& HamiltonianSpec::separable() const {
  if (!separable_) throw std::logic_error("HamiltonianSpec: no separable form available");
  return *separable_;
}

void HamiltonianSpec::validate(const PhaseGrid& grid, double step_fraction) const {
  const std::size_t n = grid.dim();
  std::vector<double> x(n), p(n);
  // Sample a short diagonal sweep through the interior of the grid.
  for (int sample = 1; sample <= 4; ++sample) {
    for (std::size_t k = 0; k < n; ++k) {
      const auto& xa = grid.x_axis(k);
      const auto& pa = grid.p_axis(k);
      x[k] = xa.value(xa.n / 8 + static_cast<std::size_t>(sample) * xa.n / 8);
      p[k] = pa.value(pa.n / 8 + static_cast<std::size_t>(sample) * pa.n / 8);
    }
    for (std::size_t k = 0; k < n; ++k) {
      const double hx = grid.x_axis(k).length() * step_fraction;
      const double hp = grid.p_axis(k).length() * step_fraction;
      auto xp = x, xm = x;
      xp[k] += hx;
      xm[k] -= hx;
      const double fd_x = (value_(xp, p) - value_(xm, p)) / (2.0 * hx);
      auto pp = p, pm = p;
      pp[k] += hp;
      pm[k] -= hp;
      const double fd_p = (value_(x, pp) - value_(x, pm)) / (2.0 * hp);
      const double scale_x = std::abs(fd_x) + 1.0;
      const double scale_p = std::abs(fd_p) + 1.0;
      // O(h^2) truncation with headroom; catches wrong signs and factors,
      // not roundoff.
      const double tol_x = 100.0 * hx * hx * scale_x + 1e-8 * scale_x;
      const double tol_p = 100.0 * hp * hp * scale_p + 1e-8 * scale_p;
      if (std::abs(fd_x - ddx_(x, p, k)) > tol_x || std::abs(fd_p - ddp_(x, p, k)) > tol_p) {
        std::ostringstream msg;
        msg << "HamiltonianSpec '" << name_ << "': supplied derivative disagrees with finite "
            << "differences on axis " << k;
        throw std::invalid_argument(msg.str());
      }
    }
  }
}

namespace {

double sq(double v) { return v * v; }

HamiltonianSpec make_separable(std::string name, double mass, SeparableForm form) {
  auto potential = form.potential;
  auto d1 = form.potential_d1;
  HamiltonianSpec spec(
      std::move(name),
      [mass, potential](const std::vector<double>& x, const std::vector<double>& p) {
        double kinetic = 0.0;
        for (double pk : p) kinetic += sq(pk);
        return kinetic / (2.0 * mass) + potential(x);
      },
      [d1](const std::vector<double>& x, const std::vector<double>&, std::size_t k) {
        return d1(x, k);
      },
      [mass](const std::vector<double>&, const std::vector<double>& p, std::size_t k) {
        return p[k] / mass;
      });
  spec.set_separable(std::move(form));
  return spec;
}

} // namespace

HamiltonianSpec make_constant_hamiltonian(double c, std::size_t /*dim*/) {
  HamiltonianSpec spec(
      "constant",
      [c](const std::vector<double>&, const std::vector<double>&) { return c; },
      [](const std::vector<double>&, const std::vector<double>&, std::size_t) { return 0.0; },
      [](const std::vector<double>&, const std::vector<double>&, std::size_t) { return 0.0; });
  // Separable with infinite mass: the kinetic term and its constants vanish,
  // leaving hatH = c exactly.
  SeparableForm form;
  form.mass = std::numeric_limits<double>::infinity();
  form.potential = [c](const std::vector<double>&) { return c; };
  form.potential_d1 = [](const std::vector<double>&, std::size_t) { return 0.0; };
  form.potential_d2 = [](const std::vector<double>&, std::size_t) { return 0.0; };
  spec.set_separable(std::move(form));
  return spec;
}

HamiltonianSpec make_free_hamiltonian(double mass, std::size_t /*dim*/) {
  SeparableForm form;
  form.mass = mass;
  form.potential = [](const std::vector<double>&) { return 0.0; };
  form.potential_d1 = [](const std::vector<double>&, std::size_t) { return 0.0; };
  form.potential_d2 = [](const std::vector<double>&, std::size_t) { return 0.0; };
  return make_separable("free", mass, std::move(form));
}

HamiltonianSpec make_harmonic_hamiltonian(double mass, double omega, std::size_t /*dim*/) {
  SeparableForm form;
  form.mass = mass;
  const double k2 = mass * omega * omega;
  form.potential = [k2](const std::vector<double>& x) {
    double v = 0.0;
    for (double xk : x) v += sq(xk);
    return 0.5 * k2 * v;
  };
  form.potential_d1 = [k2](const std::vector<double>& x, std::size_t k) { return k2 * x[k]; };
  form.potential_d2 = [k2](const std::vector<double>&, std::size_t) { return k2; };
  return make_separable("harmonic", mass, std::move(form));
}

HamiltonianSpec make_quartic_hamiltonian(double mass, double omega, double lambda,
                                         std::size_t /*dim*/) {
  SeparableForm form;
  form.mass = mass;
  const double k2 = mass * omega * omega;
  form.potential = [k2, lambda](const std::vector<double>& x) {
    double v = 0.0;
    for (double xk : x) v += 0.5 * k2 * sq(xk) + lambda * sq(sq(xk));
    return v;
  };
  form.potential_d1 = [k2, lambda](const std::vector<double>& x, std::size_t k) {
    return k2 * x[k] + 4.0 * lambda * x[k] * sq(x[k]);
  };
  form.potential_d2 = [k2, lambda](const std::vector<double>& x, std::size_t k) {
    return k2 + 12.0 * lambda * sq(x[k]);
  };
  return make_separable("quartic", mass, std::move(form));
}

HamiltonianSpec make_coulomb1d_hamiltonian(double mass, double coupling, double softening) {
  if (!(softening > 0.0))
    throw std::invalid_argument("regularized-coulomb-1d: softening must be > 0");
  SeparableForm form;
  form.mass = mass;
  const double eps2 = sq(softening);
  form.potential = [coupling, eps2](const std::vector<double>& x) {
    return -coupling / std::sqrt(sq(x[0]) + eps2);
  };
  form.potential_d1 = [coupling, eps2](const std::vector<double>& x, std::size_t) {
    const double r2 = sq(x[0]) + eps2;
    return coupling * x[0] / (r2 * std::sqrt(r2));
  };
  form.potential_d2 = [coupling, eps2](const std::vector<double>& x, std::size_t) {
    const double r2 = sq(x[0]) + eps2;
    return coupling * (eps2 - 2.0 * sq(x[0])) / (r2 * r2 * std::sqrt(r2));
  };
  return make_separable("regularized-coulomb-1d", mass, std::move(form));
}

HamiltonianSpec make_hamiltonian(const std::string& name,
                                 const std::map<std::string, double>& args, std::size_t dim) {
  auto get = [&args](const std::string& key, double fallback) {
    auto it = args.find(key);
    return it == args.end() ? fallback : it->second;
  };
  const double mass = get("mass", 1.0);
  if (name == "free") return make_free_hamiltonian(mass, dim);
  if (name == "harmonic") return make_harmonic_hamiltonian(mass, get("omega", 1.0), dim);
  if (name == "quartic")
    return make_quartic_hamiltonian(mass, get("omega", 1.0), get("lambda", 0.1), dim);
  if (name == "regularized-coulomb-1d")
    return make_coulomb1d_hamiltonian(mass, get("coupling", 1.0), get("softening", 0.5));
  if (name == "constant") return make_constant_hamiltonian(get("value", 1.0), dim);
  throw std::invalid_argument("unknown hamiltonian '" + name + "'");
}

} // namespace phasediff
