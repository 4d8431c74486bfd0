#include "phasediff/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace phasediff {

namespace {

GaussRule compute_gauss_legendre(std::size_t order) {
  GaussRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const double eps = 1e-15;
  const std::size_t m = (order + 1) / 2;
  for (std::size_t i = 0; i < m; ++i) {
    // Chebyshev-based initial guess, then Newton on P_n.
    double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(order) + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (std::size_t j = 0; j < order; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * static_cast<double>(j) + 1.0) * z * p1 - static_cast<double>(j) * p2) /
             (static_cast<double>(j) + 1.0);
      }
      pp = static_cast<double>(order) * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < eps) break;
    }
    rule.nodes[i] = -z;
    rule.nodes[order - 1 - i] = z;
    const double w = 2.0 / ((1.0 - z * z) * pp * pp);
    rule.weights[i] = w;
    rule.weights[order - 1 - i] = w;
  }
  return rule;
}

std::complex<double> panel_gauss(const std::function<std::complex<double>(double)>& f, double lo,
                                 double hi, const GaussRule& rule, std::size_t* evals) {
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  std::complex<double> total(0.0, 0.0);
  for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    total += rule.weights[i] * f(mid + half * rule.nodes[i]);
  *evals += rule.nodes.size();
  return total * half;
}

void quad_1d_recurse(const std::function<std::complex<double>(double)>& f, double lo, double hi,
                     double tol, int depth, QuadResult& acc) {
  static const GaussRule& coarse = gauss_legendre(15);
  static const GaussRule& fine = gauss_legendre(30);
  const std::complex<double> c = panel_gauss(f, lo, hi, coarse, &acc.evaluations);
  const std::complex<double> v = panel_gauss(f, lo, hi, fine, &acc.evaluations);
  const double err = std::abs(v - c);
  if (err <= tol || depth <= 0) {
    if (err > tol)
      throw QuadratureError("quad_1d: panel error " + std::to_string(err) +
                            " above tolerance after depth limit");
    acc.value += v;
    acc.error_estimate += err;
    return;
  }
  const double mid = 0.5 * (lo + hi);
  quad_1d_recurse(f, lo, mid, 0.5 * tol, depth - 1, acc);
  quad_1d_recurse(f, mid, hi, 0.5 * tol, depth - 1, acc);
}

} // namespace

const GaussRule& gauss_legendre(std::size_t order) {
  static std::map<std::size_t, GaussRule> cache;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, compute_gauss_legendre(order)).first;
  return it->second;
}

QuadResult quad_1d(const std::function<std::complex<double>(double)>& f, double lo, double hi,
                   double tol, int max_depth) {
  if (!(hi > lo)) throw std::invalid_argument("quad_1d: empty interval");
  QuadResult acc;
  quad_1d_recurse(f, lo, hi, tol, max_depth, acc);
  return acc;
}

QuadResult quad_nd(const std::function<std::complex<double>(const std::vector<double>&)>& f,
                   const std::vector<double>& lo, const std::vector<double>& hi, double tol) {
  if (lo.size() != hi.size() || lo.empty())
    throw std::invalid_argument("quad_nd: inconsistent box");
  const std::size_t dim = lo.size();
  if (dim == 1) {
    return quad_1d([&f](double x) { return f({x}); }, lo[0], hi[0], tol);
  }
  std::vector<double> point(dim, 0.0);
  std::size_t evals = 0;
  // Outer axis adaptive; inner box integrated recursively at tightened tol.
  std::function<std::complex<double>(std::size_t, double)> inner =
      [&](std::size_t axis, double inner_tol) -> std::complex<double> {
    if (axis == dim) return f(point);
    QuadResult r = quad_1d(
        [&](double x) {
          point[axis] = x;
          return inner(axis + 1, inner_tol / (hi[axis] - lo[axis]) * 0.25);
        },
        lo[axis], hi[axis], inner_tol);
    evals += r.evaluations;
    return r.value;
  };
  QuadResult out;
  out.value = inner(0, tol);
  out.evaluations = evals;
  out.error_estimate = tol;
  return out;
}

std::complex<double>
tensor_gauss(const std::function<std::complex<double>(const std::vector<double>&)>& f,
             const std::vector<double>& lo, const std::vector<double>& hi, std::size_t order) {
  const std::size_t dim = lo.size();
  const GaussRule& rule = gauss_legendre(order);
  std::vector<double> point(dim);
  std::function<std::complex<double>(std::size_t)> recurse =
      [&](std::size_t axis) -> std::complex<double> {
    const double mid = 0.5 * (lo[axis] + hi[axis]);
    const double half = 0.5 * (hi[axis] - lo[axis]);
    std::complex<double> total(0.0, 0.0);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      point[axis] = mid + half * rule.nodes[i];
      const std::complex<double> v = (axis + 1 == dim) ? f(point) : recurse(axis + 1);
      total += rule.weights[i] * v;
    }
    return total * half;
  };
  return recurse(0);
}

} // namespace phasediff
