#ifndef PHASEDIFF_HAMILTONIAN_HPP
#define PHASEDIFF_HAMILTONIAN_HPP

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "phasediff/grid.hpp"
#include "phasediff/params.hpp"

namespace phasediff {

/// Separable part H = p^2/(2m) + V(x) when available; enables the analytic
/// reductions of the effective-Hamiltonian machinery.
struct SeparableForm {
  double mass = 1.0;
  std::function<double(const std::vector<double>&)> potential;
  std::function<double(const std::vector<double>&, std::size_t)> potential_d1;
  std::function<double(const std::vector<double>&, std::size_t)> potential_d2;
};

/// Evaluators for H(x,p) and its first two derivatives. Supplied derivatives
/// are validated against centered finite differences on sample points.
class HamiltonianSpec {
public:
  using Fn = std::function<double(const std::vector<double>& x, const std::vector<double>& p)>;
  using FnAxis =
      std::function<double(const std::vector<double>&, const std::vector<double>&, std::size_t)>;

  HamiltonianSpec() = default;
  HamiltonianSpec(std::string name, Fn value, FnAxis ddx, FnAxis ddp);

  const std::string& name() const { return name_; }
  double value(const std::vector<double>& x, const std::vector<double>& p) const {
    return value_(x, p);
  }
  double ddx(const std::vector<double>& x, const std::vector<double>& p, std::size_t k) const {
    return ddx_(x, p, k);
  }
  double ddp(const std::vector<double>& x, const std::vector<double>& p, std::size_t k) const {
    return ddp_(x, p, k);
  }

  bool is_separable() const { return separable_.has_value(); }
  const SeparableForm& separable() const;
  void set_separable(SeparableForm form) { separable_ = std::move(form); }

  /// Compare supplied first derivatives to O(h^2) central differences over
  /// sampled points of the grid; throws when the mismatch is not O(h^2).
  void validate(const PhaseGrid& grid, double step_fraction = 1e-4) const;

private:
  std::string name_;
  Fn value_;
  FnAxis ddx_;
  FnAxis ddp_;
  std::optional<SeparableForm> separable_;
};

// Registry of the named model Hamiltonians.
HamiltonianSpec make_constant_hamiltonian(double c, std::size_t dim);
HamiltonianSpec make_free_hamiltonian(double mass, std::size_t dim);
HamiltonianSpec make_harmonic_hamiltonian(double mass, double omega, std::size_t dim);
HamiltonianSpec make_quartic_hamiltonian(double mass, double omega, double lambda,
                                         std::size_t dim);
HamiltonianSpec make_coulomb1d_hamiltonian(double mass, double coupling, double softening);

/// Build a registry Hamiltonian by name ("free", "harmonic", "quartic",
/// "regularized-coulomb-1d", "constant") with parameters from `args`.
HamiltonianSpec make_hamiltonian(const std::string& name,
                                 const std::map<std::string, double>& args, std::size_t dim);

} // namespace phasediff

#endif
