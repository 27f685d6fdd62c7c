#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fracground/domain.hpp"
#include "fracground/fractional.hpp"

namespace fracground {

/// Periodic potential sampled on the box.
class Potential {
 public:
  explicit Potential(Field values);

  static Potential constant(const Box& box, double v0);
  /// v0 + amplitude * mean_a cos(2 pi P x_a / L), P = period_cells.
  static Potential cosine_perturbed(const Box& box, double v0, double amplitude, int period_cells);

  const Field& values() const noexcept { return values_; }
  const Box& box() const noexcept { return values_.box(); }
  double v_min() const noexcept { return v_min_; }
  double mean() const noexcept { return mean_; }
  bool is_constant() const noexcept { return constant_; }

 private:
  Field values_;
  double v_min_ = 0.0;
  double mean_ = 0.0;
  bool constant_ = false;
};

enum class NonlinearityKind { pure_power, modulated_power };

/// f(x,u) = a(x)|u|^{p-2}u and F(x,u) = a(x)|u|^p/p, a = 1 for pure powers.
class Nonlinearity {
 public:
  static Nonlinearity pure_power(double p);
  /// Throws Error{parameter} unless inf a > 0.
  static Nonlinearity modulated_power(double p, Field coefficient);

  NonlinearityKind kind() const noexcept { return kind_; }
  double exponent() const noexcept { return p_; }
  const std::optional<Field>& coefficient() const noexcept { return coefficient_; }
  /// Declared C in |f(x,u)| <= C(1 + |u|^{p-1}): sup a.
  double growth_constant() const noexcept { return growth_; }

  double coefficient_at(std::size_t i) const noexcept { return coefficient_ ? (*coefficient_)[i] : 1.0; }
  double f(std::size_t i, double u) const noexcept;
  double primitive(std::size_t i, double u) const noexcept;

  /// Pointwise f(x, u(x)).
  Field apply(const Field& u) const;
  /// int F(x, u) dx.
  double integral_primitive(const Field& u) const;
  /// int f(x, u) u dx.
  double integral_f_times_u(const Field& u) const;

 private:
  Nonlinearity(NonlinearityKind kind, double p, std::optional<Field> a, double growth)
      : kind_(kind), p_(p), coefficient_(std::move(a)), growth_(growth) {}
  NonlinearityKind kind_;
  double p_;
  std::optional<Field> coefficient_;
  double growth_;
};

struct Model {
  Box box;
  Potential potential;
  Nonlinearity nonlinearity;
  bool strict = false;
  /// Number of potential/coefficient periods per box side; shifts by
  /// multiples of M/period_cells cells are exact symmetries.
  int period_cells = 1;
};

/// Cell step of the model's symmetry lattice on the grid: 1 when the model is
/// translation invariant, M/period_cells otherwise.
int symmetry_lattice_step(const Model& model);

struct HypothesisCheck {
  std::string name;  // "V", "F1", ..., "Remark1.1"
  bool passed = false;
  std::string witness;  // failing sample, or a short pass note
};

struct AssumptionReport {
  std::vector<HypothesisCheck> checks;
  std::vector<std::string> warnings;

  bool all_passed() const;
  const HypothesisCheck* find(const std::string& name) const;
};

/// Sampled surrogate checks of (V), (F1)-(F4) and the Remark 1.1 bound.
AssumptionReport validate_assumptions(const Model& model);

/// Throws Error{hypothesis} in strict mode when validation fails.
void require_valid(const Model& model);

/// ||u||_s^2 = seminorm_sq(u, s) + int V u^2.
double norm_s_sq(const Field& u, FractionalOrder s, const Model& model);

/// J_s(u) = ||u||_s^2 / 2 - int F(x, u). s = 1 gives J.
double energy_fractional(const Field& u, FractionalOrder s, const Model& model);
double energy_local(const Field& u, const Model& model);

enum class Metric { l2, hs };

/// l2: (-Lap)^s u + V u - f(x,u). hs: that residual preconditioned by
/// ((-Lap)^s + mean V)^{-1}.
Field gradient(const Field& u, FractionalOrder s, const Model& model, Metric metric = Metric::l2);

/// ((-Lap)^s + mean V)^{-1} g.
Field precondition(const Field& g, FractionalOrder s, const Model& model);

/// J_s'(u)(u) = ||u||_s^2 - int f(x,u) u.
double nehari_residual(const Field& u, FractionalOrder s, const Model& model);

}  // namespace fracground
