#include "fracground/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace fracground {

// ---------------------------------------------------------------- Potential

Potential::Potential(Field values) : values_(std::move(values)) {
  const auto v = values_.values();
  v_min_ = *std::min_element(v.begin(), v.end());
  double sum = 0.0;
  for (double x : v) sum += x;
  mean_ = sum / static_cast<double>(v.size());
  constant_ = std::all_of(v.begin(), v.end(), [&](double x) { return x == v[0]; });
}

Potential Potential::constant(const Box& box, double v0) { return Potential(Field::constant(box, v0)); }

Potential Potential::cosine_perturbed(const Box& box, double v0, double amplitude, int period_cells) {
  const double k = 2.0 * std::numbers::pi * period_cells / box.side_length();
  return Potential(Field::sample(box, [&](std::span<const double> x) {
    double c = 0.0;
    for (double xa : x) c += std::cos(k * xa);
    return v0 + amplitude * c / static_cast<double>(x.size());
  }));
}

// ---------------------------------------------------------------- Nonlinearity

Nonlinearity Nonlinearity::pure_power(double p) {
  if (!std::isfinite(p) || p <= 1.0) throw Error(ErrorKind::parameter, "power exponent must exceed 1");
  return Nonlinearity(NonlinearityKind::pure_power, p, std::nullopt, 1.0);
}

Nonlinearity Nonlinearity::modulated_power(double p, Field coefficient) {
  if (!std::isfinite(p) || p <= 1.0) throw Error(ErrorKind::parameter, "power exponent must exceed 1");
  const auto a = coefficient.values();
  const auto [lo, hi] = std::minmax_element(a.begin(), a.end());
  if (!(*lo > 0.0)) throw Error(ErrorKind::parameter, "modulation coefficient needs inf a > 0");
  const double growth = *hi;
  return Nonlinearity(NonlinearityKind::modulated_power, p, std::move(coefficient), growth);
}

double Nonlinearity::f(std::size_t i, double u) const noexcept {
  if (u == 0.0) return 0.0;
  const double au = std::abs(u);
  return coefficient_at(i) * std::pow(au, p_ - 2.0) * u;
}

double Nonlinearity::primitive(std::size_t i, double u) const noexcept {
  return coefficient_at(i) * std::pow(std::abs(u), p_) / p_;
}

Field Nonlinearity::apply(const Field& u) const {
  const auto v = u.values();
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = f(i, v[i]);
  return Field(u.box(), std::move(out));
}

double Nonlinearity::integral_primitive(const Field& u) const {
  const auto v = u.values();
  double sum = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) sum += primitive(i, v[i]);
  return sum * u.box().cell_volume();
}

double Nonlinearity::integral_f_times_u(const Field& u) const {
  const auto v = u.values();
  double sum = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) sum += f(i, v[i]) * v[i];
  return sum * u.box().cell_volume();
}

int symmetry_lattice_step(const Model& model) {
  const bool invariant = model.potential.is_constant() && !model.nonlinearity.coefficient().has_value();
  if (invariant) return 1;
  const int m = model.box.points_per_dim();
  const int cells = std::max(1, model.period_cells);
  return m % cells == 0 ? m / cells : m;
}

// ---------------------------------------------------------------- validation

bool AssumptionReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const HypothesisCheck& c) { return c.passed; });
}

const HypothesisCheck* AssumptionReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

namespace {

std::string sample_witness(double u, std::size_t x, const std::string& detail) {
  std::ostringstream w;
  w << "u=" << u << " at grid point " << x << ": " << detail;
  return w.str();
}

// Grid points whose coefficient differs; a pure power needs only one.
std::vector<std::size_t> distinct_points(const Nonlinearity& nl, std::size_t size) {
  std::vector<std::size_t> pts;
  if (!nl.coefficient()) {
    pts.push_back(0);
    return pts;
  }
  pts.resize(size);
  for (std::size_t i = 0; i < size; ++i) pts[i] = i;
  return pts;
}

}  // namespace

AssumptionReport validate_assumptions(const Model& model) {
  AssumptionReport report;
  const Nonlinearity& nl = model.nonlinearity;
  const double p = nl.exponent();
  const int n = model.box.dimension();
  const auto points = distinct_points(nl, model.box.size());

  std::vector<double> magnitudes;
  for (int j = -6; j <= 3; ++j) magnitudes.push_back(std::pow(10.0, j));
  std::vector<double> samples;
  for (double m : magnitudes) {
    samples.push_back(m);
    samples.push_back(-m);
  }

  {
    HypothesisCheck c{"V", model.potential.v_min() > 0.0, ""};
    std::ostringstream w;
    w << "inf V = " << model.potential.v_min();
    c.witness = w.str();
    report.checks.push_back(c);
  }

  {
    HypothesisCheck c{"F1", true, ""};
    const double window = n == 1 ? std::numeric_limits<double>::infinity() : 2.0 * n / (n - 1.0);
    std::ostringstream w;
    if (!(p > 2.0)) {
      c.passed = false;
      w << "p=" << p << " is not above 2";
    } else if (!(p < window)) {
      if (model.strict) {
        c.passed = false;
        w << "p=" << p << " outside (2, 2N/(N-1)) = (2, " << window << ")";
      } else {
        std::ostringstream warn;
        warn << "p=" << p << " exceeds 2N/(N-1)=" << window << "; permitted in permissive mode";
        report.warnings.push_back(warn.str());
      }
    }
    const double growth = nl.growth_constant();
    for (std::size_t x : points) {
      if (!c.passed) break;
      for (double u : samples) {
        const double bound = growth * (1.0 + std::pow(std::abs(u), p - 1.0));
        if (std::abs(nl.f(x, u)) > bound * (1.0 + 1e-12)) {
          c.passed = false;
          w << sample_witness(u, x, "growth bound violated");
          break;
        }
      }
    }
    if (c.passed) w << "growth bound holds with C=" << growth << ", p=" << p;
    c.witness = w.str();
    report.checks.push_back(c);
  }

  {
    // sup_x |f(x,u)/u| must strictly decrease as |u| -> 0.
    HypothesisCheck c{"F2", true, "f(x,u)/u decreases to 0 on sampled u -> 0"};
    for (double sign : {1.0, -1.0}) {
      double prev = std::numeric_limits<double>::infinity();
      for (int k = 1; k <= 6 && c.passed; ++k) {
        const double u = sign * std::pow(10.0, -k);
        double sup = 0.0;
        for (std::size_t x : points) sup = std::max(sup, std::abs(nl.f(x, u) / u));
        if (!(sup < prev)) {
          c.passed = false;
          std::ostringstream d;
          d << "sup_x |f/u| = " << sup << " did not decrease";
          c.witness = sample_witness(u, 0, d.str());
        }
        prev = sup;
      }
    }
    report.checks.push_back(c);
  }

  {
    // inf_x F(x,u)/u^2 must strictly increase beyond |u| = 1e3.
    HypothesisCheck c{"F3", true, "F(x,u)/u^2 increases beyond |u|=1e3"};
    for (double sign : {1.0, -1.0}) {
      double prev = -std::numeric_limits<double>::infinity();
      for (int k = 3; k <= 6 && c.passed; ++k) {
        const double u = sign * std::pow(10.0, k);
        double inf = std::numeric_limits<double>::infinity();
        for (std::size_t x : points) inf = std::min(inf, nl.primitive(x, u) / (u * u));
        if (!(inf > prev)) {
          c.passed = false;
          std::ostringstream d;
          d << "inf_x F/u^2 = " << inf << " did not increase";
          c.witness = sample_witness(u, 0, d.str());
        }
        prev = inf;
      }
    }
    report.checks.push_back(c);
  }

  {
    // f(x,u)/|u| strictly increasing on each half-line.
    HypothesisCheck c{"F4", true, "f(x,u)/|u| strictly increasing on both half-lines"};
    std::vector<double> neg, pos;
    for (auto it = magnitudes.rbegin(); it != magnitudes.rend(); ++it) neg.push_back(-*it);
    pos = magnitudes;
    for (std::size_t x : points) {
      for (const auto* line : {&neg, &pos}) {
        double prev = -std::numeric_limits<double>::infinity();
        for (double u : *line) {
          const double ratio = nl.f(x, u) / std::abs(u);
          if (!(ratio > prev)) {
            c.passed = false;
            c.witness = sample_witness(u, x, "f/|u| not strictly increasing");
            break;
          }
          prev = ratio;
        }
        if (!c.passed) break;
      }
      if (!c.passed) break;
    }
    report.checks.push_back(c);
  }

  {
    HypothesisCheck c{"Remark1.1", true, "0 <= 2F <= f u on all samples"};
    for (std::size_t x : points) {
      for (double u : samples) {
        const double two_f = 2.0 * nl.primitive(x, u);
        const double fu = nl.f(x, u) * u;
        if (two_f < 0.0 || two_f > fu * (1.0 + 1e-12)) {
          c.passed = false;
          c.witness = sample_witness(u, x, "2F <= f u violated");
          break;
        }
      }
      if (!c.passed) break;
    }
    report.checks.push_back(c);
  }

  if (model.strict && n < 3)
    report.warnings.push_back("strict mode with N < 3: the transition theory assumes N >= 3");
  return report;
}

void require_valid(const Model& model) {
  if (!model.strict) return;
  const auto report = validate_assumptions(model);
  for (const auto& c : report.checks)
    if (!c.passed) throw Error(ErrorKind::hypothesis, "hypothesis (" + c.name + ") fails: " + c.witness);
  if (model.box.dimension() < 3)
    throw Error(ErrorKind::hypothesis, "hypothesis (N) fails: strict mode needs N >= 3");
}

// ---------------------------------------------------------------- energies

double norm_s_sq(const Field& u, FractionalOrder s, const Model& model) {
  require_same_box(u.box(), model.box, "norm_s_sq");
  return seminorm_sq(u, s) + inner_product(model.potential.values().hadamard(u), u);
}

double energy_fractional(const Field& u, FractionalOrder s, const Model& model) {
  require_same_box(u.box(), model.box, "energy");
  const double kinetic = seminorm_sq(u, s);
  if (!std::isfinite(kinetic)) throw Error(ErrorKind::overflow, "energy: kinetic term is not finite");
  const double potential = inner_product(model.potential.values().hadamard(u), u);
  if (!std::isfinite(potential)) throw Error(ErrorKind::overflow, "energy: potential term is not finite");
  const double nonlinear = model.nonlinearity.integral_primitive(u);
  if (!std::isfinite(nonlinear)) throw Error(ErrorKind::overflow, "energy: nonlinear term is not finite");
  return 0.5 * (kinetic + potential) - nonlinear;
}

double energy_local(const Field& u, const Model& model) {
  return energy_fractional(u, FractionalOrder::local(), model);
}

Field precondition(const Field& g, FractionalOrder s, const Model& model) {
  const double shift = model.potential.mean();
  if (!(shift > 0.0)) throw Error(ErrorKind::degenerate_model, "preconditioner needs mean V > 0");
  auto symbol = fractional_symbol(g.box(), s.value());
  for (double& v : symbol) v = 1.0 / (v + shift);
  return inverse_transform(transform(g).scaled(symbol));
}

Field gradient(const Field& u, FractionalOrder s, const Model& model, Metric metric) {
  require_same_box(u.box(), model.box, "gradient");
  const Field lu = apply_fractional_laplacian(u, s);
  const auto lv = lu.values();
  const auto uv = u.values();
  const auto vv = model.potential.values().values();
  std::vector<double> g(uv.size());
  for (std::size_t i = 0; i < uv.size(); ++i) g[i] = lv[i] + vv[i] * uv[i] - model.nonlinearity.f(i, uv[i]);
  Field grad(u.box(), std::move(g));
  if (metric == Metric::hs) return precondition(grad, s, model);
  return grad;
}

double nehari_residual(const Field& u, FractionalOrder s, const Model& model) {
  return norm_s_sq(u, s, model) - model.nonlinearity.integral_f_times_u(u);
}

}  // namespace fracground
