#include "fracground/nehari.hpp"

#include <cmath>

namespace fracground {

namespace {

double checked_norm_sq(const Field& v, FractionalOrder s, const Model& model) {
  const double n2 = norm_s_sq(v, s, model);
  if (!(n2 > 0.0)) throw Error(ErrorKind::degenerate_direction, "direction has zero ||.||_s norm");
  return n2;
}

}  // namespace

double fiber_value(const Field& v, double t, FractionalOrder s, const Model& model) {
  checked_norm_sq(v, s, model);
  if (!(t >= 0.0)) throw Error(ErrorKind::parameter, "fiber parameter must be non-negative");
  return energy_fractional(v * t, s, model);
}

double fiber_psi(const Field& v, double t, double norm_sq, const Model& model) {
  const auto values = v.values();
  const Nonlinearity& nl = model.nonlinearity;
  double sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) sum += nl.f(i, t * values[i]) * values[i];
  return norm_sq - sum * v.box().cell_volume() / t;
}

FiberRoot fiber_root(const Field& v, FractionalOrder s, const Model& model) {
  const double n2 = checked_norm_sq(v, s, model);
  // Catalogue nonlinearities are (p-1)-homogeneous, so the nonlinear part of
  // psi is t^{p-2} int f(x, v) v and one pass over the grid suffices.
  const double p = model.nonlinearity.exponent();
  const double drive = model.nonlinearity.integral_f_times_u(v);
  auto psi = [&](double t) { return n2 - std::pow(t, p - 2.0) * drive; };

  FiberRoot root;
  double lo = 1.0, hi = 1.0;
  constexpr int max_doublings = 60;
  if (psi(1.0) > 0.0) {
    int k = 0;
    while (psi(hi) > 0.0) {
      lo = hi;
      hi *= 2.0;
      if (++k > max_doublings)
        throw Error(ErrorKind::no_root, "fiber root not bracketed above after 60 doublings");
    }
  } else {
    int k = 0;
    while (!(psi(lo) > 0.0)) {
      hi = lo;
      lo *= 0.5;
      if (++k > max_doublings)
        throw Error(ErrorKind::no_root, "fiber root not bracketed below after 60 halvings");
    }
  }
  int iterations = 0;
  while (hi - lo > kFiberTolerance * hi) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (psi(mid) > 0.0)
      lo = mid;
    else
      hi = mid;
    ++iterations;
  }
  root.t_lo = lo;
  root.t_hi = hi;
  root.t_star = 0.5 * (lo + hi);
  root.iterations = iterations;
  root.residual = root.t_star * root.t_star * psi(root.t_star);
  return root;
}

Field project(const Field& v, FractionalOrder s, const Model& model) {
  return v * fiber_root(v, s, model).t_star;
}

double reduced_energy(const Field& v, FractionalOrder s, const Model& model) {
  return energy_fractional(project(v, s, model), s, model);
}

}  // namespace fracground
