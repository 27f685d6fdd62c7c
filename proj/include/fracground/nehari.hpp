#pragma once

#include "fracground/model.hpp"

namespace fracground {

struct FiberRoot {
  double t_star = 0.0;
  int iterations = 0;
  double t_lo = 0.0;
  double t_hi = 0.0;
  double residual = 0.0;  // J_s'(t* v)(t* v)
};

/// Relative bracket width at which bisection stops.
inline constexpr double kFiberTolerance = 1e-12;

/// t -> J_s(t v). Throws Error{degenerate_direction} when ||v||_s = 0.
double fiber_value(const Field& v, double t, FractionalOrder s, const Model& model);

/// psi(t) = ||v||_s^2 - int f(x, t v) v / t, strictly decreasing under (F4).
double fiber_psi(const Field& v, double t, double norm_sq, const Model& model);

/// Unique positive zero of psi: geometric bracketing from t = 1 (factor 2,
/// at most 60 steps) then bisection to relative width kFiberTolerance.
FiberRoot fiber_root(const Field& v, FractionalOrder s, const Model& model);

/// m_s(v) = t_s(v) v, the projection onto the Nehari manifold.
Field project(const Field& v, FractionalOrder s, const Model& model);

/// J_s(m_s(v)) = sup_{t >= 0} J_s(t v).
double reduced_energy(const Field& v, FractionalOrder s, const Model& model);

}  // namespace fracground
