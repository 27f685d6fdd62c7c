#include "fracground/fractional.hpp"

#include <boost/math/quadrature/ooura_fourier_integrals.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "fracground/quadrature.hpp"

namespace fracground {

namespace {

constexpr double kPi = std::numbers::pi;

double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

void require_dimension(int dimension) {
  if (dimension < 1 || dimension > 3)
    throw Error(ErrorKind::parameter, "dimension must be 1, 2 or 3");
}

// (1 - cos t)/t^2 - 1/2, with the leading cancellation removed for small t.
double one_minus_cos_over_t2_minus_half(double t) {
  if (t < 0.1) {
    const double t2 = t * t;
    return t2 * (-1.0 / 24.0 + t2 * (1.0 / 720.0 + t2 * (-1.0 / 40320.0 + t2 / 3628800.0)));
  }
  const double sh = std::sin(0.5 * t);
  return 2.0 * sh * sh / (t * t) - 0.5;
}

// int_T^inf cos(t) t^{-a} dt for T a multiple of 2*pi, asymptotic expansion.
double cosine_tail(double a, double big_t) {
  double term = a / big_t;
  double sum = term;
  double poch = a;
  for (int k = 1; k <= 4; ++k) {
    poch *= (a + 2 * k - 1) * (a + 2 * k);
    term = poch / std::pow(big_t, 2 * k + 1);
    sum += (k % 2 == 1 ? -term : term);
  }
  return std::pow(big_t, -a) * sum;
}

// int_0^inf (1 - cos t) t^{-1-2s} dt via the in-house adaptive rule.
double radial_integral_gk(double s) {
  constexpr double abs_tol = 1e-15;
  constexpr double rel_tol = 1e-14;
  // [0, 1]: subtract t^{1-2s}/2, integrated analytically.
  const auto head = quadrature::gauss_kronrod(
      [s](double t) { return t <= 0.0 ? 0.0 : std::pow(t, 1.0 - 2.0 * s) * one_minus_cos_over_t2_minus_half(t); },
      0.0, 1.0, abs_tol, rel_tol);
  const double near = 0.5 / (2.0 - 2.0 * s) + head.value;

  // [1, inf): int t^{-a} = 1/(2s) minus the oscillatory cosine part.
  const double a = 1.0 + 2.0 * s;
  auto cosine = [a](double t) { return std::cos(t) * std::pow(t, -a); };
  constexpr int periods = 32;
  double osc = quadrature::gauss_kronrod(cosine, 1.0, 2.0 * kPi, abs_tol, rel_tol).value;
  for (int k = 1; k < periods; ++k)
    osc += quadrature::gauss_kronrod(cosine, 2.0 * kPi * k, 2.0 * kPi * (k + 1), abs_tol, rel_tol).value;
  osc += cosine_tail(a, 2.0 * kPi * periods);
  const double far = 1.0 / (2.0 * s) - osc;
  return near + far;
}

}  // namespace

FractionalOrder FractionalOrder::make(double s, bool strict_theory_range) {
  if (!(s > 0.0 && s <= 1.0) || !std::isfinite(s))
    throw Error(ErrorKind::parameter, "fractional order must satisfy 0 < s <= 1");
  if (strict_theory_range && !(s > 0.5 && s < 1.0)) {
    std::ostringstream msg;
    msg << "s=" << s << " is outside the hypothesis range 1/2 < s < 1";
    throw Error(ErrorKind::parameter, msg.str());
  }
  return FractionalOrder(s, strict_theory_range);
}

double sphere_area(int d) {
  if (d < 0) throw Error(ErrorKind::parameter, "sphere dimension must be non-negative");
  // |S^d| = 2 pi |S^{d-2}| / (d - 1) from |S^0| = 2, |S^1| = 2 pi.
  double area = d % 2 == 0 ? 2.0 : 2.0 * kPi;
  for (int k = d % 2 == 0 ? 2 : 3; k <= d; k += 2) area *= 2.0 * kPi / (k - 1);
  return area;
}

double sobolev_constant(int dimension, double s, SphereConvention convention) {
  require_dimension(dimension);
  if (!(dimension > 2.0 * s))
    throw Error(ErrorKind::not_applicable, "Sobolev constant needs N > 2s");
  const double area = convention == SphereConvention::ambient ? sphere_area(dimension) : sphere_area(dimension - 1);
  return std::tgamma(0.5 * (dimension - 2.0 * s)) / std::tgamma(0.5 * (dimension + 2.0 * s)) *
         std::pow(area, -2.0 * s / dimension);
}

FractionalConstants constants(int dimension, FractionalOrder order) {
  require_dimension(dimension);
  const double s = order.value();
  if (order.is_local())
    throw Error(ErrorKind::constants_undefined,
                "constants undefined at s=1; use the local operator path");
  FractionalConstants out;
  if (dimension == 1) {
    out.a_ns = 1.0;
  } else {
    // r = tan(theta) maps the radial integral onto [0, pi/2].
    const int n = dimension;
    const auto angular = quadrature::gauss_kronrod(
        [n, s](double th) { return std::pow(std::sin(th), n - 2) * std::pow(std::cos(th), 2.0 * s); },
        0.0, 0.5 * kPi, 1e-15, 1e-14);
    out.a_ns = sphere_area(dimension - 2) * angular.value;
  }
  out.b_s = 2.0 * s * (1.0 - s) * radial_integral_gk(s);
  out.c_ns = s * (1.0 - s) / (out.a_ns * out.b_s);
  out.omega = sphere_area(dimension - 1);
  if (dimension > 2.0 * s) {
    out.sobolev = sobolev_constant(dimension, s);
    out.critical_exponent = 2.0 * dimension / (dimension - 2.0 * s);
  }
  return out;
}

namespace {

double polar_constant(int dimension, double s) {
  if (!(s > 0.0 && s < 1.0)) throw Error(ErrorKind::parameter, "constant_quadrature needs 0 < s < 1");
  using boost::math::quadrature::ooura_fourier_cos;
  using boost::math::quadrature::ooura_fourier_sin;
  using boost::math::quadrature::tanh_sinh;

  tanh_sinh<double> ts;
  double rel_err = 0.0;

  // Angular moment: int_{S^{N-1}} |theta_1|^{2s} d theta.
  double angular = 2.0;
  if (dimension >= 2) {
    double err = 0.0;
    const int n = dimension;
    const double half = ts.integrate(
        [n, s](double th) { return std::pow(std::cos(th), 2.0 * s) * std::pow(std::sin(th), n - 2); },
        0.0, 0.5 * kPi, 1e-14, &err);
    angular = sphere_area(dimension - 2) * 2.0 * half;
    rel_err += err / std::abs(half);
  }

  // Radial part int_0^inf (1 - cos r) r^{-1-2s} dr.
  double err_head = 0.0;
  const double head = ts.integrate(
      [s](double r) {
        // (1 - cos r) r^{-1-2s} = sinc(r/2)^2 r^{1-2s} / 2, stable near 0.
        const double half = 0.5 * r;
        const double sinc = half < 1e-8 ? 1.0 : std::sin(half) / half;
        return 0.5 * sinc * sinc * std::pow(r, 1.0 - 2.0 * s);
      },
      0.0, 1.0, 1e-14, &err_head);
  const double a = 1.0 + 2.0 * s;
  auto shifted = [a](double t) { return std::pow(1.0 + t, -a); };
  ooura_fourier_cos<double> fc;
  ooura_fourier_sin<double> fs;
  const auto [cos_part, cos_err] = fc.integrate(shifted, 1.0);
  const auto [sin_part, sin_err] = fs.integrate(shifted, 1.0);
  // int_1^inf cos(r) r^{-a} dr with r = 1 + t.
  const double osc = std::cos(1.0) * cos_part - std::sin(1.0) * sin_part;
  const double radial = head + 1.0 / (2.0 * s) - osc;
  const double abs_err = err_head + std::abs(cos_err * cos_part) + std::abs(sin_err * sin_part);
  rel_err += abs_err / std::abs(radial);

  if (rel_err > 1e-8) {
    std::ostringstream msg;
    msg << "constant_quadrature(N=" << dimension << ", s=" << s << ") estimated relative error " << rel_err;
    throw AccuracyError(msg.str(), rel_err);
  }
  return 1.0 / (angular * radial);
}

}  // namespace

double constant_quadrature(int dimension, double s) {
  require_dimension(dimension);
  if (!(s > 0.0 && s < 1.0)) throw Error(ErrorKind::parameter, "constant_quadrature needs 0 < s < 1");
  try {
    return polar_constant(dimension, s);
  } catch (const boost::math::evaluation_error& e) {
    throw AccuracyError(std::string("constant_quadrature: ") + e.what(), std::numeric_limits<double>::infinity());
  }
}

std::vector<double> fractional_symbol(const Box& box, double s) {
  auto k2 = box.wavenumber_sq();
  if (s == 1.0) return k2;
  for (double& v : k2) v = v > 0.0 ? std::pow(v, s) : 0.0;
  return k2;
}

Field apply_fractional_laplacian(const Field& u, FractionalOrder s) {
  const auto symbol = fractional_symbol(u.box(), s.value());
  return inverse_transform(transform(u).scaled(symbol));
}

double seminorm_sq(const Field& u, FractionalOrder s) {
  const auto symbol = fractional_symbol(u.box(), s.value());
  return transform(u).weighted_energy(symbol);
}

double gagliardo_direct(const Field& u, double s) {
  const Box& box = u.box();
  const int n = box.dimension();
  const int m = box.points_per_dim();
  if (!((n == 1 && m <= 256) || (n == 2 && m <= 48)))
    throw Error(ErrorKind::oracle_too_large, "gagliardo_direct supports N=1 with M<=256 or N=2 with M<=48");
  if (!(s > 0.0 && s < 1.0)) throw Error(ErrorKind::parameter, "gagliardo_direct needs 0 < s < 1");

  const double h = box.spacing();
  const double exponent = n + 2.0 * s;
  const int half = m / 2;
  // Kernel by minimum-image cell offsets.
  std::vector<double> kernel((half + 1) * (n == 2 ? half + 1 : 1), 0.0);
  for (int dx = 0; dx <= half; ++dx) {
    for (int dy = 0; dy <= (n == 2 ? half : 0); ++dy) {
      const double r = h * std::sqrt(double(dx) * dx + double(dy) * dy);
      kernel[dx * (n == 2 ? half + 1 : 1) + dy] = (dx == 0 && dy == 0) ? 0.0 : std::pow(r, -exponent);
    }
  }
  auto image = [m](int d) {
    d = std::abs(d);
    return std::min(d, m - d);
  };

  const auto v = u.values();
  std::vector<double> rows(box.size(), 0.0);
  for (std::size_t i = 0; i < box.size(); ++i) {
    const auto ii = box.unflatten(i);
    double row = 0.0;
    for (std::size_t j = 0; j < box.size(); ++j) {
      if (j == i) continue;
      const auto jj = box.unflatten(j);
      const int dx = image(ii[0] - jj[0]);
      const int dy = n == 2 ? image(ii[1] - jj[1]) : 0;
      const double diff = v[i] - v[j];
      row += diff * diff * kernel[dx * (n == 2 ? half + 1 : 1) + dy];
    }
    rows[i] = row;
  }
  const double cell = box.cell_volume();
  return pairwise_sum(rows) * cell * cell;
}

SobolevReport sobolev_inequality_check(const Field& u, FractionalOrder order, SphereConvention convention) {
  const int n = u.box().dimension();
  const double s = order.value();
  if (!(n > 2.0 * s)) throw Error(ErrorKind::not_applicable, "Sobolev inequality needs N > 2s");
  const double q = 2.0 * n / (n - 2.0 * s);
  SobolevReport r;
  const double norm = lebesgue_norm(u, q);
  r.lhs = norm * norm;
  r.rhs = sobolev_constant(n, s, convention) * seminorm_sq(u, order);
  r.holds = r.lhs <= r.rhs * (1.0 + 1e-8);
  return r;
}

NormLimitTable norm_limit_check(const Field& u, std::span<const FractionalOrder> s_list) {
  std::vector<FractionalOrder> orders(s_list.begin(), s_list.end());
  std::sort(orders.begin(), orders.end(),
            [](const FractionalOrder& a, const FractionalOrder& b) { return a.value() < b.value(); });
  const SpectralField spec = transform(u);
  const auto k2 = u.box().wavenumber_sq();
  NormLimitTable table;
  table.gradient_sq = spec.weighted_energy(k2);
  std::vector<double> diff(k2.size());
  for (const auto& order : orders) {
    NormLimitRow row;
    row.s = order.value();
    const auto symbol = fractional_symbol(u.box(), row.s);
    row.seminorm_sq = spec.weighted_energy(symbol);
    row.gap = std::abs(row.seminorm_sq - table.gradient_sq);
    for (std::size_t i = 0; i < k2.size(); ++i) {
      const double d = symbol[i] - k2[i];
      diff[i] = d * d;
    }
    row.operator_gap = std::sqrt(spec.weighted_energy(diff));
    table.rows.push_back(row);
  }
  table.gaps_decreasing = true;
  table.operator_gaps_decreasing = true;
  for (std::size_t i = 1; i < table.rows.size(); ++i) {
    if (!(table.rows[i].gap < table.rows[i - 1].gap)) table.gaps_decreasing = false;
    if (!(table.rows[i].operator_gap < table.rows[i - 1].operator_gap)) table.operator_gaps_decreasing = false;
  }
  return table;
}

}  // namespace fracground
