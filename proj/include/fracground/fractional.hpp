#pragma once

#include <optional>
#include <span>
#include <vector>

#include "fracground/domain.hpp"

namespace fracground {

/// Order s of the fractional Laplacian, 0 < s <= 1.
///
/// s = 1 selects the local operator -Laplacian. A strict order additionally
/// satisfies 1/2 < s < 1, the range the transition theory covers.
class FractionalOrder {
 public:
  static FractionalOrder make(double s, bool strict_theory_range = false);
  static FractionalOrder local() { return FractionalOrder(1.0, false); }

  double value() const noexcept { return s_; }
  bool strict() const noexcept { return strict_; }
  bool is_local() const noexcept { return s_ == 1.0; }

 private:
  FractionalOrder(double s, bool strict) : s_(s), strict_(strict) {}
  double s_;
  bool strict_;
};

/// Which sphere |S| denotes in the sharp fractional Sobolev constant.
enum class SphereConvention {
  ambient,   // S^N in R^{N+1}; the default
  boundary,  // S^{N-1} in R^N
};

/// Surface area of the unit sphere S^d in R^{d+1}.
double sphere_area(int d);

/// Gamma((N-2s)/2)/Gamma((N+2s)/2) |S|^{-2s/N}; requires N > 2s.
double sobolev_constant(int dimension, double s, SphereConvention convention = SphereConvention::ambient);

struct FractionalConstants {
  double c_ns = 0.0;   // C(N,s)
  double a_ns = 0.0;   // A(N,s)
  double b_s = 0.0;    // B(s)
  double omega = 0.0;  // surface measure of S^{N-1}
  std::optional<double> sobolev;             // absent when N <= 2s
  std::optional<double> critical_exponent;   // 2N/(N-2s), absent when N <= 2s
};

/// A(N,s), B(s) by adaptive quadrature; C(N,s) = s(1-s)/(A B).
/// Throws Error{constants_undefined} at s = 1.
FractionalConstants constants(int dimension, FractionalOrder s);

/// Independent evaluation of 1/C(N,s) = int_{R^N} (1 - cos z_1)/|z|^{N+2s} dz,
/// factored in polar coordinates into an angular moment of |theta_1|^{2s}
/// times a radial integral. Returns C(N,s). Throws AccuracyError when the
/// estimated relative error exceeds 1e-8.
double constant_quadrature(int dimension, double s);

/// |k|^{2s} on every spectral index of the box.
std::vector<double> fractional_symbol(const Box& box, double s);

/// inverse_transform(|k|^{2s} transform(u)).
Field apply_fractional_laplacian(const Field& u, FractionalOrder s);

/// ||(-Laplacian)^{s/2} u||^2_{L2} = (1/L^N) sum |k|^{2s} |u_hat|^2.
double seminorm_sq(const Field& u, FractionalOrder s);

/// Direct O(M^{2N}) Gagliardo double sum with minimum-image distances and
/// the diagonal skipped. Only for N = 1 (M <= 256) or N = 2 (M <= 48).
double gagliardo_direct(const Field& u, double s);

struct SobolevReport {
  double lhs = 0.0;  // ||u||^2 in L^{2_s^*}
  double rhs = 0.0;  // constant * seminorm_sq
  bool holds = false;
};

SobolevReport sobolev_inequality_check(const Field& u, FractionalOrder s,
                                       SphereConvention convention = SphereConvention::ambient);

struct NormLimitRow {
  double s = 0.0;
  double seminorm_sq = 0.0;
  double gap = 0.0;           // |seminorm_sq - ||grad u||^2|
  double operator_gap = 0.0;  // ||(-Lap)^s u - (-Lap) u||_{L2}
};

struct NormLimitTable {
  std::vector<NormLimitRow> rows;  // sorted by s
  double gradient_sq = 0.0;        // ||grad u||^2 from the s = 1 multiplier
  bool gaps_decreasing = false;    // strictly, along increasing s
  bool operator_gaps_decreasing = false;
};

NormLimitTable norm_limit_check(const Field& u, std::span<const FractionalOrder> s_list);

}  // namespace fracground
