#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <span>
#include <vector>

#include "fracground/domain.hpp"
#include "fracground/model.hpp"

namespace fgtest {

using namespace fracground;

inline constexpr double kPi = std::numbers::pi;

inline double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// Closed forms used as oracles; none of them is used by the library.
inline double c_closed(int n, double s) {
  return std::pow(4.0, s) * std::tgamma(0.5 * n + s) / (std::pow(kPi, 0.5 * n) * std::abs(std::tgamma(-s)));
}
inline double a_closed(int n, double s) {
  return std::pow(kPi, 0.5 * (n - 1)) * std::tgamma(s + 0.5) / std::tgamma(0.5 * (n + 2.0 * s));
}
// s(1-s) int_R (1-cos t)/|t|^{1+2s} dt with int_0^inf (1-cos t) t^{-1-2s} = Gamma(1-2s) cos(pi s)/(2s).
inline double b_closed(double s) {
  return 2.0 * s * (1.0 - s) * std::tgamma(1.0 - 2.0 * s) * std::cos(kPi * s) / (2.0 * s);
}

inline Field gaussian(const Box& box, double width, double centre = 0.0) {
  return Field::sample(box, [&](std::span<const double> x) {
    double r2 = 0.0;
    for (double xa : x) r2 += (xa - centre) * (xa - centre);
    return std::exp(-r2 / (2.0 * width * width));
  });
}

inline Field cosine_mode(const Box& box, int mode = 1) {
  const double k = 2.0 * kPi * mode / box.side_length();
  return Field::sample(box, [&](std::span<const double> x) { return std::cos(k * x[0]); });
}

inline Field random_field(const Box& box, std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> v(box.size());
  for (double& x : v) x = d(rng);
  return Field(box, std::move(v));
}

// Real field with random Fourier content on modes |m_a| <= kmax, built in
// physical space so that no transform is involved.
inline Field band_limited(const Box& box, std::mt19937_64& rng, int kmax) {
  std::normal_distribution<double> amp(0.0, 1.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);
  const int n = box.dimension();
  struct Mode {
    int m[3];
    double a, phi;
  };
  std::vector<Mode> modes;
  for (int i = -kmax; i <= kmax; ++i)
    for (int j = (n > 1 ? -kmax : 0); j <= (n > 1 ? kmax : 0); ++j)
      for (int k = (n > 2 ? -kmax : 0); k <= (n > 2 ? kmax : 0); ++k)
        modes.push_back({{i, j, k}, amp(rng), phase(rng)});
  const double base = 2.0 * kPi / box.side_length();
  return Field::sample(box, [&](std::span<const double> x) {
    double v = 0.0;
    for (const auto& md : modes) {
      double arg = md.phi;
      for (int a = 0; a < n; ++a) arg += base * md.m[a] * x[a];
      v += md.a * std::cos(arg);
    }
    return v;
  });
}

inline Model power_model(const Box& box, double p, double v0 = 1.0, bool strict = false) {
  return Model{.box = box,
               .potential = Potential::constant(box, v0),
               .nonlinearity = Nonlinearity::pure_power(p),
               .strict = strict,
               .period_cells = 1};
}

inline Model reference_model(int m = 256) { return power_model(Box::make(1, 40.0, m), 4.0); }

}  // namespace fgtest
