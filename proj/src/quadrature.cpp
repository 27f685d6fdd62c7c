#include "fracground/quadrature.hpp"

#include <array>
#include <cmath>
#include <queue>
#include <sstream>
#include <vector>

#include "fracground/error.hpp"

namespace fracground::quadrature {

namespace {

// Kronrod nodes on [0, 1]; odd entries (1, 3, 5) are also Gauss nodes.
constexpr std::array<double, 8> kNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrod = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kGauss = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

Segment rule(const std::function<double(double)>& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(mid);
  double kronrod = fc * kKronrod[7];
  double gauss = fc * kGauss[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kNodes[j];
    const double sum = f(mid - dx) + f(mid + dx);
    kronrod += kKronrod[j] * sum;
    if (j % 2 == 1) gauss += kGauss[j / 2] * sum;
  }
  return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

}  // namespace

Result gauss_kronrod(const std::function<double(double)>& f, double a, double b,
                     double abs_tol, double rel_tol, int max_intervals) {
  std::priority_queue<Segment> heap;
  Segment first = rule(f, a, b);
  double value = first.value;
  double error = first.error;
  heap.push(first);
  int intervals = 1;
  while (error > std::max(abs_tol, rel_tol * std::abs(value))) {
    if (intervals >= max_intervals) {
      std::ostringstream msg;
      msg << "adaptive quadrature on [" << a << ", " << b << "] did not converge; error estimate "
          << error;
      throw AccuracyError(msg.str(), error);
    }
    Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    Segment left = rule(f, worst.a, mid);
    Segment right = rule(f, mid, worst.b);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++intervals;
  }
  // Re-sum to avoid drift from the running updates.
  value = 0.0;
  error = 0.0;
  std::vector<Segment> all;
  while (!heap.empty()) {
    all.push_back(heap.top());
    heap.pop();
  }
  for (auto it = all.rbegin(); it != all.rend(); ++it) {
    value += it->value;
    error += it->error;
  }
  return {value, error, intervals};
}

}  // namespace fracground::quadrature
