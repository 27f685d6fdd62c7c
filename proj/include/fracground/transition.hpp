#pragma once

#include <optional>
#include <ostream>
#include <vector>

#include "fracground/solver.hpp"

namespace fracground {

struct Recentered {
  Field field;
  std::vector<int> shift;  // cells; field = translate(u, shift)
};

/// Ball-mass mode (no reference): moves the lattice point whose ball
/// B(z, radius) carries the most |u|^2 mass to the origin. Candidates are
/// multiples of `lattice_step` cells; ties go to the lexicographically
/// smallest shift. Reference mode: the grid shift maximising
/// <translate(u, z), reference>.
Recentered recenter(const Field& u, const std::optional<Field>& reference = std::nullopt,
                    int lattice_step = 1, std::optional<double> radius = std::nullopt);

/// ||(a - b) chi_{B(0,R)}||_{L2} over cells whose centre lies in the ball.
double l2_local_error(const Field& a, const Field& b, double radius);

/// 1 + sqrt(N).
double default_radius(int dimension);

struct SweepRecord {
  double s = 0.0;
  double energy = 0.0;
  double gap = 0.0;  // |c_s - c|
  double norm_s = 0.0;
  double norm_l2 = 0.0;
  double norm_embedding = 0.0;  // L^{2N/(N-1)}, L^inf for N = 1
  double norm_p = 0.0;          // L^p with p the nonlinearity exponent
  std::vector<int> shift;          // reference-mode recentering
  std::vector<int> ball_shift;     // ball-mass-mode recentering on the symmetry lattice
  double radius = 0.0;
  double l2_local_error = 0.0;
  std::vector<double> extra_radii;
  std::vector<double> extra_errors;
  double residual_el = 0.0;
  double residual_nehari = 0.0;
  double nehari_level = 0.0;  // (1/2) int (f(u)u - 2F(u))
  bool converged = false;
};

struct SweepOptions {
  SolveOptions solve;
  std::vector<double> extra_radii;
  int jobs = 1;
};

struct SweepResult {
  std::vector<SweepRecord> records;  // strictly increasing s
  double local_energy = 0.0;
  Field local_state;
  bool local_converged = false;
  double local_norm_l2_ball = 0.0;  // ||u_0||_{L2(B(0,R))}
  std::optional<bool> gap_monotone;     // empty when fewer than two converged records
  std::optional<bool> l2loc_monotone;
};

/// Relative slack between consecutive converged records.
inline constexpr double kMonotoneSlack = 1.05;

SweepResult sweep(const std::vector<double>& s_list, const Model& model, const SweepOptions& opts = {});

struct BoundednessReport {
  double max_norm_sum = 0.0;  // max_s ||u||_L2 + ||u||_s + ||u||_{L^{2N/(N-1)}}
  double max_norm_s = 0.0;
  double min_norm_s = 0.0;
  double embedding_ratio = 0.0;  // max_s (L2 + L^q norms) / ||u||_s
  double rho_bound = 0.0;        // lower bound on ||u_s||_s from the measured L^p embedding
  bool finite = false;
  bool rho_positive = false;
  bool verdict() const { return finite && rho_positive; }
};

BoundednessReport boundedness_diagnostics(const SweepResult& result, const Model& model);

/// s, c_s, gap, norm_s, norm_l2, z, l2_local_error, residual_el, residual_nehari, converged
void write_sweep_csv(std::ostream& out, const SweepResult& result);

}  // namespace fracground
