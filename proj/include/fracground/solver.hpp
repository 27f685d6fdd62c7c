#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fracground/nehari.hpp"

namespace fracground {

struct SolveOptions {
  int max_iters = 5000;
  double grad_tol = 1e-8;  // hs tangent-gradient norm relative to sqrt(c_s)
  int n_restarts = 4;
  std::uint64_t seed = 1;
  double initial_step = 1.0;
  double armijo = 1e-4;
  int max_backtracks = 40;
  int polish_steps = 200;
  int el_probes = 32;
};

struct GroundState {
  Field u;  // m_s(v) at the final direction
  double energy = 0.0;
  FractionalOrder s;
  double residual_el = 0.0;       // max_phi |J_s'(u) phi| / ||phi||_s
  double residual_nehari = 0.0;   // |J_s'(u) u|
  int iterations = 0;
  bool restarts_agree = false;
  bool converged = false;
  double gradient_norm = 0.0;     // relative, as compared against grad_tol
  bool descent_monotone = true;   // reduced energy never rose on an Armijo step
  std::vector<double> restart_energies;
  std::uint64_t seed = 0;
};

/// Ground state at order s by preconditioned descent on v -> J_s(m_s(v))
/// with ||v||_s = 1, from seeded positive Gaussian bumps. Returns the
/// lowest-energy restart; non-convergence is flagged, not thrown.
GroundState solve(FractionalOrder s, const Model& model, const SolveOptions& opts = {});

/// One descent run from a given start direction; restarts_agree is trivially true.
GroundState solve_from(const Field& start, FractionalOrder s, const Model& model, const SolveOptions& opts = {});

/// Seeded positive bump exp(-|x-c|^2/(2w^2)), random grid-point centre, w in [L/8, L/4].
Field initial_bump(const Box& box, std::uint64_t seed, int restart);

/// Smooth seeded probe: three random signed bumps with widths in [L/32, L/8].
Field probe_field(const Box& box, std::uint64_t seed, int index);

double euler_lagrange_residual(const GroundState& gs, const Model& model, int n_probes,
                               std::uint64_t seed = 7);

struct MinmaxReport {
  double t_star = 0.0;
  bool root_at_one = false;       // |t* - 1| <= 1e-6
  double fiber_energy = 0.0;      // J_s(m_s(u_s))
  bool energy_matches = false;    // relative 1e-8 against gs.energy
  double min_sampled_energy = 0.0;
  bool infimum_respected = false;  // gs.energy <= reduced_energy(w) on all samples
  bool passed() const { return root_at_one && energy_matches && infimum_respected; }
};

MinmaxReport minmax_check(const GroundState& gs, const Model& model, int n_directions = 16,
                          std::uint64_t seed = 11);

/// Writes <stem>.field and <stem>.json.
void write_ground_state(const std::string& stem, const GroundState& gs);

}  // namespace fracground
