#include "fracground/solver.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <random>

#include "json.hpp"

namespace fracground {

namespace {

std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(index)};
  return std::mt19937_64(seq);
}

double periodic_distance_sq(const Box& box, std::span<const double> x, std::span<const double> c) {
  const double l = box.side_length();
  double d2 = 0.0;
  for (std::size_t a = 0; a < x.size(); ++a) {
    double d = std::remainder(x[a] - c[a], l);
    d2 += d * d;
  }
  return d2;
}

Field gaussian(const Box& box, std::span<const double> centre, double width, double amplitude) {
  std::vector<double> c(centre.begin(), centre.end());
  return Field::sample(box, [&](std::span<const double> x) {
    return amplitude * std::exp(-periodic_distance_sq(box, x, c) / (2.0 * width * width));
  });
}

// State of one descent run at the current direction v (||v||_s = 1).
struct Iterate {
  Field v;
  double t = 0.0;
  Field u;
  double energy = 0.0;
  Field gradient;   // l2 gradient at u
  Field direction;  // preconditioned tangent gradient at u
  double grad_sq = 0.0;
};

Iterate evaluate(Field v, FractionalOrder s, const Model& model) {
  const double n2 = norm_s_sq(v, s, model);
  v = v * (1.0 / std::sqrt(n2));
  const FiberRoot root = fiber_root(v, s, model);
  Field u = v * root.t_star;
  const double energy = energy_fractional(u, s, model);
  Field g = gradient(u, s, model, Metric::l2);
  const Field pg = precondition(g, s, model);
  // Remove the radial component in the preconditioner metric.
  const double pv_v = seminorm_sq(v, s) + model.potential.mean() * inner_product(v, v);
  const double g_v = inner_product(g, v);
  const double beta = g_v / pv_v;
  Field d = pg - v * beta;
  const double grad_sq = std::max(0.0, inner_product(g, pg) - beta * g_v);
  return Iterate{std::move(v), root.t_star, std::move(u), energy, std::move(g), std::move(d), grad_sq};
}

double relative_gradient(const Iterate& it) {
  return std::sqrt(it.grad_sq) / std::sqrt(std::max(it.energy, std::numeric_limits<double>::min()));
}

struct RunResult {
  Iterate state;
  int iterations = 0;
  bool converged = false;
  bool descent_monotone = true;
};

Field step(const Iterate& it, const Field& search, double alpha) { return it.v - search * (alpha / it.t); }

RunResult descend(Field start, FractionalOrder s, const Model& model, const SolveOptions& opts) {
  RunResult run{evaluate(std::move(start), s, model)};
  int iter = 0;
  // Preconditioned Polak-Ribiere+ conjugate directions; the flat sub-cell
  // translation mode makes plain descent crawl.
  Field search = run.state.direction;
  double slope = run.state.grad_sq;
  bool plain = true;  // search is the plain preconditioned gradient
  while (iter < opts.max_iters) {
    if (relative_gradient(run.state) <= opts.grad_tol) {
      run.converged = true;
      break;
    }
    double alpha = opts.initial_step;
    std::optional<Iterate> accepted;
    for (int b = 0; b < opts.max_backtracks; ++b, alpha *= 0.5) {
      Iterate trial = evaluate(step(run.state, search, alpha), s, model);
      // Strict decrease too: near the minimum the Armijo margin falls below one ulp.
      if (trial.energy < run.state.energy && trial.energy <= run.state.energy - opts.armijo * alpha * slope) {
        accepted = std::move(trial);
        break;
      }
    }
    ++iter;
    if (!accepted) {
      if (!plain) {
        // Retry along the plain preconditioned gradient.
        search = run.state.direction;
        slope = run.state.grad_sq;
        plain = true;
        continue;
      }
      // Energy decrease is below round-off; switch to gradient-norm polishing.
      break;
    }
    const double beta = std::max(
        0.0, (inner_product(accepted->gradient, accepted->direction) -
              inner_product(accepted->gradient, run.state.direction)) / run.state.grad_sq);
    run.state = std::move(*accepted);
    search = run.state.direction + search * beta;
    slope = inner_product(run.state.gradient, search);
    plain = beta == 0.0;
    if (!(slope > 0.0)) {
      search = run.state.direction;
      slope = run.state.grad_sq;
      plain = true;
    }
  }

  // Polish: flow steps accepted while the gradient norm shrinks, down to the
  // round-off floor of the discrete critical point.
  {
    for (int k = 0; k < opts.polish_steps && iter < opts.max_iters; ++k) {
      double alpha = opts.initial_step;
      std::optional<Iterate> better;
      for (int b = 0; b < 10; ++b, alpha *= 0.5) {
        Iterate trial = evaluate(step(run.state, run.state.direction, alpha), s, model);
        if (trial.grad_sq < run.state.grad_sq) {
          better = std::move(trial);
          break;
        }
      }
      ++iter;
      if (!better) break;
      run.state = std::move(*better);
    }
  }
  // A few extra polish steps leave the state at a tight discrete critical point.
  for (int k = 0; k < 5 && iter < opts.max_iters; ++k) {
    Iterate trial = evaluate(step(run.state, run.state.direction, opts.initial_step), s, model);
    ++iter;
    if (!(trial.grad_sq < run.state.grad_sq)) break;
    run.state = std::move(trial);
  }
  run.converged = relative_gradient(run.state) <= opts.grad_tol;
  run.iterations = iter;
  return run;
}

}  // namespace

Field initial_bump(const Box& box, std::uint64_t seed, int restart) {
  auto rng = make_rng(seed, 1, static_cast<std::uint64_t>(restart));
  const double l = box.side_length();
  // Centres sit on grid points: reflection about a grid point is an exact
  // symmetry of the discrete problem, so the sub-cell translation mode
  // carries no force.
  std::uniform_int_distribution<int> pos(0, box.points_per_dim() - 1);
  std::uniform_real_distribution<double> wid(l / 8.0, l / 4.0);
  std::vector<double> c(box.dimension());
  for (double& x : c) x = box.coordinate(pos(rng));
  const double w = wid(rng);
  return gaussian(box, c, w, 1.0);
}

Field probe_field(const Box& box, std::uint64_t seed, int index) {
  auto rng = make_rng(seed, 2, static_cast<std::uint64_t>(index));
  const double l = box.side_length();
  std::uniform_real_distribution<double> pos(-0.5 * l, 0.5 * l);
  std::uniform_real_distribution<double> wid(l / 32.0, l / 8.0);
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  Field out = Field::zeros(box);
  std::vector<double> c(box.dimension());
  for (int b = 0; b < 3; ++b) {
    for (double& x : c) x = pos(rng);
    const double w = wid(rng);
    out = out + gaussian(box, c, w, amp(rng));
  }
  return out;
}

namespace {

void check_options(const SolveOptions& opts) {
  if (opts.max_iters < 1 || !(opts.grad_tol > 0.0) || opts.n_restarts < 1 || !(opts.initial_step > 0.0) ||
      !(opts.armijo > 0.0 && opts.armijo < 1.0) || opts.max_backtracks < 1)
    throw Error(ErrorKind::parameter, "invalid solve options");
}

GroundState assemble(const RunResult& best, std::vector<double> energies, int expected, FractionalOrder s,
                     const Model& model, const SolveOptions& opts) {
  const double c = best.state.energy;
  const bool agree = static_cast<int>(energies.size()) == expected &&
                     std::all_of(energies.begin(), energies.end(),
                                 [c](double e) { return std::abs(e - c) <= 1e-6 * std::abs(c); });
  GroundState gs{
      .u = best.state.u,
      .energy = c,
      .s = s,
      .residual_el = 0.0,
      .residual_nehari = std::abs(nehari_residual(best.state.u, s, model)),
      .iterations = best.iterations,
      .restarts_agree = agree,
      .converged = best.converged,
      .gradient_norm = relative_gradient(best.state),
      .descent_monotone = best.descent_monotone,
      .restart_energies = std::move(energies),
      .seed = opts.seed,
  };
  gs.residual_el = euler_lagrange_residual(gs, model, opts.el_probes);
  return gs;
}

}  // namespace

GroundState solve(FractionalOrder s, const Model& model, const SolveOptions& opts) {
  check_options(opts);
  std::optional<RunResult> best;
  std::vector<double> energies;
  for (int r = 0; r < opts.n_restarts; ++r) {
    try {
      RunResult run = descend(initial_bump(model.box, opts.seed, r), s, model, opts);
      if (!(run.state.u.max_abs() > 0.0)) continue;
      energies.push_back(run.state.energy);
      if (!best || run.state.energy < best->state.energy) best = std::move(run);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::no_root && e.kind() != ErrorKind::degenerate_direction) throw;
    }
  }
  if (!best) throw Error(ErrorKind::degenerate_model, "every restart collapsed to the zero field");
  return assemble(*best, std::move(energies), opts.n_restarts, s, model, opts);
}

GroundState solve_from(const Field& start, FractionalOrder s, const Model& model, const SolveOptions& opts) {
  check_options(opts);
  require_same_box(start.box(), model.box, "solve_from");
  RunResult run = descend(start, s, model, opts);
  if (!(run.state.u.max_abs() > 0.0)) throw Error(ErrorKind::degenerate_model, "descent collapsed to the zero field");
  std::vector<double> energies{run.state.energy};
  return assemble(run, std::move(energies), 1, s, model, opts);
}

double euler_lagrange_residual(const GroundState& gs, const Model& model, int n_probes, std::uint64_t seed) {
  if (!(gs.u.max_abs() > 0.0)) return 0.0;
  const Field g = gradient(gs.u, gs.s, model, Metric::l2);
  double worst = 0.0;
  for (int k = 0; k < n_probes; ++k) {
    const Field phi = probe_field(model.box, seed, k);
    const double norm = std::sqrt(norm_s_sq(phi, gs.s, model));
    if (!(norm > 0.0)) continue;
    worst = std::max(worst, std::abs(inner_product(g, phi)) / norm);
  }
  return worst;
}

MinmaxReport minmax_check(const GroundState& gs, const Model& model, int n_directions, std::uint64_t seed) {
  MinmaxReport r;
  const FiberRoot root = fiber_root(gs.u, gs.s, model);
  r.t_star = root.t_star;
  r.root_at_one = std::abs(root.t_star - 1.0) <= 1e-6;
  r.fiber_energy = energy_fractional(gs.u * root.t_star, gs.s, model);
  r.energy_matches = std::abs(r.fiber_energy - gs.energy) <= 1e-8 * std::abs(gs.energy);
  r.min_sampled_energy = std::numeric_limits<double>::infinity();
  r.infimum_respected = true;
  for (int k = 0; k < n_directions; ++k) {
    const Field w = probe_field(model.box, seed, k);
    const double e = reduced_energy(w, gs.s, model);
    r.min_sampled_energy = std::min(r.min_sampled_energy, e);
    if (gs.energy > e) r.infimum_respected = false;
  }
  return r;
}

void write_ground_state(const std::string& stem, const GroundState& gs) {
  write_field(stem + ".field", gs.u);
  nlohmann::ordered_json j;
  j["s"] = gs.s.value();
  j["energy"] = gs.energy;
  j["residual_el"] = gs.residual_el;
  j["residual_nehari"] = gs.residual_nehari;
  j["iterations"] = gs.iterations;
  j["seed"] = gs.seed;
  j["converged"] = gs.converged;
  std::ofstream out(stem + ".json");
  if (!out) throw Error(ErrorKind::io, "cannot write " + stem + ".json");
  out << j.dump(2) << '\n';
}

}  // namespace fracground
