#include "fracground/transition.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

namespace fracground {

namespace {

// Shortest representation that reads back to the same double.
std::string shortest(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

int wrap_signed(int z, int m) {
  z = ((z % m) + m) % m;
  return z >= m / 2 ? z - m : z;
}

// Maximiser of score over candidate flat indices, with near-ties broken by
// the lexicographically smallest signed shift.
struct Best {
  double score = -std::numeric_limits<double>::infinity();
  std::vector<int> shift;
};

bool lex_less(const std::vector<int>& a, const std::vector<int>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

void consider(Best& best, double score, std::vector<int> shift, double scale) {
  const double tie = 1e-12 * scale;
  if (score > best.score + tie || (std::abs(score - best.score) <= tie && lex_less(shift, best.shift))) {
    if (score > best.score) best.score = score;
    best.shift = std::move(shift);
  }
}

// Periodic correlation c[z] = sum_i a[i - z] b[i], up to a positive factor.
Field correlate(const Field& a, const Field& b) {
  const SpectralField fa = transform(a);
  const SpectralField fb = transform(b);
  std::vector<std::complex<double>> prod(fa.coefficients().size());
  for (std::size_t k = 0; k < prod.size(); ++k) prod[k] = std::conj(fa[k]) * fb[k];
  return inverse_transform(SpectralField(a.box(), std::move(prod)));
}

Field ball_indicator(const Box& box, double radius) {
  const int m = box.points_per_dim();
  const double h = box.spacing();
  std::vector<double> v(box.size());
  for (std::size_t i = 0; i < box.size(); ++i) {
    const auto idx = box.unflatten(i);
    double d2 = 0.0;
    for (int a = 0; a < box.dimension(); ++a) {
      const double d = h * wrap_signed(idx[a], m);
      d2 += d * d;
    }
    v[i] = d2 <= radius * radius ? 1.0 : 0.0;
  }
  return Field(box, std::move(v));
}

}  // namespace

double default_radius(int dimension) { return 1.0 + std::sqrt(static_cast<double>(dimension)); }

Recentered recenter(const Field& u, const std::optional<Field>& reference, int lattice_step,
                    std::optional<double> radius) {
  if (!(u.max_abs() > 0.0)) throw Error(ErrorKind::degenerate_direction, "cannot recenter the zero field");
  const Box& box = u.box();
  const int n = box.dimension();
  const int m = box.points_per_dim();
  Best best;

  if (reference) {
    require_same_box(box, reference->box(), "recenter");
    // score[z] = <translate(u, z), reference> = sum_i u[i - z] ref[i].
    const Field score = correlate(u, *reference);
    const double scale = score.max_abs();
    for (std::size_t i = 0; i < box.size(); ++i) {
      const auto idx = box.unflatten(i);
      std::vector<int> z(n);
      for (int a = 0; a < n; ++a) z[a] = wrap_signed(idx[a], m);
      consider(best, score[i], std::move(z), scale);
    }
  } else {
    if (lattice_step < 1 || m % lattice_step != 0)
      throw Error(ErrorKind::parameter, "lattice step must divide the grid size");
    const double r = radius.value_or(default_radius(n));
    const Field density = u.hadamard(u);
    // mass[c] = sum_j |u_j|^2 chi(j - c); chi is symmetric so this is a correlation.
    const Field mass = correlate(ball_indicator(box, r), density);
    const double scale = mass.max_abs();
    for (std::size_t i = 0; i < box.size(); ++i) {
      const auto idx = box.unflatten(i);
      std::vector<int> z(n);
      bool on_lattice = true;
      for (int a = 0; a < n; ++a) {
        z[a] = wrap_signed(m / 2 - idx[a], m);
        if (z[a] % lattice_step != 0) on_lattice = false;
      }
      if (on_lattice) consider(best, mass[i], std::move(z), scale);
    }
  }
  Field shifted = translate(u, best.shift);
  return Recentered{std::move(shifted), std::move(best.shift)};
}

double l2_local_error(const Field& a, const Field& b, double radius) {
  require_same_box(a.box(), b.box(), "l2_local_error");
  const Box& box = a.box();
  if (!(radius > 0.0 && radius <= 0.5 * box.side_length()))
    throw Error(ErrorKind::parameter, "radius must satisfy 0 < R <= L/2");
  double sum = 0.0;
  for (std::size_t i = 0; i < box.size(); ++i) {
    const auto idx = box.unflatten(i);
    double r2 = 0.0;
    for (int k = 0; k < box.dimension(); ++k) {
      const double x = box.coordinate(idx[k]);
      r2 += x * x;
    }
    if (r2 <= radius * radius) {
      const double d = a[i] - b[i];
      sum += d * d;
    }
  }
  return std::sqrt(sum * box.cell_volume());
}

SweepResult sweep(const std::vector<double>& s_list, const Model& model, const SweepOptions& opts) {
  if (s_list.empty()) throw Error(ErrorKind::parameter, "sweep needs at least one s");
  for (std::size_t i = 0; i < s_list.size(); ++i) {
    if (!(s_list[i] > 0.5 && s_list[i] < 1.0))
      throw Error(ErrorKind::parameter, "sweep orders must lie in (1/2, 1)");
    if (i > 0 && !(s_list[i] > s_list[i - 1]))
      throw Error(ErrorKind::parameter, "sweep orders must be strictly increasing");
  }
  require_valid(model);
  const int n = model.box.dimension();
  const double radius = default_radius(n);
  const double q_embed = n == 1 ? std::numeric_limits<double>::infinity() : 2.0 * n / (n - 1.0);

  const GroundState local = solve(FractionalOrder::local(), model, opts.solve);
  SweepResult result{.records = {},
                     .local_energy = local.energy,
                     .local_state = recenter(local.u, std::nullopt, symmetry_lattice_step(model)).field,
                     .local_converged = local.converged,
                     .local_norm_l2_ball = 0.0,
                     .gap_monotone = std::nullopt,
                     .l2loc_monotone = std::nullopt};
  result.local_norm_l2_ball = l2_local_error(result.local_state, Field::zeros(model.box), radius);

  std::vector<std::optional<GroundState>> states(s_list.size());
  std::vector<std::exception_ptr> failures(s_list.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < s_list.size(); i = next++) {
      try {
        states[i] = solve(FractionalOrder::make(s_list[i], model.strict), model, opts.solve);
      } catch (const Error&) {
        failures[i] = std::current_exception();
      }
    }
  };
  const int jobs = std::max(1, std::min<int>(opts.jobs, static_cast<int>(s_list.size())));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }

  for (std::size_t i = 0; i < s_list.size(); ++i) {
    SweepRecord rec;
    rec.s = s_list[i];
    rec.radius = radius;
    rec.extra_radii = opts.extra_radii;
    if (!states[i]) {
      rec.energy = rec.gap = rec.norm_s = rec.norm_l2 = rec.norm_embedding = rec.norm_p = kNaN;
      rec.l2_local_error = rec.residual_el = rec.residual_nehari = rec.nehari_level = kNaN;
      rec.extra_errors.assign(opts.extra_radii.size(), kNaN);
      result.records.push_back(std::move(rec));
      continue;
    }
    const GroundState& gs = *states[i];
    const Recentered aligned = recenter(gs.u, result.local_state);
    rec.energy = gs.energy;
    rec.gap = std::abs(gs.energy - result.local_energy);
    rec.norm_s = std::sqrt(norm_s_sq(gs.u, gs.s, model));
    rec.norm_l2 = lebesgue_norm(gs.u, 2.0);
    rec.norm_embedding = lebesgue_norm(gs.u, q_embed);
    rec.norm_p = lebesgue_norm(gs.u, model.nonlinearity.exponent());
    rec.shift = aligned.shift;
    rec.ball_shift = recenter(gs.u, std::nullopt, symmetry_lattice_step(model)).shift;
    rec.l2_local_error = l2_local_error(aligned.field, result.local_state, radius);
    for (double r : opts.extra_radii) rec.extra_errors.push_back(l2_local_error(aligned.field, result.local_state, r));
    rec.residual_el = gs.residual_el;
    rec.residual_nehari = gs.residual_nehari;
    rec.nehari_level = 0.5 * (model.nonlinearity.integral_f_times_u(gs.u) -
                              2.0 * model.nonlinearity.integral_primitive(gs.u));
    rec.converged = gs.converged;
    result.records.push_back(std::move(rec));
  }

  std::vector<const SweepRecord*> ok;
  for (const auto& r : result.records)
    if (r.converged) ok.push_back(&r);
  if (ok.size() >= 2) {
    bool gaps = true, l2 = true;
    for (std::size_t i = 1; i < ok.size(); ++i) {
      if (ok[i]->gap > kMonotoneSlack * ok[i - 1]->gap) gaps = false;
      if (ok[i]->l2_local_error > kMonotoneSlack * ok[i - 1]->l2_local_error) l2 = false;
    }
    result.gap_monotone = gaps;
    result.l2loc_monotone = l2;
  }
  return result;
}

BoundednessReport boundedness_diagnostics(const SweepResult& result, const Model& model) {
  BoundednessReport rep;
  const double p = model.nonlinearity.exponent();
  rep.min_norm_s = std::numeric_limits<double>::infinity();
  double max_lp_ratio = 0.0;
  bool any = false;
  for (const auto& r : result.records) {
    if (!r.converged) continue;
    any = true;
    rep.max_norm_sum = std::max(rep.max_norm_sum, r.norm_l2 + r.norm_s + r.norm_embedding);
    rep.max_norm_s = std::max(rep.max_norm_s, r.norm_s);
    rep.min_norm_s = std::min(rep.min_norm_s, r.norm_s);
    rep.embedding_ratio = std::max(rep.embedding_ratio, (r.norm_l2 + r.norm_embedding) / r.norm_s);
    max_lp_ratio = std::max(max_lp_ratio, r.norm_p / r.norm_s);
  }
  if (!any) return rep;
  // ||u||_s^2 = int f(u)u <= a_max C_p^p ||u||_s^p on the manifold, with C_p the
  // largest measured ratio ||u||_p / ||u||_s.
  rep.rho_bound = std::pow(model.nonlinearity.growth_constant() * std::pow(max_lp_ratio, p), -1.0 / (p - 2.0));
  rep.finite = std::isfinite(rep.max_norm_sum) && std::isfinite(rep.embedding_ratio);
  rep.rho_positive = rep.min_norm_s > 0.0 && rep.rho_bound > 0.0 && rep.min_norm_s >= rep.rho_bound * (1.0 - 1e-9);
  return rep;
}

void write_sweep_csv(std::ostream& out, const SweepResult& result) {
  out << "s,c_s,gap,norm_s,norm_l2,z,l2_local_error,residual_el,residual_nehari,converged\n";
  for (const auto& r : result.records) {
    std::string z;
    for (std::size_t a = 0; a < r.shift.size(); ++a) z += (a ? ";" : "") + std::to_string(r.shift[a]);
    out << shortest(r.s) << ',' << shortest(r.energy) << ',' << shortest(r.gap) << ',' << shortest(r.norm_s) << ','
        << shortest(r.norm_l2) << ',' << z << ',' << shortest(r.l2_local_error) << ',' << shortest(r.residual_el)
        << ',' << shortest(r.residual_nehari) << ',' << (r.converged ? "true" : "false") << '\n';
  }
}

}  // namespace fracground
