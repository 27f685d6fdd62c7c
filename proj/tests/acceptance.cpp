// Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include <boost/math/quadrature/ooura_fourier_integrals.hpp>
#include <boost/math/special_functions/zeta.hpp>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "fracground/cli.hpp"
#include "fracground/transition.hpp"
#include "json.hpp"
#include "support.hpp"

using namespace fgtest;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool passed;
  std::string detail;
};

std::string fmt(double x) {
  std::ostringstream o;
  o << std::setprecision(3) << x;
  return o.str();
}

fs::path config_dir() {
  const char* dir = std::getenv("FRACGROUND_CONFIG_DIR");
  return dir ? fs::path(dir) : fs::path("configs");
}

nlohmann::json load_json(const std::string& name) {
  std::ifstream in(config_dir() / name);
  return nlohmann::json::parse(in);
}

RunConfig reference_config() { return load_config((config_dir() / "reference.json").string()); }

int cli_exit(const nlohmann::json& cfg, std::vector<std::string> args) {
  const fs::path dir = fs::temp_directory_path() / "fg_acceptance";
  fs::create_directories(dir);
  const fs::path path = dir / "config.json";
  std::ofstream(path) << cfg.dump();
  args.insert(args.begin(), {"fracground"});
  args.insert(args.begin() + 2, {"--config", path.string()});
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  return cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
}

// 1 ------------------------------------------------------------------------
Outcome constants_cross_check() {
  double worst = 0.0;
  for (int n : {1, 2, 3})
    for (double s : {0.55, 0.6, 0.75, 0.9, 0.95})
      worst = std::max(worst, rel(constants(n, FractionalOrder::make(s)).c_ns, constant_quadrature(n, s)));
  // int_R (1 - cos t)/t^2 dt = 2 int_0^inf sin t / t dt after integrating by parts.
  boost::math::quadrature::ooura_fourier_sin<double> sin_rule;
  const double integral = 2.0 * sin_rule.integrate([](double t) { return 1.0 / t; }, 1.0).first;
  const double c_half = constants(1, FractionalOrder::make(0.5)).c_ns;
  const double e_oracle = rel(c_half, 1.0 / integral);
  const double e_pi = rel(c_half, 1.0 / kPi);
  return {worst <= 1e-6 && e_oracle <= 1e-8 && e_pi <= 1e-8,
          "max rel(C, quadrature) " + fmt(worst) + " (<= 1e-6); C(1,1/2) vs 1/int(1-cos t)/t^2 " + fmt(e_oracle) +
              ", vs 1/pi " + fmt(e_pi) + " (<= 1e-8)"};
}

// 2 ------------------------------------------------------------------------
Outcome seminorm_oracle() {
  bool ok = true;
  std::string detail;
  for (double s : {0.6, 0.75, 0.9}) {
    std::vector<double> d;
    for (int m : {64, 128, 256}) {
      const Box box = Box::make(1, 40.0, m);
      const Field u = gaussian(box, 1.0);
      const double direct = 0.5 * c_closed(1, s) * gagliardo_direct(u, s);
      d.push_back(rel(direct, seminorm_sq(u, FractionalOrder::make(s))));
    }
    const bool dec = d[1] < d[0] && d[2] < d[1];
    ok = ok && dec && d[2] < 0.05;
    detail += "s=" + fmt(s) + ": " + fmt(d[0]) + "," + fmt(d[1]) + "," + fmt(d[2]) + (dec ? " decreasing; " : " NOT decreasing; ");
  }
  return {ok, detail + "bound 0.05 at M=256"};
}

// 3 ------------------------------------------------------------------------
Outcome norm_limit() {
  const Box box = Box::make(1, 40.0, 256);
  const Field u = gaussian(box, 1.0);
  const std::vector<FractionalOrder> ladder{FractionalOrder::make(0.6), FractionalOrder::make(0.8),
                                            FractionalOrder::make(0.9), FractionalOrder::make(0.99)};
  const NormLimitTable t = norm_limit_check(u, ladder);
  // Closed forms for exp(-x^2/2): int |u'|^2 = sqrt(pi)/2 and ||u||_s^2 = Gamma(s + 1/2)
  // up to the lattice-sum correction of the |k|^{2s} e^{-k^2} Riemann sum at dk = 2 pi / L.
  const double grad = rel(t.gradient_sq, std::sqrt(kPi) / 2.0);
  const double dk = 2.0 * kPi / box.side_length();
  double oracle = 0.0;
  for (const auto& r : t.rows) {
    const double s = r.s;
    const double lattice = 2.0 * boost::math::zeta(-2.0 * s) * std::pow(dk, 1.0 + 2.0 * s) -
                           2.0 * boost::math::zeta(-2.0 * s - 2.0) * std::pow(dk, 3.0 + 2.0 * s);
    oracle = std::max(oracle, rel(r.seminorm_sq, std::tgamma(s + 0.5) + lattice));
  }
  bool strict = true;
  for (std::size_t i = 1; i < t.rows.size(); ++i) strict = strict && t.rows[i].gap < t.rows[i - 1].gap;
  const double last = t.rows.back().gap / t.gradient_sq;
  return {strict && t.gaps_decreasing && last < 0.01 && grad < 1e-12 && oracle < 1e-6,
          std::string(strict ? "gaps strictly decreasing" : "gaps NOT strictly decreasing") + "; gap(0.99)/||u'||^2 " +
              fmt(last) + " (< 0.01); ||u'||^2 vs sqrt(pi)/2 " + fmt(grad) + ", ||u||_s^2 vs Gamma(s+1/2) + lattice sum " +
              fmt(oracle)};
}

// 4 ------------------------------------------------------------------------
Outcome fiber_root_exactness() {
  const Model model = reference_model();
  std::mt19937_64 rng(404);
  double worst = 0.0;
  for (double sv : {0.6, 0.9}) {
    const FractionalOrder s = FractionalOrder::make(sv);
    for (int k = 0; k < 50; ++k) {
      const Field v = band_limited(model.box, rng, 12);
      const double closed = std::pow(norm_s_sq(v, s, model) / std::pow(lebesgue_norm(v, 4.0), 4.0), 0.5);
      worst = std::max(worst, rel(fiber_root(v, s, model).t_star, closed));
    }
  }
  return {worst <= 1e-10, "max relative error " + fmt(worst) + " over 100 fields (<= 1e-10)"};
}

// 5 ------------------------------------------------------------------------
Outcome gradient_correctness() {
  const Model model = reference_model();
  std::mt19937_64 rng(505);
  double worst = 0.0;
  for (double sv : {0.75, 1.0}) {
    const FractionalOrder s = sv == 1.0 ? FractionalOrder::local() : FractionalOrder::make(sv);
    for (int k = 0; k < 20; ++k) {
      const Field u = band_limited(model.box, rng, 6) * 0.3;
      const Field phi = band_limited(model.box, rng, 6);
      const double eps = 1e-5;
      const double fd = (energy_fractional(u + phi * eps, s, model) - energy_fractional(u - phi * eps, s, model)) /
                        (2.0 * eps);
      const double pair = inner_product(gradient(u, s, model, Metric::l2), phi);
      worst = std::max(worst, std::abs(fd - pair) / std::abs(pair));
    }
  }
  return {worst <= 1e-6, "max relative error " + fmt(worst) + " over 40 pairs (<= 1e-6)"};
}

// 6 ------------------------------------------------------------------------
Outcome ground_state_validity() {
  const RunConfig cfg = reference_config();
  const Model model = build_model(cfg);
  RunConfig fine_cfg = cfg;
  fine_cfg.points_per_dim = 512;
  const Model fine = build_model(fine_cfg);
  bool ok = true;
  std::string detail;
  for (double sv : {0.6, 0.8, 0.95, 1.0}) {
    const FractionalOrder s = sv == 1.0 ? FractionalOrder::local() : FractionalOrder::make(sv);
    const GroundState gs = solve(s, model, cfg.solver);
    const double ns = std::sqrt(norm_s_sq(gs.u, s, model));
    const MinmaxReport mm = minmax_check(gs, model);
    double spread = 0.0;
    for (double e : gs.restart_energies) spread = std::max(spread, rel(e, gs.energy));
    const GroundState gf = solve(s, fine, cfg.solver);
    const double mesh = rel(gs.energy, gf.energy);
    const bool here = gs.converged && gs.residual_el <= 1e-6 * ns && gs.residual_nehari <= 1e-8 * ns * ns &&
                      std::abs(mm.t_star - 1.0) <= 1e-6 && mm.passed() && gs.restart_energies.size() == 4 &&
                      spread <= 1e-6 && gf.converged && mesh <= 1e-5;
    ok = ok && here;
    detail += "s=" + fmt(sv) + (here ? " ok" : " FAILED") + " (EL/||u|| " + fmt(gs.residual_el / ns) + ", N/||u||^2 " +
              fmt(gs.residual_nehari / (ns * ns)) + ", t*-1 " + fmt(mm.t_star - 1.0) + ", restarts " + fmt(spread) +
              ", mesh " + fmt(mesh) + "); ";
  }
  return {ok, detail};
}

// 7 ------------------------------------------------------------------------
Outcome transition() {
  const RunConfig cfg = reference_config();
  const Model model = build_model(cfg);
  const std::vector<double> ladder{0.60, 0.70, 0.80, 0.90, 0.95, 0.99};
  const SweepResult r = sweep(ladder, model, {.solve = cfg.solver, .extra_radii = cfg.radii, .jobs = cfg.jobs});
  const double c = r.local_energy;
  bool all_converged = r.local_converged;
  double nehari = 0.0;
  std::string gaps = "gaps", errs = "l2 errors";
  for (const auto& rec : r.records) {
    all_converged = all_converged && rec.converged;
    nehari = std::max(nehari, rel(rec.nehari_level, rec.energy));
    gaps += " " + fmt(rec.gap);
    errs += " " + fmt(rec.l2_local_error);
  }
  const SweepRecord& last = r.records.back();
  const bool a_mono = r.gap_monotone.value_or(false);
  const bool a_close = last.gap <= 0.01 * c;
  const bool b_mono = r.l2loc_monotone.value_or(false);
  const bool b_close = last.l2_local_error < 0.05 * r.local_norm_l2_ball;
  const BoundednessReport b = boundedness_diagnostics(r, model);
  const bool c_ok = b.min_norm_s > 0.0 && b.finite && b.verdict();
  const bool d_ok = nehari <= 1e-8;
  std::ostringstream d;
  d << "(a) gap monotone " << (a_mono ? "yes" : "NO") << ", |c_0.99-c|/c " << fmt(last.gap / c) << " (<= 0.01); "
    << "(b) l2 monotone " << (b_mono ? "yes" : "NO") << ", error(0.99)/||u_0||_B " << fmt(last.l2_local_error / r.local_norm_l2_ball)
    << " (< 0.05); (c) min ||u_s||_s " << fmt(b.min_norm_s) << " >= rho " << fmt(b.rho_bound) << ", max norm sum "
    << fmt(b.max_norm_sum) << "; (d) Nehari level " << fmt(nehari) << " (<= 1e-8); c=" << std::setprecision(10) << c
    << "; " << gaps << "; " << errs;
  return {all_converged && a_mono && a_close && b_mono && b_close && c_ok && d_ok, d.str()};
}

// 8 ------------------------------------------------------------------------
Outcome hypothesis_guards() {
  nlohmann::json p2 = load_json("reference.json");
  p2["box"]["M"] = 64;
  p2["model"]["nonlinearity"]["p"] = 2.0;
  const Model m2 = build_model(parse_config(p2.dump()));
  const auto* f4 = validate_assumptions(m2).find("F4");
  const bool p2_ok = f4 && !f4->passed && cli_exit(p2, {"check"}) == cli::kFailure;

  nlohmann::json p35 = load_json("strict3d.json");
  p35["model"]["nonlinearity"]["p"] = 3.5;
  const Model m35 = build_model(parse_config(p35.dump()));
  const auto* f1 = validate_assumptions(m35).find("F1");
  const bool p35_ok = f1 && !f1->passed && cli_exit(p35, {"check"}) == cli::kFailure &&
                      cli_exit(p35, {"solve", "--s", "0.8"}) == cli::kUsage;

  bool s_rejected = false;
  try {
    FractionalOrder::make(0.4, true);
  } catch (const Error& e) {
    s_rejected = e.kind() == ErrorKind::parameter;
  }
  const nlohmann::json strict = load_json("strict3d.json");
  const bool s_ok = s_rejected && cli_exit(strict, {"solve", "--s", "0.4"}) == cli::kUsage;
  fs::remove_all(fs::temp_directory_path() / "fg_acceptance");
  return {p2_ok && p35_ok && s_ok, std::string("p=2 by (F4): ") + (p2_ok ? "rejected" : "NOT rejected") +
                                       "; p=3.5 strict N=3 by (F1): " + (p35_ok ? "rejected" : "NOT rejected") +
                                       "; s=0.4 strict: " + (s_ok ? "rejected" : "NOT rejected")};
}

// 9 ------------------------------------------------------------------------
Outcome sobolev_property() {
  const Box box = Box::make(3, 20.0, 32);
  std::mt19937_64 rng(909);
  std::uniform_int_distribution<int> band(1, 4);
  int amb_fail = 0, bnd_fail = 0, total = 0;
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    // The torus seminorm does not see the mean, so the zero mode is removed.
    Field u = band_limited(box, rng, band(rng));
    double mean = 0.0;
    for (double x : u.values()) mean += x;
    u = u - Field::constant(box, mean / static_cast<double>(u.size()));
    for (double s : {0.6, 0.75}) {
      const auto amb = sobolev_inequality_check(u, FractionalOrder::make(s));
      const auto bnd = sobolev_inequality_check(u, FractionalOrder::make(s), SphereConvention::boundary);
      ++total;
      if (!amb.holds) ++amb_fail;
      if (!bnd.holds) ++bnd_fail;
      worst = std::max(worst, amb.lhs / amb.rhs);
    }
  }
  return {amb_fail == 0, "ambient S^N: " + std::to_string(total - amb_fail) + "/" + std::to_string(total) +
                             " hold (enforced, max lhs/rhs " + fmt(worst) + "); boundary S^(N-1): " +
                             std::to_string(total - bnd_fail) + "/" + std::to_string(total) + " hold (reported)"};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "constants cross-check", 10, constants_cross_check},
      {2, "seminorm oracle equivalence", 60, seminorm_oracle},
      {3, "norm limit", 5, norm_limit},
      {4, "fiber-root exactness", 10, fiber_root_exactness},
      {5, "gradient correctness", 10, gradient_correctness},
      {6, "ground-state validity", 600, ground_state_validity},
      {7, "transition", 1800, transition},
      {8, "hypothesis-range guards", 5, hypothesis_guards},
      {9, "Sobolev inequality property", 60, sobolev_property},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < c.budget_s;
    const bool pass = o.passed && in_time;
    if (!pass) ++failed;
    std::cout << (pass ? "PASS " : "FAIL ") << c.id << " " << c.name << ": " << o.detail << " [" << fmt(secs) << " s"
              << (in_time ? "" : ", over budget") << " of " << c.budget_s << " s]" << std::endl;
  }
  std::cout << (9 - failed) << "/9 criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
