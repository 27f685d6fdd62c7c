#include "fracground/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "fracground/transition.hpp"

namespace fracground::cli {

namespace {

// Shortest representation that reads back to the same double.
std::string shortest(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string format_s(double s) {
  std::ostringstream o;
  o << std::setprecision(12) << s;
  return o.str();
}

bool is_usage_error(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::parameter:
    case ErrorKind::constants_undefined:
    case ErrorKind::hypothesis:
    case ErrorKind::config:
    case ErrorKind::shape:
      return true;
    default:
      return false;
  }
}

int report(const Error& e, std::ostream& err) {
  err << "error: " << e.what() << '\n';
  return is_usage_error(e) ? kUsage : kFailure;
}

// Gaussian bump used by the oracle probes.
Field probe_bump(const Box& box, double width) {
  return Field::sample(box, [&](std::span<const double> x) {
    double r2 = 0.0;
    for (double xa : x) r2 += xa * xa;
    return std::exp(-r2 / (2.0 * width * width));
  });
}

struct CheckLine {
  std::string name;
  bool passed;
  std::string detail;
};

CheckLine check_constants(int n) {
  std::ostringstream d;
  d << std::setprecision(3);
  double worst = 0.0;
  for (double s : {0.6, 0.75, 0.9}) {
    const double a = constants(n, FractionalOrder::make(s)).c_ns;
    const double b = constant_quadrature(n, s);
    worst = std::max(worst, std::abs(a - b) / std::abs(b));
  }
  d << "max relative difference " << worst << " (tolerance 1e-06)";
  return {"constants", worst <= 1e-6, d.str()};
}

// Refinement probe of the Gagliardo double sum against the spectral seminorm.
// The discrete sum converges at rate h^{2-2s}; the bound at M = 256 comes from
// the refinement study documented in the README.
CheckLine check_gagliardo() {
  constexpr double s = 0.6;
  std::vector<double> disc;
  for (int m : {64, 128, 256}) {
    const Box box = Box::make(1, 40.0, m);
    const Field u = probe_bump(box, 1.0);
    const double direct = 0.5 * constants(1, FractionalOrder::make(s)).c_ns * gagliardo_direct(u, s);
    const double spectral = seminorm_sq(u, FractionalOrder::make(s));
    disc.push_back(std::abs(direct - spectral) / spectral);
  }
  const bool decreasing = disc[1] < disc[0] && disc[2] < disc[1];
  std::ostringstream d;
  d << std::setprecision(3) << "discrepancy at M=64,128,256: " << disc[0] << ", " << disc[1] << ", " << disc[2];
  return {"gagliardo", decreasing && disc[2] < 0.10, d.str()};
}

CheckLine check_gradient(const Model& model) {
  double worst = 0.0;
  for (double sv : {0.75, 1.0}) {
    const FractionalOrder s = sv == 1.0 ? FractionalOrder::local() : FractionalOrder::make(sv);
    for (int k = 0; k < 5; ++k) {
      const Field u = probe_field(model.box, 101, 2 * k);
      const Field phi = probe_field(model.box, 101, 2 * k + 1);
      const double eps = 1e-5;
      const double fd = (energy_fractional(u + phi * eps, s, model) - energy_fractional(u - phi * eps, s, model)) /
                        (2.0 * eps);
      const Field g = gradient(u, s, model, Metric::l2);
      const double pair = inner_product(g, phi);
      // Cauchy-Schwarz scale keeps nearly cancelling pairs from dominating.
      const double scale = std::max(std::abs(pair), lebesgue_norm(g, 2.0) * lebesgue_norm(phi, 2.0));
      worst = std::max(worst, std::abs(fd - pair) / scale);
    }
  }
  std::ostringstream d;
  d << std::setprecision(3) << "max relative finite-difference error " << worst << " (tolerance 1e-06)";
  return {"gradient", worst <= 1e-6, d.str()};
}

std::string verdict(const std::optional<bool>& v) {
  if (!v) return "n/a";
  return *v ? "true" : "false";
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::io, "cannot create output directory " + dir + ": " + ec.message());
}

}  // namespace

int cmd_constants(int dimension, std::vector<double> s_list, std::ostream& out, std::ostream& err) {
  if (s_list.empty()) {
    err << "error: --s needs at least one value\n";
    return kUsage;
  }
  std::sort(s_list.begin(), s_list.end());
  std::vector<FractionalConstants> rows;
  try {
    if (dimension < 1) throw Error(ErrorKind::parameter, "dimension must be positive");
    for (double s : s_list) rows.push_back(constants(dimension, FractionalOrder::make(s)));
  } catch (const Error& e) {
    return report(e, err);
  }
  out << "N,s,A,B,C,omega,sobolev,crit_exponent\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    out << dimension << ',' << shortest(s_list[i]) << ',' << shortest(r.a_ns) << ',' << shortest(r.b_s) << ','
        << shortest(r.c_ns) << ',' << shortest(r.omega) << ',';
    if (r.sobolev) out << shortest(*r.sobolev);
    out << ',';
    if (r.critical_exponent) out << shortest(*r.critical_exponent);
    out << '\n';
  }
  return kSuccess;
}

int cmd_check(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    const Model model = build_model(config);
    std::vector<CheckLine> lines;
    const AssumptionReport rep = validate_assumptions(model);
    for (const auto& c : rep.checks) lines.push_back({"(" + c.name + ")", c.passed, c.witness});
    if (model.strict && model.box.dimension() < 3)
      lines.push_back({"(N)", false, "strict mode needs N >= 3"});
    else
      lines.push_back({"(N)", true, model.strict ? "N >= 3" : "permissive mode"});
    lines.push_back(check_constants(model.box.dimension()));
    lines.push_back(check_gagliardo());
    lines.push_back(check_gradient(model));

    bool all = true;
    for (const auto& l : lines) {
      out << (l.passed ? "pass " : "FAIL ") << l.name << ": " << l.detail << '\n';
      all = all && l.passed;
    }
    for (const auto& w : rep.warnings) out << "warning: " << w << '\n';
    for (const auto& l : lines)
      if (!l.passed) err << "check failed: " << l.name << '\n';
    return all ? kSuccess : kFailure;
  } catch (const Error& e) {
    return report(e, err);
  }
}

int cmd_solve(const RunConfig& config, double s_value, std::ostream& out, std::ostream& err) {
  try {
    const Model model = build_model(config);
    const FractionalOrder s =
        s_value == 1.0 ? FractionalOrder::local() : FractionalOrder::make(s_value, config.strict);
    require_valid(model);
    const GroundState gs = solve(s, model, config.solver);
    ensure_dir(config.output_dir);
    write_ground_state((std::filesystem::path(config.output_dir) / ("ground_state_s" + format_s(s_value))).string(),
                       gs);
    out << std::setprecision(12) << "s=" << format_s(s_value) << " c_s=" << gs.energy
        << " converged=" << (gs.converged ? "true" : "false") << '\n';
    return gs.converged ? kSuccess : kFailure;
  } catch (const Error& e) {
    return report(e, err);
  }
}

int cmd_sweep(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    if (config.s_list.empty()) throw ConfigError("sweep.s_list", "missing or empty");
    const Model model = build_model(config);
    SweepOptions opts{.solve = config.solver, .extra_radii = config.radii, .jobs = config.jobs};
    const SweepResult result = sweep(config.s_list, model, opts);
    ensure_dir(config.output_dir);
    const auto path = std::filesystem::path(config.output_dir) / "sweep.csv";
    std::ofstream csv(path);
    if (!csv) throw Error(ErrorKind::io, "cannot write " + path.string());
    write_sweep_csv(csv, result);

    const bool any = std::any_of(result.records.begin(), result.records.end(),
                                 [](const SweepRecord& r) { return r.converged; });
    for (const auto& r : result.records)
      if (!r.converged) out << "record s=" << format_s(r.s) << " not converged\n";
    if (!any) {
      err << "error: no sweep record converged\n";
      return kFailure;
    }
    const BoundednessReport b = boundedness_diagnostics(result, model);
    out << std::setprecision(12) << "c=" << result.local_energy
        << " local_converged=" << (result.local_converged ? "true" : "false") << '\n';
    out << "gap_monotone=" << verdict(result.gap_monotone) << " l2loc_monotone=" << verdict(result.l2loc_monotone)
        << " ρ_positive=" << (b.verdict() ? "true" : "false") << '\n';
    const bool ok = result.gap_monotone.value_or(true) && result.l2loc_monotone.value_or(true) && b.verdict();
    return ok ? kSuccess : kFailure;
  } catch (const Error& e) {
    return report(e, err);
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fractional-to-local ground state experiments on a periodic box", "fracground"};
  app.require_subcommand(1);

  int dimension = 1;
  std::vector<double> s_values;
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
  std::optional<std::string> out_dir;

  auto* constants_cmd = app.add_subcommand("constants", "Tabulate C(N,s), A(N,s), B(s) and Sobolev constants");
  constants_cmd->add_option("--N", dimension, "Dimension")->check(CLI::PositiveNumber);
  constants_cmd->add_option("--s", s_values, "Orders, comma separated")->delimiter(',')->required();

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "Configuration file (JSON)")->required();
    cmd->add_option("--seed", seed, "Override solver.seed");
    cmd->add_option("--out", out_dir, "Override sweep.output_dir");
  };
  auto* check_cmd = app.add_subcommand("check", "Validate hypotheses and run the oracle checks");
  check_cmd->add_option("--config", config_path, "Configuration file (JSON)")->required();
  auto* solve_cmd = app.add_subcommand("solve", "Compute one ground state");
  add_common(solve_cmd);
  solve_cmd->add_option("--s", s_values, "Order s (one value)")->delimiter(',')->required();
  auto* sweep_cmd = app.add_subcommand("sweep", "Run the s -> 1 sweep");
  add_common(sweep_cmd);
  sweep_cmd->add_option("--s", s_values, "Override sweep.s_list")->delimiter(',');
  sweep_cmd->add_option("--jobs", jobs, "Concurrent solves")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsage;
  }

  if (constants_cmd->parsed()) return cmd_constants(dimension, s_values, out, err);

  RunConfig config;
  try {
    config = load_config(config_path);
  } catch (const Error& e) {
    return report(e, err);
  }
  if (seed) config.solver.seed = *seed;
  if (jobs) config.jobs = *jobs;
  if (out_dir) config.output_dir = *out_dir;

  if (check_cmd->parsed()) return cmd_check(config, out, err);
  if (solve_cmd->parsed()) {
    if (s_values.size() != 1) {
      err << "error: solve takes exactly one --s value\n";
      return kUsage;
    }
    return cmd_solve(config, s_values[0], out, err);
  }
  if (!s_values.empty()) {
    for (std::size_t i = 0; i < s_values.size(); ++i) {
      if (!(s_values[i] > 0.5 && s_values[i] < 1.0) || (i > 0 && !(s_values[i] > s_values[i - 1]))) {
        err << "error: --s: sweep orders must be strictly increasing in (1/2, 1)\n";
        return kUsage;
      }
    }
    config.s_list = s_values;
  }
  return cmd_sweep(config, out, err);
}

}  // namespace fracground::cli
