#include "fracground/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>

#include "json.hpp"

namespace fracground {

namespace {

using nlohmann::json;

std::string join(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

// Walks one JSON table, tracking consumed keys so leftovers can be rejected.
class Table {
 public:
  Table(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected a table");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  const json& raw(const std::string& key) {
    if (!j_.contains(key)) throw ConfigError(join(path_, key), "missing required key");
    seen_.insert(key);
    return j_.at(key);
  }

  Table table(const std::string& key) { return Table(raw(key), join(path_, key)); }

  double number(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_number()) throw ConfigError(join(path_, key), "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError(join(path_, key), "must be finite");
    return x;
  }

  double number(const std::string& key, double fallback) { return has(key) ? number(key) : fallback; }

  long long integer(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_number_integer()) throw ConfigError(join(path_, key), "expected an integer");
    return v.get<long long>();
  }

  long long integer(const std::string& key, long long fallback) { return has(key) ? integer(key) : fallback; }

  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_boolean()) throw ConfigError(join(path_, key), "expected true or false");
    return v.get<bool>();
  }

  std::string string(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_string()) throw ConfigError(join(path_, key), "expected a string");
    return v.get<std::string>();
  }

  std::string string(const std::string& key, const std::string& fallback) {
    return has(key) ? string(key) : fallback;
  }

  std::vector<double> numbers(const std::string& key) {
    if (!has(key)) return {};
    const json& v = raw(key);
    if (!v.is_array()) throw ConfigError(join(path_, key), "expected an array of numbers");
    std::vector<double> out;
    for (const auto& x : v) {
      if (!x.is_number()) throw ConfigError(join(path_, key), "expected an array of numbers");
      out.push_back(x.get<double>());
    }
    return out;
  }

  std::string key(const std::string& k) const { return join(path_, k); }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) throw ConfigError(join(path_, it.key()), "unknown key");
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

void require(bool ok, const std::string& key, const std::string& what) {
  if (!ok) throw ConfigError(key, what);
}

int to_int(long long v, const std::string& key) {
  require(v >= std::numeric_limits<int>::min() && v <= std::numeric_limits<int>::max(), key, "out of range");
  return static_cast<int>(v);
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<root>", std::string("malformed JSON: ") + e.what());
  }
  RunConfig c;
  Table top(root, "");

  {
    Table box = top.table("box");
    c.dimension = to_int(box.integer("N"), box.key("N"));
    require(c.dimension >= 1 && c.dimension <= 3, box.key("N"), "must be 1, 2 or 3");
    c.side_length = box.number("L");
    require(c.side_length > 0.0, box.key("L"), "must be positive");
    c.points_per_dim = to_int(box.integer("M"), box.key("M"));
    require(is_fft_friendly(c.points_per_dim), box.key("M"), "must be 2^a or 3*2^a and at least 8");
    c.period_cells = to_int(box.integer("period_cells", 1), box.key("period_cells"));
    require(c.period_cells >= 1 && c.points_per_dim % c.period_cells == 0, box.key("period_cells"),
            "must be a positive divisor of M");
    box.finish();
  }

  {
    Table model = top.table("model");
    {
      Table pot = model.table("potential");
      c.potential_kind = pot.string("kind");
      require(c.potential_kind == "constant" || c.potential_kind == "cosine_perturbed", pot.key("kind"),
              "must be constant or cosine_perturbed");
      c.v0 = pot.number("v0");
      if (c.potential_kind == "cosine_perturbed") {
        c.amplitude = pot.number("amplitude");
        require(c.amplitude >= 0.0, pot.key("amplitude"), "must be non-negative");
      }
      pot.finish();
    }
    {
      Table nl = model.table("nonlinearity");
      c.nonlinearity_kind = nl.string("kind");
      require(c.nonlinearity_kind == "pure_power" || c.nonlinearity_kind == "modulated_power", nl.key("kind"),
              "must be pure_power or modulated_power");
      c.p = nl.number("p");
      require(c.p > 1.0, nl.key("p"), "must exceed 1");
      if (c.nonlinearity_kind == "modulated_power") {
        c.modulation_amplitude = nl.number("modulation_amplitude");
        require(std::abs(c.modulation_amplitude) < 1.0, nl.key("modulation_amplitude"),
                "must lie in (-1, 1) so that inf a > 0");
      }
      nl.finish();
    }
    c.strict = model.boolean("strict", false);
    model.finish();
  }

  if (top.has("solver")) {
    Table s = top.table("solver");
    SolveOptions& o = c.solver;
    o.max_iters = to_int(s.integer("max_iters", o.max_iters), s.key("max_iters"));
    require(o.max_iters >= 1, s.key("max_iters"), "must be at least 1");
    o.grad_tol = s.number("grad_tol", o.grad_tol);
    require(o.grad_tol > 0.0, s.key("grad_tol"), "must be positive");
    o.n_restarts = to_int(s.integer("n_restarts", o.n_restarts), s.key("n_restarts"));
    require(o.n_restarts >= 1, s.key("n_restarts"), "must be at least 1");
    const long long seed = s.integer("seed", static_cast<long long>(o.seed));
    require(seed >= 0, s.key("seed"), "must be non-negative");
    o.seed = static_cast<std::uint64_t>(seed);
    o.initial_step = s.number("initial_step", o.initial_step);
    require(o.initial_step > 0.0, s.key("initial_step"), "must be positive");
    o.armijo = s.number("armijo", o.armijo);
    require(o.armijo > 0.0 && o.armijo < 1.0, s.key("armijo"), "must lie in (0, 1)");
    o.max_backtracks = to_int(s.integer("max_backtracks", o.max_backtracks), s.key("max_backtracks"));
    require(o.max_backtracks >= 1, s.key("max_backtracks"), "must be at least 1");
    o.polish_steps = to_int(s.integer("polish_steps", o.polish_steps), s.key("polish_steps"));
    require(o.polish_steps >= 0, s.key("polish_steps"), "must be non-negative");
    o.el_probes = to_int(s.integer("el_probes", o.el_probes), s.key("el_probes"));
    require(o.el_probes >= 1, s.key("el_probes"), "must be at least 1");
    s.finish();
  }

  if (top.has("sweep")) {
    Table s = top.table("sweep");
    c.s_list = s.numbers("s_list");
    for (std::size_t i = 0; i < c.s_list.size(); ++i) {
      require(c.s_list[i] > 0.5 && c.s_list[i] < 1.0, s.key("s_list"), "entries must lie in (1/2, 1)");
      require(i == 0 || c.s_list[i] > c.s_list[i - 1], s.key("s_list"), "must be strictly increasing");
    }
    c.radii = s.numbers("radii");
    for (double r : c.radii)
      require(r > 0.0 && r <= 0.5 * c.side_length, s.key("radii"), "entries must lie in (0, L/2]");
    c.output_dir = s.string("output_dir", c.output_dir);
    c.jobs = to_int(s.integer("jobs", c.jobs), s.key("jobs"));
    require(c.jobs >= 1, s.key("jobs"), "must be at least 1");
    s.finish();
  }
  top.finish();
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--config", "cannot open " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

Model build_model(const RunConfig& c) {
  const Box box = Box::make(c.dimension, c.side_length, c.points_per_dim);
  Potential potential = c.potential_kind == "cosine_perturbed"
                            ? Potential::cosine_perturbed(box, c.v0, c.amplitude, c.period_cells)
                            : Potential::constant(box, c.v0);
  Nonlinearity nl = Nonlinearity::pure_power(c.p);
  if (c.nonlinearity_kind == "modulated_power") {
    const double k = 2.0 * std::numbers::pi * c.period_cells / c.side_length;
    const double m = c.modulation_amplitude;
    nl = Nonlinearity::modulated_power(c.p, Field::sample(box, [&](std::span<const double> x) {
                                         double s = 0.0;
                                         for (double xa : x) s += std::cos(k * xa);
                                         return 1.0 + m * s / static_cast<double>(x.size());
                                       }));
  }
  return Model{.box = box,
               .potential = std::move(potential),
               .nonlinearity = std::move(nl),
               .strict = c.strict,
               .period_cells = c.period_cells};
}

}  // namespace fracground
