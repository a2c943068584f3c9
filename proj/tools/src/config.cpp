#include "vortexflow/app/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <set>

#include "vortexflow/errors.hpp"
#include "vortexflow/functionals.hpp"
#include "vortexflow/meanfield.hpp"
#include "vortexflow/reference.hpp"
#include "vortexflow/snapshot.hpp"

namespace vortexflow::app {

using nlohmann::json;

namespace {

[[noreturn]] void config_error(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::kConfig, where + ": " + what);
}

// Wraps one JSON object; every key read is recorded and finish() rejects
// the rest.
class Section {
 public:
  Section(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) config_error(where_, "expected an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  const json& raw(const std::string& key) {
    seen_.insert(key);
    if (!j_.contains(key)) config_error(where_, "missing required key '" + key + "'");
    return j_.at(key);
  }

  double number(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_number()) config_error(path(key), "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) config_error(path(key), "must be finite");
    return x;
  }
  double number(const std::string& key, double fallback) { return has(key) ? number(key) : mark(key, fallback); }
  std::optional<double> optional_number(const std::string& key) {
    if (!has(key) || j_.at(key).is_null()) {
      seen_.insert(key);
      return std::nullopt;
    }
    return number(key);
  }

  long long integer(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_number_integer()) config_error(path(key), "expected an integer");
    return v.get<long long>();
  }

  std::string string(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_string()) config_error(path(key), "expected a string");
    return v.get<std::string>();
  }

  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) return mark(key, fallback);
    const json& v = raw(key);
    if (!v.is_boolean()) config_error(path(key), "expected true or false");
    return v.get<bool>();
  }

  std::string path(const std::string& key) const { return where_ + "." + key; }

  void finish() const {
    for (const auto& [key, _] : j_.items()) {
      if (!seen_.count(key)) config_error(where_, "unknown key '" + key + "'");
    }
  }

 private:
  template <typename T>
  T mark(const std::string& key, T value) {
    seen_.insert(key);
    return value;
  }

  const json& j_;
  std::string where_;
  std::set<std::string> seen_;
};

void require(bool ok, const std::string& where, const std::string& what) {
  if (!ok) config_error(where, what);
}

PerturbationConfig parse_perturbation(const json& j, const std::string& where) {
  Section s(j, where);
  PerturbationConfig p;
  p.amplitude = s.number("amplitude");
  require(std::abs(p.amplitude) < 1.0, s.path("amplitude"), "|amplitude| must be below 1 to keep omega positive");
  if (s.has("mode")) {
    const long long m = s.integer("mode");
    require(m >= 1 && m <= 16, s.path("mode"), "mode must be in [1, 16]");
    p.mode = static_cast<int>(m);
  }
  p.ell = s.number("ell", 1.0);
  require(p.ell > 0.0, s.path("ell"), "must be positive");
  p.random_phase = s.boolean("random_phase", false);
  s.finish();
  return p;
}

}  // namespace

FieldConfig parse_field(const json& j, const std::string& where) {
  Section s(j, where);
  FieldConfig f;
  const std::string kind = s.string("kind");
  if (kind == "gaussian") {
    f.kind = FieldConfig::Kind::kGaussian;
    f.sigma2 = s.number("sigma2", 1.0);
    require(f.sigma2 > 0.0, s.path("sigma2"), "must be positive");
    if (s.has("center")) {
      const json& c = s.raw("center");
      require(c.is_array() && c.size() == 2 && c[0].is_number() && c[1].is_number(), s.path("center"),
              "expected [x, y]");
      f.center = {c[0].get<double>(), c[1].get<double>()};
    }
  } else if (kind == "oseen") {
    f.kind = FieldConfig::Kind::kOseen;
    f.t = s.number("t", 0.0);
    require(f.t >= 0.0, s.path("t"), "must be nonnegative");
    f.nu = s.optional_number("nu");
    if (f.nu) require(*f.nu > 0.0, s.path("nu"), "must be positive");
  } else if (kind == "patch") {
    f.kind = FieldConfig::Kind::kPatch;
    f.R = s.number("R", 1.0);
    f.eps = s.number("eps", 0.1);
    require(f.R > 0.0, s.path("R"), "must be positive");
    require(f.eps > 0.0, s.path("eps"), "must be positive");
  } else if (kind == "meanfield") {
    f.kind = FieldConfig::Kind::kMeanfield;
    f.a = s.number("a");
    f.b = s.number("b");
    require(f.a < 0.0, s.path("a"), "must be negative");
    require(f.b >= 0.0, s.path("b"), "must be nonnegative");
  } else if (kind == "rescaled_oseen") {
    f.kind = FieldConfig::Kind::kRescaledOseen;
  } else if (kind == "file") {
    f.kind = FieldConfig::Kind::kFile;
    f.path = s.string("path");
  } else {
    config_error(s.path("kind"), "unknown kind '" + kind + "' (gaussian, oseen, patch, meanfield, rescaled_oseen, file)");
  }
  if (s.has("perturbation")) f.perturbation = parse_perturbation(s.raw("perturbation"), s.path("perturbation"));
  s.finish();
  return f;
}

ScenarioConfig parse_scenario(const json& j) {
  Section top(j, "config");
  ScenarioConfig c;
  {
    Section g(top.raw("grid"), "grid");
    const long long n = g.integer("n");
    require(n >= 16 && n <= (1 << 14) && (n & (n - 1)) == 0, g.path("n"), "must be a power of two >= 16");
    c.grid.n = static_cast<int>(n);
    c.grid.half_width = g.number("half_width");
    require(c.grid.half_width > 0.0, g.path("half_width"), "must be positive");
    g.finish();
  }
  {
    Section m(top.raw("model"), "model");
    const std::string name = m.string("variant");
    const auto v = parse_variant(name);
    if (!v) config_error(m.path("variant"), "unknown variant '" + name + "'");
    c.model.variant = *v;
    c.model.nu = m.number("nu", 0.0);
    c.model.a = m.optional_number("a");
    c.model.b = m.optional_number("b");
    c.model.I_ref = m.optional_number("I_ref");
    m.finish();
    const bool ab = c.model.variant == Variant::kFixedAb;
    if (ab) require(c.model.a && c.model.b, "model", "fixed_ab needs a and b");
    else require(!c.model.a && !c.model.b, "model", "a and b belong to fixed_ab only");
    require(!c.model.I_ref || c.model.variant == Variant::kConstrainedI, "model", "I_ref belongs to constrained_I only");
    if (c.model.I_ref) require(*c.model.I_ref > 0.0, "model.I_ref", "must be positive");
    if (c.model.variant == Variant::kEuler) {
      require(c.model.nu == 0.0, "model.nu", "euler has nu = 0");
    } else {
      require(c.model.nu > 0.0, "model.nu", "must be positive for " + name);
    }
  }
  c.initial = parse_field(top.raw("initial"), "initial");
  if (top.has("reference")) c.reference = parse_field(top.raw("reference"), "reference");
  {
    Section r(top.raw("run"), "run");
    c.run.horizon = r.number("horizon");
    require(c.run.horizon >= 0.0, r.path("horizon"), "must be nonnegative");
    if (r.has("dt")) {
      const json& dt = r.raw("dt");
      if (dt.is_string()) {
        require(dt.get<std::string>() == "auto", r.path("dt"), "expected \"auto\" or a positive number");
      } else if (dt.is_number()) {
        c.run.dt = dt.get<double>();
        require(*c.run.dt > 0.0 && std::isfinite(*c.run.dt), r.path("dt"), "must be positive");
      } else {
        config_error(r.path("dt"), "expected \"auto\" or a positive number");
      }
    }
    c.run.dt_max = r.number("dt_max", 0.05);
    require(c.run.dt_max > 0.0, r.path("dt_max"), "must be positive");
    c.run.cadence = r.number("cadence", 0.0);
    require(c.run.cadence >= 0.0, r.path("cadence"), "must be nonnegative");
    if (r.has("snapshot_times")) {
      const json& st = r.raw("snapshot_times");
      require(st.is_array(), r.path("snapshot_times"), "expected an array of times");
      for (const json& t : st) {
        require(t.is_number() && t.get<double>() >= 0.0, r.path("snapshot_times"), "times must be nonnegative numbers");
        c.run.snapshot_times.push_back(t.get<double>());
      }
    }
    c.run.ceiling = r.optional_number("ceiling");
    c.run.enstrophy_ceiling = r.optional_number("enstrophy_ceiling");
    if (c.run.ceiling) require(*c.run.ceiling > 0.0, r.path("ceiling"), "must be positive");
    if (c.run.enstrophy_ceiling) require(*c.run.enstrophy_ceiling > 0.0, r.path("enstrophy_ceiling"), "must be positive");
    r.finish();
  }
  if (top.has("output_dir")) c.output_dir = top.string("output_dir");
  if (top.has("seed")) {
    const long long seed = top.integer("seed");
    require(seed >= 0, "config.seed", "must be nonnegative");
    c.seed = static_cast<std::uint64_t>(seed);
  }
  top.finish();
  c.source = j;
  return c;
}

json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kConfig, path.string() + ": " + e.what());
  }
}

ScalarField build_field(const FieldConfig& cfg, const Grid& grid, double model_nu, std::uint64_t seed) {
  ScalarField w;
  switch (cfg.kind) {
    case FieldConfig::Kind::kGaussian: w = gaussian_field(grid, cfg.sigma2, cfg.center); break;
    case FieldConfig::Kind::kOseen: {
      const double nu = cfg.nu.value_or(model_nu);
      if (!(nu > 0.0)) throw Error(ErrorCode::kConfig, "oseen field needs nu (model viscosity is zero)");
      w = oseen_field(grid, cfg.t, nu);
      break;
    }
    case FieldConfig::Kind::kPatch: w = patch_field(grid, cfg.R, cfg.eps); break;
    case FieldConfig::Kind::kMeanfield: w = sample_on_grid(canonical_solution(cfg.a, cfg.b), grid); break;
    case FieldConfig::Kind::kRescaledOseen: w = rescaled_oseen(grid); break;
    case FieldConfig::Kind::kFile: {
      Snapshot s = read_snapshot(cfg.path);
      if (!(s.field.grid() == grid)) {
        throw Error(ErrorCode::kConfig, cfg.path.string() + " does not match the configured grid");
      }
      w = std::move(s.field);
      break;
    }
  }
  if (cfg.perturbation && cfg.perturbation->amplitude != 0.0) {
    const PerturbationConfig& p = *cfg.perturbation;
    double phase = 0.0;
    if (p.random_phase) {
      std::mt19937_64 rng(seed);
      phase = std::uniform_real_distribution<double>(0.0, 2.0 * std::numbers::pi)(rng);
    }
    const double ell_m = std::pow(p.ell, p.mode);
    double mass = 0.0;
    for (int j = 0; j < grid.n; ++j) {
      for (int i = 0; i < grid.n; ++i) {
        const double x = grid.x(i), y = grid.y(j);
        const double rm = std::pow(std::hypot(x, y), p.mode);
        const double theta = std::atan2(y, x);
        w(i, j) *= 1.0 + p.amplitude * rm * std::cos(p.mode * (theta - phase)) / (ell_m + rm);
        mass += w(i, j);
      }
    }
    mass *= grid.cell_area();
    for (double& v : w.values()) v /= mass;
  }
  return w;
}

ModelSpec build_model(const ModelConfig& cfg, const ScalarField& initial) {
  ModelSpec m;
  m.variant = cfg.variant;
  m.nu = cfg.nu;
  if (cfg.variant == Variant::kFixedAb) {
    m.fixed_a = cfg.a;
    m.fixed_b = cfg.b;
  }
  if (cfg.variant == Variant::kConstrainedI) m.I_ref = cfg.I_ref ? *cfg.I_ref : moments(initial).inertia;
  m.validate();
  return m;
}

}  // namespace vortexflow::app
