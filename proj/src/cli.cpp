#include "exitwalk/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>

#include "exitwalk/errors.hpp"
#include "exitwalk/euler.hpp"
#include "exitwalk/harness.hpp"
#include "exitwalk/presets.hpp"
#include "exitwalk/report.hpp"

namespace exitwalk::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Seed offset separating the oracle streams from the walk streams.
constexpr std::uint64_t kOracleSeedSalt = 0x9E3779B97F4A7C15ULL;

const std::vector<double> kDefaultEpsList = {1e-1, 1e-2, 1e-3, 1e-4, 1e-5};

std::string dump(const json& j) { return j.dump(2) + "\n"; }

template <class T>
void read_field(const json& j, const char* key, T& dst) {
  if (!j.contains(key)) return;
  try {
    dst = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field '") + key + "': " + e.what());
  }
}

template <class T>
void read_optional(const json& j, const char* key, std::optional<T>& dst) {
  if (!j.contains(key)) return;
  if (j.at(key).is_null()) {
    dst.reset();
    return;
  }
  T v{};
  read_field(j, key, v);
  dst = v;
}

}  // namespace

void RunConfig::validate() const {
  const auto& known = presets::names();
  if (std::find(known.begin(), known.end(), preset) == known.end()) {
    throw ConfigError("unknown preset '" + preset + "' (expected bm, constant, ou, sinusoidal, growth)");
  }
  if (n == 0) throw ConfigError("--n must be >= 1");
  if (m && !(*m > 0.0)) throw ConfigError("--m must be positive");
  if (tmax && !(*tmax > t0)) throw ConfigError("--tmax must exceed --t0");
  if (!(sigma > 0.0) && preset != "bm" && preset != "sinusoidal") {
    throw ConfigError("--sigma must be positive");
  }
  EulerConfig{euler.h, euler.bridge, euler.cap}.validate();
  if (is_growth()) {
    if (!(a > 0.0 && a < x0 && x0 < b)) {
      throw ConfigError("growth preset requires 0 < a < x0 < b");
    }
    log_space_problem(make_growth_problem(*this)).validate();
  } else {
    make_problem(*this).validate();
  }
}

double RunConfig::effective_m() const {
  if (m) return *m;
  if (preset == "sinusoidal") return presets::sinusoidal_m(a, b);
  return 1.0;
}

json to_json(const RunConfig& cfg) {
  json j;
  j["preset"] = cfg.preset;
  j["alpha"] = cfg.alpha;
  j["beta"] = cfg.beta;
  j["sigma"] = cfg.sigma;
  j["kappa"] = cfg.kappa;
  j["mu"] = cfg.mu;
  j["a"] = cfg.a;
  j["b"] = cfg.b;
  j["x0"] = cfg.x0;
  j["t0"] = cfg.t0;
  j["eps"] = cfg.eps;
  j["gamma"] = cfg.gamma;
  j["m"] = cfg.m ? json(*cfg.m) : json();
  j["n"] = cfg.n;
  j["seed"] = cfg.seed;
  j["tmax"] = cfg.tmax ? json(*cfg.tmax) : json();
  j["eps_list"] = cfg.eps_list;
  j["euler"] = {{"h", cfg.euler.h}, {"bridge", cfg.euler.bridge}, {"cap", cfg.euler.cap}};
  return j;
}

RunConfig config_from_json(const json& j, RunConfig base) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  static const std::vector<std::string> kKeys = {
      "preset", "alpha", "beta", "sigma", "kappa", "mu",   "a",       "b",      "x0", "t0",
      "eps",    "gamma", "m",    "n",     "seed",  "tmax", "eps_list", "euler", "out_dir"};
  for (const auto& [key, _] : j.items()) {
    if (std::find(kKeys.begin(), kKeys.end(), key) == kKeys.end()) {
      throw ConfigError("unknown config field '" + key + "'");
    }
  }
  RunConfig cfg = std::move(base);
  read_field(j, "preset", cfg.preset);
  read_field(j, "alpha", cfg.alpha);
  read_field(j, "beta", cfg.beta);
  read_field(j, "sigma", cfg.sigma);
  read_field(j, "kappa", cfg.kappa);
  read_field(j, "mu", cfg.mu);
  read_field(j, "a", cfg.a);
  read_field(j, "b", cfg.b);
  read_field(j, "x0", cfg.x0);
  read_field(j, "t0", cfg.t0);
  read_field(j, "eps", cfg.eps);
  read_field(j, "gamma", cfg.gamma);
  read_optional(j, "m", cfg.m);
  read_field(j, "n", cfg.n);
  read_field(j, "seed", cfg.seed);
  read_field(j, "out_dir", cfg.out_dir);
  read_optional(j, "tmax", cfg.tmax);
  read_field(j, "eps_list", cfg.eps_list);
  if (j.contains("euler")) {
    const json& e = j.at("euler");
    if (!e.is_object()) throw ConfigError("config field 'euler' must be an object");
    for (const auto& [key, _] : e.items()) {
      if (key != "h" && key != "bridge" && key != "cap" && key != "a" && key != "b" && key != "x0") {
        throw ConfigError("unknown euler config field '" + key + "'");
      }
    }
    read_field(e, "h", cfg.euler.h);
    read_field(e, "bridge", cfg.euler.bridge);
    read_field(e, "cap", cfg.euler.cap);
    // The oracle must simulate the same exit problem as the walk.
    const std::pair<const char*, double> shared[] = {{"a", cfg.a}, {"b", cfg.b}, {"x0", cfg.x0}};
    for (const auto& [key, value] : shared) {
      if (e.contains(key)) {
        double v = 0.0;
        read_field(e, key, v);
        if (v != value) {
          std::ostringstream os;
          os << "euler sub-config " << key << " = " << v << " does not match the walk's " << key
             << " = " << value;
          throw ConfigError(os.str());
        }
      }
    }
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config file " + path + " is not valid JSON: " + e.what());
  }
  return config_from_json(j);
}

CoefficientSet make_coefficients(const RunConfig& cfg) {
  if (cfg.preset == "bm") return presets::brownian();
  if (cfg.preset == "constant") return presets::constant(cfg.alpha, cfg.beta, cfg.sigma);
  if (cfg.preset == "ou") return presets::ornstein_uhlenbeck(cfg.kappa, cfg.mu, cfg.sigma);
  if (cfg.preset == "sinusoidal") return presets::sinusoidal();
  if (cfg.preset == "growth") {
    return to_lclass(GCoefficientSet::constant(cfg.alpha, cfg.beta, cfg.sigma));
  }
  throw ConfigError("unknown preset '" + cfg.preset + "'");
}

GExitProblem make_growth_problem(const RunConfig& cfg) {
  GExitProblem gp;
  gp.coeffs = GCoefficientSet::constant(cfg.alpha, cfg.beta, cfg.sigma);
  gp.a = cfg.a;
  gp.b = cfg.b;
  gp.x0 = cfg.x0;
  gp.t0 = cfg.t0;
  gp.eps_g = cfg.eps;
  gp.gamma_shell = cfg.gamma;
  gp.m = cfg.effective_m();
  return gp;
}

ExitProblem make_problem(const RunConfig& cfg) {
  if (cfg.is_growth()) return log_space_problem(make_growth_problem(cfg));
  ExitProblem p{make_coefficients(cfg)};
  p.a = cfg.a;
  p.b = cfg.b;
  p.x0 = cfg.x0;
  p.t0 = cfg.t0;
  p.eps = cfg.eps;
  p.gamma_shell = cfg.gamma;
  p.m = cfg.effective_m();
  return p;
}

namespace {

std::vector<ExitSample> draw_samples(const RunConfig& cfg) {
  const ExitProblem p = make_problem(cfg);
  const bool growth = cfg.is_growth();
  const std::optional<double> tmax = cfg.tmax;
  return sample_many(
      [&p, growth, tmax](Rng& rng) {
        ExitSample s = tmax ? run_capped(p, *tmax, rng, false).sample : run(p, rng, false).sample;
        if (growth) s.position = std::exp(s.position);
        return s;
      },
      cfg.n, cfg.seed);
}

}  // namespace

void cmd_sample(const RunConfig& cfg) {
  cfg.validate();
  const ExitProblem p = make_problem(cfg);
  const auto samples = draw_samples(cfg);
  const McReport rep = summarize(samples, p.coeffs);
  const auto times = exit_times(samples);
  const double horizon = std::max(1.0, *std::max_element(times.begin(), times.end()));
  json out;
  out["command"] = "sample";
  out["config"] = to_json(cfg);
  out["report"] = report::to_json(rep);
  out["diagnostics"] = report::to_json(validate(p, horizon));
  const fs::path dir(cfg.out_dir);
  report::write_file(dir / "samples.csv", report::samples_csv(samples));
  report::write_file(dir / "report.json", dump(out));
}

void cmd_steps(const RunConfig& cfg) {
  if (cfg.eps_list.empty()) throw ConfigError("steps: --eps-list must name at least one eps");
  cfg.validate();
  const ExitProblem p = make_problem(cfg);
  std::vector<double> eps_list = cfg.eps_list;
  if (cfg.is_growth()) {
    for (double& e : eps_list) e /= cfg.b;
  }
  const StepFit fit = steps_vs_logeps(p, eps_list, cfg.n, cfg.seed);
  json out;
  out["command"] = "steps";
  out["config"] = to_json(cfg);
  out["fit"] = report::to_json(fit);
  const fs::path dir(cfg.out_dir);
  report::write_file(dir / "steps.csv", report::steps_csv(fit.rows));
  report::write_file(dir / "steps_fit.json", dump(out));
}

void cmd_compare(const RunConfig& cfg) {
  cfg.validate();
  const ExitProblem p = make_problem(cfg);
  const auto woms = draw_samples(cfg);
  const EulerConfig ecfg{cfg.euler.h, cfg.euler.bridge, cfg.euler.cap};
  const auto oracle = replicate<EulerExit>(
      [&p, &ecfg](Rng& rng) { return euler_exit(p.coeffs, p.a, p.b, p.x0, ecfg, rng, p.t0); },
      cfg.n, cfg.seed ^ kOracleSeedSalt);

  const auto woms_times = exit_times(woms);
  std::vector<double> oracle_times;
  double oracle_sum = 0.0;
  std::size_t oracle_censored = 0;
  std::size_t oracle_upper = 0;
  for (const auto& e : oracle) {
    oracle_times.push_back(e.time);
    oracle_sum += e.time;
    if (e.censored) ++oracle_censored;
    if (e.side == Side::upper) ++oracle_upper;
  }
  const double n = static_cast<double>(cfg.n);
  const double ks = ks_distance(woms_times, oracle_times);
  const double ks_tol = ks_critical_value(woms_times.size(), oracle_times.size(), 0.001);
  const auto grid = quantile_grid(woms_times, oracle_times, 512);
  const BoundParams bounds = bound_params(p.coeffs, grid);
  const SandwichReport sandwich =
      cdf_sandwich_check(woms_times, oracle_times, p.eps, bounds, grid, ks_tol);

  McReport woms_rep = summarize(woms, p.coeffs);
  woms_rep.ks_vs_oracle = ks;

  json out;
  out["command"] = "compare";
  out["config"] = to_json(cfg);
  out["woms"] = report::to_json(woms_rep);
  out["oracle"] = {{"mean_time", oracle_sum / n},
                   {"frac_upper", static_cast<double>(oracle_upper) / n},
                   {"censored_fraction", static_cast<double>(oracle_censored) / n},
                   {"h", ecfg.h},
                   {"bridge", ecfg.bridge_correction},
                   {"cap", ecfg.t_cap}};
  out["ks_distance"] = ks;
  out["ks_tol"] = ks_tol;
  out["sandwich"] = report::to_json(sandwich);
  const fs::path dir(cfg.out_dir);
  report::write_file(dir / "cdf.csv", report::cdf_csv(sandwich));
  report::write_file(dir / "compare.json", dump(out));
}

json cmd_demo_sinusoidal(const RunConfig& base, std::size_t n_steps_per_eps) {
  RunConfig cfg = base;
  cfg.preset = "sinusoidal";
  cfg.a = -1.0;
  cfg.b = 2.0;
  cfg.x0 = 1.0;
  cfg.t0 = 0.0;
  cfg.eps = 1e-2;
  cfg.gamma = 1e-4;
  cfg.m.reset();
  cfg.tmax.reset();
  if (cfg.eps_list.empty()) cfg.eps_list = kDefaultEpsList;
  cfg.validate();

  const ExitProblem p = make_problem(cfg);
  const double m = p.m;
  const double delta = presets::sinusoidal_delta(cfg.a, cfg.b, m);

  // Closed forms against the quadrature fallbacks.
  const CoefficientSet quad_only = p.coeffs.without_closed_forms();
  double rho_rel = 0.0;
  double theta_abs = 0.0;
  double c_abs = 0.0;
  for (int i = 0; i <= 200; ++i) {
    const double t = 20.0 * i / 200.0;
    const double closed = p.coeffs.rho(t);
    rho_rel = std::max(rho_rel, std::abs(quad_only.rho(t) - closed) / std::max(1.0, std::abs(closed)));
    theta_abs = std::max(theta_abs, std::abs(quad_only.theta(t) - p.coeffs.theta(t)));
    c_abs = std::max(c_abs, std::abs(quad_only.c(t) - p.coeffs.c(t)));
  }

  // Generic spheroid boundaries against the closed-form sinusoidal ones.
  double boundary_abs = 0.0;
  for (int i = 0; i < 10; ++i) {
    const double t0 = 0.7 * i;
    for (int k = 1; k < 10; ++k) {
      const double x0 = cfg.a + (cfg.b - cfg.a) * k / 10.0;
      const double d = spheroid_scale(p, t0, x0);
      const double life = spheroid_lifetime(p, t0, d);
      for (int j = 0; j <= 10; ++j) {
        const double t = life * j / 10.0;
        const Bounds generic = psi_L(p, t, t0, x0, d);
        const Bounds closed = presets::sinusoidal_boundary(t, t0, x0, d);
        boundary_abs = std::max({boundary_abs, std::abs(generic.lower - closed.lower),
                                 std::abs(generic.upper - closed.upper)});
      }
    }
  }

  const auto samples = draw_samples(cfg);
  bool positions_ok = true;
  bool times_ok = true;
  for (const auto& s : samples) {
    const bool in_shell = (s.position >= cfg.a && s.position <= cfg.a + cfg.eps) ||
                          (s.position >= cfg.b - cfg.eps && s.position <= cfg.b);
    positions_ok = positions_ok && in_shell;
    times_ok = times_ok && s.time > 0.0;
  }
  const auto times = exit_times(samples);
  const auto bins = histogram(times);

  const StepFit fit = steps_vs_logeps(p, cfg.eps_list, n_steps_per_eps, cfg.seed);

  const bool closed_ok = rho_rel <= 1e-8 && theta_abs <= 1e-8 && c_abs <= 1e-8;
  const bool boundary_ok = boundary_abs <= 1e-8;
  const bool m_ok = std::abs(2.0 * delta * std::sqrt(m) - (cfg.b - cfg.a)) <= 1e-12 * (cfg.b - cfg.a);

  json out;
  out["command"] = "demo-sinusoidal";
  out["config"] = to_json(cfg);
  out["m"] = m;
  out["delta_m"] = delta;
  out["checks"] = {{"rho_closed_vs_quadrature_max_rel", rho_rel},
                   {"theta_closed_vs_quadrature_max_abs", theta_abs},
                   {"c_closed_vs_quadrature_max_abs", c_abs},
                   {"closed_forms_ok", closed_ok},
                   {"boundary_generic_vs_closed_max_abs", boundary_abs},
                   {"boundary_ok", boundary_ok},
                   {"m_balances_kappa", m_ok},
                   {"all_positions_in_shell", positions_ok},
                   {"all_times_positive", times_ok}};
  out["checks_passed"] = closed_ok && boundary_ok && m_ok && positions_ok && times_ok;
  out["histogram_samples"] = samples.size();
  out["report"] = report::to_json(summarize(samples, p.coeffs));
  out["steps_fit"] = report::to_json(fit);

  const fs::path dir(cfg.out_dir);
  report::write_file(dir / "histogram.csv", report::histogram_csv(bins));
  report::write_file(dir / "steps.csv", report::steps_csv(fit.rows));
  report::write_file(dir / "demo_report.json", dump(out));
  if (!out["checks_passed"].get<bool>()) {
    throw NumericError("demo-sinusoidal: internal consistency checks failed, see demo_report.json");
  }
  return out;
}

namespace {

struct Flag {
  CLI::Option* option = nullptr;
  std::function<void(RunConfig&, const RunConfig&)> apply;
};

// Registers the shared option set on `cmd`, bound to `flags`; `table`
// records how to copy each flag into a config when it was given.
void add_run_options(CLI::App* cmd, RunConfig& flags, double& m_flag, double& tmax_flag,
                     std::vector<Flag>& table) {
  auto add = [&](const std::string& name, auto& field, const std::string& help,
                 std::function<void(RunConfig&, const RunConfig&)> apply) {
    table.push_back({cmd->add_option(name, field, help), std::move(apply)});
  };
  add("--preset", flags.preset, "bm | constant | ou | sinusoidal | growth",
      [](RunConfig& d, const RunConfig& s) { d.preset = s.preset; });
  add("--alpha", flags.alpha, "constant/growth alpha", [](RunConfig& d, const RunConfig& s) { d.alpha = s.alpha; });
  add("--beta", flags.beta, "constant/growth beta", [](RunConfig& d, const RunConfig& s) { d.beta = s.beta; });
  add("--sigma", flags.sigma, "constant/ou/growth sigma", [](RunConfig& d, const RunConfig& s) { d.sigma = s.sigma; });
  add("--kappa", flags.kappa, "ou mean-reversion rate", [](RunConfig& d, const RunConfig& s) { d.kappa = s.kappa; });
  add("--mu", flags.mu, "ou long-run mean", [](RunConfig& d, const RunConfig& s) { d.mu = s.mu; });
  add("--a", flags.a, "lower end of the interval", [](RunConfig& d, const RunConfig& s) { d.a = s.a; });
  add("--b", flags.b, "upper end of the interval", [](RunConfig& d, const RunConfig& s) { d.b = s.b; });
  add("--x0", flags.x0, "start position", [](RunConfig& d, const RunConfig& s) { d.x0 = s.x0; });
  add("--t0", flags.t0, "start time", [](RunConfig& d, const RunConfig& s) { d.t0 = s.t0; });
  add("--eps", flags.eps, "stopping shell width", [](RunConfig& d, const RunConfig& s) { d.eps = s.eps; });
  add("--gamma", flags.gamma, "interval shrink factor in (0,1)",
      [](RunConfig& d, const RunConfig& s) { d.gamma = s.gamma; });
  table.push_back({cmd->add_option("--m", m_flag, "horizon step"),
                   [&m_flag](RunConfig& d, const RunConfig&) { d.m = m_flag; }});
  add("--n", flags.n, "number of samples", [](RunConfig& d, const RunConfig& s) { d.n = s.n; });
  add("--seed", flags.seed, "base seed", [](RunConfig& d, const RunConfig& s) { d.seed = s.seed; });
  add("--out-dir", flags.out_dir, "output directory",
      [](RunConfig& d, const RunConfig& s) { d.out_dir = s.out_dir; });
  add("--euler-h", flags.euler.h, "Euler oracle step",
      [](RunConfig& d, const RunConfig& s) { d.euler.h = s.euler.h; });
  add("--euler-bridge", flags.euler.bridge, "Euler bridge correction (true/false)",
      [](RunConfig& d, const RunConfig& s) { d.euler.bridge = s.euler.bridge; });
  add("--euler-cap", flags.euler.cap, "Euler maximal simulated time",
      [](RunConfig& d, const RunConfig& s) { d.euler.cap = s.euler.cap; });
  table.push_back({cmd->add_option("--tmax", tmax_flag, "time cap (capped walk)"),
                   [&tmax_flag](RunConfig& d, const RunConfig&) { d.tmax = tmax_flag; }});
  table.push_back({cmd->add_option("--eps-list", flags.eps_list, "comma-separated eps values")
                       ->delimiter(','),
                   [](RunConfig& d, const RunConfig& s) { d.eps_list = s.eps_list; }});
}

}  // namespace

int main(int argc, const char* const* argv) {
  CLI::App app{"exitwalk: exit times of time-inhomogeneous linear diffusions by walk on moving spheres"};
  app.require_subcommand(1);

  struct Command {
    CLI::App* app;
    RunConfig flags;
    double m_flag = 1.0;
    double tmax_flag = 0.0;
    std::string config_path;
    std::vector<Flag> table;
    std::size_t steps_n = 10000;
  };
  std::vector<std::unique_ptr<Command>> commands;
  auto make = [&](const std::string& name, const std::string& help) {
    auto c = std::make_unique<Command>();
    c->app = app.add_subcommand(name, help);
    add_run_options(c->app, c->flags, c->m_flag, c->tmax_flag, c->table);
    c->app->add_option("--config", c->config_path, "JSON config file; flags override it");
    commands.push_back(std::move(c));
    return commands.back().get();
  };
  make("sample", "simulate exit samples");
  make("steps", "mean step counts against |log eps|");
  make("compare", "compare the walk with the Euler oracle");
  Command* demo = make("demo-sinusoidal", "reproduce the sinusoidal example data");
  demo->app->add_option("--n-steps", demo->steps_n, "runs per eps for the step table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    for (const auto& c : commands) {
      if (!c->app->parsed()) continue;
      RunConfig cfg = c->config_path.empty() ? RunConfig{} : load_config(c->config_path);
      if (c.get() == demo && c->app->get_option("--n")->count() == 0) cfg.n = 100000;
      for (const auto& f : c->table) {
        if (f.option->count() > 0) f.apply(cfg, c->flags);
      }
      const std::string name = c->app->get_name();
      if (name == "sample") {
        cmd_sample(cfg);
      } else if (name == "steps") {
        cmd_steps(cfg);
      } else if (name == "compare") {
        cmd_compare(cfg);
      } else {
        cmd_demo_sinusoidal(cfg, c->steps_n);
      }
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kIoError;
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kNumericError;
  } catch (const DomainError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kNumericError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumericError;
  }
  return kOk;
}

}  // namespace exitwalk::cli
