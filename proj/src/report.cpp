#include "exitwalk/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "exitwalk/errors.hpp"

namespace exitwalk::report {

namespace {

nlohmann::json number_or_null(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string samples_csv(std::span<const ExitSample> samples) {
  std::string out = "index,exit_time,exit_position,side,steps\n";
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    out += std::to_string(i);
    out += ',';
    out += format_double(s.time);
    out += ',';
    out += format_double(s.position);
    out += ',';
    out += to_string(s.side);
    out += ',';
    out += std::to_string(s.steps);
    out += '\n';
  }
  return out;
}

std::string histogram_csv(std::span<const Bin> bins) {
  std::string out = "bin_lo,bin_hi,count\n";
  for (const auto& b : bins) {
    out += format_double(b.lo) + ',' + format_double(b.hi) + ',' + std::to_string(b.count) + '\n';
  }
  return out;
}

std::string steps_csv(std::span<const StepRow> rows) {
  std::string out = "eps,abs_log_eps,mean_steps,se_steps,max_steps\n";
  for (const auto& r : rows) {
    out += format_double(r.eps) + ',' + format_double(r.abs_log_eps) + ',' +
           format_double(r.mean_steps) + ',' + format_double(r.se_steps) + ',' +
           std::to_string(r.max_steps) + '\n';
  }
  return out;
}

std::string cdf_csv(const SandwichReport& rep) {
  std::string out = "t,woms_cdf,oracle_cdf\n";
  for (const auto& p : rep.points) {
    out += format_double(p.t) + ',' + format_double(p.f_woms) + ',' + format_double(p.f_oracle) +
           '\n';
  }
  return out;
}

nlohmann::json to_json(const McReport& rep) {
  nlohmann::json j;
  j["n_samples"] = rep.n_samples;
  j["mean_time"] = number_or_null(rep.mean_time);
  j["var_time"] = number_or_null(rep.var_time);
  j["se_time"] = number_or_null(rep.se_time);
  j["frac_upper"] = rep.frac_upper;
  j["frac_lower"] = rep.frac_lower;
  j["censored_fraction"] = rep.censored_fraction;
  j["mean_steps"] = rep.mean_steps;
  j["max_steps"] = rep.max_steps;
  auto cdf = nlohmann::json::array();
  for (const auto& p : rep.cdf) cdf.push_back({p.t, p.value});
  j["cdf"] = std::move(cdf);
  j["ks_vs_oracle"] = rep.ks_vs_oracle ? nlohmann::json(*rep.ks_vs_oracle) : nlohmann::json();
  auto rows = nlohmann::json::array();
  for (const auto& r : rep.per_eps) {
    rows.push_back({{"eps", r.eps}, {"mean_steps", r.mean_steps}, {"se_steps", r.se_steps}});
  }
  j["per_eps"] = std::move(rows);
  j["alpha_bar"] = number_or_null(rep.alpha_bar);
  j["beta_bar"] = number_or_null(rep.beta_bar);
  j["sigma_floor"] = rep.sigma_floor;
  return j;
}

nlohmann::json to_json(const StepFit& fit) {
  nlohmann::json j;
  auto rows = nlohmann::json::array();
  for (const auto& r : fit.rows) {
    rows.push_back({{"eps", r.eps},
                    {"abs_log_eps", r.abs_log_eps},
                    {"mean_steps", r.mean_steps},
                    {"se_steps", r.se_steps},
                    {"max_steps", r.max_steps}});
  }
  j["rows"] = std::move(rows);
  j["slope"] = number_or_null(fit.slope);
  j["intercept"] = number_or_null(fit.intercept);
  j["r2"] = number_or_null(fit.r2);
  j["degenerate"] = fit.degenerate;
  j["nondecreasing"] = fit.nondecreasing;
  return j;
}

nlohmann::json to_json(const SandwichReport& rep, bool with_points) {
  nlohmann::json j;
  j["eps"] = rep.eps;
  j["ks_tol"] = rep.ks_tol;
  j["rho"] = rep.rho;
  j["upper_violations"] = rep.upper_violations;
  j["lower_violations"] = rep.lower_violations;
  j["worst_upper_margin"] = number_or_null(rep.worst_upper_margin);
  j["worst_lower_margin"] = number_or_null(rep.worst_lower_margin);
  j["vacuous_points"] = rep.vacuous_points;
  if (with_points) {
    auto pts = nlohmann::json::array();
    for (const auto& p : rep.points) {
      pts.push_back({{"t", p.t},
                     {"f_woms", p.f_woms},
                     {"f_oracle", p.f_oracle},
                     {"prefactor", p.prefactor},
                     {"vacuous", p.vacuous}});
    }
    j["points"] = std::move(pts);
  }
  return j;
}

nlohmann::json to_json(const Diagnostics& diag) {
  return {{"horizon", diag.horizon},
          {"min_sigma", diag.min_sigma},
          {"max_abs_alpha", diag.max_abs_alpha},
          {"max_abs_beta", diag.max_abs_beta},
          {"sigma_floor", diag.sigma_floor},
          {"warnings", diag.warnings}};
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << content;
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace exitwalk::report
