#pragma once

#include <filesystem>
#include <span>
#include <string>

#include <json.hpp>

#include "exitwalk/harness.hpp"
#include "exitwalk/woms.hpp"

namespace exitwalk::report {

/// Shortest round-trip decimal representation.
std::string format_double(double v);

/// `index,exit_time,exit_position,side,steps` with a header row.
std::string samples_csv(std::span<const ExitSample> samples);
std::string histogram_csv(std::span<const Bin> bins);
std::string steps_csv(std::span<const StepRow> rows);
/// `t,woms_cdf,oracle_cdf` on the sandwich grid.
std::string cdf_csv(const SandwichReport& rep);

nlohmann::json to_json(const McReport& rep);
nlohmann::json to_json(const StepFit& fit);
nlohmann::json to_json(const SandwichReport& rep, bool with_points = false);
nlohmann::json to_json(const Diagnostics& diag);

/// Writes `content` to `path`, creating parent directories. Throws IoError.
void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace exitwalk::report
