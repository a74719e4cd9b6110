// JSON (de)serialization for instances, grids and task suites. Double values
// round-trip exactly.
#pragma once

#include <cstdint>
#include <string>

#include "json.hpp"

#include "hub/core.hpp"
#include "hub/domains.hpp"

namespace hub::config {

nlohmann::json hub_to_json(const HubInstance& hub);
HubInstance hub_from_json(const nlohmann::json& j);

nlohmann::json grids_to_json(const domains::GridSettings& grids);
domains::GridSettings grids_from_json(const nlohmann::json& j);

nlohmann::json covid_config_to_json(const domains::CovidConfig& config);
domains::CovidConfig covid_config_from_json(const nlohmann::json& j);

// A suite is a directory: manifest.json plus one config file per task.
void save_suite(const domains::TaskSuite& suite, const std::string& dir);
domains::TaskSuite load_suite(const std::string& dir);

// FNV-1a digest of a canonical JSON dump, as fixed-width hex.
std::string config_digest(const nlohmann::json& j);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace hub::config
