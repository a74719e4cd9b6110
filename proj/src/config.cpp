#include "hub/config.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace hub::config {

namespace fs = std::filesystem;
using nlohmann::json;

nlohmann::json hub_to_json(const HubInstance& hub) {
  json j;
  j["items"] = hub.items;
  j["u_min"] = hub.utility.u_min;
  j["u_max"] = hub.utility.u_max;
  j["utilities"] = hub.utility.values;
  json arms = json::array();
  for (std::size_t k = 0; k < hub.arms.size(); ++k) {
    json a;
    a["name"] = k < hub.arm_names.size() ? hub.arm_names[k] : "c" + std::to_string(k + 1);
    a["probs"] = hub.arms[k].probs;
    arms.push_back(std::move(a));
  }
  j["arms"] = std::move(arms);
  json teachers = json::array();
  for (std::size_t m = 0; m < hub.teachers.size(); ++m) {
    json t;
    t["name"] = m < hub.teacher_names.size() ? hub.teacher_names[m] : "t" + std::to_string(m + 1);
    t["beta"] = hub.teachers[m].beta;
    t["cost"] = hub.teachers[m].cost;
    teachers.push_back(std::move(t));
  }
  j["teachers"] = std::move(teachers);
  json profile = json::array();
  for (const auto& e : hub.query_profile.entries) {
    json q;
    q["i"] = e.first;
    q["j"] = e.second;
    q["prob"] = e.prob;
    profile.push_back(std::move(q));
  }
  j["query_profile"] = std::move(profile);
  j["gamma"] = hub.gamma;
  return j;
}

HubInstance hub_from_json(const json& j) {
  HubInstance hub;
  hub.items = j.at("items").get<std::vector<std::string>>();
  hub.utility.u_min = j.at("u_min").get<double>();
  hub.utility.u_max = j.at("u_max").get<double>();
  hub.utility.values = j.at("utilities").get<std::vector<double>>();
  for (const auto& a : j.at("arms")) {
    hub.arms.push_back(ArmDistribution{a.at("probs").get<std::vector<double>>()});
    hub.arm_names.push_back(a.value("name", ""));
  }
  for (const auto& t : j.at("teachers")) {
    hub.teachers.push_back({t.at("beta").get<double>(), t.at("cost").get<double>()});
    hub.teacher_names.push_back(t.value("name", ""));
  }
  for (const auto& q : j.at("query_profile")) {
    hub.query_profile.entries.push_back(
        {q.at("i").get<int>(), q.at("j").get<int>(), q.at("prob").get<double>()});
  }
  hub.gamma = j.at("gamma").get<double>();
  return hub;
}

nlohmann::json grids_to_json(const domains::GridSettings& grids) {
  json j;
  j["utility_levels"] = grids.u_grid.levels;
  j["simplex_resolution"] = grids.d_grid.resolution;
  j["u_min"] = grids.u_min;
  j["u_max"] = grids.u_max;
  return j;
}

domains::GridSettings grids_from_json(const json& j) {
  domains::GridSettings g;
  g.u_grid.levels = j.at("utility_levels").get<std::vector<double>>();
  g.d_grid.resolution = j.at("simplex_resolution").get<int>();
  g.u_min = j.at("u_min").get<double>();
  g.u_max = j.at("u_max").get<double>();
  return g;
}

nlohmann::json covid_config_to_json(const domains::CovidConfig& c) {
  json j;
  j["tests"] = c.tests;
  j["sensitivities"] = c.sensitivities;
  j["dollar_costs"] = c.dollar_costs;
  j["cost_scale"] = c.cost_scale;
  j["items"] = c.items;
  j["symptom_utilities"] = c.symptom_utilities;
  j["u_min"] = c.u_min;
  j["u_max"] = c.u_max;
  j["arm_names"] = c.arm_names;
  j["arm_dists"] = c.arm_dists;
  j["gamma"] = c.gamma;
  return j;
}

domains::CovidConfig covid_config_from_json(const json& j) {
  domains::CovidConfig c;
  c.tests = j.at("tests").get<std::vector<std::string>>();
  c.sensitivities = j.at("sensitivities").get<std::vector<double>>();
  c.dollar_costs = j.at("dollar_costs").get<std::vector<double>>();
  c.cost_scale = j.at("cost_scale").get<double>();
  c.items = j.at("items").get<std::vector<std::string>>();
  c.symptom_utilities = j.at("symptom_utilities").get<std::vector<double>>();
  c.u_min = j.at("u_min").get<double>();
  c.u_max = j.at("u_max").get<double>();
  c.arm_names = j.at("arm_names").get<std::vector<std::string>>();
  c.arm_dists = j.at("arm_dists").get<std::vector<std::vector<double>>>();
  c.gamma = j.at("gamma").get<double>();
  return c;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed for " + path);
}

void save_suite(const domains::TaskSuite& suite, const std::string& dir) {
  fs::create_directories(dir);
  json manifest;
  manifest["domain"] = suite.domain;
  manifest["master_seed"] = suite.master_seed;
  manifest["grids"] = grids_to_json(suite.grids);
  json tasks = json::array();
  for (const auto& task : suite.tasks) {
    const std::string file = task.name + ".json";
    write_text_file((fs::path(dir) / file).string(), hub_to_json(task.hub).dump(2) + "\n");
    json t;
    t["file"] = file;
    t["name"] = task.name;
    t["seed"] = task.seed;
    tasks.push_back(std::move(t));
  }
  manifest["tasks"] = std::move(tasks);
  write_text_file((fs::path(dir) / "manifest.json").string(), manifest.dump(2) + "\n");
}

domains::TaskSuite load_suite(const std::string& dir) {
  const auto manifest = json::parse(read_text_file((fs::path(dir) / "manifest.json").string()));
  domains::TaskSuite suite;
  suite.domain = manifest.at("domain").get<std::string>();
  suite.master_seed = manifest.at("master_seed").get<std::uint64_t>();
  suite.grids = grids_from_json(manifest.at("grids"));
  for (const auto& t : manifest.at("tasks")) {
    domains::Task task;
    task.name = t.at("name").get<std::string>();
    task.seed = t.at("seed").get<std::uint64_t>();
    task.hub = hub_from_json(
        json::parse(read_text_file((fs::path(dir) / t.at("file").get<std::string>()).string())));
    suite.tasks.push_back(std::move(task));
  }
  return suite;
}

std::string config_digest(const json& j) {
  const std::uint64_t h = fnv1a(j.dump());
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

}  // namespace hub::config
