// Command-line interface: task generation, experiment runs, cost sweeps,
// rollout comparisons, rationality estimation and figure rendering.
#include <filesystem>
#include <iostream>
#include <mutex>
#include <sstream>

#include "CLI11.hpp"

#include "hub/bench.hpp"
#include "hub/beta.hpp"
#include "hub/config.hpp"
#include "hub/svg.hpp"

namespace fs = std::filesystem;
using namespace hub;

namespace {

struct RunFlags {
  std::string suite_dir;
  std::string out_dir;
  std::vector<std::string> algs;
  std::string profile = "desk";
  std::uint64_t seed = 1;
  int runs = -1;
  int horizon = -1;
  int sims = -1;
  int depth = -1;
  double ucb = -1.0;
  int workers = 0;
  bool dump_episodes = false;
  bool diagnostics = false;
};

bench::RunProfile make_profile(const RunFlags& f) {
  auto profile = bench::RunProfile::named(f.profile);
  if (f.runs > 0) profile.runs = f.runs;
  if (f.horizon > 0) profile.horizon = f.horizon;
  if (f.sims > 0) profile.planner_simulations = f.sims;
  return profile;
}

std::vector<bench::AlgorithmSpec> make_algs(const RunFlags& f) {
  std::vector<bench::AlgorithmSpec> algs;
  if (f.algs.empty()) {
    algs = bench::default_roster();
  } else {
    for (const auto& name : f.algs) algs.push_back(bench::AlgorithmSpec::parse(name));
  }
  for (auto& a : algs) {
    if (f.depth > 0) a.planner.max_depth = f.depth;
    if (f.ucb >= 0.0) a.planner.ucb_exploration = f.ucb;
  }
  return algs;
}

int resolve_workers(int flag) { return flag > 0 ? flag : bench::worker_count_from_env(); }

nlohmann::json run_config_json(const RunFlags& f, const bench::RunProfile& profile,
                               const std::vector<bench::AlgorithmSpec>& algs,
                               const domains::TaskSuite& suite) {
  nlohmann::json j;
  j["seed"] = f.seed;
  j["profile"] = f.profile;
  j["runs"] = profile.runs;
  j["horizon"] = profile.horizon;
  j["smoothing_window"] = profile.smoothing_window;
  j["planner_simulations"] = profile.planner_simulations;
  nlohmann::json names = nlohmann::json::array();
  for (const auto& a : algs) names.push_back(a.name());
  j["algorithms"] = std::move(names);
  j["suite"] = {{"domain", suite.domain},
                {"tasks", suite.tasks.size()},
                {"master_seed", suite.master_seed}};
  return j;
}

std::unique_ptr<bench::EpisodeSink> make_sink(const RunFlags& f,
                                              const domains::TaskSuite& suite,
                                              std::mutex& io_mutex) {
  if (!f.dump_episodes && !f.diagnostics) return nullptr;
  auto sink = std::make_unique<bench::EpisodeSink>();
  sink->want_diagnostics = f.diagnostics;
  const std::string out = f.out_dir;
  const bool dump = f.dump_episodes;
  const bool diag = f.diagnostics;
  std::map<std::string, const HubInstance*> hubs;
  for (const auto& t : suite.tasks) hubs[t.name] = &t.hub;
  sink->fn = [out, dump, diag, hubs, &io_mutex](const std::string& alg, const std::string& task,
                                                int run, const EpisodeLog& log,
                                                const std::vector<planner::PlanDiagnostics>* d) {
    std::ostringstream base;
    base << task << "_run" << run;
    const fs::path dir = fs::path(out) / "episodes" / alg;
    {
      std::lock_guard<std::mutex> lock(io_mutex);
      fs::create_directories(dir);
    }
    if (dump) bench::write_episode_csv((dir / (base.str() + ".csv")).string(), log, *hubs.at(task));
    if (diag && d != nullptr && !d->empty()) {
      std::ostringstream os;
      os << "t,tree_nodes,invigorations,root_values,root_visits\n";
      for (std::size_t t = 0; t < d->size(); ++t) {
        const auto& pd = (*d)[t];
        os << t << "," << pd.tree_nodes << "," << pd.invigorations << ",";
        for (std::size_t i = 0; i < pd.root_values.size(); ++i)
          os << (i ? ";" : "") << pd.root_values[i];
        os << ",";
        for (std::size_t i = 0; i < pd.root_visits.size(); ++i)
          os << (i ? ";" : "") << pd.root_visits[i];
        os << "\n";
      }
      config::write_text_file((dir / (base.str() + "_diag.csv")).string(), os.str());
    }
  };
  return sink;
}

int cmd_generate_tasks(const std::string& out_dir, const std::string& domain, int n_tasks,
                       std::uint64_t seed, const std::string& covid_config_path) {
  fs::create_directories(out_dir);
  domains::TaskSuite suite;
  if (domain == "recommendation") {
    RandomSource rng(seed);
    suite = domains::generate_recommendation_suite(n_tasks, domains::recommendation_grids(), rng);
    suite.master_seed = seed;
  } else if (domain == "covid") {
    auto cfg = domains::CovidConfig::defaults();
    if (!covid_config_path.empty())
      cfg = config::covid_config_from_json(
          nlohmann::json::parse(config::read_text_file(covid_config_path)));
    suite = domains::covid_suite(cfg, seed);
    config::write_text_file((fs::path(out_dir) / "covid_config.json").string(),
                            config::covid_config_to_json(cfg).dump(2) + "\n");
  } else {
    std::cerr << "unknown domain: " << domain << "\n";
    return 1;
  }
  const auto violations = domains::validate_suite(suite);
  if (!violations.empty()) {
    for (const auto& v : violations) std::cerr << "violation: " << v << "\n";
    return 1;
  }
  config::save_suite(suite, out_dir);
  std::cout << "wrote " << suite.tasks.size() << " task(s) to " << out_dir << "\n";
  return 0;
}

int cmd_info(const std::string& suite_dir) {
  const auto suite = config::load_suite(suite_dir);
  std::cout << "domain: " << suite.domain << "\n"
            << "tasks: " << suite.tasks.size() << "\n"
            << "utility levels: " << suite.grids.u_grid.levels.size()
            << ", simplex resolution: " << suite.grids.d_grid.resolution << "\n";
  const auto& hub = suite.tasks.front().hub;
  for (const auto mode : {pomdp::TeacherSelection::Specific, pomdp::TeacherSelection::General}) {
    const auto model = pomdp::make_model(hub, suite.grids.u_grid, suite.grids.d_grid, mode);
    std::cout << (mode == pomdp::TeacherSelection::Specific ? "specific" : "general")
              << ": |S| = " << model.num_states() << ", |A| = " << model.num_actions()
              << ", |Omega| = " << model.num_observations() << "\n";
  }
  const auto violations = domains::validate_suite(suite);
  if (violations.empty()) {
    std::cout << "validation: ok\n";
  } else {
    for (const auto& v : violations) std::cout << "violation: " << v << "\n";
  }
  return violations.empty() ? 0 : 1;
}

int cmd_run(const RunFlags& f) {
  const auto suite = config::load_suite(f.suite_dir);
  const auto profile = make_profile(f);
  const auto algs = make_algs(f);
  std::mutex io_mutex;
  if (f.dump_episodes || f.diagnostics) fs::create_directories(f.out_dir);
  const auto sink = make_sink(f, suite, io_mutex);
  const auto outcome =
      bench::run_suite(suite, algs, profile, f.seed, resolve_workers(f.workers), sink.get());
  const std::set<std::string> figures =
      suite.domain == "covid" ? std::set<std::string>{"7a", "7b"}
                              : std::set<std::string>{"3a", "3b", "3c", "4a", "4b", "5a", "5b"};
  bench::export_result(outcome, f.out_dir, figures, run_config_json(f, profile, algs, suite));
  std::cout << "results in " << f.out_dir << "\n";
  return 0;
}

int cmd_sweep(const RunFlags& f, const std::string& multipliers_text) {
  const auto suite = config::load_suite(f.suite_dir);
  const auto profile = make_profile(f);
  std::vector<double> multipliers;
  std::stringstream ss(multipliers_text);
  std::string tok;
  while (std::getline(ss, tok, ',')) multipliers.push_back(std::stod(tok));
  auto ats = bench::AlgorithmSpec::parse("ats");
  if (f.depth > 0) ats.planner.max_depth = f.depth;
  if (f.ucb >= 0.0) ats.planner.ucb_exploration = f.ucb;
  const auto sweep =
      bench::run_cost_sweep(suite, multipliers, ats, profile, f.seed, resolve_workers(f.workers));
  auto cfg = run_config_json(f, profile, {ats}, suite);
  cfg["multipliers"] = multipliers;
  bench::export_sweep(sweep, f.out_dir, cfg);
  std::cout << "sweep results in " << f.out_dir << "\n";
  return 0;
}

int cmd_compare_rollouts(const RunFlags& f) {
  const auto suite = config::load_suite(f.suite_dir);
  const auto profile = make_profile(f);
  std::vector<bench::AlgorithmSpec> algs;
  for (const auto policy : {planner::RolloutPolicy::BestArm, planner::RolloutPolicy::RandomArm,
                            planner::RolloutPolicy::RandomAction}) {
    auto a = bench::AlgorithmSpec::parse("ats");
    if (f.depth > 0) a.planner.max_depth = f.depth;
    if (f.ucb >= 0.0) a.planner.ucb_exploration = f.ucb;
    a.planner.rollout = policy;
    a.rollout_tag = planner::to_string(policy);
    algs.push_back(std::move(a));
  }
  const auto outcome = bench::run_suite(suite, algs, profile, f.seed, resolve_workers(f.workers));
  bench::export_result(outcome, f.out_dir, {"8"}, run_config_json(f, profile, algs, suite));
  std::cout << "rollout comparison in " << f.out_dir << "\n";
  return 0;
}

int cmd_estimate_beta(const std::string& input, double delta, bool has_delta,
                      const std::string& out_path) {
  const auto text = config::read_text_file(input);
  std::stringstream ss(text);
  std::string line;
  if (!std::getline(ss, line)) {
    std::cerr << "empty input\n";
    return 1;
  }
  std::map<std::string, beta::PreferenceSampleSet> tallies;
  std::vector<std::string> order;
  while (std::getline(ss, line)) {
    if (line.empty()) continue;
    std::stringstream row(line);
    std::string teacher, si, sj, spref;
    if (!std::getline(row, teacher, ',') || !std::getline(row, si, ',') ||
        !std::getline(row, sj, ',') || !std::getline(row, spref, ',')) {
      std::cerr << "bad row: " << line << "\n";
      return 1;
    }
    auto [it, fresh] = tallies.try_emplace(teacher);
    if (fresh) {
      order.push_back(teacher);
      it->second.item_i = std::stoi(si);
      it->second.item_j = std::stoi(sj);
    } else if (it->second.item_i != std::stoi(si) || it->second.item_j != std::stoi(sj)) {
      std::cerr << "mixed anchor pairs for teacher " << teacher << "\n";
      return 1;
    }
    it->second.total++;
    if (std::stoi(spref) != 0) it->second.times_i_preferred++;
  }
  std::vector<beta::PreferenceSampleSet> samples;
  for (const auto& name : order) samples.push_back(tallies.at(name));
  const auto estimates = beta::estimate_betas_from_logs(
      samples, has_delta ? std::optional<double>(delta) : std::nullopt);

  nlohmann::json report = nlohmann::json::array();
  std::cout << "teacher        raw      scaled   anchor\n";
  for (std::size_t m = 0; m < estimates.size(); ++m) {
    const auto& e = estimates[m];
    std::printf("%-12s %8.5f %8.5f   %s%s\n", order[m].c_str(), e.raw, e.scaled,
                e.anchor.c_str(), e.clamped ? " [clamped to 0]" : "");
    nlohmann::json j;
    j["teacher"] = order[m];
    j["raw"] = e.raw;
    j["scaled"] = e.scaled;
    j["clamped"] = e.clamped;
    j["anchor"] = e.anchor;
    report.push_back(std::move(j));
  }
  if (!out_path.empty()) config::write_text_file(out_path, report.dump(2) + "\n");
  return 0;
}

int cmd_plot(const std::string& dir) {
  int rendered = 0;
  for (const char* key : {"discounted_reward", "best_arm", "teacher_query", "u_l2", "arm_l2"}) {
    const fs::path csv = fs::path(dir) / (std::string(key) + ".csv");
    if (!fs::exists(csv)) continue;
    const auto text = config::read_text_file(csv.string());
    std::stringstream ss(text);
    std::string line;
    std::getline(ss, line);  // header
    std::map<std::string, std::vector<double>> by_alg;
    std::vector<std::string> order;
    while (std::getline(ss, line)) {
      if (line.empty()) continue;
      std::stringstream row(line);
      std::string alg, step, mean;
      std::getline(row, alg, ',');
      std::getline(row, step, ',');
      std::getline(row, mean, ',');
      auto [it, fresh] = by_alg.try_emplace(alg);
      if (fresh) order.push_back(alg);
      it->second.push_back(mean.empty() ? std::numeric_limits<double>::quiet_NaN()
                                        : std::stod(mean));
    }
    std::vector<svg::Series> series;
    for (const auto& alg : order) series.push_back({alg, by_alg.at(alg)});
    svg::write_line_chart((fs::path(dir) / ("plot_" + std::string(key) + ".svg")).string(), key,
                          "step", key, series);
    rendered++;
  }
  std::cout << "rendered " << rendered << " figure(s) in " << dir << "\n";
  return rendered > 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hidden-utility bandit toolkit"};
  app.require_subcommand(1);

  // generate-tasks
  std::string gen_out, gen_domain = "recommendation", covid_config_path;
  int gen_n = 20;
  std::uint64_t gen_seed = 1;
  auto* gen = app.add_subcommand("generate-tasks", "generate a task suite");
  gen->add_option("--out", gen_out, "output directory")->required();
  gen->add_option("--domain", gen_domain, "recommendation or covid");
  gen->add_option("--n-tasks", gen_n, "number of tasks");
  gen->add_option("--seed", gen_seed, "generator seed");
  gen->add_option("--covid-config", covid_config_path, "covid settings JSON");

  // info
  std::string info_suite;
  auto* info = app.add_subcommand("info", "print state-space sizes and validation");
  info->add_option("--suite", info_suite, "suite directory")->required();

  // run / sweep-costs / compare-rollouts share flags
  RunFlags rf;
  auto add_run_flags = [&rf](CLI::App* cmd, bool with_algs) {
    cmd->add_option("--suite", rf.suite_dir, "suite directory")->required();
    cmd->add_option("--out", rf.out_dir, "output directory")->required();
    if (with_algs) cmd->add_option("--alg", rf.algs, "algorithms (repeatable)");
    cmd->add_option("--profile", rf.profile, "desk, full or micro");
    cmd->add_option("--seed", rf.seed, "master seed");
    cmd->add_option("--runs", rf.runs, "runs per task");
    cmd->add_option("--horizon", rf.horizon, "timesteps per episode");
    cmd->add_option("--sims", rf.sims, "planner simulations per step");
    cmd->add_option("--depth", rf.depth, "planner tree depth");
    cmd->add_option("--ucb", rf.ucb, "planner exploration constant");
    cmd->add_option("--workers", rf.workers, "worker threads (default HUB_WORKERS)");
  };
  auto* run = app.add_subcommand("run", "run algorithms over a suite");
  add_run_flags(run, true);
  run->add_flag("--dump-episodes", rf.dump_episodes, "write per-episode CSV logs");
  run->add_flag("--diagnostics", rf.diagnostics, "write per-step planner diagnostics");

  std::string multipliers = "0,1,2,4";
  auto* sweep = app.add_subcommand("sweep-costs", "rerun the planner under scaled query costs");
  add_run_flags(sweep, false);
  sweep->add_option("--multipliers", multipliers, "comma-separated cost multipliers");

  auto* rollouts = app.add_subcommand("compare-rollouts", "compare leaf rollout policies");
  add_run_flags(rollouts, false);

  // estimate-beta
  std::string beta_input, beta_out;
  double beta_delta = 0.0;
  auto* est = app.add_subcommand("estimate-beta", "estimate teacher rationality from a CSV log");
  est->add_option("--input", beta_input, "CSV: teacher,item_i,item_j,preferred")->required();
  auto* delta_opt = est->add_option("--delta", beta_delta, "known utility difference U(i)-U(j) < 0");
  est->add_option("--out", beta_out, "JSON report path");

  // plot
  std::string plot_dir;
  auto* plot = app.add_subcommand("plot", "re-render figures from exported CSV tables");
  plot->add_option("--in", plot_dir, "directory with metric CSVs")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_generate_tasks(gen_out, gen_domain, gen_n, gen_seed, covid_config_path);
    if (info->parsed()) return cmd_info(info_suite);
    if (run->parsed()) return cmd_run(rf);
    if (sweep->parsed()) return cmd_sweep(rf, multipliers);
    if (rollouts->parsed()) return cmd_compare_rollouts(rf);
    if (est->parsed()) return cmd_estimate_beta(beta_input, beta_delta, delta_opt->count() > 0, beta_out);
    if (plot->parsed()) return cmd_plot(plot_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
