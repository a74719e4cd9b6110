#include "hub/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <thread>

#include "hub/config.hpp"
#include "hub/svg.hpp"

namespace hub::bench {

namespace fs = std::filesystem;
using pomdp::HubPomdpModel;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt(double v) {
  if (std::isnan(v)) return "";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

double quantile_sorted(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) return kNaN;
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = static_cast<std::size_t>(std::ceil(pos));
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

}  // namespace

std::string AlgorithmSpec::name() const {
  switch (kind) {
    case AlgKind::AtsSpecific:
      return rollout_tag.empty() ? "ats" : "ats:" + rollout_tag;
    case AlgKind::AtsGeneral:
      return "ats-general";
    case AlgKind::Naive:
      return "naive" + std::to_string(naive_T);
    case AlgKind::Random:
      return "random";
    case AlgKind::RandomArms:
      return "random-arms";
  }
  return "?";
}

AlgorithmSpec AlgorithmSpec::parse(const std::string& text) {
  AlgorithmSpec spec;
  spec.planner.simulations_per_step = -1;  // resolved from the run profile
  if (text == "ats") {
    spec.kind = AlgKind::AtsSpecific;
    return spec;
  }
  if (text == "ats-general") {
    spec.kind = AlgKind::AtsGeneral;
    return spec;
  }
  if (text == "random") {
    spec.kind = AlgKind::Random;
    return spec;
  }
  if (text == "random-arms") {
    spec.kind = AlgKind::RandomArms;
    return spec;
  }
  if (text.rfind("naive", 0) == 0) {
    spec.kind = AlgKind::Naive;
    spec.naive_T = std::stol(text.substr(5));
    if (spec.naive_T < 1) throw std::invalid_argument("naive exploration horizon must be positive");
    return spec;
  }
  throw std::invalid_argument("unknown algorithm: " + text);
}

std::vector<AlgorithmSpec> default_roster() {
  std::vector<AlgorithmSpec> out;
  for (const char* name :
       {"ats", "ats-general", "naive50", "naive100", "naive200", "random", "random-arms"})
    out.push_back(AlgorithmSpec::parse(name));
  return out;
}

RunProfile RunProfile::named(const std::string& name) {
  if (name == "desk") return desk();
  if (name == "full") return full();
  if (name == "micro") return micro();
  throw std::invalid_argument("unknown profile: " + name);
}

int true_best_arm(const HubInstance& hub) {
  int best = 0;
  double best_v = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < hub.num_arms(); ++k) {
    const double v = expected_arm_utility(hub.utility, hub.arms[static_cast<std::size_t>(k)]);
    if (v > best_v) {
      best_v = v;
      best = k;
    }
  }
  return best;
}

EpisodeMetrics compute_metrics(const EpisodeLog& log, const HubInstance& hub) {
  EpisodeMetrics m;
  const auto n = log.steps.size();
  m.discounted_reward.resize(n);
  m.best_arm.resize(n);
  m.teacher_query.resize(n);
  m.u_l2.resize(n);
  m.arm_l2.resize(n);
  m.arm_pull.assign(static_cast<std::size_t>(hub.num_arms()), std::vector<double>(n, 0.0));

  const int best = true_best_arm(hub);
  std::vector<double> true_arm_values;
  for (int k = 0; k < hub.num_arms(); ++k)
    true_arm_values.push_back(expected_arm_utility(hub.utility, hub.arms[static_cast<std::size_t>(k)]));

  double cum = 0.0;
  double disc = 1.0;
  for (std::size_t t = 0; t < n; ++t) {
    const auto& s = log.steps[t];
    cum += disc * s.reward;
    disc *= log.gamma;
    m.discounted_reward[t] = cum;
    m.best_arm[t] = (s.kind == ActionKind::Pull && s.index == best) ? 1.0 : 0.0;
    m.teacher_query[t] = s.kind == ActionKind::Query ? 1.0 : 0.0;
    if (s.kind == ActionKind::Pull)
      m.arm_pull[static_cast<std::size_t>(s.index)][t] = 1.0;
    if (s.u_hat.empty()) {
      m.u_l2[t] = kNaN;
    } else {
      double acc = 0.0;
      for (std::size_t i = 0; i < s.u_hat.size(); ++i) {
        const double d = s.u_hat[i] - hub.utility.values[i];
        acc += d * d;
      }
      m.u_l2[t] = std::sqrt(acc);
    }
    if (s.arm_est.empty()) {
      m.arm_l2[t] = kNaN;
    } else {
      double acc = 0.0;
      for (std::size_t k = 0; k < s.arm_est.size(); ++k) {
        const double d = s.arm_est[k] - true_arm_values[k];
        acc += d * d;
      }
      m.arm_l2[t] = std::sqrt(acc);
    }
  }
  return m;
}

std::vector<double> smooth(const std::vector<double>& series, int window) {
  std::vector<double> out(series.size(), kNaN);
  for (std::size_t t = 0; t < series.size(); ++t) {
    const std::size_t start = t + 1 >= static_cast<std::size_t>(window) ? t + 1 - static_cast<std::size_t>(window) : 0;
    double acc = 0.0;
    int count = 0;
    for (std::size_t s = start; s <= t; ++s) {
      if (std::isnan(series[s])) continue;
      acc += series[s];
      count++;
    }
    if (count > 0) out[t] = acc / count;
  }
  return out;
}

int first_passage(const std::vector<double>& series, double threshold) {
  for (std::size_t t = 0; t < series.size(); ++t)
    if (!std::isnan(series[t]) && series[t] >= threshold) return static_cast<int>(t);
  return static_cast<int>(series.size());
}

namespace {

MetricSeries aggregate_one(const std::vector<const std::vector<double>*>& episodes, int window) {
  MetricSeries out;
  if (episodes.empty()) return out;
  std::size_t n = 0;
  for (const auto* e : episodes) n = std::max(n, e->size());
  std::vector<std::vector<double>> smoothed;
  smoothed.reserve(episodes.size());
  for (const auto* e : episodes) smoothed.push_back(smooth(*e, window));

  out.mean.assign(n, kNaN);
  out.q25.assign(n, kNaN);
  out.q50.assign(n, kNaN);
  out.q75.assign(n, kNaN);
  std::vector<double> vals;
  for (std::size_t t = 0; t < n; ++t) {
    vals.clear();
    for (const auto& e : smoothed)
      if (t < e.size() && !std::isnan(e[t])) vals.push_back(e[t]);
    if (vals.empty()) continue;
    double acc = 0.0;
    for (double v : vals) acc += v;
    out.mean[t] = acc / static_cast<double>(vals.size());
    std::sort(vals.begin(), vals.end());
    out.q25[t] = quantile_sorted(vals, 0.25);
    out.q50[t] = quantile_sorted(vals, 0.50);
    out.q75[t] = quantile_sorted(vals, 0.75);
  }
  return out;
}

}  // namespace

AggregatedMetrics aggregate(const std::vector<EpisodeMetrics>& episodes, int window) {
  if (episodes.empty()) throw std::invalid_argument("aggregate: no episodes");
  AggregatedMetrics out;
  auto collect = [&](const std::string& key, auto member) {
    std::vector<const std::vector<double>*> ptrs;
    ptrs.reserve(episodes.size());
    for (const auto& e : episodes) ptrs.push_back(&(e.*member));
    out[key] = aggregate_one(ptrs, window);
  };
  collect("discounted_reward", &EpisodeMetrics::discounted_reward);
  collect("best_arm", &EpisodeMetrics::best_arm);
  collect("teacher_query", &EpisodeMetrics::teacher_query);
  collect("u_l2", &EpisodeMetrics::u_l2);
  collect("arm_l2", &EpisodeMetrics::arm_l2);
  const std::size_t n_arms = episodes[0].arm_pull.size();
  for (std::size_t k = 0; k < n_arms; ++k) {
    std::vector<const std::vector<double>*> ptrs;
    ptrs.reserve(episodes.size());
    for (const auto& e : episodes) ptrs.push_back(&e.arm_pull[k]);
    out["arm" + std::to_string(k)] = aggregate_one(ptrs, window);
  }
  return out;
}

namespace {

EpisodeLog random_episode(const HubInstance& hub, int horizon, RandomSource& rng, bool arms_only) {
  EpisodeLog log;
  log.gamma = hub.gamma;
  log.steps.reserve(static_cast<std::size_t>(horizon));
  const int n_actions = arms_only ? hub.num_arms() : hub.num_arms() + hub.num_teachers();
  double cum = 0.0, disc = 1.0;
  for (int t = 0; t < horizon; ++t) {
    StepRecord rec;
    rec.t = t;
    const int a = rng.uniform_int(n_actions);
    if (a < hub.num_arms()) {
      const PullResult r = pull_arm(hub, a, rng);
      const auto& obs = std::get<ItemSample>(r.obs);
      rec.kind = ActionKind::Pull;
      rec.index = a;
      rec.obs_item = obs.item;
      rec.hidden_utility = r.hidden_utility;
      rec.reward = r.hidden_utility;
    } else {
      const int teacher = a - hub.num_arms();
      const QueryResult r = query_teacher(hub, teacher, rng);
      const auto& obs = std::get<PreferenceSample>(r.obs);
      rec.kind = ActionKind::Query;
      rec.index = teacher;
      rec.obs_first = obs.first;
      rec.obs_second = obs.second;
      rec.obs_preferred_first = obs.preferred_first ? 1 : 0;
      rec.reward = r.reward;
    }
    cum += disc * rec.reward;
    disc *= hub.gamma;
    rec.cum_discounted = cum;
    log.steps.push_back(std::move(rec));
  }
  return log;
}

}  // namespace

EpisodeLog run_episode(const AlgorithmSpec& alg, const HubInstance& hub,
                       const HubPomdpModel* model, int horizon, std::uint64_t seed,
                       std::vector<planner::PlanDiagnostics>* diagnostics) {
  RandomSource rng(seed);
  switch (alg.kind) {
    case AlgKind::AtsSpecific:
    case AlgKind::AtsGeneral: {
      if (model == nullptr) throw std::invalid_argument("run_episode: ATS needs a planning model");
      return planner::run_ats_episode(hub, *model, alg.planner, horizon, rng, diagnostics);
    }
    case AlgKind::Naive:
      return naive::run_naive_policy(hub, alg.naive_T, alg.inference_teacher, horizon, rng);
    case AlgKind::Random:
      return random_episode(hub, horizon, rng, false);
    case AlgKind::RandomArms:
      return random_episode(hub, horizon, rng, true);
  }
  throw std::logic_error("run_episode: unreachable");
}

void write_episode_csv(const std::string& path, const EpisodeLog& log, const HubInstance& hub) {
  std::ostringstream os;
  os << "t,action_kind,action_index,general_query,obs_item,obs_first,obs_second,"
     << "obs_preferred_first,hidden_utility,reward,cum_discounted_reward,flagged";
  for (int i = 0; i < hub.num_items(); ++i) os << ",u_hat_" << i;
  for (int k = 0; k < hub.num_arms(); ++k) os << ",arm_est_" << k;
  os << "\n";
  for (const auto& s : log.steps) {
    os << s.t << "," << (s.kind == ActionKind::Pull ? "pull" : "query") << "," << s.index << ","
       << (s.general_query ? 1 : 0) << ",";
    if (s.obs_item >= 0) os << s.obs_item;
    os << ",";
    if (s.obs_first >= 0) os << s.obs_first;
    os << ",";
    if (s.obs_second >= 0) os << s.obs_second;
    os << ",";
    if (s.obs_preferred_first >= 0) os << s.obs_preferred_first;
    os << "," << fmt(s.hidden_utility) << "," << fmt(s.reward) << "," << fmt(s.cum_discounted)
       << "," << (s.flagged ? 1 : 0);
    for (int i = 0; i < hub.num_items(); ++i)
      os << "," << (s.u_hat.empty() ? "" : fmt(s.u_hat[static_cast<std::size_t>(i)]));
    for (int k = 0; k < hub.num_arms(); ++k)
      os << "," << (s.arm_est.empty() ? "" : fmt(s.arm_est[static_cast<std::size_t>(k)]));
    os << "\n";
  }
  config::write_text_file(path, os.str());
}

int worker_count_from_env() {
  if (const char* env = std::getenv("HUB_WORKERS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? static_cast<int>(hc) : 1;
}

void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn) {
  if (workers <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  const int n_threads = std::min<std::size_t>(static_cast<std::size_t>(workers), count);
  pool.reserve(static_cast<std::size_t>(n_threads));
  for (int w = 0; w < n_threads; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        fn(i);
      }
    });
  }
  for (auto& t : pool) t.join();
}

const SuiteOutcome::AlgOutcome* SuiteOutcome::find(const std::string& name) const {
  for (const auto& a : algs)
    if (a.name == name) return &a;
  return nullptr;
}

SuiteOutcome run_suite(const domains::TaskSuite& suite, const std::vector<AlgorithmSpec>& algs,
                       const RunProfile& profile, std::uint64_t master_seed, int workers,
                       const EpisodeSink* sink) {
  if (suite.tasks.empty()) throw std::invalid_argument("run_suite: empty suite");
  if (algs.empty()) throw std::invalid_argument("run_suite: no algorithms");
  if (profile.runs < 1 || profile.horizon < 1) throw std::invalid_argument("run_suite: bad profile");

  std::vector<AlgorithmSpec> specs = algs;
  bool want_specific = false, want_general = false;
  for (auto& s : specs) {
    if (s.kind == AlgKind::AtsSpecific || s.kind == AlgKind::AtsGeneral) {
      if (s.planner.simulations_per_step <= 0)
        s.planner.simulations_per_step = profile.planner_simulations;
      want_specific |= s.kind == AlgKind::AtsSpecific;
      want_general |= s.kind == AlgKind::AtsGeneral;
    }
  }

  const std::size_t n_tasks = suite.tasks.size();
  std::vector<std::unique_ptr<HubPomdpModel>> spec_models(n_tasks), gen_models(n_tasks);
  for (std::size_t t = 0; t < n_tasks; ++t) {
    const auto& hub = suite.tasks[t].hub;
    if (want_specific)
      spec_models[t] = std::make_unique<HubPomdpModel>(pomdp::make_model(
          hub, suite.grids.u_grid, suite.grids.d_grid, pomdp::TeacherSelection::Specific));
    if (want_general)
      gen_models[t] = std::make_unique<HubPomdpModel>(pomdp::make_model(
          hub, suite.grids.u_grid, suite.grids.d_grid, pomdp::TeacherSelection::General));
  }

  SuiteOutcome outcome;
  outcome.domain = suite.domain;
  outcome.horizon = profile.horizon;
  outcome.runs = profile.runs;
  outcome.smoothing_window = profile.smoothing_window;
  outcome.master_seed = master_seed;

  const std::size_t runs = static_cast<std::size_t>(profile.runs);
  const std::size_t per_alg = n_tasks * runs;
  std::vector<std::vector<EpisodeMetrics>> metrics(specs.size(),
                                                   std::vector<EpisodeMetrics>(per_alg));
  std::vector<std::string> errors(specs.size() * per_alg);

  parallel_for(specs.size() * per_alg, workers, [&](std::size_t job) {
    const std::size_t a = job / per_alg;
    const std::size_t rest = job % per_alg;
    const std::size_t task = rest / runs;
    const std::size_t run = rest % runs;
    const auto& alg = specs[a];
    const auto& hub = suite.tasks[task].hub;
    const HubPomdpModel* model = nullptr;
    if (alg.kind == AlgKind::AtsSpecific) model = spec_models[task].get();
    if (alg.kind == AlgKind::AtsGeneral) model = gen_models[task].get();
    const std::uint64_t seed = derive_seed(master_seed, fnv1a(alg.name()), task, run);
    try {
      std::vector<planner::PlanDiagnostics> diag;
      const bool want_diag = sink != nullptr && sink->want_diagnostics;
      const auto log =
          run_episode(alg, hub, model, profile.horizon, seed, want_diag ? &diag : nullptr);
      metrics[a][rest] = compute_metrics(log, hub);
      if (sink != nullptr && sink->fn)
        sink->fn(alg.name(), suite.tasks[task].name, static_cast<int>(run), log,
                 want_diag ? &diag : nullptr);
    } catch (const std::exception& e) {
      std::ostringstream os;
      os << alg.name() << "/" << suite.tasks[task].name << "/run" << run << ": " << e.what();
      errors[job] = os.str();
    }
  });

  std::string all_errors;
  for (const auto& e : errors)
    if (!e.empty()) all_errors += e + "\n";
  if (!all_errors.empty()) throw std::runtime_error("run_suite: episodes failed:\n" + all_errors);

  for (std::size_t a = 0; a < specs.size(); ++a) {
    SuiteOutcome::AlgOutcome out;
    out.name = specs[a].name();
    out.agg = aggregate(metrics[a], profile.smoothing_window);
    out.episodes = std::move(metrics[a]);
    outcome.algs.push_back(std::move(out));
  }
  return outcome;
}

std::vector<std::pair<double, SuiteOutcome>> run_cost_sweep(const domains::TaskSuite& suite,
                                                            const std::vector<double>& multipliers,
                                                            const AlgorithmSpec& ats,
                                                            const RunProfile& profile,
                                                            std::uint64_t master_seed, int workers) {
  const std::vector<double> base_costs = {-1.0, -2.0, -3.0};
  std::vector<std::pair<double, SuiteOutcome>> out;
  for (const double mult : multipliers) {
    if (mult < 0.0) throw std::invalid_argument("run_cost_sweep: negative multiplier");
    domains::TaskSuite scaled = suite;
    for (auto& task : scaled.tasks)
      for (std::size_t m = 0; m < task.hub.teachers.size(); ++m)
        task.hub.teachers[m].cost = base_costs[m % base_costs.size()] * mult;
    out.emplace_back(mult, run_suite(scaled, {ats}, profile, master_seed, workers));
  }
  return out;
}

namespace {

void write_metric_csv(const std::string& path, const SuiteOutcome& outcome,
                      const std::string& key) {
  std::ostringstream os;
  os << "algorithm,step,mean,q25,q75\n";
  for (const auto& alg : outcome.algs) {
    const auto it = alg.agg.find(key);
    if (it == alg.agg.end()) continue;
    const auto& s = it->second;
    for (std::size_t t = 0; t < s.mean.size(); ++t)
      os << alg.name << "," << t << "," << fmt(s.mean[t]) << "," << fmt(s.q25[t]) << ","
         << fmt(s.q75[t]) << "\n";
  }
  config::write_text_file(path, os.str());
}

void write_arm_frequency_csv(const std::string& path, const SuiteOutcome& outcome) {
  std::ostringstream os;
  os << "algorithm,arm,step,mean\n";
  for (const auto& alg : outcome.algs) {
    for (int k = 0;; ++k) {
      const auto it = alg.agg.find("arm" + std::to_string(k));
      if (it == alg.agg.end()) break;
      const auto& s = it->second;
      for (std::size_t t = 0; t < s.mean.size(); ++t)
        os << alg.name << "," << k << "," << t << "," << fmt(s.mean[t]) << "\n";
    }
  }
  config::write_text_file(path, os.str());
}

std::vector<svg::Series> line_series(const SuiteOutcome& outcome, const std::string& key,
                                     const std::vector<std::string>& only = {}) {
  std::vector<svg::Series> out;
  for (const auto& alg : outcome.algs) {
    if (!only.empty() && std::find(only.begin(), only.end(), alg.name) == only.end()) continue;
    const auto it = alg.agg.find(key);
    if (it == alg.agg.end()) continue;
    out.push_back({alg.name, it->second.mean});
  }
  return out;
}

svg::Box final_box(const SuiteOutcome::AlgOutcome& alg,
                   std::vector<double> (EpisodeMetrics::*member)) {
  std::vector<double> finals;
  for (const auto& e : alg.episodes) {
    const auto& series = e.*member;
    if (!series.empty() && !std::isnan(series.back())) finals.push_back(series.back());
  }
  svg::Box box;
  box.label = alg.name;
  if (finals.empty()) {
    box.lo = box.q25 = box.median = box.q75 = box.hi = kNaN;
    return box;
  }
  std::sort(finals.begin(), finals.end());
  box.q25 = quantile_sorted(finals, 0.25);
  box.median = quantile_sorted(finals, 0.50);
  box.q75 = quantile_sorted(finals, 0.75);
  const double iqr = box.q75 - box.q25;
  box.lo = std::max(finals.front(), box.q25 - 1.5 * iqr);
  box.hi = std::min(finals.back(), box.q75 + 1.5 * iqr);
  return box;
}

void action_frequency_figure(const SuiteOutcome& outcome, const std::string& alg_name,
                             const std::string& path, const std::string& title) {
  const auto* alg = outcome.find(alg_name);
  if (alg == nullptr) return;
  std::vector<svg::Series> series;
  for (int k = 0;; ++k) {
    const auto it = alg->agg.find("arm" + std::to_string(k));
    if (it == alg->agg.end()) break;
    series.push_back({"arm " + std::to_string(k), it->second.mean});
  }
  const auto q = alg->agg.find("teacher_query");
  if (q != alg->agg.end()) series.push_back({"teacher query", q->second.mean});
  svg::write_line_chart(path, title, "step", "action frequency", series);
}

}  // namespace

void export_result(const SuiteOutcome& outcome, const std::string& out_dir,
                   const std::set<std::string>& figures, const nlohmann::json& run_config) {
  if (outcome.algs.empty()) throw std::invalid_argument("export_result: empty outcome");
  for (const auto& alg : outcome.algs)
    if (alg.episodes.empty()) throw std::invalid_argument("export_result: no episodes");
  fs::create_directories(out_dir);
  const fs::path dir(out_dir);

  for (const char* key : {"discounted_reward", "best_arm", "teacher_query", "u_l2", "arm_l2"})
    write_metric_csv((dir / (std::string(key) + ".csv")).string(), outcome, key);
  write_arm_frequency_csv((dir / "arm_frequency.csv").string(), outcome);

  nlohmann::json manifest = run_config;
  manifest["config_digest"] = config::config_digest(run_config);
  config::write_text_file((dir / "manifest.json").string(), manifest.dump(2) + "\n");

  auto want = [&figures](const std::string& f) { return figures.count(f) > 0; };
  if (want("3a"))
    svg::write_line_chart((dir / "fig3a.svg").string(), "Discounted cumulative reward", "step",
                          "discounted cumulative reward", line_series(outcome, "discounted_reward"));
  if (want("3b"))
    svg::write_line_chart((dir / "fig3b.svg").string(), "Frequency of pulling the best arm", "step",
                          "frequency", line_series(outcome, "best_arm"));
  if (want("3c"))
    svg::write_line_chart((dir / "fig3c.svg").string(), "Frequency of querying a teacher", "step",
                          "frequency", line_series(outcome, "teacher_query"));
  if (want("4a") || want("4b")) {
    std::vector<svg::Box> u_boxes, arm_boxes;
    for (const auto& alg : outcome.algs) {
      if (alg.name == "random" || alg.name == "random-arms") continue;  // no estimates
      u_boxes.push_back(final_box(alg, &EpisodeMetrics::u_l2));
      arm_boxes.push_back(final_box(alg, &EpisodeMetrics::arm_l2));
    }
    if (want("4a"))
      svg::write_box_chart((dir / "fig4a.svg").string(), "Final L2 loss of the utility estimate",
                           "L2 loss", u_boxes);
    if (want("4b"))
      svg::write_box_chart((dir / "fig4b.svg").string(), "Final L2 loss of the arm value estimate",
                           "L2 loss", arm_boxes);
  }
  if (want("5a"))
    svg::write_line_chart((dir / "fig5a.svg").string(), "Specific vs general teacher selection",
                          "step", "discounted cumulative reward",
                          line_series(outcome, "discounted_reward", {"ats", "ats-general"}));
  if (want("5b"))
    action_frequency_figure(outcome, "ats-general", (dir / "fig5b.svg").string(),
                            "Action frequencies, general teacher selection");
  if (want("7a"))
    svg::write_line_chart((dir / "fig7a.svg").string(), "Discounted cumulative reward", "step",
                          "discounted cumulative reward", line_series(outcome, "discounted_reward"));
  if (want("7b"))
    action_frequency_figure(outcome, "ats", (dir / "fig7b.svg").string(), "Action frequencies");
  if (want("8"))
    svg::write_line_chart((dir / "fig8.svg").string(), "Rollout policy comparison", "step",
                          "discounted cumulative reward", line_series(outcome, "discounted_reward"));
}

void export_sweep(const std::vector<std::pair<double, SuiteOutcome>>& sweep,
                  const std::string& out_dir, const nlohmann::json& run_config) {
  if (sweep.empty()) throw std::invalid_argument("export_sweep: empty sweep");
  fs::create_directories(out_dir);
  const fs::path dir(out_dir);

  std::ostringstream summary;
  summary << "multiplier,median_total_queries,first_passage_80,final_mean_reward\n";
  std::vector<svg::Series> best_series, query_series, reward_series;
  for (const auto& [mult, outcome] : sweep) {
    std::ostringstream label;
    label << "x" << mult;
    const auto& alg = outcome.algs.front();

    // median across tasks of the per-task mean total queries
    const std::size_t runs = static_cast<std::size_t>(outcome.runs);
    std::vector<double> per_task;
    for (std::size_t start = 0; start + runs <= alg.episodes.size(); start += runs) {
      double acc = 0.0;
      for (std::size_t r = 0; r < runs; ++r)
        for (double q : alg.episodes[start + r].teacher_query) acc += q;
      per_task.push_back(acc / static_cast<double>(runs));
    }
    std::sort(per_task.begin(), per_task.end());
    const double med_queries = quantile_sorted(per_task, 0.5);

    const auto& best = alg.agg.at("best_arm");
    const int passage = first_passage(best.mean, 0.8);
    const double final_reward = alg.agg.at("discounted_reward").mean.back();
    summary << fmt(mult) << "," << fmt(med_queries) << "," << passage << "," << fmt(final_reward)
            << "\n";

    best_series.push_back({label.str(), best.mean});
    query_series.push_back({label.str(), alg.agg.at("teacher_query").mean});
    reward_series.push_back({label.str(), alg.agg.at("discounted_reward").mean});

    std::ostringstream sub;
    sub << "mult_" << mult;
    export_result(outcome, (dir / sub.str()).string(), {}, run_config);
  }
  config::write_text_file((dir / "summary.csv").string(), summary.str());
  svg::write_line_chart((dir / "fig9a.svg").string(), "Best-arm frequency by query cost", "step",
                        "frequency", best_series);
  svg::write_line_chart((dir / "fig9b.svg").string(), "Teacher-query frequency by query cost",
                        "step", "frequency", query_series);
  svg::write_line_chart((dir / "fig9c.svg").string(), "Discounted reward by query cost", "step",
                        "discounted cumulative reward", reward_series);

  nlohmann::json manifest = run_config;
  manifest["config_digest"] = config::config_digest(run_config);
  config::write_text_file((dir / "manifest.json").string(), manifest.dump(2) + "\n");
}

}  // namespace hub::bench
