// Acceptance suite: one pass/fail line per criterion. The heavy criteria run
// the desk-scale experiment profile; expect tens of minutes in total.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "hub/bench.hpp"
#include "hub/beta.hpp"
#include "hub/config.hpp"
#include "hub/naive.hpp"
#include "oracle_expectimax.hpp"

namespace fs = std::filesystem;
using namespace hub;

namespace {

int g_failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& details) {
  std::printf("[%s] %2d. %s: %s\n", pass ? "PASS" : "FAIL", id, name.c_str(), details.c_str());
  std::fflush(stdout);
  if (!pass) g_failures++;
}

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

struct Scale {
  // desk-scale defaults; --profile smoke shrinks everything for development
  int tasks = 20;
  int runs = 5;
  int horizon = 1000;
  int sims = 300;
  int covid_runs = 25;
  int t1_seeds = 20;
  long t1_max_T = 100000;
  int beta_sims = 100;
  long beta_steps = 1000;
  int oracle_beliefs = 50;
  int oracle_sims = 10000;
};

double mean_final_reward(const bench::SuiteOutcome::AlgOutcome& alg) {
  double acc = 0.0;
  for (const auto& e : alg.episodes) acc += e.discounted_reward.back();
  return acc / static_cast<double>(alg.episodes.size());
}

double final_window_mean(const bench::SuiteOutcome::AlgOutcome& alg,
                         std::vector<double> bench::EpisodeMetrics::*member, int window) {
  double acc = 0.0;
  long n = 0;
  for (const auto& e : alg.episodes) {
    const auto& s = e.*member;
    const std::size_t start = s.size() > static_cast<std::size_t>(window)
                                  ? s.size() - static_cast<std::size_t>(window)
                                  : 0;
    for (std::size_t t = start; t < s.size(); ++t) {
      acc += s[t];
      n++;
    }
  }
  return acc / static_cast<double>(n);
}

double median_final(const bench::SuiteOutcome::AlgOutcome& alg,
                    std::vector<double> bench::EpisodeMetrics::*member) {
  std::vector<double> finals;
  for (const auto& e : alg.episodes) {
    const auto& s = e.*member;
    if (!s.empty() && !std::isnan(s.back())) finals.push_back(s.back());
  }
  if (finals.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(finals.begin(), finals.end());
  return finals[finals.size() / 2];
}

std::string fmt1(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

// ---------------------------------------------------------------------------

void criterion_1_equation_round_trips() {
  Timer timer;
  double max_delta_err = 0.0, max_beta_err = 0.0;
  for (double beta : {0.01, 1.0, 50.0}) {
    for (double delta = 0.1; delta <= 10.0 + 1e-12; delta += 0.1) {
      // present the pair in the low-probability orientation (lesser first)
      const double p = boltzmann_preference(beta, 0.0, delta);
      const double recovered = naive::delta_from_preference(p, beta);
      max_delta_err = std::max(max_delta_err, std::abs(recovered - (-delta)));

      const double beta_hat = beta::beta_from_preference(p, 1.0 / delta);
      max_beta_err = std::max(max_beta_err, std::abs(beta_hat - beta));
    }
  }
  std::ostringstream os;
  os << "max |delta err| = " << max_delta_err << ", max |beta err| = " << max_beta_err << " ("
     << fmt1(timer.seconds()) << "s)";
  report(1, "equation round trips (preference -> delta, -> beta)",
         max_delta_err <= 1e-6 && max_beta_err <= 1e-9, os.str());
}

void criterion_2_theorem1_convergence(const Scale& scale) {
  Timer timer;
  HubInstance h;
  h.items = {"x", "y", "z"};
  h.utility.values = {0.0, 1.0, 3.0};
  h.utility.u_min = 0.0;
  h.utility.u_max = 10.0;
  h.arms.resize(3);
  h.arms[0].probs = {0.5, 0.3, 0.2};
  h.arms[1].probs = {0.2, 0.5, 0.3};
  h.arms[2].probs = {0.3, 0.2, 0.5};
  h.teachers = {{1.0, 0.0}};
  h.query_profile = QueryProfile::uniform(3);
  h.gamma = 0.99;

  std::vector<long> horizons;
  for (long T = 100; T <= scale.t1_max_T; T *= 10) horizons.push_back(T);

  std::vector<double> d_medians, u_medians;
  for (long T : horizons) {
    std::vector<double> d_errs, u_errs;
    for (int seed = 0; seed < scale.t1_seeds; ++seed) {
      RandomSource rng(derive_seed(4242, static_cast<std::uint64_t>(T), static_cast<std::uint64_t>(seed)));
      const auto counts = naive::explore(h, T, rng);
      const auto est = naive::build_estimate(counts, h, 0);
      double d_err = 0.0, u_err = 0.0;
      for (int k = 0; k < 3; ++k)
        for (int i = 0; i < 3; ++i)
          d_err = std::max(d_err, std::abs(est.d_hat[static_cast<std::size_t>(k)]
                                               .probs[static_cast<std::size_t>(i)] -
                                           h.arms[static_cast<std::size_t>(k)]
                                               .probs[static_cast<std::size_t>(i)]));
      for (int i = 0; i < 3; ++i)
        u_err = std::max(u_err, std::abs(est.u_hat.values[static_cast<std::size_t>(i)] -
                                         h.utility.values[static_cast<std::size_t>(i)]));
      d_errs.push_back(d_err);
      u_errs.push_back(u_err);
    }
    std::sort(d_errs.begin(), d_errs.end());
    std::sort(u_errs.begin(), u_errs.end());
    d_medians.push_back(d_errs[d_errs.size() / 2]);
    u_medians.push_back(u_errs[u_errs.size() / 2]);
  }

  bool strict = true;
  for (std::size_t i = 1; i < horizons.size(); ++i)
    strict = strict && d_medians[i] < d_medians[i - 1] && u_medians[i] < u_medians[i - 1];
  const bool tail = d_medians.back() < 0.05 && u_medians.back() < 0.05;

  std::ostringstream os;
  os << "median |D err|: ";
  for (double v : d_medians) os << fmt1(v) << " ";
  os << "| median |U err|: ";
  for (double v : u_medians) os << fmt1(v) << " ";
  os << "(" << fmt1(timer.seconds()) << "s)";
  report(2, "estimate convergence on a fixed 3x3 hub", strict && tail, os.str());
}

void criterion_3_beta_recovery(const Scale& scale) {
  Timer timer;
  RandomSource rng(777);
  const double mse = beta::run_beta_recovery_study({0.01, 1.0}, scale.beta_steps, scale.beta_sims, rng);
  std::ostringstream os;
  os << "MSE = " << mse << " (tolerance 0.1, " << fmt1(timer.seconds()) << "s)";
  report(3, "rationality recovery study", mse <= 0.1, os.str());
}

struct RosterResult {
  bench::SuiteOutcome outcome;
};

RosterResult run_roster(const Scale& scale, int workers) {
  RandomSource rng(7001);
  auto suite = domains::generate_recommendation_suite(
      scale.tasks, domains::recommendation_grids(), rng);
  suite.master_seed = 7001;
  bench::RunProfile profile;
  profile.runs = scale.runs;
  profile.horizon = scale.horizon;
  profile.planner_simulations = scale.sims;
  return {bench::run_suite(suite, bench::default_roster(), profile, 90210, workers)};
}

void criteria_4_5_6(const RosterResult& roster) {
  const auto& out = roster.outcome;
  const auto* ats = out.find("ats");
  const auto* gen = out.find("ats-general");
  const auto* rnd = out.find("random");
  const auto* ra = out.find("random-arms");
  const auto* n50 = out.find("naive50");
  const auto* n100 = out.find("naive100");
  const auto* n200 = out.find("naive200");

  // 4: reward ordering
  {
    const double ats_r = mean_final_reward(*ats);
    std::ostringstream os;
    os << "ats=" << fmt1(ats_r) << " general=" << fmt1(mean_final_reward(*gen))
       << " naive50=" << fmt1(mean_final_reward(*n50)) << " naive100="
       << fmt1(mean_final_reward(*n100)) << " naive200=" << fmt1(mean_final_reward(*n200))
       << " random=" << fmt1(mean_final_reward(*rnd)) << " random-arms="
       << fmt1(mean_final_reward(*ra));
    const bool pass = ats_r > mean_final_reward(*gen) && ats_r > mean_final_reward(*n50) &&
                      ats_r > mean_final_reward(*n100) && ats_r > mean_final_reward(*n200) &&
                      ats_r > mean_final_reward(*rnd) && ats_r > mean_final_reward(*ra);
    report(4, "recommendation reward ordering", pass, os.str());
  }

  // 5: best-arm identification bands
  {
    const double ra_f = final_window_mean(*ra, &bench::EpisodeMetrics::best_arm, 100);
    const double r_f = final_window_mean(*rnd, &bench::EpisodeMetrics::best_arm, 100);
    std::ostringstream os;
    bool pass = true;
    for (const auto* alg : {ats, n100, n200}) {
      const double f = final_window_mean(*alg, &bench::EpisodeMetrics::best_arm, 100);
      const bool ge_ra = f >= 2.0 * ra_f;
      const bool in_band = f >= 2.5 * r_f && f <= 3.5 * r_f;
      pass = pass && ge_ra && in_band;
      os << alg->name << "=" << fmt1(f) << (ge_ra ? "" : " [<2x random-arms]")
         << (in_band ? "" : " [outside 2.5-3.5x random]") << " ";
    }
    os << "| random-arms=" << fmt1(ra_f) << " random=" << fmt1(r_f);
    report(5, "best-arm identification bands", pass, os.str());
  }

  // 6: estimate accuracy ordering
  {
    const double ats_u = median_final(*ats, &bench::EpisodeMetrics::u_l2);
    const double ats_a = median_final(*ats, &bench::EpisodeMetrics::arm_l2);
    std::ostringstream os;
    os << "uL2: ats=" << fmt1(ats_u) << " general=" << fmt1(median_final(*gen, &bench::EpisodeMetrics::u_l2));
    bool pass = ats_u < median_final(*gen, &bench::EpisodeMetrics::u_l2) &&
                ats_a < median_final(*gen, &bench::EpisodeMetrics::arm_l2);
    for (const auto* alg : {n50, n100, n200}) {
      os << " " << alg->name << "=" << fmt1(median_final(*alg, &bench::EpisodeMetrics::u_l2));
      pass = pass && ats_u < median_final(*alg, &bench::EpisodeMetrics::u_l2) &&
             ats_a < median_final(*alg, &bench::EpisodeMetrics::arm_l2);
    }
    os << " | armL2: ats=" << fmt1(ats_a) << " general="
       << fmt1(median_final(*gen, &bench::EpisodeMetrics::arm_l2));
    report(6, "reward-model accuracy ordering", pass, os.str());
  }
}

void criterion_7_rollouts(const Scale& scale, int workers) {
  Timer timer;
  RandomSource rng(7001);
  auto suite = domains::generate_recommendation_suite(
      scale.tasks, domains::recommendation_grids(), rng);
  bench::RunProfile profile;
  profile.runs = scale.runs;
  profile.horizon = scale.horizon;
  profile.planner_simulations = scale.sims;
  std::vector<bench::AlgorithmSpec> algs;
  for (const auto policy : {planner::RolloutPolicy::BestArm, planner::RolloutPolicy::RandomArm,
                            planner::RolloutPolicy::RandomAction}) {
    auto a = bench::AlgorithmSpec::parse("ats");
    a.planner.rollout = policy;
    a.rollout_tag = planner::to_string(policy);
    algs.push_back(std::move(a));
  }
  const auto out = bench::run_suite(suite, algs, profile, 90210, workers);
  const double best = mean_final_reward(*out.find("ats:best-arm"));
  const double rarm = mean_final_reward(*out.find("ats:random-arm"));
  const double ract = mean_final_reward(*out.find("ats:random-action"));
  std::ostringstream os;
  os << "best-arm=" << fmt1(best) << " random-arm=" << fmt1(rarm) << " random-action="
     << fmt1(ract) << " (" << fmt1(timer.seconds()) << "s)";
  report(7, "rollout policy ordering", best > rarm && rarm > ract, os.str());
}

void criterion_8_cost_sweep(const Scale& scale, int workers) {
  Timer timer;
  RandomSource rng(7001);
  auto suite = domains::generate_recommendation_suite(
      scale.tasks, domains::recommendation_grids(), rng);
  bench::RunProfile profile;
  profile.runs = scale.runs;
  profile.horizon = scale.horizon;
  profile.planner_simulations = scale.sims;
  const auto ats = bench::AlgorithmSpec::parse("ats");
  const auto sweep = bench::run_cost_sweep(suite, {0.0, 1.0, 2.0, 4.0}, ats, profile, 90210, workers);

  std::vector<double> med_queries;
  std::vector<int> passages;
  for (const auto& [mult, out] : sweep) {
    const auto& alg = out.algs.front();
    const std::size_t runs = static_cast<std::size_t>(out.runs);
    std::vector<double> per_task;
    for (std::size_t start = 0; start + runs <= alg.episodes.size(); start += runs) {
      double acc = 0.0;
      for (std::size_t r = 0; r < runs; ++r)
        for (double q : alg.episodes[start + r].teacher_query) acc += q;
      per_task.push_back(acc / static_cast<double>(runs));
    }
    std::sort(per_task.begin(), per_task.end());
    med_queries.push_back(per_task[per_task.size() / 2]);
    passages.push_back(bench::first_passage(alg.agg.at("best_arm").mean, 0.8));
  }
  bool queries_mono = true, passage_mono = true;
  for (std::size_t i = 1; i < med_queries.size(); ++i) {
    queries_mono = queries_mono && med_queries[i] <= med_queries[i - 1];
    passage_mono = passage_mono && passages[i] >= passages[i - 1];
  }
  std::ostringstream os;
  os << "median queries: ";
  for (double q : med_queries) os << q << " ";
  os << "| first-passage 80%: ";
  for (int p : passages) os << p << " ";
  os << "(" << fmt1(timer.seconds()) << "s)";
  report(8, "query-cost sweep monotonicity", queries_mono && passage_mono, os.str());
}

void criterion_9_covid(const Scale& scale, int workers) {
  Timer timer;
  auto suite = domains::covid_suite(domains::CovidConfig::defaults(), 13);
  bench::RunProfile profile;
  profile.runs = scale.covid_runs;
  profile.horizon = scale.horizon;
  profile.planner_simulations = scale.sims;
  std::vector<bench::AlgorithmSpec> algs;
  for (const char* n : {"ats", "naive50", "naive100", "naive200", "random-arms"})
    algs.push_back(bench::AlgorithmSpec::parse(n));
  const auto out = bench::run_suite(suite, algs, profile, 616, workers);

  const auto* ats = out.find("ats");
  auto arm_window_mean = [&](int arm, bool last) {
    double acc = 0.0;
    long n = 0;
    for (const auto& e : ats->episodes) {
      const auto& s = e.arm_pull[static_cast<std::size_t>(arm)];
      const std::size_t start = last ? s.size() - 100 : 0;
      const std::size_t stop = last ? s.size() : 100;
      for (std::size_t t = start; t < stop; ++t) {
        acc += s[t];
        n++;
      }
    }
    return acc / static_cast<double>(n);
  };
  const double a_first = arm_window_mean(0, false);
  const double a_last = arm_window_mean(0, true);
  const double b_last = arm_window_mean(1, true);
  const double none_last = arm_window_mean(2, true);

  const double ats_r = mean_final_reward(*ats);
  const double ra_r = mean_final_reward(*out.find("random-arms"));
  double naive_max = -std::numeric_limits<double>::infinity();
  for (const char* n : {"naive50", "naive100", "naive200"})
    naive_max = std::max(naive_max, mean_final_reward(*out.find(n)));

  const bool arm_id = a_last > b_last && a_last > none_last && a_last > a_first;
  const bool rewards = ats_r > naive_max && ra_r > naive_max;
  std::ostringstream os;
  os << "vaccine-A freq first100=" << fmt1(a_first) << " last100=" << fmt1(a_last) << " (B="
     << fmt1(b_last) << ", none=" << fmt1(none_last) << "); reward ats=" << fmt1(ats_r)
     << " random-arms=" << fmt1(ra_r) << " best-naive=" << fmt1(naive_max) << " ("
     << fmt1(timer.seconds()) << "s)";
  report(9, "vaccine-domain proof of concept", arm_id && rewards, os.str());
}

void criterion_10_planner_oracle(const Scale& scale) {
  Timer timer;
  auto filter = [](const pomdp::HubState& s) {
    const auto& d0 = s.arms[0].probs;
    const auto& d1 = s.arms[1].probs;
    const bool mirrored = (d0[0] == 0.75 && d1[0] == 0.25) || (d0[0] == 0.25 && d1[0] == 0.75);
    return s.utility.values[0] == 10.0 && s.utility.values[1] == 0.0 && mirrored;
  };
  pomdp::HubPomdpModel model(2, 2, {}, QueryProfile{}, 0.95, pomdp::UtilityGrid{{0.0, 10.0}},
                             pomdp::SimplexGrid{4}, pomdp::TeacherSelection::Specific, -1, filter);
  planner::PlannerParams params;
  params.simulations_per_step = scale.oracle_sims;
  params.max_depth = 3;
  // wide exploration: returns here are noisy relative to the tiny depth-3
  // action gaps, and the simulation budget is large enough to spend on both
  params.ucb_exploration = 10.0;

  RandomSource rng(31);
  int agree = 0;
  for (int i = 0; i < scale.oracle_beliefs; ++i) {
    const double w = rng.uniform01();
    pomdp::Belief belief{{w, 1.0 - w}};
    int oracle_best = -1;
    oracle::expectimax(model, belief.weights, 3, &oracle_best);
    RandomSource plan_rng(derive_seed(999, static_cast<std::uint64_t>(i)));
    const auto action = planner::plan(model, belief, params, plan_rng);
    int planned = -1;
    for (int a = 0; a < model.num_actions(); ++a)
      if (model.actions()[static_cast<std::size_t>(a)] == action) planned = a;
    if (planned == oracle_best) agree++;
  }
  std::ostringstream os;
  os << agree << "/" << scale.oracle_beliefs << " agreements ("
     << fmt1(timer.seconds()) << "s)";
  report(10, "planner matches depth-3 expectimax",
         agree * 100 >= scale.oracle_beliefs * 95, os.str());
}

bool directories_identical(const fs::path& a, const fs::path& b, std::string& mismatch) {
  std::vector<fs::path> rel;
  for (const auto& entry : fs::recursive_directory_iterator(a))
    if (entry.is_regular_file()) rel.push_back(fs::relative(entry.path(), a));
  std::sort(rel.begin(), rel.end());
  std::vector<fs::path> rel_b;
  for (const auto& entry : fs::recursive_directory_iterator(b))
    if (entry.is_regular_file()) rel_b.push_back(fs::relative(entry.path(), b));
  std::sort(rel_b.begin(), rel_b.end());
  if (rel != rel_b) {
    mismatch = "file sets differ";
    return false;
  }
  for (const auto& r : rel) {
    if (config::read_text_file((a / r).string()) != config::read_text_file((b / r).string())) {
      mismatch = "content differs: " + r.string();
      return false;
    }
  }
  return true;
}

void criterion_11_cli_determinism(const std::string& cli, const std::string& scratch) {
  Timer timer;
  if (cli.empty()) {
    report(11, "CLI determinism", false, "no --cli path provided");
    return;
  }
  const fs::path root = fs::path(scratch) / "determinism";
  fs::remove_all(root);
  fs::create_directories(root);
  auto shell = [&](const std::string& args) {
    const std::string cmd = cli + " " + args + " > /dev/null 2>&1";
    return std::system(cmd.c_str()) == 0;
  };
  bool ok = true;
  std::string detail;
  for (int rep = 0; rep < 2; ++rep) {
    const std::string tag = rep == 0 ? "a" : "b";
    const std::string suite = (root / ("suite_" + tag)).string();
    ok = ok && shell("generate-tasks --out " + suite + " --n-tasks 3 --seed 11");
    ok = ok && shell("run --suite " + suite + " --out " + (root / ("run_" + tag)).string() +
                     " --profile micro --alg ats --alg naive20 --alg random --seed 5 --workers 2" +
                     " --dump-episodes");
    ok = ok && shell("sweep-costs --suite " + suite + " --out " +
                     (root / ("sweep_" + tag)).string() +
                     " --profile micro --multipliers 0,2 --seed 6 --workers 2");
  }
  if (!ok) {
    report(11, "CLI determinism", false, "CLI invocation failed");
    return;
  }
  std::string mismatch;
  for (const char* pair : {"suite", "run", "sweep"}) {
    if (!directories_identical(root / (std::string(pair) + "_a"), root / (std::string(pair) + "_b"),
                               mismatch)) {
      ok = false;
      detail = std::string(pair) + ": " + mismatch;
      break;
    }
  }
  std::ostringstream os;
  os << (ok ? "generate-tasks, run and sweep-costs outputs byte-identical" : detail) << " ("
     << fmt1(timer.seconds()) << "s)";
  report(11, "CLI determinism", ok, os.str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance suite"};
  std::string cli_path, scratch = "/tmp/hub_acceptance", profile = "desk";
  std::vector<int> only;
  int workers = 0;
  app.add_option("--cli", cli_path, "path to the hub CLI binary");
  app.add_option("--scratch", scratch, "scratch directory");
  app.add_option("--profile", profile, "desk or smoke");
  app.add_option("--only", only, "criterion numbers to run")->delimiter(',');
  app.add_option("--workers", workers, "worker threads");
  CLI11_PARSE(app, argc, argv);

  Scale scale;
  if (profile == "smoke") {
    scale.tasks = 4;
    scale.runs = 1;
    scale.horizon = 300;
    scale.sims = 100;
    scale.covid_runs = 4;
    scale.t1_seeds = 5;
    scale.t1_max_T = 10000;
    scale.beta_sims = 20;
    scale.oracle_beliefs = 10;
    scale.oracle_sims = 3000;
  } else if (profile != "desk") {
    std::fprintf(stderr, "unknown profile %s\n", profile.c_str());
    return 2;
  }
  if (workers <= 0) workers = bench::worker_count_from_env();
  auto wanted = [&only](int id) {
    return only.empty() || std::find(only.begin(), only.end(), id) != only.end();
  };

  Timer total;
  if (wanted(1)) criterion_1_equation_round_trips();
  if (wanted(2)) criterion_2_theorem1_convergence(scale);
  if (wanted(3)) criterion_3_beta_recovery(scale);
  if (wanted(4) || wanted(5) || wanted(6)) {
    Timer timer;
    const auto roster = run_roster(scale, workers);
    std::printf("       (roster run: %.1fs)\n", timer.seconds());
    criteria_4_5_6(roster);
  }
  if (wanted(7)) criterion_7_rollouts(scale, workers);
  if (wanted(8)) criterion_8_cost_sweep(scale, workers);
  if (wanted(9)) criterion_9_covid(scale, workers);
  if (wanted(10)) criterion_10_planner_oracle(scale);
  if (wanted(11)) criterion_11_cli_determinism(cli_path, scratch);

  std::printf("%d criterion failure(s), %.1fs total\n", g_failures, total.seconds());
  return g_failures == 0 ? 0 : 1;
}
