// aoi: command-line front end for blocklength-allocation experiments.
//
// Exit codes: 0 success, 1 usage or parse error, 2 numerical failure.

#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "aoi/aoi.hpp"

namespace {

using nlohmann::json;

constexpr const char* kToolVersion = "0.1.0";

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : std::string(); }

json opt_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::string hex64(std::uint64_t h) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

json metadata(const aoi::ScenarioConfig* sc, aoi::DurationConvention conv) {
  json m{{"tool", "aoi"},
         {"tool_version", kToolVersion},
         {"schema_version", aoi::kScenarioSchemaVersion},
         {"duration_convention", std::string(aoi::to_string(conv))}};
  if (sc) {
    m["config_hash"] = hex64(aoi::config_hash(*sc));
    m["scenario"] = aoi::scenario_to_json(*sc);
  }
  return m;
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw aoi::InvalidArgument("cannot write output file '" + path + "'");
  out << text;
}

aoi::ScenarioConfig load_config(const std::string& path) {
  auto sc = aoi::load_scenario(path);
  for (const auto& w : sc.system.warnings()) std::cerr << "warning: " << w << "\n";
  return sc;
}

aoi::Policy resolve_policy(const std::string& source, const aoi::SystemConfig& cfg) {
  if (source == "naive") return aoi::naive_policy(cfg);
  if (source == "min-error") return aoi::min_error_policy(cfg);
  return aoi::load_policy(source, cfg);
}

json burst_json(const aoi::BurstStats& b) {
  json j{{"defined", b.defined}, {"p_out", b.p_out}, {"xi_res_out_1", b.xi_res_out_1}};
  if (!b.defined) {
    j["undefined_reason"] = b.undefined_reason;
    return j;
  }
  j["p_out_identity"] = b.p_out_identity;
  j["mean_outage_duration"] = b.mean_outage_duration;
  j["mean_ioi"] = b.mean_ioi;
  j["duration_pmf"] = b.duration_pmf;
  j["truncation_t"] = b.truncation_t;
  j["truncation_residual"] = b.truncation_residual;
  return j;
}

json report_json(const aoi::OptimizeReport& r, const aoi::SystemConfig& cfg) {
  json trace = json::array();
  for (const auto& t : r.convergence_trace) trace.push_back({{"iteration", t.iteration}, {"metric", t.metric}, {"p_out", t.p_out}});
  return {{"seed", r.seed},
          {"penalty", std::string(aoi::to_string(r.kind))},
          {"iterations", r.iterations},
          {"terminated_by", std::string(aoi::to_string(r.terminated_by))},
          {"initial_p_out", r.initial_p_out},
          {"final_p_out", r.final_p_out},
          {"convergence_trace", trace},
          {"final_policy", aoi::policy_to_json(r.final_policy, cfg)}};
}

int cmd_optimize(const std::string& config, const std::string& penalty, std::optional<int> seeds,
                 std::uint64_t first_seed, const std::string& out) {
  const auto sc = load_config(config);
  const auto kind = aoi::parse_penalty(penalty);
  const int n = seeds.value_or(sc.optimizer.seeds);
  const auto ms = aoi::optimize_seeds(sc.system, kind, n, first_seed, sc.optimizer.max_iter);

  json runs = json::array();
  for (const auto& r : ms.reports) runs.push_back(report_json(r, sc.system));
  const auto& best = ms.reports[ms.best];
  json doc{{"metadata", metadata(&sc, aoi::DurationConvention::OutagePeriods)},
           {"penalty", penalty},
           {"seeds", n},
           {"first_seed", first_seed},
           {"median_p_out", ms.median_p_out},
           {"best", {{"seed", best.seed}, {"p_out", best.final_p_out}, {"policy", aoi::policy_to_json(best.final_policy, sc.system)}}},
           {"runs", runs}};
  write_output(out, doc.dump(2) + "\n");
  return 0;
}

int cmd_evaluate(const std::string& config, const std::string& source, const std::string& out) {
  const auto sc = load_config(config);
  const auto policy = resolve_policy(source, sc.system);
  const auto e = aoi::evaluate_policy(sc.system, policy);
  json doc{{"metadata", metadata(&sc, e.burst.convention)},
           {"policy_source", source},
           {"p_out", e.p_out},
           {"stationarity_residual", e.residual},
           {"burst", burst_json(e.burst)},
           {"policy", aoi::policy_to_json(policy, sc.system)}};
  write_output(out, doc.dump(2) + "\n");
  return 0;
}

int cmd_simulate(const std::string& config, const std::string& source, const std::string& out,
                 std::string format) {
  const auto sc = load_config(config);
  const auto policy = resolve_policy(source, sc.system);
  const auto e = aoi::evaluate_policy(sc.system, policy);
  std::optional<aoi::AnalyticPrediction> analytic;
  if (e.burst.defined) analytic = aoi::AnalyticPrediction{e.p_out, e.burst.mean_outage_duration, e.burst.mean_ioi};
  const auto s = aoi::run_repetitions(sc.system, policy, sc.simulation.reps, sc.simulation.periods,
                                      sc.simulation.master_seed, analytic);

  if (format.empty()) format = out.size() >= 4 && out.substr(out.size() - 4) == ".csv" ? "csv" : "json";
  if (format == "csv") {
    std::ostringstream csv;
    csv << "rep,seed,periods,outage_count,outage_rate,n_bursts,mean_burst,n_iois,mean_ioi\n";
    for (std::size_t i = 0; i < s.runs.size(); ++i) {
      const auto& r = s.runs[i];
      csv << i << ',' << r.seed << ',' << r.periods << ',' << r.outage_count << ',' << fmt(r.outage_rate) << ','
          << r.burst_durations.size() << ',' << fmt(r.mean_burst) << ',' << r.ioi_durations.size() << ','
          << fmt(r.mean_ioi) << '\n';
    }
    write_output(out, csv.str());
    return 0;
  }

  json reps = json::array();
  for (const auto& r : s.runs)
    reps.push_back({{"seed", r.seed},
                    {"outage_count", r.outage_count},
                    {"outage_rate", r.outage_rate},
                    {"n_bursts", r.burst_durations.size()},
                    {"mean_burst", opt_json(r.mean_burst)},
                    {"n_iois", r.ioi_durations.size()},
                    {"mean_ioi", opt_json(r.mean_ioi)}});
  json doc{{"metadata", metadata(&sc, aoi::DurationConvention::OutagePeriods)},
           {"policy_source", source},
           {"reps", s.reps},
           {"periods", s.periods},
           {"master_seed", s.master_seed},
           {"mean_outage_rate", s.mean_outage_rate},
           {"stddev_outage_rate", s.stddev_outage_rate},
           {"stderr_outage_rate", s.stderr_outage_rate},
           {"pooled_bursts", s.pooled_bursts.size()},
           {"mean_burst", opt_json(s.mean_burst)},
           {"pooled_iois", s.pooled_iois.size()},
           {"mean_ioi", opt_json(s.mean_ioi)},
           {"analytic",
            {{"p_out", e.p_out},
             {"mean_outage_duration", e.burst.defined ? json(e.burst.mean_outage_duration) : json(nullptr)},
             {"mean_ioi", e.burst.defined ? json(e.burst.mean_ioi) : json(nullptr)}}},
           {"normalized_error",
            {{"p_out", opt_json(s.error_p_out)},
             {"mean_burst", opt_json(s.error_mean_burst)},
             {"mean_ioi", opt_json(s.error_mean_ioi)}}},
           {"repetitions", reps}};
  write_output(out, doc.dump(2) + "\n");
  return 0;
}

int cmd_reproduce_table2(const aoi::Table2Options& opt, const std::string& out) {
  const auto start = std::chrono::steady_clock::now();
  const auto rows = aoi::reproduce_table2(opt);
  std::ostringstream csv;
  csv << "scenario,policy,analytic_p_out,empirical_mean,empirical_stderr,reference_p_out,median_seed_p_out,best_seed\n";
  for (const auto& r : rows) {
    csv << r.scenario << ',' << r.policy << ',' << fmt(r.analytic_p_out) << ',' << fmt(r.empirical_mean) << ','
        << fmt(r.empirical_stderr) << ',' << fmt(r.reference_p_out) << ',' << fmt(r.median_seed_p_out) << ','
        << (r.best_seed ? std::to_string(*r.best_seed) : std::string()) << '\n';
  }
  write_output(out, csv.str());
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::cerr << rows.size() << " rows in " << fmt(secs) << " s\n";
  return 0;
}

int cmd_burst_convergence(const std::string& config, int n_policies, std::optional<std::uint64_t> seed,
                          const std::string& out) {
  const auto sc = load_config(config);
  const auto study = aoi::burst_convergence(sc.system, n_policies, seed.value_or(sc.simulation.master_seed));
  std::ostringstream csv;
  csv << "policy,checkpoint,p_out_measured,p_out_analytic,p_out_error,burst_measured,burst_analytic,burst_error,"
         "ioi_measured,ioi_analytic,ioi_error\n";
  for (const auto& r : study.rows) {
    csv << r.policy << ',' << r.checkpoint << ',' << fmt(r.p_out_measured) << ',' << fmt(r.p_out_analytic) << ','
        << fmt(r.p_out_error) << ',' << fmt(r.burst_measured) << ',' << fmt(r.burst_analytic) << ','
        << fmt(r.burst_error) << ',' << fmt(r.ioi_measured) << ',' << fmt(r.ioi_analytic) << ',' << fmt(r.ioi_error)
        << '\n';
  }
  write_output(out, csv.str());
  std::cerr << "checkpoint,median_p_out_error,median_burst_error,median_ioi_error\n";
  for (const auto& s : study.summary)
    std::cerr << s.checkpoint << ',' << fmt(s.median_p_out_error) << ',' << fmt(s.median_burst_error) << ','
              << fmt(s.median_ioi_error) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Blocklength allocation against AoI outage: optimize, evaluate, simulate"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  std::string config, out, penalty, policy_source = "naive", format;
  std::optional<int> seeds;
  std::uint64_t first_seed = 0;

  auto* optimize = app.add_subcommand("optimize", "Run the recursive policy optimizer over several seeds");
  optimize->add_option("-c,--config", config, "Scenario JSON file")->required();
  optimize->add_option("-p,--penalty", penalty, "binary | sum-aoi | peak-aoi | exp-peak-aoi")->required();
  optimize->add_option("-s,--seeds", seeds, "Number of seeds (default: optimizer.seeds from the config)");
  optimize->add_option("--first-seed", first_seed, "Seed of the first run; later runs use consecutive seeds");
  optimize->add_option("-o,--out", out, "Output JSON path (stdout if omitted)");

  auto* evaluate = app.add_subcommand("evaluate", "Analytic outage probability and burst statistics of a policy");
  evaluate->add_option("-c,--config", config, "Scenario JSON file")->required();
  evaluate->add_option("-P,--policy", policy_source, "naive | min-error | path to a policy JSON file");
  evaluate->add_option("-o,--out", out, "Output JSON path (stdout if omitted)");

  auto* simulate = app.add_subcommand("simulate", "Monte-Carlo repetitions of a policy");
  simulate->add_option("-c,--config", config, "Scenario JSON file")->required();
  simulate->add_option("-P,--policy", policy_source, "naive | min-error | path to a policy JSON file");
  simulate->add_option("-o,--out", out, "Output path (stdout if omitted)");
  simulate->add_option("-f,--format", format, "csv | json (default: from the output extension)")
      ->check(CLI::IsMember({"csv", "json"}));

  aoi::Table2Options t2;
  std::optional<int> a_out;
  auto* table2 = app.add_subcommand("reproduce-table2", "All presets x all policies, analytic and simulated");
  table2->add_option("-o,--out", out, "Output CSV path (stdout if omitted)");
  table2->add_option("--seeds", t2.seeds, "Optimizer seeds per penalty")->capture_default_str();
  table2->add_option("--reps", t2.reps, "Monte-Carlo repetitions")->capture_default_str();
  table2->add_option("--periods", t2.periods, "Periods per repetition")->capture_default_str();
  table2->add_option("--master-seed", t2.master_seed, "Simulation master seed")->capture_default_str();
  table2->add_option("--a-out", a_out, "Override the outage threshold of every preset");

  int n_policies = 100;
  std::optional<std::uint64_t> conv_seed;
  auto* conv = app.add_subcommand("burst-convergence", "Convergence of simulated burst statistics to analytic values");
  conv->add_option("-c,--config", config, "Scenario JSON file")->required();
  conv->add_option("-n,--policies", n_policies, "Number of random policies")->capture_default_str();
  conv->add_option("--seed", conv_seed, "Master seed (default: simulation.master_seed from the config)");
  conv->add_option("-o,--out", out, "Output CSV path (stdout if omitted)");

  std::string preset_name;
  auto* preset = app.add_subcommand("preset", "Print a built-in scenario as JSON");
  preset->add_option("name", preset_name, "scenario_a | scenario_b | scenario_c")->required();
  preset->add_option("-o,--out", out, "Output path (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*optimize) return cmd_optimize(config, penalty, seeds, first_seed, out);
    if (*evaluate) return cmd_evaluate(config, policy_source, out);
    if (*simulate) return cmd_simulate(config, policy_source, out, format);
    if (*table2) {
      t2.a_out_override = a_out;
      return cmd_reproduce_table2(t2, out);
    }
    if (*conv) return cmd_burst_convergence(config, n_policies, conv_seed, out);
    if (*preset) {
      write_output(out, aoi::scenario_to_json(aoi::make_preset(preset_name)).dump(2) + "\n");
      return 0;
    }
  } catch (const aoi::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 2;
  } catch (const aoi::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
