// Command-line front end: single runs, experiment grids and self-checks.

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "taxidisp/experiment.hpp"
#include "taxidisp/scenario.hpp"
#include "taxidisp/simulation.hpp"
#include "taxidisp/verify.hpp"

namespace fs = std::filesystem;
using namespace taxidisp;

namespace {

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::size_t end = comma == std::string::npos ? text.size() : comma;
    std::string item = text.substr(start, end - start);
    if (item.empty()) throw ConfigError(fmt::format("empty entry in list '{}'", text));
    items.push_back(std::move(item));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return items;
}

std::uint64_t parse_u64(std::string_view s) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ConfigError(fmt::format("'{}' is not a non-negative integer", s));
  }
  return v;
}

// Accepts "0,1,2" and ranges such as "0-9".
std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  for (const std::string& item : split_list(text)) {
    const std::size_t dash = item.find('-');
    if (dash == std::string::npos) {
      seeds.push_back(parse_u64(item));
      continue;
    }
    const std::uint64_t lo = parse_u64(std::string_view(item).substr(0, dash));
    const std::uint64_t hi = parse_u64(std::string_view(item).substr(dash + 1));
    if (hi < lo) throw ConfigError(fmt::format("empty seed range '{}'", item));
    for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
  }
  return seeds;
}

std::vector<double> parse_rates(const std::string& text) {
  std::vector<double> rates;
  for (const std::string& item : split_list(text)) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size() || !(v > 0.0)) {
      throw ConfigError(fmt::format("'{}' is not a positive rate", item));
    }
    rates.push_back(v);
  }
  return rates;
}

ScenarioConfig base_config(const std::string& path) {
  return path.empty() ? ScenarioConfig{} : load_config(path);
}

int cmd_simulate(const std::string& config, const std::string& strategy, double rate,
                 std::uint64_t seed, const std::string& out) {
  ScenarioConfig cfg = base_config(config);
  if (!strategy.empty()) cfg.strategy = parse_strategy(strategy);
  if (rate > 0.0) cfg.set_rate_per_hour(rate);
  cfg.seed = seed;
  cfg.validate();
  const RunResult result = run(cfg, RunOptions{.record_events = false});
  write_run_files(result, out);
  const RunMetrics& m = result.metrics;
  double taxis = 0.0;
  for (double r : m.taxi_revenue) taxis += r;
  fmt::print("strategy={} rate={}/h seed={}\n", to_string(cfg.strategy), cfg.rate_per_hour(),
             cfg.seed);
  fmt::print("served={} mean_wait_min={:.4f} end_time_s={:.0f}\n", m.served_count, m.avg_wait_min,
             m.end_time);
  fmt::print("taxi_eur={:.2f} mediator_eur={:.2f} reassignments={} rejections={}\n", taxis,
             m.mediator_revenue, m.reassignment_count, m.rejection_count);
  return 0;
}

int cmd_experiment(const std::string& config, const std::string& rates_text,
                   const std::string& strategies_text, const std::string& seeds_text, int jobs,
                   const std::string& out) {
  const ScenarioConfig base = base_config(config);
  const std::vector<double> rates = parse_rates(rates_text);
  std::vector<Strategy> strategies;
  for (const std::string& s : split_list(strategies_text)) strategies.push_back(parse_strategy(s));
  const std::vector<std::uint64_t> seeds = parse_seeds(seeds_text);

  GridOptions options;
  options.jobs = jobs;
  options.run_dir = fs::path(out) / "runs";
  const std::size_t total = rates.size() * strategies.size() * seeds.size();
  std::size_t done = 0;
  options.on_run_done = [&](const RunSummary& r) {
    ++done;
    fmt::print(stderr, "[{}/{}] rate={} {} seed={} wait={:.3f} min\n", done, total, r.rate,
               to_string(r.strategy), r.seed, r.avg_wait_min);
  };
  const ExperimentReport report = run_grid(base, rates, strategies, seeds, options);
  emit_reports(report, out);
  fmt::print("{}", delta_table(report));
  return 0;
}

int cmd_verify() {
  int failed = 0;
  for (const CheckResult& r : run_self_checks()) {
    if (r.passed) {
      fmt::print("PASS  {}\n", r.name);
    } else {
      ++failed;
      fmt::print("FAIL  {}: {}\n", r.name, r.detail);
    }
  }
  return failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Taxi fleet dispatch simulator"};
  app.require_subcommand(1);

  std::string config;
  std::string strategy;
  double rate = 0.0;
  std::uint64_t seed = 0;
  std::string out;
  auto* sim = app.add_subcommand("simulate", "Run one simulation and write its CSV files");
  sim->add_option("--config", config, "Config file (key = value)");
  sim->add_option("--strategy", strategy, "fcfs|ntnr|fa|mindist|maxrev|combined");
  sim->add_option("--rate", rate, "Demand in customers per hour");
  sim->add_option("--seed", seed, "Random seed");
  sim->add_option("--out", out, "Output directory")->required();

  std::string rates = "1000";
  std::string strategies = "ntnr";
  std::string seeds = "0-9";
  int jobs = 1;
  auto* exp = app.add_subcommand("experiment", "Run a (rate, strategy, seed) grid");
  exp->add_option("--config", config, "Config file (key = value)");
  exp->add_option("--rates", rates, "Comma-separated customers per hour");
  exp->add_option("--strategies", strategies, "Comma-separated strategy names, including ntnr");
  exp->add_option("--seeds", seeds, "Comma-separated seeds or ranges such as 0-9");
  exp->add_option("--jobs", jobs, "Parallel runs")->check(CLI::PositiveNumber);
  exp->add_option("--out", out, "Output directory")->required();

  auto* ver = app.add_subcommand("verify", "Run the built-in oracle and invariant checks");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) return cmd_simulate(config, strategy, rate, seed, out);
    if (exp->parsed()) return cmd_experiment(config, rates, strategies, seeds, jobs, out);
    if (ver->parsed()) return cmd_verify();
  } catch (const ConfigError& e) {
    fmt::print(stderr, "configuration error: {}\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  }
  return 0;
}
