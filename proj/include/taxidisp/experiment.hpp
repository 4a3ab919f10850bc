#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "taxidisp/dispatch.hpp"
#include "taxidisp/scenario.hpp"
#include "taxidisp/simulation.hpp"

namespace taxidisp {

struct RunSummary {
  double rate = 0.0;  // customers per hour
  Strategy strategy = Strategy::Ntnr;
  std::uint64_t seed = 0;
  double avg_wait_min = 0.0;
  int served = 0;
  double taxi_total = 0.0;
  double mediator_total = 0.0;
  int dispatches = 0;
  int reassignments = 0;
  int accepted_proposals = 0;
  int rejections = 0;
  bool free_taxis_sufficed = true;
};

/// Seed-averaged results for one (rate, strategy) cell.
struct CellSummary {
  double rate = 0.0;
  Strategy strategy = Strategy::Ntnr;
  int runs = 0;
  double mean_wait_min = 0.0;
  double abs_delta_min = 0.0;  // versus NTNR at the same rate
  double rel_delta_pct = 0.0;
  double taxi_per_1000 = 0.0;      // euros per 1000 served customers
  double mediator_per_1000 = 0.0;
  double system_per_1000 = 0.0;
  int rejections = 0;
};

struct ExperimentReport {
  std::vector<double> rates;
  std::vector<Strategy> strategies;
  std::vector<CellSummary> cells;  // rate-major, strategies in the given order
  std::vector<RunSummary> runs;

  const CellSummary& cell(double rate, Strategy s) const;
};

struct GridOptions {
  int jobs = 1;
  // When set, customers.csv and ledger.csv of every run go below this directory.
  std::optional<std::filesystem::path> run_dir;
  std::function<void(const RunSummary&)> on_run_done;
  RunOptions run_options{.record_events = false};
};

RunSummary summarize(const ScenarioConfig& cfg, const RunResult& result);

/// One run per (rate, strategy, seed). Every strategy sees the same fleet
/// and demand for a given (rate, seed). `strategies` must contain NTNR,
/// the baseline of every delta. Run failures are rethrown with the cell
/// that raised them.
ExperimentReport run_grid(const ScenarioConfig& base, const std::vector<double>& rates,
                          const std::vector<Strategy>& strategies,
                          const std::vector<std::uint64_t>& seeds, const GridOptions& options = {});

/// Aggregates per-run summaries into cells with deltas against NTNR.
ExperimentReport aggregate(const std::vector<double>& rates, const std::vector<Strategy>& strategies,
                           std::vector<RunSummary> runs);

/// Writes waits.csv, revenue.csv and table.txt into `outdir`.
void emit_reports(const ExperimentReport& report, const std::filesystem::path& outdir);

/// Writes customers.csv and ledger.csv for a single run into `dir`.
void write_run_files(const RunResult& result, const std::filesystem::path& dir);

std::string customers_csv(const RunResult& result);
std::string ledger_csv(const RunResult& result);
std::string waits_csv(const ExperimentReport& report);
std::string revenue_csv(const ExperimentReport& report);

/// Plain-text table: NTNR absolute waits, every other strategy as
/// "absolute delta / relative delta" per rate.
std::string delta_table(const ExperimentReport& report);

std::string run_dir_name(double rate, Strategy s, std::uint64_t seed);

}  // namespace taxidisp
