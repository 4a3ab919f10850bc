#include "taxidisp/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <mutex>
#include <stdexcept>
#include <thread>

#include <fmt/format.h>

namespace taxidisp {

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", path.string()));
  out << content;
  if (!out) throw std::runtime_error(fmt::format("write failed for '{}'", path.string()));
}

void make_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw std::runtime_error(fmt::format("cannot create directory '{}'", dir.string()));
  }
}

}  // namespace

const CellSummary& ExperimentReport::cell(double rate, Strategy s) const {
  for (const auto& c : cells) {
    if (c.rate == rate && c.strategy == s) return c;
  }
  throw std::out_of_range(fmt::format("no cell for rate {} strategy {}", rate, to_string(s)));
}

std::string run_dir_name(double rate, Strategy s, std::uint64_t seed) {
  return fmt::format("rate{}_{}_seed{}", rate, to_string(s), seed);
}

RunSummary summarize(const ScenarioConfig& cfg, const RunResult& result) {
  const RunMetrics& m = result.metrics;
  RunSummary s;
  s.rate = cfg.rate_per_hour();
  s.strategy = cfg.strategy;
  s.seed = cfg.seed;
  s.avg_wait_min = m.avg_wait_min;
  s.served = m.served_count;
  for (double r : m.taxi_revenue) s.taxi_total += r;
  s.mediator_total = m.mediator_revenue;
  s.dispatches = m.dispatch_count;
  s.reassignments = m.reassignment_count;
  s.accepted_proposals = m.accepted_proposals;
  s.rejections = m.rejection_count;
  s.free_taxis_sufficed = m.free_taxis_sufficed;
  return s;
}

ExperimentReport run_grid(const ScenarioConfig& base, const std::vector<double>& rates,
                          const std::vector<Strategy>& strategies,
                          const std::vector<std::uint64_t>& seeds, const GridOptions& options) {
  if (std::find(strategies.begin(), strategies.end(), Strategy::Ntnr) == strategies.end()) {
    throw ConfigError("the strategy list must include ntnr, the report baseline");
  }
  struct Job {
    ScenarioConfig cfg;
  };
  std::vector<Job> jobs;
  for (double rate : rates) {
    for (Strategy s : strategies) {
      for (std::uint64_t seed : seeds) {
        Job j{base};
        j.cfg.set_rate_per_hour(rate);
        j.cfg.strategy = s;
        j.cfg.seed = seed;
        j.cfg.validate();
        jobs.push_back(std::move(j));
      }
    }
  }
  if (options.run_dir) make_dir(*options.run_dir);

  std::vector<RunSummary> runs(jobs.size());
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::exception_ptr failure;

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= jobs.size()) return;
      {
        std::lock_guard lock(mu);
        if (failure) return;
      }
      const ScenarioConfig& cfg = jobs[i].cfg;
      try {
        const RunResult result = run(cfg, options.run_options);
        runs[i] = summarize(cfg, result);
        if (options.run_dir) {
          write_run_files(result, *options.run_dir /
                                      run_dir_name(cfg.rate_per_hour(), cfg.strategy, cfg.seed));
        }
        std::lock_guard lock(mu);
        if (options.on_run_done) options.on_run_done(runs[i]);
      } catch (const std::exception& e) {
        std::lock_guard lock(mu);
        if (!failure) {
          failure = std::make_exception_ptr(std::runtime_error(
              fmt::format("run rate={} strategy={} seed={} failed: {}", cfg.rate_per_hour(),
                          to_string(cfg.strategy), cfg.seed, e.what())));
        }
      }
    }
  };

  const int n_threads = std::max(1, std::min<int>(options.jobs, static_cast<int>(jobs.size())));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return aggregate(rates, strategies, std::move(runs));
}

ExperimentReport aggregate(const std::vector<double>& rates, const std::vector<Strategy>& strategies,
                           std::vector<RunSummary> runs) {
  ExperimentReport report;
  report.rates = rates;
  report.strategies = strategies;
  report.runs = std::move(runs);
  for (double rate : rates) {
    for (Strategy s : strategies) {
      CellSummary c;
      c.rate = rate;
      c.strategy = s;
      for (const RunSummary& r : report.runs) {
        if (r.rate != rate || r.strategy != s) continue;
        ++c.runs;
        c.mean_wait_min += r.avg_wait_min;
        if (r.served > 0) {
          const double per = r.served / 1000.0;
          c.taxi_per_1000 += r.taxi_total / per;
          c.mediator_per_1000 += r.mediator_total / per;
        }
        c.rejections += r.rejections;
      }
      if (c.runs > 0) {
        c.mean_wait_min /= c.runs;
        c.taxi_per_1000 /= c.runs;
        c.mediator_per_1000 /= c.runs;
      }
      c.system_per_1000 = c.taxi_per_1000 + c.mediator_per_1000;
      report.cells.push_back(c);
    }
    const auto baseline = std::find_if(report.cells.begin(), report.cells.end(), [&](const auto& c) {
      return c.rate == rate && c.strategy == Strategy::Ntnr;
    });
    if (baseline == report.cells.end()) continue;
    const double ntnr_wait = baseline->mean_wait_min;
    for (auto& c : report.cells) {
      if (c.rate != rate) continue;
      c.abs_delta_min = c.mean_wait_min - ntnr_wait;
      c.rel_delta_pct = ntnr_wait != 0.0 ? 100.0 * c.abs_delta_min / ntnr_wait : 0.0;
    }
  }
  return report;
}

std::string customers_csv(const RunResult& result) {
  std::string out = "id,request_time,pickup_time,wait_s,taxi_id,reassigned_count\n";
  for (const CustomerRecord& c : result.customers) {
    if (c.pickup_time) {
      out += fmt::format("{},{:.6f},{:.6f},{:.6f},{},{}\n", c.id, c.request_time, *c.pickup_time,
                         *c.pickup_time - c.request_time, c.taxi, c.reassigned_count);
    } else {
      out += fmt::format("{},{:.6f},,,,{}\n", c.id, c.request_time, c.reassigned_count);
    }
  }
  return out;
}

std::string ledger_csv(const RunResult& result) {
  std::string out = "tick,committed_eur,accepted,rejected\n";
  for (const LedgerRow& r : result.ledger) {
    out += fmt::format("{:.0f},{:.9f},{},{}\n", r.tick, r.committed, r.accepted, r.rejected);
  }
  return out;
}

std::string waits_csv(const ExperimentReport& report) {
  std::string out = "rate,strategy,mean_wait_min,abs_delta_min,rel_delta_pct\n";
  for (const CellSummary& c : report.cells) {
    out += fmt::format("{},{},{:.6f},{:.6f},{:.6f}\n", c.rate, to_string(c.strategy),
                       c.mean_wait_min, c.abs_delta_min, c.rel_delta_pct);
  }
  return out;
}

std::string revenue_csv(const ExperimentReport& report) {
  std::string out = "rate,strategy,taxi_total_eur_per_1000,mediator_eur_per_1000,system_total\n";
  for (const CellSummary& c : report.cells) {
    out += fmt::format("{},{},{:.6f},{:.6f},{:.6f}\n", c.rate, to_string(c.strategy),
                       c.taxi_per_1000, c.mediator_per_1000, c.system_per_1000);
  }
  return out;
}

std::string delta_table(const ExperimentReport& report) {
  constexpr int kFirst = 16;
  constexpr int kCol = 18;
  std::string out = fmt::format("{:<{}}", "Method", kFirst);
  for (double r : report.rates) out += fmt::format("{:>{}}", fmt::format("{}/h", r), kCol);
  out += '\n';
  auto row = [&](Strategy s) {
    out += fmt::format("{:<{}}", to_string(s), kFirst);
    for (double r : report.rates) {
      const CellSummary& c = report.cell(r, s);
      const std::string text =
          s == Strategy::Ntnr ? fmt::format("{:.2f}", c.mean_wait_min)
                              : fmt::format("{:.2f} / {:.2f}", c.abs_delta_min, c.rel_delta_pct);
      out += fmt::format("{:>{}}", text, kCol);
    }
    out += '\n';
  };
  if (std::find(report.strategies.begin(), report.strategies.end(), Strategy::Ntnr) !=
      report.strategies.end()) {
    row(Strategy::Ntnr);
  }
  for (Strategy s : report.strategies) {
    if (s != Strategy::Ntnr) row(s);
  }
  return out;
}

void emit_reports(const ExperimentReport& report, const std::filesystem::path& outdir) {
  make_dir(outdir);
  write_file(outdir / "waits.csv", waits_csv(report));
  write_file(outdir / "revenue.csv", revenue_csv(report));
  write_file(outdir / "table.txt", report.cells.empty() ? std::string{} : delta_table(report));
}

void write_run_files(const RunResult& result, const std::filesystem::path& dir) {
  make_dir(dir);
  write_file(dir / "customers.csv", customers_csv(result));
  write_file(dir / "ledger.csv", ledger_csv(result));
}

}  // namespace taxidisp
