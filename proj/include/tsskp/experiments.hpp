#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "tsskp/det_equiv.hpp"
#include "tsskp/instance_gen.hpp"
#include "tsskp/mip.hpp"
#include "tsskp/printer_bound.hpp"

namespace tsskp {

// Answers the two experiment questions per instance: how many printers are
// packed, and by how much the reward improves when printers are allowed.

struct SolveStats {
  MipStatus status = MipStatus::Infeasible;
  std::int64_t nodes = 0;
  std::optional<Rat> gap;
};

struct InstanceOutcome {
  bool failed = false;             // a solve missed its gap (limit hit or error)
  std::int64_t printers_packed = 0;
  Rat reward_with;
  Rat reward_without;
  std::optional<Rat> gain_percent;  // absent when without = 0 < with
  SolveStats with_stats;
  SolveStats without_stats;
};

inline InstanceOutcome reward_gain(const Instance& inst, const MipParams& params) {
  InstanceOutcome out;
  const BoundResult bound = printer_upper_bound(inst);
  const DetEquivModel with_model = build_det_equiv(inst, bound.printer_cap, true);
  const DetEquivModel without_model = build_det_equiv(inst, 0, false);
  const MipResult with_res = solve_mip(with_model.problem, params);
  const MipResult without_res = solve_mip(without_model.problem, params);
  out.with_stats = {with_res.status, with_res.nodes, with_res.gap};
  out.without_stats = {without_res.status, without_res.nodes, without_res.gap};
  if (with_res.status != MipStatus::OptimalWithinGap || !with_res.has_incumbent ||
      without_res.status != MipStatus::OptimalWithinGap || !without_res.has_incumbent) {
    out.failed = true;
    return out;
  }
  out.reward_with = with_res.objective;
  out.reward_without = without_res.objective;

  if (out.reward_with > out.reward_without) {
    std::int64_t packed = 0;
    for (int col : with_model.map.printer_vars)
      packed += static_cast<std::int64_t>(with_res.values[static_cast<std::size_t>(col)] > 0.5);
    out.printers_packed = packed;
  } else {
    out.printers_packed = 0;  // printers add nothing here, recommend none
  }

  if (out.reward_without > 0)
    out.gain_percent = Rat(100) * (out.reward_with - out.reward_without) / out.reward_without;
  else if (out.reward_with == 0)
    out.gain_percent = Rat(0);
  // else: undefined, left empty and counted by the aggregation
  return out;
}

// ---------------------------------------------------------------------------
// Aggregation
// ---------------------------------------------------------------------------

struct SummaryStats {
  Rat median, min, max, mean;
};

/// Median, min, max, exact mean. Even-length medians average the two central
/// order statistics.
inline SummaryStats summarize(std::vector<Rat> values) {
  if (values.empty()) throw std::invalid_argument("summarize: empty list");
  std::sort(values.begin(), values.end());
  SummaryStats out;
  out.min = values.front();
  out.max = values.back();
  const std::size_t n = values.size();
  out.median = (n % 2 == 1) ? values[n / 2] : (values[n / 2 - 1] + values[n / 2]) / 2;
  Rat sum = 0;
  for (const Rat& v : values) sum += v;
  out.mean = sum / static_cast<int>(n);
  return out;
}

struct SweepSpec {
  GenConfig base;
  SweepAspect aspect = SweepAspect::Alpha;
  std::vector<std::optional<Rat>> grid;  // nullopt = infinity
  int instances_per_value = 30;
  std::uint64_t base_seed = 1;
  MipParams params;
  int jobs = 1;
};

struct SweepRow {
  std::optional<Rat> value;
  int count = 0;
  int fails = 0;
  int undefined_gains = 0;
  std::optional<SummaryStats> printers;  // over non-failed instances
  std::optional<SummaryStats> gains;     // over non-failed, defined gains
};

struct SweepReport {
  SweepAspect aspect = SweepAspect::Alpha;
  std::uint64_t base_seed = 0;
  std::vector<SweepRow> rows;
  std::vector<std::vector<InstanceOutcome>> outcomes;  // [row][instance], seed order
};

/// Runs the grid: instance `idx` of every grid value uses seed base + idx, so
/// each value is evaluated on the same underlying instance set. Instances may
/// solve concurrently; aggregation order is fixed by seed.
inline SweepReport run_sweep(const SweepSpec& spec) {
  SweepReport report;
  report.aspect = spec.aspect;
  report.base_seed = spec.base_seed;
  report.rows.resize(spec.grid.size());
  report.outcomes.assign(spec.grid.size(),
                         std::vector<InstanceOutcome>(
                             static_cast<std::size_t>(std::max(spec.instances_per_value, 0))));

  struct Task {
    std::size_t row;
    int index;
  };
  std::vector<Task> tasks;
  for (std::size_t g = 0; g < spec.grid.size(); ++g)
    for (int idx = 0; idx < spec.instances_per_value; ++idx) tasks.push_back({g, idx});

  const auto run_task = [&](const Task& task) {
    InstanceOutcome& slot = report.outcomes[task.row][static_cast<std::size_t>(task.index)];
    try {
      const GenResult gen = generate(spec.base, spec.base_seed + static_cast<std::uint64_t>(task.index));
      const Instance swept = apply_sweep_override(spec.base, gen.instance, gen.trace,
                                                  {spec.aspect, spec.grid[task.row]});
      slot = reward_gain(swept, spec.params);
    } catch (const std::exception&) {
      slot = InstanceOutcome{};
      slot.failed = true;
    }
  };

  const int jobs = std::max(spec.jobs, 1);
  if (jobs == 1 || tasks.size() <= 1) {
    for (const Task& task : tasks) run_task(task);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    const int worker_count = std::min<std::size_t>(static_cast<std::size_t>(jobs), tasks.size());
    for (int w = 0; w < worker_count; ++w)
      workers.emplace_back([&] {
        for (std::size_t k = next.fetch_add(1); k < tasks.size(); k = next.fetch_add(1))
          run_task(tasks[k]);
      });
    for (std::thread& worker : workers) worker.join();
  }

  for (std::size_t g = 0; g < spec.grid.size(); ++g) {
    SweepRow& row = report.rows[g];
    row.value = spec.grid[g];
    row.count = spec.instances_per_value;
    std::vector<Rat> printers, gains;
    for (const InstanceOutcome& outcome : report.outcomes[g]) {
      if (outcome.failed) {
        ++row.fails;
        continue;
      }
      printers.push_back(Rat(outcome.printers_packed));
      if (outcome.gain_percent)
        gains.push_back(*outcome.gain_percent);
      else
        ++row.undefined_gains;
    }
    if (!printers.empty()) row.printers = summarize(std::move(printers));
    if (!gains.empty()) row.gains = summarize(std::move(gains));
  }
  return report;
}

// ---------------------------------------------------------------------------
// CSV report
// ---------------------------------------------------------------------------

inline std::string sweep_value_label(const std::optional<Rat>& value) {
  return value ? compact_string(*value) : "inf";
}

inline std::string sweep_report_csv(const SweepReport& report) {
  std::ostringstream out;
  out << "# seed=" << report.base_seed << " aspect=" << sweep_aspect_name(report.aspect) << "\n";
  out << "value,n,fails,undef_gains,printers_median,printers_min,printers_max,printers_mean,"
         "gain_median,gain_min,gain_max,gain_mean\n";
  for (const SweepRow& row : report.rows) {
    out << sweep_value_label(row.value) << "," << row.count << "," << row.fails << ","
        << row.undefined_gains;
    const auto stats_cells = [&](const std::optional<SummaryStats>& stats) {
      if (stats)
        out << "," << decimal_string(stats->median, 1) << "," << decimal_string(stats->min, 1)
            << "," << decimal_string(stats->max, 1) << "," << decimal_string(stats->mean, 1);
      else
        out << ",,,,";
    };
    stats_cells(row.printers);
    stats_cells(row.gains);
    out << "\n";
  }
  return out.str();
}

}  // namespace tsskp
