// Command-line front end: generate instances, solve them through the
// deterministic equivalent, evaluate fixed first stages, run parameter
// sweeps, cross-check the solver against the brute-force oracle, and print
// printer bounds. Exit codes: 0 success, 1 validation/usage error, 2 solver
// limit reached.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tsskp/det_equiv.hpp"
#include "tsskp/experiments.hpp"
#include "tsskp/instance_gen.hpp"
#include "tsskp/instance_io.hpp"
#include "tsskp/mip.hpp"
#include "tsskp/model.hpp"
#include "tsskp/mps_io.hpp"
#include "tsskp/oracle.hpp"
#include "tsskp/printer_bound.hpp"

namespace {

using namespace tsskp;

void print_error(const std::string& code, const std::string& message) {
  std::cerr << "error: code=" << code << " msg=\"" << message << "\"\n";
}

double default_time_limit() {
  if (const char* env = std::getenv("TSSKP_TIME_LIMIT")) {
    try {
      return std::stod(env);
    } catch (const std::exception&) {
      std::cerr << "warning: ignoring unparsable TSSKP_TIME_LIMIT='" << env << "'\n";
    }
  }
  return 0.0;  // unlimited
}

std::vector<std::optional<Rat>> parse_grid(const std::string& text) {
  std::vector<std::optional<Rat>> out;
  std::stringstream in(text);
  std::string part;
  while (std::getline(in, part, ',')) {
    if (part == "inf")
      out.push_back(std::nullopt);
    else
      out.push_back(parse_rational(part));
  }
  if (out.empty()) throw std::invalid_argument("empty grid");
  return out;
}

FirstStageDecision parse_first_stage(const std::string& text, std::size_t item_count) {
  std::vector<std::int64_t> values;
  std::stringstream in(text);
  std::string part;
  while (std::getline(in, part, ',')) values.push_back(std::stoll(part));
  if (values.size() != item_count + 2)
    throw std::invalid_argument("--first-stage needs " + std::to_string(item_count + 2) +
                                " comma-separated integers (a_1..a_n, a_p, a_b)");
  FirstStageDecision decision;
  decision.item_counts.assign(values.begin(), values.end() - 2);
  decision.printers = values[values.size() - 2];
  decision.material_units = values.back();
  return decision;
}

struct SolveFlags {
  std::string instance_path;
  double gap = 0.001;
  double time_limit = -1.0;
  std::int64_t node_limit = 0;
  bool no_printers = false;
  std::string solution_path;
  std::string mps_path;
  bool mps_minimize = false;
};

int run_solve(const SolveFlags& flags) {
  const Instance inst = read_instance(flags.instance_path);
  std::int64_t printer_cap = 0;
  if (!flags.no_printers) printer_cap = printer_upper_bound(inst).printer_cap;
  const DetEquivModel model = build_det_equiv(inst, printer_cap, !flags.no_printers);

  if (!flags.mps_path.empty()) export_mps(model.problem, model.map, flags.mps_path,
                                          flags.mps_minimize);

  MipParams params;
  params.relative_gap = rat_from_double(flags.gap);
  params.node_limit = flags.node_limit;
  params.time_limit = flags.time_limit >= 0.0 ? flags.time_limit : default_time_limit();
  const MipResult result = solve_mip(model.problem, params);

  if (!result.has_incumbent) {
    print_error("solver_limit", std::string("no incumbent, status=") +
                                    mip_status_name(result.status));
    return 2;
  }
  std::int64_t printers = 0;
  for (int col : model.map.printer_vars)
    printers += static_cast<std::int64_t>(result.values[static_cast<std::size_t>(col)] > 0.5);
  std::cout << "objective=" << compact_string(result.objective)
            << " rational=" << rational_string(result.objective)
            << " status=" << mip_status_name(result.status) << " nodes=" << result.nodes
            << " branches=" << result.branches
            << " gap=" << (result.gap ? decimal_string(*result.gap, 6) : std::string("inf"))
            << " printers=" << printers << "\n";

  if (!flags.solution_path.empty()) {
    const ExtractedSolution extracted = extract_solution(inst, result, model.map);
    SolutionFile sol;
    sol.objective = result.objective;
    sol.first_stage = extracted.first_stage;
    sol.plans = extracted.plans;
    sol.status = result.status;
    sol.nodes = result.nodes;
    sol.gap = result.gap.value_or(Rat(0));
    write_solution(sol, flags.solution_path);
  }
  return result.status == MipStatus::OptimalWithinGap ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-stage stochastic 3D-printing knapsack solver"};
  app.require_subcommand(1);

  // --- gen ---------------------------------------------------------------
  auto* gen_cmd = app.add_subcommand("gen", "Generate a random instance");
  GenConfig gen_config;
  std::uint64_t gen_seed = 1;
  std::string gen_out;
  std::string gen_alpha = "0.8", gen_fraction = "1";
  gen_cmd->add_option("--items", gen_config.item_count, "Number of items");
  gen_cmd->add_option("--demand-limit", gen_config.demand_limit, "Demand upper limit D");
  gen_cmd->add_option("--scenarios", gen_config.scenario_count, "Number of scenarios");
  gen_cmd->add_option("--alpha", gen_alpha, "Printed-item quality factor");
  gen_cmd->add_option("--printer-weight", gen_config.printer_weight, "Printer weight");
  gen_cmd->add_option("--printer-volume", gen_config.printer_volume, "Printer volume");
  gen_cmd->add_option("--pisinger-range", gen_config.pisinger_range, "Weight/reward range R");
  gen_cmd->add_option("--printable-fraction", gen_fraction, "Fraction of printable items");
  gen_cmd->add_option("--seed", gen_seed, "Generator seed")->required();
  gen_cmd->add_option("--out", gen_out, "Output instance path")->required();

  // --- solve ---------------------------------------------------------------
  auto* solve_cmd = app.add_subcommand("solve", "Solve an instance exactly or to a gap");
  SolveFlags solve_flags;
  solve_cmd->add_option("--instance", solve_flags.instance_path, "Instance file")->required();
  solve_cmd->add_option("--gap", solve_flags.gap, "Relative optimality gap (default 0.001)");
  solve_cmd->add_option("--time-limit", solve_flags.time_limit, "Time limit in seconds");
  solve_cmd->add_option("--node-limit", solve_flags.node_limit, "Branch-and-bound node limit");
  solve_cmd->add_flag("--no-printers", solve_flags.no_printers,
                      "Forbid printers and printing material");
  solve_cmd->add_option("--out-solution", solve_flags.solution_path, "Write the solution here");
  solve_cmd->add_option("--export-mps", solve_flags.mps_path, "Write the model as free MPS");
  solve_cmd->add_flag("--mps-minimize", solve_flags.mps_minimize,
                      "Emit a negated-objective minimization (no OBJSENSE)");

  // --- eval ----------------------------------------------------------------
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a fixed first-stage decision");
  std::string eval_instance, eval_first_stage;
  eval_cmd->add_option("--instance", eval_instance, "Instance file")->required();
  eval_cmd->add_option("--first-stage", eval_first_stage, "a_1,..,a_n,a_p,a_b")->required();

  // --- sweep ---------------------------------------------------------------
  auto* sweep_cmd = app.add_subcommand("sweep", "Run a parameter sweep and write a CSV report");
  SweepSpec sweep_spec;
  std::string sweep_aspect, sweep_grid, sweep_csv, sweep_alpha = "0.8";
  double sweep_gap = 0.001, sweep_time_limit = -1.0;
  sweep_cmd->add_option("--aspect", sweep_aspect,
                        "alpha|printer_size_k|material_efficiency_l|print_time_m|demand_limit_D")
      ->required();
  sweep_cmd->add_option("--grid", sweep_grid, "Comma-separated values, 'inf' allowed")->required();
  sweep_cmd->add_option("--per-value", sweep_spec.instances_per_value, "Instances per grid value");
  sweep_cmd->add_option("--seed", sweep_spec.base_seed, "Base seed")->required();
  sweep_cmd->add_option("--out-csv", sweep_csv, "Report path")->required();
  sweep_cmd->add_option("--items", sweep_spec.base.item_count, "Items per instance");
  sweep_cmd->add_option("--demand-limit", sweep_spec.base.demand_limit, "Demand limit D");
  sweep_cmd->add_option("--scenarios", sweep_spec.base.scenario_count, "Scenarios per instance");
  sweep_cmd->add_option("--alpha", sweep_alpha, "Base quality factor");
  sweep_cmd->add_option("--gap", sweep_gap, "Per-solve relative gap");
  sweep_cmd->add_option("--time-limit", sweep_time_limit, "Per-solve time limit in seconds");
  sweep_cmd->add_option("--jobs", sweep_spec.jobs, "Concurrent solves");

  // --- oracle-check ----------------------------------------------------------
  auto* oracle_cmd =
      app.add_subcommand("oracle-check", "Cross-check the solver against brute force");
  TinyConfig tiny;
  int oracle_count = 200;
  std::uint64_t oracle_seed = 1;
  oracle_cmd->add_option("--count", oracle_count, "Number of tiny instances");
  oracle_cmd->add_option("--max-items", tiny.max_items, "Maximum items");
  oracle_cmd->add_option("--max-scenarios", tiny.max_scenarios, "Maximum scenarios");
  oracle_cmd->add_option("--max-demand", tiny.max_demand, "Maximum per-item demand");
  oracle_cmd->add_option("--seed", oracle_seed, "Base seed");

  // --- bound -----------------------------------------------------------------
  auto* bound_cmd = app.add_subcommand("bound", "Print the printer upper bound");
  std::string bound_instance;
  bound_cmd->add_option("--instance", bound_instance, "Instance file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen_cmd->parsed()) {
      gen_config.alpha = parse_rational(gen_alpha);
      gen_config.printable_fraction = parse_rational(gen_fraction);
      const GenResult result = generate(gen_config, gen_seed);
      write_instance(result.instance, gen_out);
      write_trace(result.trace, gen_out + ".trace.json");
      std::cout << "wrote " << gen_out << " (trace " << gen_out << ".trace.json) seed=" << gen_seed
                << "\n";
      return 0;
    }
    if (solve_cmd->parsed()) return run_solve(solve_flags);
    if (eval_cmd->parsed()) {
      const Instance inst = read_instance(eval_instance);
      const FirstStageDecision decision = parse_first_stage(eval_first_stage, inst.items.size());
      if (const auto bad = check_decision_feasible(inst, decision); !bad.empty()) {
        print_error(violation_code_name(bad.front().code), bad.front().detail);
        return 1;
      }
      MipParams params;
      params.time_limit = default_time_limit();
      const Rat value = evaluate_first_stage(inst, decision, params);
      std::cout << "expected_reward=" << compact_string(value)
                << " rational=" << rational_string(value) << "\n";
      return 0;
    }
    if (sweep_cmd->parsed()) {
      const auto aspect = parse_sweep_aspect(sweep_aspect);
      if (!aspect) {
        print_error("unknown_aspect", "no such sweep aspect: " + sweep_aspect);
        return 1;
      }
      sweep_spec.aspect = *aspect;
      sweep_spec.base.alpha = parse_rational(sweep_alpha);
      sweep_spec.grid = parse_grid(sweep_grid);
      sweep_spec.params.relative_gap = rat_from_double(sweep_gap);
      sweep_spec.params.time_limit = sweep_time_limit >= 0.0 ? sweep_time_limit
                                                             : default_time_limit();
      const SweepReport report = run_sweep(sweep_spec);
      io_detail::write_text_file(sweep_csv, sweep_report_csv(report));
      int fails = 0;
      for (const SweepRow& row : report.rows) fails += row.fails;
      std::cout << "wrote " << sweep_csv << " rows=" << report.rows.size() << " fails=" << fails
                << "\n";
      return 0;
    }
    if (oracle_cmd->parsed()) {
      int matches = 0;
      for (int k = 0; k < oracle_count; ++k) {
        const Instance inst = random_tiny_instance(tiny, oracle_seed + static_cast<std::uint64_t>(k));
        const FullOpt reference = brute_force_full(inst);
        const DetEquivModel model =
            build_det_equiv(inst, printer_upper_bound(inst).printer_cap, true);
        MipParams params;
        params.relative_gap = 0;
        const MipResult result = solve_mip(model.problem, params);
        if (result.has_incumbent && result.objective == reference.value) {
          ++matches;
        } else {
          std::cerr << "mismatch at seed " << oracle_seed + static_cast<std::uint64_t>(k)
                    << ": oracle=" << rational_string(reference.value) << " solver="
                    << (result.has_incumbent ? rational_string(result.objective)
                                             : std::string("none"))
                    << "\n";
        }
      }
      std::cout << matches << "/" << oracle_count << " match\n";
      return matches == oracle_count ? 0 : 1;
    }
    if (bound_cmd->parsed()) {
      const Instance inst = read_instance(bound_instance);
      const BoundResult bound = printer_upper_bound(inst);
      for (std::size_t i : bound.unprintable_items)
        std::cerr << "warning: item " << i + 1 << " can never be printed (t="
                  << *inst.items[i].print_time << ", T=" << inst.printer.time_budget << ")\n";
      std::cout << "U=" << bound.max_needed << " Z=" << bound.printer_cap << " cap_weight="
                << (bound.cap_weight ? std::to_string(*bound.cap_weight) : std::string("inf"))
                << " cap_volume="
                << (bound.cap_volume ? std::to_string(*bound.cap_volume) : std::string("inf"))
                << " per_scenario=";
      for (std::size_t s = 0; s < bound.per_scenario.size(); ++s)
        std::cout << (s ? "," : "") << bound.per_scenario[s];
      std::cout << "\n";
      return 0;
    }
  } catch (const ParseError& e) {
    print_error("parse", e.what());
    return 1;
  } catch (const ValidationError& e) {
    for (const Violation& v : e.violations)
      print_error(violation_code_name(v.code), v.detail);
    return 1;
  } catch (const SchemaError& e) {
    print_error("schema", e.what());
    return 1;
  } catch (const OracleLimitError& e) {
    print_error("oracle_limit", e.what());
    return 1;
  } catch (const MipError& e) {
    print_error("solver", e.what());
    return 2;
  } catch (const std::exception& e) {
    print_error("invalid", e.what());
    return 1;
  }
  return 0;
}
