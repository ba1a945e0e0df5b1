#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "tsskp/instance_gen.hpp"
#include "tsskp/mip.hpp"
#include "tsskp/model.hpp"

namespace tsskp {

inline constexpr int kInstanceFormatVersion = 1;

// JSON syntax problem, located for the user.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line, int column)
      : std::runtime_error(what + " (line " + std::to_string(line) + ", column " +
                           std::to_string(column) + ")"),
        line(line),
        column(column) {}
  int line = 0;
  int column = 0;
};

// Structurally well-formed JSON that does not match the schema.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Parsed fine but the data violates instance/solution invariants.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<Violation> violations)
      : std::runtime_error(summary(violations)), violations(std::move(violations)) {}
  std::vector<Violation> violations;

 private:
  static std::string summary(const std::vector<Violation>& violations) {
    std::string out = "validation failed:";
    for (const Violation& v : violations) out += " [" + violation_text(v) + "]";
    return out;
  }
};

namespace io_detail {

using Json = nlohmann::json;

inline void require_keys(const Json& obj, std::initializer_list<const char*> required,
                         std::initializer_list<const char*> optional, const std::string& where) {
  if (!obj.is_object()) throw SchemaError(where + ": expected an object");
  for (const char* key : required)
    if (!obj.contains(key)) throw SchemaError(where + ": missing key '" + key + "'");
  for (const auto& [key, _] : obj.items()) {
    bool known = false;
    for (const char* k : required) known |= key == k;
    for (const char* k : optional) known |= key == k;
    if (!known) throw SchemaError(where + ": unknown key '" + key + "'");
  }
}

inline std::int64_t get_int(const Json& value, const std::string& where) {
  if (!value.is_number_integer())
    throw SchemaError(where + ": expected an integer, got " + value.dump());
  return value.get<std::int64_t>();
}

// Exact rationals only: a string ("p/q" or decimal) or a JSON integer.
// Non-integer JSON numbers are rejected because their binary value is not
// the decimal the user wrote.
inline Rat get_rat(const Json& value, const std::string& where) {
  if (value.is_string()) {
    try {
      return parse_rational(value.get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw SchemaError(where + ": " + e.what());
    }
  }
  if (value.is_number_integer()) return Rat(value.get<std::int64_t>());
  throw SchemaError(where + ": expected a rational as string (e.g. \"7/10\" or \"0.7\"), got " +
                    value.dump());
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    int line = 1, column = 1;
    for (std::size_t pos = 0; pos < std::min(text.size(), e.byte); ++pos) {
      if (text[pos] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ParseError(e.what(), line, column);
  }
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace io_detail

// ---------------------------------------------------------------------------
// Instance files
// ---------------------------------------------------------------------------

inline nlohmann::json instance_to_json(const Instance& inst) {
  using Json = nlohmann::json;
  Json doc;
  doc["format_version"] = kInstanceFormatVersion;
  Json items = Json::array();
  for (const Item& item : inst.items) {
    Json entry{{"w", item.weight}, {"v", item.volume}, {"r", item.reward},
               {"printable", item.printable}};
    if (item.printable) {
      entry["m"] = *item.material;
      entry["t"] = *item.print_time;
    }
    items.push_back(std::move(entry));
  }
  doc["items"] = std::move(items);
  doc["printer"] = {{"w_p", inst.printer.weight},
                    {"v_p", inst.printer.volume},
                    {"T", inst.printer.time_budget}};
  doc["material"] = {{"w_b", inst.material.weight}, {"v_b", inst.material.volume}};
  doc["capacity"] = {{"W", inst.capacity_weight}, {"V", inst.capacity_volume}};
  doc["alpha"] = rational_string(inst.alpha);
  Json scenarios = Json::array();
  for (const Scenario& scen : inst.scenarios)
    scenarios.push_back({{"q", rational_string(scen.probability)}, {"d", scen.demand}});
  doc["scenarios"] = std::move(scenarios);
  return doc;
}

inline Instance instance_from_json(const nlohmann::json& doc) {
  using io_detail::get_int;
  using io_detail::get_rat;
  using io_detail::require_keys;

  require_keys(doc, {"format_version", "items", "printer", "material", "capacity", "alpha",
                     "scenarios"},
               {}, "instance");
  if (get_int(doc["format_version"], "format_version") != kInstanceFormatVersion)
    throw SchemaError("unsupported format_version " + doc["format_version"].dump());

  Instance inst;
  if (!doc["items"].is_array()) throw SchemaError("items: expected an array");
  for (std::size_t i = 0; i < doc["items"].size(); ++i) {
    const auto& entry = doc["items"][i];
    const std::string where = "items[" + std::to_string(i) + "]";
    require_keys(entry, {"w", "v", "r", "printable"}, {"m", "t"}, where);
    Item item;
    item.weight = get_int(entry["w"], where + ".w");
    item.volume = get_int(entry["v"], where + ".v");
    item.reward = get_int(entry["r"], where + ".r");
    if (!entry["printable"].is_boolean()) throw SchemaError(where + ".printable: expected a bool");
    item.printable = entry["printable"].get<bool>();
    if (item.printable) {
      if (!entry.contains("m") || !entry.contains("t"))
        throw SchemaError(where + ": printable items need both 'm' and 't'");
      item.material = get_int(entry["m"], where + ".m");
      item.print_time = get_int(entry["t"], where + ".t");
    } else if (entry.contains("m") || entry.contains("t")) {
      throw SchemaError(where + ": non-printable items must not carry 'm' or 't'");
    }
    inst.items.push_back(item);
  }

  require_keys(doc["printer"], {"w_p", "v_p", "T"}, {}, "printer");
  inst.printer.weight = get_int(doc["printer"]["w_p"], "printer.w_p");
  inst.printer.volume = get_int(doc["printer"]["v_p"], "printer.v_p");
  inst.printer.time_budget = get_int(doc["printer"]["T"], "printer.T");

  require_keys(doc["material"], {"w_b", "v_b"}, {}, "material");
  inst.material.weight = get_int(doc["material"]["w_b"], "material.w_b");
  inst.material.volume = get_int(doc["material"]["v_b"], "material.v_b");

  require_keys(doc["capacity"], {"W", "V"}, {}, "capacity");
  inst.capacity_weight = get_int(doc["capacity"]["W"], "capacity.W");
  inst.capacity_volume = get_int(doc["capacity"]["V"], "capacity.V");

  inst.alpha = get_rat(doc["alpha"], "alpha");

  if (!doc["scenarios"].is_array()) throw SchemaError("scenarios: expected an array");
  for (std::size_t s = 0; s < doc["scenarios"].size(); ++s) {
    const auto& entry = doc["scenarios"][s];
    const std::string where = "scenarios[" + std::to_string(s) + "]";
    require_keys(entry, {"q", "d"}, {}, where);
    Scenario scen;
    scen.probability = get_rat(entry["q"], where + ".q");
    if (!entry["d"].is_array()) throw SchemaError(where + ".d: expected an array");
    for (std::size_t i = 0; i < entry["d"].size(); ++i)
      scen.demand.push_back(get_int(entry["d"][i], where + ".d[" + std::to_string(i) + "]"));
    inst.scenarios.push_back(std::move(scen));
  }

  if (const auto violations = validate_instance(inst); !violations.empty())
    throw ValidationError(violations);
  return inst;
}

inline void write_instance(const Instance& inst, const std::string& path) {
  io_detail::write_text_file(path, instance_to_json(inst).dump(2) + "\n");
}

inline Instance read_instance(const std::string& path) {
  return instance_from_json(io_detail::read_json_file(path));
}

// ---------------------------------------------------------------------------
// Generation trace sidecars
// ---------------------------------------------------------------------------

inline nlohmann::json trace_to_json(const GenTrace& trace) {
  return {{"seed", trace.seed},
          {"max_demand", trace.max_demand},
          {"realized",
           {{"W", trace.realized_weight}, {"V", trace.realized_volume},
            {"T", trace.realized_time}}}};
}

inline GenTrace trace_from_json(const nlohmann::json& doc) {
  io_detail::require_keys(doc, {"seed", "max_demand", "realized"}, {}, "trace");
  io_detail::require_keys(doc["realized"], {"W", "V", "T"}, {}, "trace.realized");
  GenTrace trace;
  trace.seed = doc["seed"].get<std::uint64_t>();
  for (const auto& v : doc["max_demand"])
    trace.max_demand.push_back(io_detail::get_int(v, "trace.max_demand"));
  trace.realized_weight = io_detail::get_int(doc["realized"]["W"], "trace.realized.W");
  trace.realized_volume = io_detail::get_int(doc["realized"]["V"], "trace.realized.V");
  trace.realized_time = io_detail::get_int(doc["realized"]["T"], "trace.realized.T");
  return trace;
}

inline void write_trace(const GenTrace& trace, const std::string& path) {
  io_detail::write_text_file(path, trace_to_json(trace).dump(2) + "\n");
}

inline GenTrace read_trace(const std::string& path) {
  return trace_from_json(io_detail::read_json_file(path));
}

// ---------------------------------------------------------------------------
// Solution files
// ---------------------------------------------------------------------------

struct SolutionFile {
  Rat objective;
  FirstStageDecision first_stage;
  std::vector<PrintPlan> plans;
  MipStatus status = MipStatus::OptimalWithinGap;
  std::int64_t nodes = 0;
  Rat gap;
};

inline nlohmann::json solution_to_json(const SolutionFile& sol) {
  using Json = nlohmann::json;
  Json doc;
  doc["format_version"] = kInstanceFormatVersion;
  doc["objective"] = {{"decimal", decimal_string(sol.objective, 9)},
                      {"rational", rational_string(sol.objective)}};
  doc["first_stage"] = {{"a", sol.first_stage.item_counts},
                        {"a_p", sol.first_stage.printers},
                        {"a_b", sol.first_stage.material_units}};
  Json plans = Json::array();
  for (const PrintPlan& plan : sol.plans)
    plans.push_back({{"s", plan.scenario}, {"a_s", plan.matched}, {"p", plan.prints}});
  doc["plans"] = std::move(plans);
  doc["solver_stats"] = {{"status", mip_status_name(sol.status)},
                         {"nodes", sol.nodes},
                         {"gap", rational_string(sol.gap)}};
  return doc;
}

inline void write_solution(const SolutionFile& sol, const std::string& path) {
  io_detail::write_text_file(path, solution_to_json(sol).dump(2) + "\n");
}

/// Loads and re-validates a solution against its instance: plan feasibility
/// and the exact objective must both check out.
inline SolutionFile read_solution(const std::string& path, const Instance& inst) {
  using io_detail::get_int;
  using io_detail::get_rat;
  using io_detail::require_keys;
  const nlohmann::json doc = io_detail::read_json_file(path);
  require_keys(doc, {"format_version", "objective", "first_stage", "plans", "solver_stats"}, {},
               "solution");
  require_keys(doc["objective"], {"decimal", "rational"}, {}, "objective");
  require_keys(doc["first_stage"], {"a", "a_p", "a_b"}, {}, "first_stage");
  require_keys(doc["solver_stats"], {"status", "nodes", "gap"}, {}, "solver_stats");

  SolutionFile sol;
  sol.objective = get_rat(doc["objective"]["rational"], "objective.rational");
  for (const auto& v : doc["first_stage"]["a"])
    sol.first_stage.item_counts.push_back(get_int(v, "first_stage.a"));
  sol.first_stage.printers = get_int(doc["first_stage"]["a_p"], "first_stage.a_p");
  sol.first_stage.material_units = get_int(doc["first_stage"]["a_b"], "first_stage.a_b");
  for (const auto& entry : doc["plans"]) {
    require_keys(entry, {"s", "a_s", "p"}, {}, "plans[]");
    PrintPlan plan;
    plan.scenario = static_cast<int>(get_int(entry["s"], "plans[].s"));
    for (const auto& v : entry["a_s"]) plan.matched.push_back(get_int(v, "plans[].a_s"));
    for (const auto& row : entry["p"]) {
      std::vector<std::int64_t> prints;
      for (const auto& v : row) prints.push_back(get_int(v, "plans[].p"));
      plan.prints.push_back(std::move(prints));
    }
    sol.plans.push_back(std::move(plan));
  }
  const std::string status = doc["solver_stats"]["status"].get<std::string>();
  bool known = false;
  for (MipStatus s : {MipStatus::OptimalWithinGap, MipStatus::NodeLimit, MipStatus::TimeLimit,
                      MipStatus::Infeasible})
    if (status == mip_status_name(s)) {
      sol.status = s;
      known = true;
    }
  if (!known) throw SchemaError("solver_stats.status: unknown status '" + status + "'");
  sol.nodes = get_int(doc["solver_stats"]["nodes"], "solver_stats.nodes");
  sol.gap = get_rat(doc["solver_stats"]["gap"], "solver_stats.gap");

  // Re-validate against the instance.
  std::vector<Violation> violations = check_decision_feasible(inst, sol.first_stage);
  if (sol.plans.size() != inst.scenarios.size())
    violations.push_back({ViolationCode::PlanShape,
                          "solution has " + std::to_string(sol.plans.size()) + " plans for " +
                              std::to_string(inst.scenarios.size()) + " scenarios"});
  if (violations.empty()) {
    for (const PrintPlan& plan : sol.plans) {
      const auto bad = check_plan_feasible(inst, sol.first_stage, plan);
      violations.insert(violations.end(), bad.begin(), bad.end());
    }
  }
  if (violations.empty() && expected_reward(inst, sol.first_stage, sol.plans) != sol.objective)
    violations.push_back(
        {ViolationCode::PlanShape, "stored objective does not match the stored plans"});
  if (!violations.empty()) throw ValidationError(violations);
  return sol;
}

}  // namespace tsskp
