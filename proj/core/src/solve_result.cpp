#include "ptc/solve_result.hpp"

#include <nlohmann/json.hpp>

namespace ptc {

using json = nlohmann::json;

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Feasible: return "feasible";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Unknown: return "unknown";
  }
  return "?";
}

namespace {

json objectiveJson(const ObjectiveValue& v, const ObjectiveSpec& spec) {
  json j{{"flow", v.flowTime},
         {"cmax", v.cmax},
         {"disqualified", v.disqCount},
         {"qualified", v.qualifiedCount}};
  if (spec.mode == ObjectiveMode::WeightedSum) j["weighted"] = v.weighted;
  return j;
}

json keyJson(const ObjectiveKey& k, const ObjectiveSpec& spec) {
  if (spec.mode == ObjectiveMode::LexDisqThenFlow)
    return json{{"disqualified", k.primary}, {"flow", k.secondary}};
  return k.primary;
}

}  // namespace

std::string render_result(const SolveResult& r, const ObjectiveSpec& spec) {
  json doc;
  doc["status"] = to_string(r.status);
  doc["objective_mode"] = to_string(spec.mode);
  if (spec.mode == ObjectiveMode::WeightedSum) doc["beta"] = spec.beta;
  doc["nodes"] = r.stats.nodes;
  doc["wall_time"] = r.stats.wallSeconds;
  doc["dual_bound"] = r.dualBound ? keyJson(*r.dualBound, spec) : json(nullptr);
  doc["objective"] =
      r.objective ? objectiveJson(*r.objective, spec) : json(nullptr);
  json inc = json::array();
  for (const Incumbent& i : r.stats.incumbents)
    inc.push_back({{"t", i.seconds}, {"objective", objectiveJson(i.objective, spec)}});
  doc["incumbents"] = inc;
  json arr = json::array();
  if (r.schedule)
    for (const Assignment& a : r.schedule->assignments)
      arr.push_back({{"job", a.job}, {"machine", a.machine}, {"start", a.start}});
  doc["assignments"] = arr;
  if (!r.message.empty()) doc["message"] = r.message;
  return doc.dump(2) + "\n";
}

}  // namespace ptc
