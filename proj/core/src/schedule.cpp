#include "ptc/schedule.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace ptc {

using json = nlohmann::json;

void Schedule::normalize() {
  std::sort(assignments.begin(), assignments.end(),
            [](const Assignment& a, const Assignment& b) { return a.job < b.job; });
}

std::string to_string(Violation::Kind kind) {
  switch (kind) {
    case Violation::Kind::NotQualified: return "not-qualified";
    case Violation::Kind::BadStart: return "negative-start";
    case Violation::Kind::BeyondHorizon: return "beyond-horizon";
    case Violation::Kind::Overlap: return "overlap";
    case Violation::Kind::QualificationGap: return "qualification-gap";
  }
  return "?";
}

std::string Violation::describe() const {
  std::ostringstream os;
  os << to_string(kind) << ": job " << job << " (family " << family
     << ") on machine " << machine << " at " << time;
  switch (kind) {
    case Kind::Overlap:
      os << ", earliest allowed " << limit << " after job " << otherJob;
      break;
    case Kind::QualificationGap:
      os << ", latest allowed " << limit;
      if (otherJob != 0) os << " after job " << otherJob;
      else os << " from schedule start";
      break;
    case Kind::BeyondHorizon:
      os << ", must end by " << limit;
      break;
    default:
      break;
  }
  return os.str();
}

std::vector<PairStatus> DisqualificationReport::lost() const {
  std::vector<PairStatus> out;
  for (const PairStatus& e : entries)
    if (e.lost) out.push_back(e);
  return out;
}

ObjectiveKey make_key(const ObjectiveSpec& spec, std::int64_t flow,
                      std::int64_t disq) {
  switch (spec.mode) {
    case ObjectiveMode::WeightedSum:
      return {spec.alpha * flow + spec.beta * disq, 0};
    case ObjectiveMode::LexDisqThenFlow:
      return {disq, flow};
    case ObjectiveMode::FlowOnly:
      return {flow, 0};
  }
  return {};
}

ObjectiveKey key_of(const ObjectiveValue& value, const ObjectiveSpec& spec) {
  return make_key(spec, value.flowTime, value.disqCount);
}

namespace {

// Validates coverage and returns, for each job (0-based), its assignment.
std::vector<Assignment> byJob(const Instance& inst, const Schedule& sched) {
  const int n = inst.jobCount();
  if (static_cast<int>(sched.assignments.size()) != n)
    throw ScheduleError("schedule has " +
                        std::to_string(sched.assignments.size()) +
                        " assignments for " + std::to_string(n) + " jobs");
  std::vector<Assignment> out(n);
  std::vector<bool> seen(n, false);
  for (const Assignment& a : sched.assignments) {
    if (a.job < 1 || a.job > n)
      throw ScheduleError("job index " + std::to_string(a.job) + " out of range");
    if (seen[a.job - 1])
      throw ScheduleError("job " + std::to_string(a.job) + " assigned twice");
    seen[a.job - 1] = true;
    out[a.job - 1] = a;
  }
  return out;
}

std::vector<int> jobFamilies(const Instance& inst) {
  std::vector<int> fam;
  fam.reserve(inst.jobCount());
  for (const Family& f : inst.families())
    fam.insert(fam.end(), f.jobCount, f.id);
  return fam;
}

}  // namespace

std::vector<Violation> check_feasibility(const Instance& inst,
                                         const Schedule& sched) {
  const std::vector<Assignment> jobs = byJob(inst, sched);
  const std::vector<int> fam = jobFamilies(inst);
  const Time horizon = inst.horizon();
  std::vector<Violation> out;

  for (const Assignment& a : jobs) {
    const Family& f = inst.family(fam[a.job - 1]);
    if (!f.qualifiedOn(a.machine))
      out.push_back({Violation::Kind::NotQualified, a.job, 0, f.id, a.machine,
                     a.start, 0});
    if (a.start < 0)
      out.push_back(
          {Violation::Kind::BadStart, a.job, 0, f.id, a.machine, a.start, 0});
    if (a.start + f.processing > horizon)
      out.push_back({Violation::Kind::BeyondHorizon, a.job, 0, f.id, a.machine,
                     a.start, horizon});
  }

  // Machine sequences: consecutive jobs must respect end + incoming setup.
  std::vector<std::vector<const Assignment*>> perMachine(inst.machineCount() + 1);
  for (const Assignment& a : jobs)
    if (a.machine >= 1 && a.machine <= inst.machineCount())
      perMachine[a.machine].push_back(&a);
  for (auto& seq : perMachine) {
    std::sort(seq.begin(), seq.end(), [](const Assignment* x, const Assignment* y) {
      return x->start != y->start ? x->start < y->start : x->job < y->job;
    });
    for (std::size_t k = 1; k < seq.size(); ++k) {
      const Assignment& prev = *seq[k - 1];
      const Assignment& next = *seq[k];
      const Family& fp = inst.family(fam[prev.job - 1]);
      const Family& fn = inst.family(fam[next.job - 1]);
      const Time earliest =
          prev.start + fp.processing + (fp.id != fn.id ? fn.setup : 0);
      if (next.start < earliest)
        out.push_back({Violation::Kind::Overlap, next.job, prev.job, fn.id,
                       next.machine, next.start, earliest});
    }
  }

  // Qualification windows, start-to-start, with a virtual start at time 0.
  for (const Family& f : inst.families()) {
    for (int m : f.qualifiedMachines) {
      std::vector<const Assignment*> starts;
      for (const Assignment* a : perMachine[m])
        if (fam[a->job - 1] == f.id) starts.push_back(a);
      Time prev = 0;
      int prevJob = 0;
      for (const Assignment* a : starts) {  // already sorted by start
        if (a->start - prev > f.threshold)
          out.push_back({Violation::Kind::QualificationGap, a->job, prevJob,
                         f.id, m, a->start, prev + f.threshold});
        prev = a->start;
        prevJob = a->job;
      }
    }
  }
  return out;
}

bool is_feasible(const Instance& inst, const Schedule& sched) {
  return check_feasibility(inst, sched).empty();
}

MakespanFlow compute_makespan_flow(const Instance& inst, const Schedule& sched) {
  const std::vector<Assignment> jobs = byJob(inst, sched);
  const std::vector<int> fam = jobFamilies(inst);
  MakespanFlow r;
  for (const Assignment& a : jobs) {
    const Time end = a.start + inst.family(fam[a.job - 1]).processing;
    r.cmax = std::max(r.cmax, end);
    r.flowTime += end;
  }
  return r;
}

DisqualificationReport compute_disqualifications(const Instance& inst,
                                                 const Schedule& sched) {
  if (!is_feasible(inst, sched))
    throw ScheduleError("disqualifications require a feasible schedule");
  const std::vector<int> fam = jobFamilies(inst);
  const Time cmax = compute_makespan_flow(inst, sched).cmax;

  DisqualificationReport report;
  for (const Family& f : inst.families()) {
    for (int m : f.qualifiedMachines) {
      Time last = 0;
      for (const Assignment& a : sched.assignments)
        if (a.machine == m && fam[a.job - 1] == f.id)
          last = std::max(last, a.start);
      PairStatus st{f.id, m, false, 0};
      if (last + f.threshold < cmax) {
        st.lost = true;
        st.at = last + f.threshold;
        ++report.disqCount;
      } else {
        ++report.qualifiedCount;
      }
      report.entries.push_back(st);
    }
  }
  return report;
}

ObjectiveValue evaluate(const Instance& inst, const Schedule& sched,
                        const ObjectiveSpec& spec) {
  const DisqualificationReport disq = compute_disqualifications(inst, sched);
  const MakespanFlow mf = compute_makespan_flow(inst, sched);
  ObjectiveValue v;
  v.flowTime = mf.flowTime;
  v.cmax = mf.cmax;
  v.disqCount = disq.disqCount;
  v.qualifiedCount = disq.qualifiedCount;
  if (spec.mode == ObjectiveMode::WeightedSum)
    v.weighted = spec.alpha * v.flowTime + spec.beta * v.disqCount;
  v.spec = spec;
  return v;
}

std::strong_ordering compare(const ObjectiveValue& a, const ObjectiveValue& b,
                             const ObjectiveSpec& spec) {
  if (!(a.spec == spec) || !(b.spec == spec))
    throw std::invalid_argument("objective values evaluated under another spec");
  return key_of(a, spec) <=> key_of(b, spec);
}

Schedule parse_schedule(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ScheduleError(std::string("solution syntax error: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("assignments") ||
      !doc["assignments"].is_array())
    throw ScheduleError("solution must be {\"assignments\": [...]}");
  Schedule s;
  for (const json& a : doc["assignments"]) {
    if (!a.is_object()) throw ScheduleError("assignment must be an object");
    for (const char* key : {"job", "machine", "start"})
      if (!a.contains(key) || !a[key].is_number_integer())
        throw ScheduleError(std::string("assignment field '") + key +
                            "' must be an integer");
    s.assignments.push_back({a["job"].get<int>(), a["machine"].get<int>(),
                             a["start"].get<Time>()});
  }
  s.normalize();
  return s;
}

Schedule load_schedule(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScheduleError("cannot open solution file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_schedule(buf.str());
}

std::string render_schedule(const Schedule& sched) {
  json arr = json::array();
  for (const Assignment& a : sched.assignments)
    arr.push_back({{"job", a.job}, {"machine", a.machine}, {"start", a.start}});
  return json{{"assignments", arr}}.dump(2) + "\n";
}

std::string render_evaluation(const Instance& inst, const Schedule& sched,
                              const ObjectiveSpec& spec) {
  const std::vector<Violation> violations = check_feasibility(inst, sched);
  const MakespanFlow mf = compute_makespan_flow(inst, sched);
  json doc;
  doc["feasible"] = violations.empty();
  json vs = json::array();
  for (const Violation& v : violations)
    vs.push_back({{"kind", to_string(v.kind)},
                  {"job", v.job},
                  {"other_job", v.otherJob},
                  {"family", v.family},
                  {"machine", v.machine},
                  {"time", v.time},
                  {"limit", v.limit},
                  {"message", v.describe()}});
  doc["violations"] = vs;
  doc["cmax"] = mf.cmax;
  doc["flow"] = mf.flowTime;
  json lost = json::array();
  if (violations.empty()) {
    const ObjectiveValue v = evaluate(inst, sched, spec);
    for (const PairStatus& p : compute_disqualifications(inst, sched).lost())
      lost.push_back({{"family", p.family}, {"machine", p.machine}, {"at", p.at}});
    json obj{{"mode", to_string(spec.mode)},
             {"flow", v.flowTime},
             {"disqualified", v.disqCount},
             {"qualified", v.qualifiedCount}};
    if (spec.mode == ObjectiveMode::WeightedSum) {
      obj["beta"] = spec.beta;
      obj["weighted"] = v.weighted;
    }
    doc["objective"] = obj;
  } else {
    doc["objective"] = nullptr;
  }
  doc["disqualified"] = lost;
  return doc.dump(2) + "\n";
}

}  // namespace ptc
