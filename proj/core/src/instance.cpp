#include "ptc/instance.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace ptc {

using json = nlohmann::json;

bool Family::qualifiedOn(int machine) const {
  return std::binary_search(qualifiedMachines.begin(), qualifiedMachines.end(),
                            machine);
}

InstanceError::InstanceError(Kind kind, std::string path,
                             const std::string& what)
    : std::runtime_error(path.empty() ? what : path + ": " + what),
      kind_(kind),
      path_(std::move(path)) {}

namespace {

[[noreturn]] void semantic(const std::string& path, const std::string& what) {
  throw InstanceError(InstanceError::Kind::Semantic, path, what);
}

std::string familyPath(std::size_t index) {
  return "/families/" + std::to_string(index);
}

}  // namespace

Instance::Instance(int machineCount, std::vector<Family> families)
    : machineCount_(machineCount), families_(std::move(families)) {
  if (machineCount_ < 1) semantic("/machines", "at least one machine required");
  if (families_.empty()) semantic("/families", "at least one family required");

  std::vector<bool> covered(machineCount_ + 1, false);
  for (std::size_t i = 0; i < families_.size(); ++i) {
    Family& f = families_[i];
    const std::string path = familyPath(i);
    if (f.id != static_cast<int>(i) + 1)
      semantic(path + "/id", "family ids must be 1..F in file order");
    if (f.jobCount < 1) semantic(path + "/jobs", "must be >= 1");
    if (f.processing < 1) semantic(path + "/processing", "must be >= 1");
    if (f.setup < 0) semantic(path + "/setup", "must be >= 0");
    if (f.threshold < 1) semantic(path + "/threshold", "must be >= 1");
    if (f.qualifiedMachines.empty())
      semantic(path + "/qualified", "family needs at least one machine");
    std::sort(f.qualifiedMachines.begin(), f.qualifiedMachines.end());
    if (std::adjacent_find(f.qualifiedMachines.begin(),
                           f.qualifiedMachines.end()) !=
        f.qualifiedMachines.end())
      semantic(path + "/qualified", "duplicate machine");
    for (int m : f.qualifiedMachines) {
      if (m < 1 || m > machineCount_)
        semantic(path + "/qualified",
                 "machine " + std::to_string(m) + " outside 1.." +
                     std::to_string(machineCount_));
      covered[m] = true;
    }
    firstJob_.push_back(jobCount_ + 1);
    jobCount_ += f.jobCount;
    pairCount_ += static_cast<int>(f.qualifiedMachines.size());
    horizon_ += f.jobCount * (f.processing + f.setup);
  }
  for (int m = 1; m <= machineCount_; ++m)
    if (!covered[m])
      semantic("/machines",
               "machine " + std::to_string(m) + " is qualified for no family");
}

ObjectiveSpec ObjectiveSpec::weightedDisqPriority(const Instance& inst) {
  return {ObjectiveMode::WeightedSum, 1, inst.jobCount() * inst.horizon()};
}

std::string to_string(ObjectiveMode mode) {
  switch (mode) {
    case ObjectiveMode::WeightedSum: return "weighted-sum";
    case ObjectiveMode::LexDisqThenFlow: return "lex-disq-flow";
    case ObjectiveMode::FlowOnly: return "flow";
  }
  return "?";
}

namespace {

std::int64_t readInt(const json& obj, const char* key, const std::string& path) {
  auto it = obj.find(key);
  const std::string fieldPath = path + "/" + key;
  if (it == obj.end()) semantic(fieldPath, "missing field");
  if (!it->is_number_integer())
    semantic(fieldPath, "expected an integer");
  return it->get<std::int64_t>();
}

void rejectUnknown(const json& obj, std::initializer_list<const char*> known,
                   const std::string& path) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = std::any_of(known.begin(), known.end(),
                          [&](const char* k) { return it.key() == k; });
    if (!ok) semantic(path + "/" + it.key(), "unknown field");
  }
}

int narrow(std::int64_t v, const std::string& path) {
  if (v < -1'000'000'000 || v > 1'000'000'000) semantic(path, "out of range");
  return static_cast<int>(v);
}

}  // namespace

Instance parse_instance(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw InstanceError(InstanceError::Kind::Syntax, "", e.what());
  }
  if (!doc.is_object()) semantic("", "top level must be an object");
  rejectUnknown(doc, {"machines", "families"}, "");
  const int machines = narrow(readInt(doc, "machines", ""), "/machines");

  auto fams = doc.find("families");
  if (fams == doc.end()) semantic("/families", "missing field");
  if (!fams->is_array()) semantic("/families", "expected an array");

  std::vector<Family> families;
  for (std::size_t i = 0; i < fams->size(); ++i) {
    const json& entry = (*fams)[i];
    const std::string path = familyPath(i);
    if (!entry.is_object()) semantic(path, "expected an object");
    rejectUnknown(entry,
                  {"id", "jobs", "processing", "setup", "threshold", "qualified"},
                  path);
    Family f;
    f.id = narrow(readInt(entry, "id", path), path + "/id");
    f.jobCount = narrow(readInt(entry, "jobs", path), path + "/jobs");
    f.processing = readInt(entry, "processing", path);
    f.setup = readInt(entry, "setup", path);
    f.threshold = readInt(entry, "threshold", path);
    auto q = entry.find("qualified");
    if (q == entry.end()) semantic(path + "/qualified", "missing field");
    if (!q->is_array()) semantic(path + "/qualified", "expected an array");
    for (std::size_t k = 0; k < q->size(); ++k) {
      const json& m = (*q)[k];
      const std::string mp = path + "/qualified/" + std::to_string(k);
      if (!m.is_number_integer()) semantic(mp, "expected an integer");
      f.qualifiedMachines.push_back(narrow(m.get<std::int64_t>(), mp));
    }
    families.push_back(std::move(f));
  }
  return Instance(machines, std::move(families));
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InstanceError(InstanceError::Kind::Syntax, "", "cannot open instance file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_instance(buf.str());
}

std::string render_instance(const Instance& inst) {
  json fams = json::array();
  for (const Family& f : inst.families()) {
    fams.push_back(json{{"id", f.id},
                        {"jobs", f.jobCount},
                        {"processing", f.processing},
                        {"setup", f.setup},
                        {"threshold", f.threshold},
                        {"qualified", f.qualifiedMachines}});
  }
  json doc{{"machines", inst.machineCount()}, {"families", fams}};
  return doc.dump(2) + "\n";
}

Time makespan_upper_bound(const Instance& inst) { return inst.horizon(); }

Time makespan_lower_bound(const Instance& inst) {
  Time work = 0;
  for (const Family& f : inst.families()) work += f.jobCount * f.processing;
  const Time m = inst.machineCount();
  return (work + m - 1) / m;
}

int family_of(const Instance& inst, int job) {
  if (job < 1 || job > inst.jobCount())
    throw std::out_of_range("job index " + std::to_string(job) +
                            " outside 1.." + std::to_string(inst.jobCount()));
  // Families are few; a linear scan is fine.
  for (int f = inst.familyCount(); f >= 1; --f)
    if (inst.firstJob(f) <= job) return f;
  return 1;
}

}  // namespace ptc
