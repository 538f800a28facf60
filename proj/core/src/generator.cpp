#include "ptc/generator.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <stdexcept>

namespace ptc {

std::string to_string(ThresholdClass c) {
  switch (c) {
    case ThresholdClass::Small: return "small";
    case ThresholdClass::Medium: return "medium";
    case ThresholdClass::Large: return "large";
  }
  return "?";
}

ThresholdClass parse_threshold_class(std::string_view text) {
  if (text == "small") return ThresholdClass::Small;
  if (text == "medium") return ThresholdClass::Medium;
  if (text == "large") return ThresholdClass::Large;
  throw std::invalid_argument("unknown threshold class: " + std::string(text));
}

const std::vector<SetShape>& table1_presets() {
  static const std::vector<SetShape> presets = {
      {20, 3, 4}, {20, 3, 5}, {20, 4, 2}, {20, 4, 3}, {20, 4, 4},
      {20, 4, 5}, {30, 3, 2}, {30, 3, 3}, {30, 3, 4}, {30, 3, 5},
      {30, 4, 4}, {30, 5, 5}, {40, 3, 3}, {50, 3, 3}, {60, 3, 4},
      {60, 3, 5}, {70, 3, 5}, {70, 4, 4}, {70, 4, 5}};
  return presets;
}

Instance generate(const GeneratorConfig& cfg) {
  if (cfg.jobs < 1 || cfg.machines < 1 || cfg.families < 1)
    throw std::invalid_argument("jobs, machines and families must be >= 1");
  if (cfg.families > cfg.jobs)
    throw std::invalid_argument("more families than jobs");

  std::mt19937_64 rng(cfg.seed);
  auto uniform = [&](Time lo, Time hi) {
    return std::uniform_int_distribution<Time>(lo, hi)(rng);
  };

  const int F = cfg.families;
  const int M = cfg.machines;
  std::vector<Family> fams(F);
  for (int i = 0; i < F; ++i) {
    fams[i].id = i + 1;
    fams[i].jobCount = cfg.jobs / F + (i < cfg.jobs % F ? 1 : 0);
    fams[i].processing = uniform(1, 10);
  }
  Time minP = fams[0].processing;
  Time maxP = fams[0].processing;
  for (const Family& f : fams) {
    minP = std::min(minP, f.processing);
    maxP = std::max(maxP, f.processing);
  }
  for (Family& f : fams) f.setup = uniform(1, minP);

  Time lo = maxP;
  Time hi = 2 * maxP;
  if (cfg.thresholdClass == ThresholdClass::Medium) {
    lo = 2 * maxP + 1;
    hi = 3 * maxP;
  } else if (cfg.thresholdClass == ThresholdClass::Large) {
    lo = 3 * maxP + 1;
    hi = 4 * maxP;
  }
  for (Family& f : fams) f.threshold = uniform(lo, hi);

  // Uniform non-empty subset by rejection, then cover idle machines.
  std::bernoulli_distribution coin(0.5);
  std::vector<bool> covered(M + 1, false);
  for (Family& f : fams) {
    do {
      f.qualifiedMachines.clear();
      for (int m = 1; m <= M; ++m)
        if (coin(rng)) f.qualifiedMachines.push_back(m);
    } while (f.qualifiedMachines.empty());
    for (int m : f.qualifiedMachines) covered[m] = true;
  }
  for (int m = 1; m <= M; ++m) {
    if (covered[m]) continue;
    Family& f = fams[uniform(0, F - 1)];
    f.qualifiedMachines.insert(
        std::upper_bound(f.qualifiedMachines.begin(), f.qualifiedMachines.end(), m), m);
  }
  return Instance(M, std::move(fams));
}

std::vector<std::string> structural_violations(const Instance& inst) {
  std::vector<std::string> out;
  std::vector<bool> covered(inst.machineCount() + 1, false);
  Time maxP = 0, minP = 0, maxS = 0, minG = 0;
  bool first = true;
  for (const Family& f : inst.families()) {
    if (f.qualifiedMachines.empty())
      out.push_back("family " + std::to_string(f.id) + " has no machine");
    for (int m : f.qualifiedMachines) covered[m] = true;
    if (first) {
      maxP = minP = f.processing;
      maxS = f.setup;
      minG = f.threshold;
      first = false;
    }
    maxP = std::max(maxP, f.processing);
    minP = std::min(minP, f.processing);
    maxS = std::max(maxS, f.setup);
    minG = std::min(minG, f.threshold);
  }
  for (int m = 1; m <= inst.machineCount(); ++m)
    if (!covered[m]) out.push_back("machine " + std::to_string(m) + " has no family");
  if (maxP > minG) out.push_back("max p exceeds min gamma");
  if (maxS > minP) out.push_back("max s exceeds min p");
  return out;
}

std::string instance_file_name(const GeneratorConfig& cfg, int index) {
  return "ptc_N" + std::to_string(cfg.jobs) + "_M" + std::to_string(cfg.machines) +
         "_F" + std::to_string(cfg.families) + "_" + to_string(cfg.thresholdClass) +
         "_" + std::to_string(index) + ".json";
}

namespace {

// splitmix64 finalizer: spreads (base seed, class, index) into a new seed.
std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::vector<GeneratedInstance> generate_class(const GeneratorConfig& cfg,
                                              int count) {
  std::vector<GeneratedInstance> out;
  for (int k = 1; k <= count; ++k) {
    GeneratorConfig c = cfg;
    c.seed = mix(mix(cfg.seed) ^ (static_cast<std::uint64_t>(cfg.thresholdClass) << 32) ^
                 static_cast<std::uint64_t>(k));
    out.push_back({c, k, instance_file_name(cfg, k), generate(c)});
  }
  return out;
}

std::vector<GeneratedInstance> generate_set(const SetShape& shape,
                                            std::uint64_t seed, int perClass) {
  std::vector<GeneratedInstance> out;
  for (ThresholdClass c :
       {ThresholdClass::Small, ThresholdClass::Medium, ThresholdClass::Large}) {
    auto part = generate_class({shape.jobs, shape.machines, shape.families, c, seed},
                               perClass);
    std::move(part.begin(), part.end(), std::back_inserter(out));
  }
  return out;
}

std::vector<std::filesystem::path> write_instances(
    const std::vector<GeneratedInstance>& set, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());
  std::vector<std::filesystem::path> paths;
  for (const GeneratedInstance& g : set) {
    const auto path = dir / g.fileName;
    std::ofstream out(path, std::ios::binary);
    out << render_instance(g.instance) << '\n';
    if (!out) throw std::runtime_error("cannot write " + path.string());
    paths.push_back(path);
  }
  return paths;
}

}  // namespace ptc
