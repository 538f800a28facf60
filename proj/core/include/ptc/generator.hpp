#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "ptc/instance.hpp"

namespace ptc {

// Threshold classes, in units of maxp = max_f p_f:
// Small [maxp, 2maxp], Medium (2maxp, 3maxp], Large (3maxp, 4maxp].
enum class ThresholdClass { Small, Medium, Large };

std::string to_string(ThresholdClass c);
ThresholdClass parse_threshold_class(std::string_view text);  // "small", ...

struct GeneratorConfig {
  int jobs = 1;
  int machines = 1;
  int families = 1;
  ThresholdClass thresholdClass = ThresholdClass::Small;
  std::uint64_t seed = 0;
};

struct SetShape {
  int jobs = 0;
  int machines = 0;
  int families = 0;
};

// The 19 (N, M, F) configurations of the published benchmark.
const std::vector<SetShape>& table1_presets();

// p_f ~ U[1,10], s_f ~ U[1, min p], n_f a near-uniform split of N, each
// family on a uniform non-empty machine subset, then every uncovered machine
// added to one uniformly drawn family. Throws std::invalid_argument for
// F > N or non-positive sizes.
Instance generate(const GeneratorConfig& cfg);

// Empty when the instance satisfies the benchmark structure: every family
// qualified somewhere, every machine qualified for some family,
// max p <= min gamma, max s <= min p.
std::vector<std::string> structural_violations(const Instance& inst);

struct GeneratedInstance {
  GeneratorConfig config;
  int index = 1;  // 1-based within its class
  std::string fileName;
  Instance instance;
};

std::string instance_file_name(const GeneratorConfig& cfg, int index);

// `perClass` instances of one class; seeds derived from cfg.seed.
std::vector<GeneratedInstance> generate_class(const GeneratorConfig& cfg,
                                              int count);

// `perClass` instances of each class (10 each gives the 30-instance sets).
std::vector<GeneratedInstance> generate_set(const SetShape& shape,
                                            std::uint64_t seed,
                                            int perClass = 10);

// Writes each instance as JSON into `dir` (created if missing); returns the
// written paths. Throws std::runtime_error on I/O failure.
std::vector<std::filesystem::path> write_instances(
    const std::vector<GeneratedInstance>& set, const std::filesystem::path& dir);

}  // namespace ptc
