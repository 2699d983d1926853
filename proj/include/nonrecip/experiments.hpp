#pragma once

#include <map>
#include <string>

namespace nonrecip {

// One CLI invocation: a named experiment over a model file, writing plot-ready
// CSV/JSON data into output_dir. Overrides tune K, thresholds and grid ranges.
struct ExperimentConfig {
    std::string command;
    std::string model_path;
    std::string output_dir = ".";
    std::map<std::string, std::string> overrides;
};

// Exit codes: 0 success, 2 gauge violation, 3 degenerate/EP input,
// 4 schema error, 5 numerical failure.
int run(const ExperimentConfig& config);

} // namespace nonrecip
