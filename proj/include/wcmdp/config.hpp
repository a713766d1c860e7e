// JSON configuration ingestion for the library and CLI.

#pragma once

#include <cstdint>
#include <string>

#include "wcmdp/model.hpp"

namespace wcmdp {

// Everything a run needs: model parameters, costs, solver settings.
struct RunConfig {
    SystemParams params;
    CostModel costs;          // defaults unless overridden in the config
    double Gamma = 0.0;
    double eta1 = 0.1;
    double eta2 = 0.01;
    long iters = 50000;
    int minibatch_I = 10;
    double tail_eps = kDefaultTailEps;
    std::uint64_t seed = 0;
    int N = 2000;
};

// Parses a JSON document; unknown keys are rejected with a ValidationError.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

}  // namespace wcmdp
