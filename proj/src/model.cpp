#include "wcmdp/model.hpp"

#include <cmath>
#include <numeric>

namespace wcmdp {

std::string to_string(Scenario s) { return s == Scenario::Cjs ? "cjs" : "sjs"; }

Scenario scenario_from_string(const std::string& token) {
    if (token == "cjs") return Scenario::Cjs;
    if (token == "sjs") return Scenario::Sjs;
    throw ValidationError("scenario: expected \"cjs\" or \"sjs\", got \"" + token + "\"");
}

std::vector<double> SystemParams::initial_distribution() const {
    if (!m0.empty()) return m0;
    std::vector<double> dist(static_cast<size_t>(K) + 1, 0.0);
    dist[0] = 1.0;
    return dist;
}

const SystemParams& validate(const SystemParams& params) {
    if (params.K < 1) throw ValidationError("K: must be a positive integer");
    if (params.T < 1) throw ValidationError("T: must be a positive integer");
    if (!(params.p > 0.0 && params.p <= 1.0)) throw ValidationError("p: must lie in (0,1]");
    // alpha = beta = 1 is the degenerate non-binding budget; needed for the
    // exact-DP comparisons, so the open interval of the model is closed at 1.
    if (!(params.alpha > 0.0 && params.alpha <= 1.0))
        throw ValidationError("alpha: must lie in (0,1]");
    if (!(params.beta > 0.0 && params.beta <= 1.0))
        throw ValidationError("beta: must lie in (0,1]");
    if (!(params.gamma >= 0.0)) throw ValidationError("gamma: must be nonnegative");
    if (!(params.b_low >= 0.0 && params.b_low <= 1.0))
        throw ValidationError("b_low: must lie in [0,1]");
    if (!(params.b_high >= 0.0 && params.b_high <= 1.0))
        throw ValidationError("b_high: must lie in [0,1]");
    if (params.b_low > params.b_high)
        throw ValidationError("b_low: must not exceed b_high");
    if (!params.m0.empty()) {
        if (params.m0.size() != static_cast<size_t>(params.K) + 1)
            throw ValidationError("m0: must have K+1 entries");
        double total = 0.0;
        for (double v : params.m0) {
            if (!(v >= 0.0)) throw ValidationError("m0: entries must be nonnegative");
            total += v;
        }
        if (std::abs(total - 1.0) > kMassTol)
            throw ValidationError("m0: entries must sum to 1");
    }
    return params;
}

CostModel CostModel::defaults(const SystemParams& params) {
    CostModel costs;
    costs.storage.resize(static_cast<size_t>(params.K) + 1);
    for (int s = 0; s <= params.K; ++s)
        costs.storage[static_cast<size_t>(s)] = static_cast<double>(s) / params.K;
    costs.processing = {2.0 * (1.0 + params.q(0)), 2.0 * (1.0 + params.q(1))};
    return costs;
}

void validate_costs(const CostModel& costs, const SystemParams& params) {
    if (costs.storage.size() != static_cast<size_t>(params.K) + 1)
        throw ValidationError("storage_cost: must have K+1 entries");
    for (size_t s = 0; s < costs.storage.size(); ++s) {
        if (!(costs.storage[s] >= 0.0))
            throw ValidationError("storage_cost: entries must be nonnegative");
        if (s > 0 && costs.storage[s] < costs.storage[s - 1])
            throw ValidationError("storage_cost: must be nondecreasing in s");
    }
    if (!(costs.processing[0] >= 0.0) || !(costs.processing[1] >= 0.0))
        throw ValidationError("processing_cost: entries must be nonnegative");
    if (costs.processing[1] < costs.processing[0])
        throw ValidationError("processing_cost: must be nondecreasing in b");
}

double stage_cost(int s, int a, int b, const CostModel& costs, double gamma) {
    if (s < 0 || s >= static_cast<int>(costs.storage.size()))
        throw std::out_of_range("stage_cost: state out of range");
    return costs.storage_cost(s) + costs.processing_cost(b) + (a == 0 ? gamma : 0.0);
}

}  // namespace wcmdp
