// Finite-N system simulation at batch-arrival epochs.

#pragma once

#include <cstdint>
#include <tuple>
#include <vector>

#include "wcmdp/measure.hpp"
#include "wcmdp/model.hpp"
#include "wcmdp/policy.hpp"

namespace wcmdp {

struct SimReport {
    std::uint64_t seed = 0;
    OccupationMeasure y_hat;        // fractions of queues per (t,s,a,b) cell
    std::vector<int> rejections;    // R(t) = alpha*N - sum admits
    std::vector<double> stage_costs;  // per-epoch system cost incl. gamma*R(t)
    double pi_a_hat = 0.0;
    double pi_h_hat = 0.0;
    double avg_cost_per_queue = 0.0;
};

// One simulation per seed: a shared inter-arrival tau per epoch, per-queue
// departures sampled independently, policy actions repaired to the hard
// budgets. Y_hat records states and post-repair actions before transition.
std::vector<SimReport> simulate(const RandomizedPolicy& policy, const SystemParams& params,
                                int n_queues, const std::vector<std::uint64_t>& seeds);

// (max-epoch TV distance, |pi_A_hat gap|, |pi_H_hat gap|) against an LP
// occupation measure of matching shape.
std::tuple<double, double, double> compare_to_lp(const SimReport& report,
                                                 const OccupationMeasure& y,
                                                 const SystemParams& params);

}  // namespace wcmdp
