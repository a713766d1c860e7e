// Brute-force backward induction on the joint N-queue MDP with hard
// per-epoch budgets; the relaxation-gap oracle for tiny instances.

#pragma once

#include <vector>

#include "wcmdp/kernel.hpp"
#include "wcmdp/model.hpp"

namespace wcmdp {

struct JointAction {
    std::vector<int> admits;
    std::vector<int> rates;
};

struct DpSolution {
    double value = 0.0;  // expected total cost from the m0-product initial law
    // policy[t][joint_state_index] = optimal action.
    std::vector<std::vector<JointAction>> policy;
};

// Mixed-radix encoding of occupancies, queue 0 least significant.
long encode_joint_state(const std::vector<int>& occupancies, int K);
std::vector<int> decode_joint_state(long index, int K, int n_queues);

// Exact finite-horizon DP. Requires integer alpha*N and beta*N budgets and
// small instances ((K+1)^N <= 1e4, action combinations per state <= 1e4).
DpSolution dp_solve(const SystemParams& params, const TransitionKernel& kernel,
                    const CostModel& costs, int n_queues);

// dp value / N minus the relaxed-LP objective (matching cost conventions);
// nonnegative up to solver tolerance.
double relaxation_gap(const SystemParams& params, const TransitionKernel& kernel,
                      const CostModel& costs, int n_queues);

}  // namespace wcmdp
