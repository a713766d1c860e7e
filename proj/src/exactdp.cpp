#include "wcmdp/exactdp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "wcmdp/lp.hpp"

namespace wcmdp {

long encode_joint_state(const std::vector<int>& occupancies, int K) {
    long index = 0;
    for (std::size_t n = occupancies.size(); n-- > 0;)
        index = index * (K + 1) + occupancies[n];
    return index;
}

std::vector<int> decode_joint_state(long index, int K, int n_queues) {
    std::vector<int> occ(static_cast<std::size_t>(n_queues));
    for (int n = 0; n < n_queues; ++n) {
        occ[static_cast<std::size_t>(n)] = static_cast<int>(index % (K + 1));
        index /= (K + 1);
    }
    return occ;
}

namespace {

int integer_budget(double fraction, int n_queues, const char* name) {
    const double scaled = fraction * n_queues;
    const double rounded = std::round(scaled);
    if (std::abs(scaled - rounded) > 1e-9)
        throw std::invalid_argument(std::string(name) + "*N must be an integer");
    return static_cast<int>(rounded);
}

// All action vectors with the hard per-epoch budgets and the full-buffer
// admission ban.
std::vector<JointAction> feasible_actions(const std::vector<int>& occ, int K,
                                          int admit_budget, int rate_budget) {
    const int n = static_cast<int>(occ.size());
    std::vector<std::vector<int>> admit_choices, rate_choices;
    for (long mask = 0; mask < (1L << n); ++mask) {
        std::vector<int> bits(static_cast<std::size_t>(n));
        int total = 0;
        for (int i = 0; i < n; ++i) {
            bits[static_cast<std::size_t>(i)] = static_cast<int>((mask >> i) & 1);
            total += bits[static_cast<std::size_t>(i)];
        }
        bool admit_ok = total <= admit_budget;
        for (int i = 0; i < n && admit_ok; ++i)
            if (bits[static_cast<std::size_t>(i)] == 1 && occ[static_cast<std::size_t>(i)] == K)
                admit_ok = false;
        if (admit_ok) admit_choices.push_back(bits);
        if (total <= rate_budget) rate_choices.push_back(bits);
    }
    std::vector<JointAction> actions;
    actions.reserve(admit_choices.size() * rate_choices.size());
    for (const auto& adm : admit_choices)
        for (const auto& rat : rate_choices) actions.push_back({adm, rat});
    return actions;
}

}  // namespace

DpSolution dp_solve(const SystemParams& params, const TransitionKernel& kernel,
                    const CostModel& costs, int n_queues) {
    validate(params);
    if (n_queues < 1) throw std::invalid_argument("dp_solve: N must be >= 1");
    const int K = params.K;
    const int T = params.T;
    const int admit_budget = integer_budget(params.alpha, n_queues, "alpha");
    const int rate_budget = integer_budget(params.beta, n_queues, "beta");

    double states_d = std::pow(static_cast<double>(K + 1), n_queues);
    if (states_d > 1e4) throw std::invalid_argument("dp_solve: joint state space too large");
    const long n_states = static_cast<long>(states_d);
    if (std::pow(2.0, 2 * n_queues) > 1e4)
        throw std::invalid_argument("dp_solve: joint action space too large");

    DpSolution sol;
    sol.policy.assign(static_cast<std::size_t>(T), {});
    std::vector<double> value(static_cast<std::size_t>(n_states), 0.0);

    for (int t = T - 1; t >= 0; --t) {
        std::vector<double> next_value(static_cast<std::size_t>(n_states), 0.0);
        auto& stage_policy = sol.policy[static_cast<std::size_t>(t)];
        stage_policy.assign(static_cast<std::size_t>(n_states), {});
        for (long si = 0; si < n_states; ++si) {
            const auto occ = decode_joint_state(si, K, n_queues);
            double best = std::numeric_limits<double>::infinity();
            JointAction best_action;
            for (const auto& action : feasible_actions(occ, K, admit_budget, rate_budget)) {
                double cost = 0.0;
                for (int n = 0; n < n_queues; ++n)
                    cost += stage_cost(occ[static_cast<std::size_t>(n)],
                                       action.admits[static_cast<std::size_t>(n)],
                                       action.rates[static_cast<std::size_t>(n)], costs,
                                       params.gamma);
                // Expected future cost; product-form transitions, expanded
                // one queue at a time over partial joint indices.
                double future = 0.0;
                if (t + 1 < T) {
                    std::vector<double> dist(1, 1.0);  // over partial joint states
                    for (int n = 0; n < n_queues; ++n) {
                        const int s = occ[static_cast<std::size_t>(n)];
                        const int a = action.admits[static_cast<std::size_t>(n)];
                        const int b = action.rates[static_cast<std::size_t>(n)];
                        std::vector<double> grown(dist.size() * (K + 1), 0.0);
                        for (std::size_t base = 0; base < dist.size(); ++base) {
                            if (dist[base] == 0.0) continue;
                            for (int sp = 0; sp <= K; ++sp)
                                grown[base + dist.size() * sp] +=
                                    dist[base] * kernel(s, sp, a, b);
                        }
                        dist = std::move(grown);
                    }
                    for (std::size_t j = 0; j < dist.size(); ++j)
                        future += dist[j] * value[j];
                }
                const double total = cost + future;
                if (total < best) {
                    best = total;
                    best_action = action;
                }
            }
            next_value[static_cast<std::size_t>(si)] = best;
            stage_policy[static_cast<std::size_t>(si)] = std::move(best_action);
        }
        value = std::move(next_value);
    }

    // Initial law: product of m0 across queues.
    const auto m0 = params.initial_distribution();
    std::vector<double> dist(1, 1.0);
    for (int n = 0; n < n_queues; ++n) {
        std::vector<double> grown(dist.size() * (K + 1), 0.0);
        for (std::size_t base = 0; base < dist.size(); ++base)
            for (int s = 0; s <= K; ++s)
                grown[base + dist.size() * s] += dist[base] * m0[static_cast<std::size_t>(s)];
        dist = std::move(grown);
    }
    for (std::size_t j = 0; j < dist.size(); ++j) sol.value += dist[j] * value[j];
    return sol;
}

double relaxation_gap(const SystemParams& params, const TransitionKernel& kernel,
                      const CostModel& costs, int n_queues) {
    const DpSolution dp = dp_solve(params, kernel, costs, n_queues);
    const LpInstance inst = build_lp(params, kernel, costs);
    const LpSolution lp = solve_exact(inst, 0.0);
    return dp.value / n_queues - lp.objective;
}

}  // namespace wcmdp
