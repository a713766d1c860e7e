#include "wcmdp/policy.hpp"

#include <cmath>
#include <stdexcept>

namespace wcmdp {

std::pair<int, int> RandomizedPolicy::sample(int t, int s, Rng& rng) const {
    const auto& dist = at(t, s);
    double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    for (int j = 0; j < 3; ++j) {
        u -= dist[static_cast<std::size_t>(j)];
        if (u < 0.0) return {j / 2, j % 2};
    }
    return {1, 1};
}

RandomizedPolicy extract_policy(const OccupationMeasure& y, const SystemParams& params) {
    if (y.idx.T != params.T || y.idx.K != params.K)
        throw std::invalid_argument("extract_policy: shape mismatch");
    RandomizedPolicy policy;
    policy.T = params.T;
    policy.K = params.K;
    policy.pi.assign(static_cast<std::size_t>(params.T) * (params.K + 1),
                     {1.0, 0.0, 0.0, 0.0});
    for (int t = 0; t < params.T; ++t)
        for (int s = 0; s <= params.K; ++s) {
            const double mass = y.state_mass(t, s);
            if (mass < kReachableTol) continue;  // default (0,0) point mass
            auto& dist = policy.at(t, s);
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    dist[static_cast<std::size_t>(a * 2 + b)] =
                        std::max(y(t, s, a, b), 0.0) / mass;
            // Renormalize away negative-entry clipping and the (possibly
            // tiny) full-buffer admission mass.
            if (s == params.K) {
                dist[2] = 0.0;
                dist[3] = 0.0;
            }
            double total = dist[0] + dist[1] + dist[2] + dist[3];
            for (auto& v : dist) v /= total;
        }
    return policy;
}

std::pair<std::vector<int>, std::vector<int>> apply_with_budgets(
    const RandomizedPolicy& policy, const std::vector<int>& occupancies, int t,
    const SystemParams& params, Rng& rng) {
    const int n_queues = static_cast<int>(occupancies.size());
    const double admit_scaled = params.alpha * n_queues;
    const double rate_scaled = params.beta * n_queues;
    const int admit_budget = static_cast<int>(std::round(admit_scaled));
    const int rate_budget = static_cast<int>(std::round(rate_scaled));
    if (std::abs(admit_scaled - admit_budget) > 1e-9 ||
        std::abs(rate_scaled - rate_budget) > 1e-9)
        throw std::invalid_argument("apply_with_budgets: alpha*N and beta*N must be integers");

    std::vector<int> admits(static_cast<std::size_t>(n_queues), 0);
    std::vector<int> rates(static_cast<std::size_t>(n_queues), 0);
    for (int n = 0; n < n_queues; ++n) {
        const int s = occupancies[static_cast<std::size_t>(n)];
        auto [a, b] = policy.sample(t, s, rng);
        if (s == params.K) a = 0;
        admits[static_cast<std::size_t>(n)] = a;
        rates[static_cast<std::size_t>(n)] = b;
    }

    // Uniform-random demotion of the excess keeps queues exchangeable.
    auto repair = [&](std::vector<int>& actions, int budget) {
        std::vector<int> active;
        for (int n = 0; n < n_queues; ++n)
            if (actions[static_cast<std::size_t>(n)] == 1) active.push_back(n);
        int excess = static_cast<int>(active.size()) - budget;
        while (excess > 0) {
            const auto pick = std::uniform_int_distribution<std::size_t>(
                0, active.size() - 1)(rng);
            actions[static_cast<std::size_t>(active[pick])] = 0;
            active.erase(active.begin() + static_cast<std::ptrdiff_t>(pick));
            --excess;
        }
    };
    repair(admits, admit_budget);
    repair(rates, rate_budget);
    return {admits, rates};
}

}  // namespace wcmdp
