#include "wcmdp/simulator.hpp"

#include <cmath>
#include <stdexcept>

#include "wcmdp/kernel.hpp"
#include "wcmdp/lp.hpp"

namespace wcmdp {

std::vector<SimReport> simulate(const RandomizedPolicy& policy, const SystemParams& params,
                                int n_queues, const std::vector<std::uint64_t>& seeds) {
    validate(params);
    if (n_queues < 1) throw std::invalid_argument("simulate: N must be >= 1");
    if (policy.T != params.T || policy.K != params.K)
        throw std::invalid_argument("simulate: policy shape mismatch");
    const int admit_budget = static_cast<int>(std::round(params.alpha * n_queues));
    const auto m0 = params.initial_distribution();

    std::vector<SimReport> reports;
    reports.reserve(seeds.size());
    for (const auto seed : seeds) {
        Rng rng(seed);
        SimReport report;
        report.seed = seed;
        report.y_hat = OccupationMeasure(params.T, params.K);
        report.rejections.assign(static_cast<std::size_t>(params.T), 0);
        report.stage_costs.assign(static_cast<std::size_t>(params.T), 0.0);

        std::vector<int> occ(static_cast<std::size_t>(n_queues));
        {
            std::discrete_distribution<int> initial(m0.begin(), m0.end());
            for (auto& s : occ) s = initial(rng);
        }

        const auto costs = CostModel::defaults(params);
        for (int t = 0; t < params.T; ++t) {
            auto [admits, rates] = apply_with_budgets(policy, occ, t, params, rng);
            int total_admits = 0;
            double cost = 0.0;
            for (int n = 0; n < n_queues; ++n) {
                const int s = occ[static_cast<std::size_t>(n)];
                const int a = admits[static_cast<std::size_t>(n)];
                const int b = rates[static_cast<std::size_t>(n)];
                total_admits += a;
                cost += costs.storage_cost(s) + costs.processing_cost(b);
                report.y_hat.at(t, s, a, b) += 1.0 / n_queues;
            }
            const int rejected = admit_budget - total_admits;
            report.rejections[static_cast<std::size_t>(t)] = rejected;
            cost += params.gamma * rejected;
            report.stage_costs[static_cast<std::size_t>(t)] = cost;

            // One batch inter-arrival for the whole system, then independent
            // per-queue departures over those tau slots.
            const int tau = sample_interarrival(params, rng);
            for (int n = 0; n < n_queues; ++n)
                occ[static_cast<std::size_t>(n)] = sample_transition_given_tau(
                    occ[static_cast<std::size_t>(n)], admits[static_cast<std::size_t>(n)],
                    rates[static_cast<std::size_t>(n)], tau, params, rng);
        }

        auto [pa, ph] = normalized_metrics(report.y_hat, params);
        report.pi_a_hat = pa;
        report.pi_h_hat = ph;
        double total = 0.0;
        for (double v : report.stage_costs) total += v;
        report.avg_cost_per_queue = total / n_queues;
        reports.push_back(std::move(report));
    }
    return reports;
}

std::tuple<double, double, double> compare_to_lp(const SimReport& report,
                                                 const OccupationMeasure& y,
                                                 const SystemParams& params) {
    if (report.y_hat.idx.T != y.idx.T || report.y_hat.idx.K != y.idx.K)
        throw std::invalid_argument("compare_to_lp: shape mismatch");
    double max_tv = 0.0;
    for (int t = 0; t < y.idx.T; ++t) {
        double tv = 0.0;
        for (int s = 0; s <= y.idx.K; ++s)
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    tv += std::abs(report.y_hat(t, s, a, b) - y(t, s, a, b));
        max_tv = std::max(max_tv, 0.5 * tv);
    }
    auto [pa_lp, ph_lp] = normalized_metrics(y, params);
    return {max_tv, std::abs(report.pi_a_hat - pa_lp), std::abs(report.pi_h_hat - ph_lp)};
}

}  // namespace wcmdp
