#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "wcmdp/lp.hpp"
#include "wcmdp/policy.hpp"

using namespace wcmdp;

namespace {

SystemParams small_params() {
    SystemParams params;
    params.K = 2;
    params.T = 4;
    params.p = 0.5;
    params.alpha = 0.5;
    params.beta = 0.5;
    params.gamma = 100.0;
    params.b_low = 0.4;
    params.b_high = 0.8;
    params.scenario = Scenario::Cjs;
    return params;
}

RandomizedPolicy constant_policy(const SystemParams& params, int a, int b) {
    OccupationMeasure y(params.T, params.K);
    for (int t = 0; t < params.T; ++t)
        for (int s = 0; s <= params.K; ++s) y.at(t, s, a, b) = 1.0;
    return extract_policy(y, params);
}

}  // namespace

TEST_CASE("conditioning a uniform cell gives the uniform action law") {
    auto params = small_params();
    OccupationMeasure y(params.T, params.K);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) y.at(1, 0, a, b) = 0.25;
    auto policy = extract_policy(y, params);
    for (int j = 0; j < 4; ++j)
        CHECK(policy.at(1, 0)[static_cast<std::size_t>(j)] == doctest::Approx(0.25));
    // Unreachable cells default to the (reject, low) point mass.
    CHECK(policy.at(0, 2)[0] == 1.0);
}

TEST_CASE("the never-admit measure extracts to the (0,0) point mass") {
    auto params = small_params();
    auto kernel = compute_kernel(params);
    auto y = propagate_policy_free(params, kernel);
    auto policy = extract_policy(y, params);
    for (int t = 0; t < params.T; ++t)
        for (int s = 0; s <= params.K; ++s) {
            if (y.state_mass(t, s) < kReachableTol) continue;
            CHECK(policy.at(t, s)[0] == doctest::Approx(1.0).epsilon(1e-12));
        }
}

TEST_CASE("policies from the solved measure are proper distributions") {
    auto params = small_params();
    auto kernel = compute_kernel(params);
    auto costs = CostModel::defaults(params);
    auto sol = solve_exact(build_lp(params, kernel, costs), 0.5);
    auto policy = extract_policy(sol.y, params);
    for (int t = 0; t < params.T; ++t)
        for (int s = 0; s <= params.K; ++s) {
            const auto& dist = policy.at(t, s);
            double total = 0.0;
            for (double v : dist) {
                CHECK(v >= 0.0);
                total += v;
            }
            CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
        }
    // Full buffers never admit.
    for (int t = 0; t < params.T; ++t) {
        CHECK(policy.at(t, params.K)[2] == 0.0);
        CHECK(policy.at(t, params.K)[3] == 0.0);
    }
    // Conditioning identity: pi * m_s reproduces the cell masses.
    for (int t = 0; t < params.T; ++t)
        for (int s = 0; s <= params.K; ++s) {
            const double mass = sol.y.state_mass(t, s);
            if (mass < 1e-9) continue;  // clipped cells renormalize
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    CHECK(policy.at(t, s)[static_cast<std::size_t>(a * 2 + b)] * mass ==
                          doctest::Approx(std::max(sol.y(t, s, a, b), 0.0))
                              .epsilon(1e-7)
                              .scale(1.0));
        }
}

TEST_CASE("sampling follows the policy distribution") {
    auto params = small_params();
    OccupationMeasure y(params.T, params.K);
    y.at(0, 0, 0, 0) = 0.1;
    y.at(0, 0, 0, 1) = 0.2;
    y.at(0, 0, 1, 0) = 0.3;
    y.at(0, 0, 1, 1) = 0.4;
    auto policy = extract_policy(y, params);
    Rng rng(5);
    std::array<long, 4> counts{0, 0, 0, 0};
    const long draws = 100000;
    for (long i = 0; i < draws; ++i) {
        auto [a, b] = policy.sample(0, 0, rng);
        ++counts[static_cast<std::size_t>(a * 2 + b)];
    }
    for (int j = 0; j < 4; ++j) {
        const double prob = 0.1 * (j + 1);
        const double freq = static_cast<double>(counts[static_cast<std::size_t>(j)]) / draws;
        const double se = std::sqrt(prob * (1.0 - prob) / draws);
        CHECK(std::abs(freq - prob) <= 4.0 * se);
    }
}

TEST_CASE("repair is forced when everyone wants everything") {
    SystemParams params = small_params();
    params.alpha = 0.5;
    params.beta = 0.5;
    auto policy = constant_policy(params, 1, 1);
    Rng rng(9);
    std::vector<long> demotions(4, 0);
    for (int trial = 0; trial < 2000; ++trial) {
        std::vector<int> occ{0, 1, 0, 1};
        auto [admits, rates] = apply_with_budgets(policy, occ, 0, params, rng);
        CHECK(std::accumulate(admits.begin(), admits.end(), 0) == 2);
        CHECK(std::accumulate(rates.begin(), rates.end(), 0) == 2);
        for (int n = 0; n < 4; ++n)
            if (admits[static_cast<std::size_t>(n)] == 0)
                ++demotions[static_cast<std::size_t>(n)];
    }
    // Uniform demotion: every queue is demoted roughly half the time.
    for (long d : demotions) {
        CHECK(d > 800);
        CHECK(d < 1200);
    }
}

TEST_CASE("the all-reject policy needs no repair") {
    auto params = small_params();
    auto policy = constant_policy(params, 0, 0);
    Rng rng(3);
    std::vector<int> occ{0, 2, 1, 0};
    auto [admits, rates] = apply_with_budgets(policy, occ, 1, params, rng);
    for (int v : admits) CHECK(v == 0);
    for (int v : rates) CHECK(v == 0);
}

TEST_CASE("hard budgets hold for every seed and state") {
    auto params = small_params();
    auto kernel = compute_kernel(params);
    auto costs = CostModel::defaults(params);
    auto sol = solve_exact(build_lp(params, kernel, costs), 0.5);
    auto policy = extract_policy(sol.y, params);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Rng rng(seed);
        std::uniform_int_distribution<int> pick_state(0, params.K);
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<int> occ(4);
            for (auto& s : occ) s = pick_state(rng);
            const int t = static_cast<int>(rng() % params.T);
            auto [admits, rates] = apply_with_budgets(policy, occ, t, params, rng);
            CHECK(std::accumulate(admits.begin(), admits.end(), 0) <= 2);
            CHECK(std::accumulate(rates.begin(), rates.end(), 0) <= 2);
            for (int n = 0; n < 4; ++n)
                if (occ[static_cast<std::size_t>(n)] == params.K)
                    CHECK(admits[static_cast<std::size_t>(n)] == 0);
        }
    }
}

TEST_CASE("non-binding admit frequency matches the policy marginal") {
    SystemParams params = small_params();
    params.alpha = 1.0;
    params.beta = 1.0;
    OccupationMeasure y(params.T, params.K);
    y.at(0, 0, 0, 0) = 0.3;
    y.at(0, 0, 1, 0) = 0.5;
    y.at(0, 0, 1, 1) = 0.2;
    auto policy = extract_policy(y, params);
    const double admit_prob = 0.7;  // pi(1,0)+pi(1,1)
    Rng rng(17);
    long admitted = 0;
    const long draws = 100000;
    for (long i = 0; i < draws; ++i) {
        std::vector<int> occ{0};
        auto [admits, rates] = apply_with_budgets(policy, occ, 0, params, rng);
        admitted += admits[0];
    }
    const double freq = static_cast<double>(admitted) / draws;
    const double se = std::sqrt(admit_prob * (1.0 - admit_prob) / draws);
    CHECK(std::abs(freq - admit_prob) <= 3.0 * se);
}

TEST_CASE("fractional scaled budgets are rejected") {
    auto params = small_params();  // alpha = beta = 0.5
    auto policy = constant_policy(params, 0, 0);
    Rng rng(1);
    std::vector<int> occ{0, 0, 0};  // alpha*N = 1.5
    CHECK_THROWS_AS(apply_with_budgets(policy, occ, 0, params, rng),
                    std::invalid_argument);
}
