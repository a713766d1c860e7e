#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "wcmdp/lp.hpp"
#include "wcmdp/simulator.hpp"

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

TEST_CASE("never admitting keeps every queue empty") {
    auto params = small_params();
    auto policy = constant_policy(params, 0, 0);
    const int N = 8;  // alpha*N = 4
    auto reports = simulate(policy, params, N, {7});
    REQUIRE(reports.size() == 1);
    const auto& rep = reports[0];
    const auto costs = CostModel::defaults(params);
    for (int t = 0; t < params.T; ++t) {
        CHECK(rep.y_hat(t, 0, 0, 0) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(rep.rejections[static_cast<std::size_t>(t)] == 4);
        CHECK(rep.stage_costs[static_cast<std::size_t>(t)] ==
              doctest::Approx(N * costs.processing_cost(0) + params.gamma * 4));
    }
    CHECK(rep.pi_a_hat == 0.0);
    CHECK(rep.pi_h_hat == 0.0);
}

TEST_CASE("with no departures occupancy counts the admissions") {
    SystemParams params = small_params();
    params.K = 10;
    params.T = 5;
    params.alpha = 1.0;
    params.beta = 1.0;
    params.b_low = 0.0;
    params.b_high = 0.0;  // q(b) = 0: jobs never leave
    auto policy = constant_policy(params, 1, 0);
    auto reports = simulate(policy, params, 6, {11, 12});
    for (const auto& rep : reports)
        for (int t = 0; t < params.T; ++t) {
            // Every queue admits each epoch, so all sit at state t.
            CHECK(rep.y_hat(t, t, 1, 0) == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(rep.rejections[static_cast<std::size_t>(t)] == 0);
        }
}

TEST_CASE("identical seeds reproduce the report exactly") {
    auto params = small_params();
    auto kernel = compute_kernel(params);
    auto costs = CostModel::defaults(params);
    auto policy = extract_policy(solve_exact(build_lp(params, kernel, costs), 0.5).y, params);
    auto r1 = simulate(policy, params, 10, {3, 4});
    auto r2 = simulate(policy, params, 10, {3, 4});
    REQUIRE(r1.size() == 2);
    CHECK(r1[0].y_hat.y == r2[0].y_hat.y);
    CHECK(r1[0].rejections == r2[0].rejections);
    CHECK(r1[0].stage_costs == r2[0].stage_costs);
    CHECK(r1[1].y_hat.y == r2[1].y_hat.y);
    // Different seeds explore different paths.
    CHECK(r1[0].y_hat.y != r1[1].y_hat.y);
}

TEST_CASE("per-epoch fractions are exact distributions and budgets hold") {
    auto params = small_params();
    auto kernel = compute_kernel(params);
    auto costs = CostModel::defaults(params);
    auto policy = extract_policy(solve_exact(build_lp(params, kernel, costs), 0.5).y, params);
    const int N = 12;  // budgets 6
    for (const auto& rep : simulate(policy, params, N, {0, 1, 2, 3, 4})) {
        for (int t = 0; t < params.T; ++t) {
            double mass = 0.0, admits = 0.0, high = 0.0;
            for (int s = 0; s <= params.K; ++s)
                for (int a = 0; a < 2; ++a)
                    for (int b = 0; b < 2; ++b) {
                        const double v = rep.y_hat(t, s, a, b);
                        CHECK(v >= 0.0);
                        mass += v;
                        if (a == 1) admits += v;
                        if (b == 1) high += v;
                        if (s == params.K && a == 1) CHECK(v == 0.0);
                    }
            CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(admits * N <= 6.0 + 1e-9);
            CHECK(high * N <= 6.0 + 1e-9);
            // Rejection identity R(t) = alpha*N - admitted count.
            CHECK(rep.rejections[static_cast<std::size_t>(t)] ==
                  doctest::Approx(6.0 - admits * N).epsilon(1e-9));
            CHECK(rep.rejections[static_cast<std::size_t>(t)] >= 0);
        }
    }
}

TEST_CASE("large N tracks the relaxed solution") {
    auto params = small_params();
    auto kernel = compute_kernel(params);
    auto costs = CostModel::defaults(params);
    auto sol = solve_exact(build_lp(params, kernel, costs), 0.0);
    auto policy = extract_policy(sol.y, params);

    std::vector<std::uint64_t> seeds(20);
    std::iota(seeds.begin(), seeds.end(), 100);
    auto small_runs = simulate(policy, params, 20, seeds);
    auto large_runs = simulate(policy, params, 2000, seeds);

    double tv_small = 0.0, tv_large = 0.0, pa_gap = 0.0;
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        tv_small += std::get<0>(compare_to_lp(small_runs[i], sol.y, params));
        auto [tv, pa, ph] = compare_to_lp(large_runs[i], sol.y, params);
        tv_large += tv;
        pa_gap += pa;
    }
    tv_small /= static_cast<double>(seeds.size());
    tv_large /= static_cast<double>(seeds.size());
    pa_gap /= static_cast<double>(seeds.size());
    CHECK(pa_gap <= 0.05);
    CHECK(tv_large < tv_small);
}

TEST_CASE("comparing a measure against itself gives zero gaps") {
    auto params = small_params();
    auto kernel = compute_kernel(params);
    SimReport rep;
    rep.y_hat = propagate_policy_free(params, kernel);
    auto [pa, ph] = normalized_metrics(rep.y_hat, params);
    rep.pi_a_hat = pa;
    rep.pi_h_hat = ph;
    auto [tv, pa_gap, ph_gap] = compare_to_lp(rep, rep.y_hat, params);
    CHECK(tv == 0.0);
    CHECK(pa_gap == 0.0);
    CHECK(ph_gap == 0.0);
}

TEST_CASE("simulate rejects bad inputs") {
    auto params = small_params();
    auto policy = constant_policy(params, 0, 0);
    CHECK_THROWS_AS(simulate(policy, params, 0, {1}), std::invalid_argument);
    // alpha*N fractional.
    CHECK_THROWS_AS(simulate(policy, params, 3, {1}), std::invalid_argument);
    // Shape mismatch.
    SystemParams other = params;
    other.T = 2;
    auto short_policy = constant_policy(other, 0, 0);
    CHECK_THROWS_AS(simulate(short_policy, params, 4, {1}), std::invalid_argument);
    SimReport rep;
    rep.y_hat = OccupationMeasure(other.T, other.K);
    CHECK_THROWS_AS(compare_to_lp(rep, OccupationMeasure(params.T, params.K), params),
                    std::invalid_argument);
}
