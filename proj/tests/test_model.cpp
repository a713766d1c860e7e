#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "wcmdp/model.hpp"

using namespace wcmdp;

namespace {

SystemParams reference_params() {
    // K=10, T=100, p=0.14, alpha=0.5, beta=0.3, gamma=10, q=(0.05,0.1), CJS.
    return SystemParams{};
}

}  // namespace

TEST_CASE("validate accepts the reference parameter set") {
    const SystemParams params = reference_params();
    CHECK_NOTHROW(validate(params));
}

TEST_CASE("validate rejects a zero initial distribution") {
    SystemParams params = reference_params();
    params.m0.assign(11, 0.0);
    CHECK_THROWS_WITH_AS(validate(params), doctest::Contains("m0"), ValidationError);
}

TEST_CASE("validate rejects inverted service probabilities") {
    SystemParams params = reference_params();
    params.b_low = 0.6;
    params.b_high = 0.4;
    CHECK_THROWS_WITH_AS(validate(params), doctest::Contains("b_low"), ValidationError);
}

TEST_CASE("validate names other violated fields") {
    SystemParams params = reference_params();
    params.p = 0.0;
    CHECK_THROWS_WITH_AS(validate(params), doctest::Contains("p:"), ValidationError);
    params = reference_params();
    params.alpha = 1.5;
    CHECK_THROWS_WITH_AS(validate(params), doctest::Contains("alpha"), ValidationError);
    params = reference_params();
    params.m0 = {0.5, 0.5};  // wrong length
    CHECK_THROWS_WITH_AS(validate(params), doctest::Contains("m0"), ValidationError);
}

TEST_CASE("stage cost evaluates the two cost formulas plus the rejection term") {
    const SystemParams params = reference_params();
    const CostModel costs = CostModel::defaults(params);
    CHECK(stage_cost(0, 1, 0, costs, params.gamma) == doctest::Approx(2.1).epsilon(1e-12));
    CHECK(stage_cost(0, 0, 0, costs, 0.0) ==
          doctest::Approx(2.0 * (1.0 + params.q(0))).epsilon(1e-12));
    CHECK(stage_cost(10, 0, 1, costs, params.gamma) ==
          doctest::Approx(13.2).epsilon(1e-12));
    CHECK_THROWS_AS(stage_cost(11, 0, 0, costs, 0.0), std::out_of_range);
}

TEST_CASE("stage cost is nondecreasing in s and in b for the default model") {
    const SystemParams params = reference_params();
    const CostModel costs = CostModel::defaults(params);
    for (int a = 0; a < 2; ++a) {
        for (int s = 1; s <= params.K; ++s)
            for (int b = 0; b < 2; ++b)
                CHECK(stage_cost(s, a, b, costs, params.gamma) >=
                      stage_cost(s - 1, a, b, costs, params.gamma));
        for (int s = 0; s <= params.K; ++s)
            CHECK(stage_cost(s, a, 1, costs, params.gamma) >=
                  stage_cost(s, a, 0, costs, params.gamma));
    }
}

TEST_CASE("flat index round-trips over the full grid") {
    const FlatIndex idx{7, 4};
    std::size_t expected = 0;
    for (int t = 0; t < idx.T; ++t)
        for (int s = 0; s <= idx.K; ++s)
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) {
                    const std::size_t flat = idx.flatten(t, s, a, b);
                    CHECK(flat == expected);  // lexicographic, t outermost
                    auto [tt, ss, aa, bb] = idx.unflatten(flat);
                    CHECK(tt == t);
                    CHECK(ss == s);
                    CHECK(aa == a);
                    CHECK(bb == b);
                    ++expected;
                }
    CHECK(expected == idx.size());
}

TEST_CASE("aggregate stage cost matches the per-cell decomposition on feasible mass") {
    // sum stage_cost(s,a,b)*y == sum (C_s+C_p)y + gamma*(1-pi_A) whenever the
    // per-epoch mass is 1 and y[K][1][.] = 0.
    const SystemParams params = reference_params();
    const CostModel costs = CostModel::defaults(params);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const int K = params.K;
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> y(static_cast<std::size_t>(K + 1) * 4, 0.0);
        double total = 0.0;
        for (int s = 0; s <= K; ++s)
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) {
                    if (s == K && a == 1) continue;
                    const double v = unif(rng);
                    y[static_cast<std::size_t>((s * 2 + a) * 2 + b)] = v;
                    total += v;
                }
        for (auto& v : y) v /= total;

        double per_cell = 0.0, aggregate = 0.0, pi_a = 0.0;
        for (int s = 0; s <= K; ++s)
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) {
                    const double v = y[static_cast<std::size_t>((s * 2 + a) * 2 + b)];
                    per_cell += stage_cost(s, a, b, costs, params.gamma) * v;
                    aggregate +=
                        (costs.storage_cost(s) + costs.processing_cost(b)) * v;
                    if (a == 1 && s < K) pi_a += v;
                }
        aggregate += params.gamma * (1.0 - pi_a);
        CHECK(per_cell == doctest::Approx(aggregate).epsilon(1e-12));
    }
}

TEST_CASE("cost model validation catches non-monotone tables") {
    const SystemParams params = reference_params();
    CostModel costs = CostModel::defaults(params);
    costs.storage[5] = 0.1;  // below storage[4]
    CHECK_THROWS_AS(validate_costs(costs, params), ValidationError);
    costs = CostModel::defaults(params);
    costs.processing = {3.0, 2.0};
    CHECK_THROWS_AS(validate_costs(costs, params), ValidationError);
}
