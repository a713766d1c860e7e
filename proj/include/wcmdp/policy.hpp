// Per-queue randomized policy extracted from an occupation measure, plus
// hard-budget repair of sampled joint actions.

#pragma once

#include <array>
#include <utility>
#include <vector>

#include "wcmdp/kernel.hpp"
#include "wcmdp/measure.hpp"
#include "wcmdp/model.hpp"

namespace wcmdp {

// pi[t][s] is a distribution over the four (a,b) pairs; pi[t][K] never
// admits.
struct RandomizedPolicy {
    int T = 0;
    int K = 0;
    std::vector<std::array<double, 4>> pi;  // [t*(K+1)+s][a*2+b]

    const std::array<double, 4>& at(int t, int s) const {
        return pi[static_cast<std::size_t>(t) * (K + 1) + s];
    }
    std::array<double, 4>& at(int t, int s) {
        return pi[static_cast<std::size_t>(t) * (K + 1) + s];
    }

    // Samples an (a,b) pair from pi[t][s].
    std::pair<int, int> sample(int t, int s, Rng& rng) const;
};

// Conditioning pi(a,b|s) = y(t,s,a,b)/m_s(t); unreachable states default to
// (reject, low rate).
RandomizedPolicy extract_policy(const OccupationMeasure& y, const SystemParams& params);

// Samples per-queue actions independently, then demotes uniformly chosen
// excess admits / high rates until the hard budgets hold.
std::pair<std::vector<int>, std::vector<int>> apply_with_budgets(
    const RandomizedPolicy& policy, const std::vector<int>& occupancies, int t,
    const SystemParams& params, Rng& rng);

}  // namespace wcmdp
