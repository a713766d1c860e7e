// Analytic single-queue transition kernel for both service scenarios, a
// seeded Monte-Carlo transition sampler, and empirical kernel estimation.

#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "wcmdp/model.hpp"

namespace wcmdp {

using Rng = std::mt19937_64;

// 4-D probability table P[s][s'][a][b]. Rows for the inadmissible pair
// (s=K, a=1) are stored as all-zero sentinels and must never be weighted.
struct TransitionKernel {
    int K = 0;
    double tail_eps = kDefaultTailEps;
    std::vector<double> probs;  // [s][s'][a][b]

    std::size_t index(int s, int sp, int a, int b) const {
        return ((static_cast<std::size_t>(s) * (K + 1) + sp) * 2 + a) * 2 + b;
    }
    double operator()(int s, int sp, int a, int b) const { return probs[index(s, sp, a, b)]; }
    double& at(int s, int sp, int a, int b) { return probs[index(s, sp, a, b)]; }

    bool admissible(int s, int a) const { return !(s == K && a == 1); }

    // Distribution over s' for a fixed (s,a,b), size K+1.
    std::vector<double> row(int s, int a, int b) const;
};

// Same shape as TransitionKernel plus per-(s,a,b) observation counts.
struct EmpiricalKernel {
    TransitionKernel kernel;
    std::vector<std::int64_t> counts;  // [s][s'][a][b], same layout

    std::int64_t row_count(int s, int a, int b) const;
};

// Binomial pmf C(m,l) prob^l (1-prob)^(m-l); 0 outside [0,m]. Stable for m
// up to ~1e4 (log-space).
double binom_pmf(int m, double prob, int l);

// Conditional next-state distribution given inter-arrival tau.
std::vector<double> fixed_tau_kernel(int s, int a, int b, int tau,
                                     const SystemParams& params);

// Geometric mixture over tau, truncated where (1-p)^tau <= tail_eps and
// renormalized by the truncated geometric mass.
TransitionKernel compute_kernel(const SystemParams& params,
                                double tail_eps = kDefaultTailEps);

// Draw the inter-arrival time tau ~ geometric(p), support {1,2,...}.
int sample_interarrival(const SystemParams& params, Rng& rng);

// Simulate departures over a given tau and return the next state.
int sample_transition_given_tau(int s, int a, int b, int tau,
                                const SystemParams& params, Rng& rng);

// Draws tau internally, then transitions.
int sample_transition(int s, int a, int b, const SystemParams& params, Rng& rng);

// Frequency estimate from I independent transitions per admissible (s,a,b).
EmpiricalKernel estimate_kernel(const SystemParams& params, int samples_per_entry,
                                Rng& rng);

}  // namespace wcmdp
