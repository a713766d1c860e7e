#include "wcmdp/kernel.hpp"

#include <cmath>
#include <stdexcept>

namespace wcmdp {

std::vector<double> TransitionKernel::row(int s, int a, int b) const {
    std::vector<double> out(static_cast<size_t>(K) + 1);
    for (int sp = 0; sp <= K; ++sp) out[static_cast<size_t>(sp)] = (*this)(s, sp, a, b);
    return out;
}

std::int64_t EmpiricalKernel::row_count(int s, int a, int b) const {
    std::int64_t total = 0;
    for (int sp = 0; sp <= kernel.K; ++sp) total += counts[kernel.index(s, sp, a, b)];
    return total;
}

double binom_pmf(int m, double prob, int l) {
    if (m < 0) throw std::invalid_argument("binom_pmf: m must be nonnegative");
    if (l < 0 || l > m) return 0.0;
    if (prob <= 0.0) return l == 0 ? 1.0 : 0.0;
    if (prob >= 1.0) return l == m ? 1.0 : 0.0;
    double log_pmf = std::lgamma(m + 1.0) - std::lgamma(l + 1.0) - std::lgamma(m - l + 1.0) +
                     l * std::log(prob) + (m - l) * std::log1p(-prob);
    return std::exp(log_pmf);
}

namespace {

void check_state_action(int s, int a, int b, const SystemParams& params) {
    if (s < 0 || s > params.K) throw std::invalid_argument("state out of range");
    if ((a != 0 && a != 1) || (b != 0 && b != 1))
        throw std::invalid_argument("actions must be binary");
    if (s == params.K && a == 1)
        throw std::invalid_argument("inadmissible pair (s=K, a=1)");
}

}  // namespace

std::vector<double> fixed_tau_kernel(int s, int a, int b, int tau,
                                     const SystemParams& params) {
    if (tau < 1) throw std::invalid_argument("fixed_tau_kernel: tau must be >= 1");
    check_state_action(s, a, b, params);

    const int jobs = s + a;
    const double q = params.q(b);
    std::vector<double> dist(static_cast<size_t>(params.K) + 1, 0.0);

    if (params.scenario == Scenario::Cjs) {
        // Each of the s+a jobs completes within tau slots independently.
        const double succ = -std::expm1(tau * std::log1p(-q));
        for (int sp = 0; sp <= jobs; ++sp)
            dist[static_cast<size_t>(sp)] = binom_pmf(jobs, succ, jobs - sp);
    } else {
        // One head-of-line completion per successful slot, capped at s+a.
        for (int sp = 1; sp <= jobs; ++sp)
            dist[static_cast<size_t>(sp)] = binom_pmf(tau, q, jobs - sp);
        double tail = 1.0;
        for (int l = 0; l < jobs; ++l) tail -= binom_pmf(tau, q, l);
        dist[0] = std::max(tail, 0.0);
    }
    return dist;
}

TransitionKernel compute_kernel(const SystemParams& params, double tail_eps) {
    validate(params);
    if (!(tail_eps > 0.0 && tail_eps <= 1e-6))
        throw std::invalid_argument("tail_eps must lie in (0, 1e-6]");

    const int K = params.K;
    TransitionKernel kernel;
    kernel.K = K;
    kernel.tail_eps = tail_eps;
    kernel.probs.assign(static_cast<size_t>(K + 1) * (K + 1) * 4, 0.0);

    int tau_max = 1;
    if (params.p < 1.0)
        tau_max = std::max(1, static_cast<int>(
                                  std::ceil(std::log(tail_eps) / std::log1p(-params.p))));
    // Conditioning on tau <= tau_max keeps rows exactly stochastic.
    const double truncated_mass = -std::expm1(tau_max * std::log1p(-params.p));

    for (int s = 0; s <= K; ++s) {
        for (int a = 0; a < 2; ++a) {
            if (!kernel.admissible(s, a)) continue;
            for (int b = 0; b < 2; ++b) {
                std::vector<double> mixed(static_cast<size_t>(K) + 1, 0.0);
                double weight = params.p;  // (1-p)^{tau-1} p
                for (int tau = 1; tau <= tau_max; ++tau) {
                    auto dist = fixed_tau_kernel(s, a, b, tau, params);
                    for (int sp = 0; sp <= K; ++sp)
                        mixed[static_cast<size_t>(sp)] += weight * dist[static_cast<size_t>(sp)];
                    weight *= 1.0 - params.p;
                }
                for (int sp = 0; sp <= K; ++sp)
                    kernel.at(s, sp, a, b) = mixed[static_cast<size_t>(sp)] / truncated_mass;
            }
        }
    }
    return kernel;
}

int sample_interarrival(const SystemParams& params, Rng& rng) {
    if (params.p >= 1.0) return 1;
    std::geometric_distribution<int> failures(params.p);
    return failures(rng) + 1;
}

int sample_transition_given_tau(int s, int a, int b, int tau,
                                const SystemParams& params, Rng& rng) {
    if (tau < 1) throw std::invalid_argument("tau must be >= 1");
    check_state_action(s, a, b, params);

    const int jobs = s + a;
    if (jobs == 0) return 0;
    const double q = params.q(b);
    int departures;
    if (params.scenario == Scenario::Cjs) {
        const double succ = -std::expm1(tau * std::log1p(-q));
        if (succ <= 0.0) {
            departures = 0;
        } else if (succ >= 1.0) {
            departures = jobs;
        } else {
            departures = std::binomial_distribution<int>(jobs, succ)(rng);
        }
    } else {
        int successes = 0;
        if (q >= 1.0) {
            successes = tau;
        } else if (q > 0.0) {
            successes = std::binomial_distribution<int>(tau, q)(rng);
        }
        departures = std::min(jobs, successes);
    }
    return jobs - departures;
}

int sample_transition(int s, int a, int b, const SystemParams& params, Rng& rng) {
    const int tau = sample_interarrival(params, rng);
    return sample_transition_given_tau(s, a, b, tau, params, rng);
}

EmpiricalKernel estimate_kernel(const SystemParams& params, int samples_per_entry,
                                Rng& rng) {
    if (samples_per_entry < 1)
        throw std::invalid_argument("estimate_kernel: need at least one sample per entry");

    const int K = params.K;
    EmpiricalKernel emp;
    emp.kernel.K = K;
    emp.kernel.tail_eps = 0.0;
    emp.kernel.probs.assign(static_cast<size_t>(K + 1) * (K + 1) * 4, 0.0);
    emp.counts.assign(emp.kernel.probs.size(), 0);

    for (int s = 0; s <= K; ++s) {
        for (int a = 0; a < 2; ++a) {
            if (!emp.kernel.admissible(s, a)) continue;
            for (int b = 0; b < 2; ++b) {
                for (int i = 0; i < samples_per_entry; ++i) {
                    const int sp = sample_transition(s, a, b, params, rng);
                    ++emp.counts[emp.kernel.index(s, sp, a, b)];
                }
                for (int sp = 0; sp <= K; ++sp)
                    emp.kernel.at(s, sp, a, b) =
                        static_cast<double>(emp.counts[emp.kernel.index(s, sp, a, b)]) /
                        samples_per_entry;
            }
        }
    }
    return emp;
}

}  // namespace wcmdp
