#include "wcmdp/saddle.hpp"

#include <cmath>
#include <limits>
#include <utility>

#include "wcmdp/lp.hpp"

namespace wcmdp {

namespace {

double pi_admit(const OccupationMeasure& y, int t) {
    double total = 0.0;
    for (int s = 0; s < y.idx.K; ++s)
        for (int b = 0; b < 2; ++b) total += y(t, s, 1, b);
    return total;
}

double pi_high(const OccupationMeasure& y, int t) {
    double total = 0.0;
    for (int s = 0; s <= y.idx.K; ++s)
        for (int a = 0; a < 2; ++a) total += y(t, s, a, 1);
    return total;
}

void check_shapes(const OccupationMeasure& y, const Multipliers& mult,
                  const SystemParams& params) {
    if (y.idx.T != params.T || y.idx.K != params.K)
        throw std::invalid_argument("occupation measure shape mismatch");
    if (mult.lambda1.size() != static_cast<std::size_t>(params.T) ||
        mult.lambda3.idx.K != params.K)
        throw std::invalid_argument("multiplier shape mismatch");
}

}  // namespace

double lagrangian(const OccupationMeasure& y, const Multipliers& mult,
                  const TransitionKernel& kernel, const SystemParams& params,
                  const CostModel& costs, double Gamma) {
    check_shapes(y, mult, params);
    const int K = params.K;
    const int T = params.T;
    const auto m0 = params.initial_distribution();

    double total = Gamma * y.squared_norm();
    for (int t = 0; t < T; ++t) {
        // Cost term, gamma*(1 - pi_A) form.
        double cost = params.gamma * (1.0 - pi_admit(y, t));
        for (int s = 0; s <= K; ++s)
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    cost += (costs.storage_cost(s) + costs.processing_cost(b)) * y(t, s, a, b);

        // Equality-constraint terms.
        double d1 = 0.0;
        if (t == 0)
            for (int s = 0; s <= K; ++s)
                d1 += mult.mu1[static_cast<std::size_t>(s)] *
                      (y.state_mass(0, s) - m0[static_cast<std::size_t>(s)]);
        for (int b = 0; b < 2; ++b) d1 += mult.mu2_at(t, b) * y(t, K, 1, b);
        if (t <= T - 2)
            for (int s = 0; s <= K; ++s) {
                double inflow = 0.0;
                for (int sp = 0; sp <= K; ++sp)
                    for (int a = 0; a < 2; ++a)
                        for (int b = 0; b < 2; ++b)
                            inflow += y(t, sp, a, b) * kernel(sp, s, a, b);
                d1 += mult.mu3_at(t, s) * (y.state_mass(t + 1, s) - inflow);
            }

        // Inequality-constraint terms.
        double d2 = mult.lambda1[static_cast<std::size_t>(t)] * (pi_admit(y, t) - params.alpha) +
                    mult.lambda2[static_cast<std::size_t>(t)] * (pi_high(y, t) - params.beta);
        for (int s = 0; s <= K; ++s)
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) d2 -= mult.lambda3(t, s, a, b) * y(t, s, a, b);

        total += cost + d1 + d2;
    }
    return total;
}

OccupationMeasure grad_y(const OccupationMeasure& y, const Multipliers& mult,
                         const TransitionKernel& kernel, const SystemParams& params,
                         const CostModel& costs, double Gamma) {
    check_shapes(y, mult, params);
    const int K = params.K;
    const int T = params.T;
    OccupationMeasure g(T, K);
    for (int t = 0; t < T; ++t)
        for (int s = 0; s <= K; ++s)
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) {
                    double v = costs.storage_cost(s) + costs.processing_cost(b) +
                               2.0 * Gamma * y(t, s, a, b) - mult.lambda3(t, s, a, b);
                    if (a == 1 && s < K)
                        v += mult.lambda1[static_cast<std::size_t>(t)] - params.gamma;
                    if (b == 1) v += mult.lambda2[static_cast<std::size_t>(t)];
                    if (t == 0) v += mult.mu1[static_cast<std::size_t>(s)];
                    if (s == K && a == 1) v += mult.mu2_at(t, b);
                    if (t >= 1) v += mult.mu3_at(t - 1, s);
                    if (t <= T - 2)
                        for (int spp = 0; spp <= K; ++spp)
                            v -= mult.mu3_at(t, spp) * kernel(s, spp, a, b);
                    g.at(t, s, a, b) = v;
                }
    return g;
}

Multipliers grad_multipliers(const OccupationMeasure& y, const TransitionKernel& kernel,
                             const SystemParams& params) {
    if (y.idx.T != params.T || y.idx.K != params.K)
        throw std::invalid_argument("occupation measure shape mismatch");
    const int K = params.K;
    const int T = params.T;
    const auto m0 = params.initial_distribution();
    Multipliers g = Multipliers::zeros(T, K);

    for (int t = 0; t < T; ++t) {
        g.lambda1[static_cast<std::size_t>(t)] = pi_admit(y, t) - params.alpha;
        g.lambda2[static_cast<std::size_t>(t)] = pi_high(y, t) - params.beta;
        for (int b = 0; b < 2; ++b) g.mu2_at(t, b) = y(t, K, 1, b);
    }
    for (std::size_t j = 0; j < y.y.size(); ++j) g.lambda3.y[j] = -y.y[j];
    for (int s = 0; s <= K; ++s)
        g.mu1[static_cast<std::size_t>(s)] =
            y.state_mass(0, s) - m0[static_cast<std::size_t>(s)];
    for (int t = 0; t + 1 < T; ++t)
        for (int s = 0; s <= K; ++s) {
            double inflow = 0.0;
            for (int sp = 0; sp <= K; ++sp)
                for (int a = 0; a < 2; ++a)
                    for (int b = 0; b < 2; ++b)
                        inflow += y(t, sp, a, b) * kernel(sp, s, a, b);
            g.mu3_at(t, s) = y.state_mass(t + 1, s) - inflow;
        }
    return g;
}

std::pair<OccupationMeasure, Multipliers> saddle_warm_start(
    const SystemParams& params, const TransitionKernel& kernel, const CostModel& costs) {
    const int K = params.K;
    const int T = params.T;
    constexpr int kPriceIters = 200;
    constexpr double kPriceStep = 0.5;
    constexpr double kPolicyTemperature = 0.5;  // Boltzmann smoothing at ties

    std::vector<double> l1(static_cast<std::size_t>(T), params.gamma);
    std::vector<double> l2(static_cast<std::size_t>(T), 0.0);
    std::vector<std::vector<double>> V(static_cast<std::size_t>(T) + 1,
                                       std::vector<double>(static_cast<std::size_t>(K) + 1, 0.0));
    // Q-values and smoothed policy over admissible (a,b) per (t,s).
    std::vector<double> Q(static_cast<std::size_t>(T) * (K + 1) * 4, 0.0);
    std::vector<double> pol(Q.size(), 0.0);
    auto cell = [&](int t, int s, int a, int b) {
        return (static_cast<std::size_t>(t) * (K + 1) + s) * 4 + a * 2 + b;
    };
    auto priced_stage = [&](int t, int s, int a, int b) {
        double c = costs.storage_cost(s) + costs.processing_cost(b);
        if (a == 1 && s < K) c += l1[static_cast<std::size_t>(t)] - params.gamma;
        if (b == 1) c += l2[static_cast<std::size_t>(t)];
        return c;
    };
    auto backward = [&]() {
        for (int s = 0; s <= K; ++s) V[static_cast<std::size_t>(T)][static_cast<std::size_t>(s)] = 0.0;
        for (int t = T - 1; t >= 0; --t)
            for (int s = 0; s <= K; ++s) {
                double lo = std::numeric_limits<double>::infinity();
                for (int a = 0; a < 2; ++a) {
                    if (s + a > K) continue;
                    for (int b = 0; b < 2; ++b) {
                        double q = priced_stage(t, s, a, b);
                        for (int sp = 0; sp <= K; ++sp)
                            q += kernel(s, sp, a, b) *
                                 V[static_cast<std::size_t>(t) + 1][static_cast<std::size_t>(sp)];
                        Q[cell(t, s, a, b)] = q;
                        lo = std::min(lo, q);
                    }
                }
                double z = 0.0;
                for (int a = 0; a < 2; ++a) {
                    if (s + a > K) continue;
                    for (int b = 0; b < 2; ++b)
                        z += std::exp(-(Q[cell(t, s, a, b)] - lo) / kPolicyTemperature);
                }
                for (int a = 0; a < 2; ++a)
                    for (int b = 0; b < 2; ++b)
                        pol[cell(t, s, a, b)] =
                            (s + a > K) ? 0.0
                                        : std::exp(-(Q[cell(t, s, a, b)] - lo) /
                                                   kPolicyTemperature) /
                                              z;
                V[static_cast<std::size_t>(t)][static_cast<std::size_t>(s)] = lo;
            }
    };
    OccupationMeasure y(T, K);
    auto propagate = [&]() {
        std::vector<double> m = params.initial_distribution();
        for (int t = 0; t < T; ++t) {
            std::vector<double> next(static_cast<std::size_t>(K) + 1, 0.0);
            for (int s = 0; s <= K; ++s)
                for (int a = 0; a < 2; ++a)
                    for (int b = 0; b < 2; ++b) {
                        const double w = m[static_cast<std::size_t>(s)] * pol[cell(t, s, a, b)];
                        y.at(t, s, a, b) = w;
                        if (w == 0.0) continue;
                        for (int sp = 0; sp <= K; ++sp)
                            next[static_cast<std::size_t>(sp)] += w * kernel(s, sp, a, b);
                    }
            m = next;
        }
    };
    for (int it = 0; it < kPriceIters; ++it) {
        backward();
        propagate();
        for (int t = 0; t < T; ++t) {
            l1[static_cast<std::size_t>(t)] = std::max(
                0.0, l1[static_cast<std::size_t>(t)] + kPriceStep * (pi_admit(y, t) - params.alpha));
            l2[static_cast<std::size_t>(t)] = std::max(
                0.0, l2[static_cast<std::size_t>(t)] + kPriceStep * (pi_high(y, t) - params.beta));
        }
    }
    backward();
    propagate();

    Multipliers mult = Multipliers::zeros(T, K);
    mult.lambda1 = l1;
    mult.lambda2 = l2;
    for (int s = 0; s <= K; ++s)
        mult.mu1[static_cast<std::size_t>(s)] = -V[0][static_cast<std::size_t>(s)];
    for (int t = 0; t + 1 < T; ++t)
        for (int s = 0; s <= K; ++s)
            mult.mu3_at(t, s) = -V[static_cast<std::size_t>(t) + 1][static_cast<std::size_t>(s)];
    for (int t = 0; t < T; ++t)
        for (int s = 0; s <= K; ++s)
            for (int a = 0; a < 2; ++a) {
                if (s + a > K) continue;
                for (int b = 0; b < 2; ++b)
                    mult.lambda3.at(t, s, a, b) = std::max(
                        0.0, Q[cell(t, s, a, b)] - V[static_cast<std::size_t>(t)][static_cast<std::size_t>(s)]);
            }
    // mu2 zeroes the gradient at the pinned cells; their kernel rows are
    // all-zero sentinels, so no propagation term appears.
    for (int t = 0; t < T; ++t)
        for (int b = 0; b < 2; ++b) {
            double g = costs.storage_cost(K) + costs.processing_cost(b) +
                       (b == 1 ? l2[static_cast<std::size_t>(t)] : 0.0) +
                       (t == 0 ? mult.mu1[static_cast<std::size_t>(K)] : mult.mu3_at(t - 1, K));
            mult.mu2_at(t, b) = -g;
        }
    return {std::move(y), std::move(mult)};
}

namespace {

void record_trace(std::vector<IterTrace>& traces, long iteration,
                  const OccupationMeasure& y, const Multipliers& mult,
                  const TransitionKernel& kernel, const SystemParams& params,
                  const CostModel& costs, const SaddleConfig& cfg) {
    IterTrace tr;
    tr.iteration = iteration;
    tr.lagrangian = lagrangian(y, mult, kernel, params, costs, cfg.Gamma);
    tr.dist_to_ref = cfg.reference ? y.frobenius_distance(*cfg.reference) : 0.0;
    const auto m0 = params.initial_distribution();
    double flow = 0.0, budget = 0.0;
    for (int s = 0; s <= params.K; ++s)
        flow = std::max(flow,
                        std::abs(y.state_mass(0, s) - m0[static_cast<std::size_t>(s)]));
    for (int t = 0; t + 1 < params.T; ++t)
        for (int s = 0; s <= params.K; ++s) {
            double inflow = 0.0;
            for (int sp = 0; sp <= params.K; ++sp)
                for (int a = 0; a < 2; ++a)
                    for (int b = 0; b < 2; ++b)
                        inflow += y(t, sp, a, b) * kernel(sp, s, a, b);
            flow = std::max(flow, std::abs(y.state_mass(t + 1, s) - inflow));
        }
    for (int t = 0; t < params.T; ++t) {
        budget = std::max(budget, pi_admit(y, t) - params.alpha);
        budget = std::max(budget, pi_high(y, t) - params.beta);
    }
    tr.flow_residual_inf = flow;
    tr.max_budget_violation = std::max(budget, 0.0);
    traces.push_back(tr);
}

// Shared iteration body for gda/sgda; kernel_of(k) supplies the transition
// estimate used at iteration k.
template <typename KernelFn>
SaddleResult run_descent_ascent(const SystemParams& params, const CostModel& costs,
                                const SaddleConfig& cfg, const TransitionKernel& init_kernel,
                                KernelFn&& kernel_of) {
    if (!(cfg.Gamma > 0.0))
        throw std::invalid_argument("saddle iterations require Gamma > 0");
    if (!(cfg.eta1 > cfg.eta2 && cfg.eta2 > 0.0))
        throw std::invalid_argument("two-timescale ordering requires eta1 > eta2 > 0");

    SaddleResult result;
    const bool explicit_init = cfg.init_y != nullptr && cfg.init_mult != nullptr;
    if (explicit_init) {
        result.y = *cfg.init_y;
        result.mult = *cfg.init_mult;
    } else if (cfg.warm_start) {
        auto start = saddle_warm_start(params, init_kernel, costs);
        result.y = std::move(start.first);
        result.mult = std::move(start.second);
    } else {
        result.y = propagate_policy_free(params, init_kernel);
        result.mult = Multipliers::zeros(params.T, params.K);
    }

    auto step = [&](const TransitionKernel& kernel, double eta2) {
        OccupationMeasure gy = grad_y(result.y, result.mult, kernel, params, costs, cfg.Gamma);
        Multipliers gm = grad_multipliers(result.y, kernel, params);

        for (std::size_t j = 0; j < result.y.y.size(); ++j) {
            result.y.y[j] -= cfg.eta1 * gy.y[j];
            if (cfg.clamp_nonnegative && result.y.y[j] < 0.0) result.y.y[j] = 0.0;
        }
        auto ascend_projected = [&](std::vector<double>& v, const std::vector<double>& dv) {
            for (std::size_t j = 0; j < v.size(); ++j)
                v[j] = std::max(0.0, v[j] + eta2 * dv[j]);
        };
        ascend_projected(result.mult.lambda1, gm.lambda1);
        ascend_projected(result.mult.lambda2, gm.lambda2);
        ascend_projected(result.mult.lambda3.y, gm.lambda3.y);
        for (std::size_t j = 0; j < result.mult.mu1.size(); ++j)
            result.mult.mu1[j] += eta2 * gm.mu1[j];
        for (std::size_t j = 0; j < result.mult.mu2.size(); ++j)
            result.mult.mu2[j] += eta2 * gm.mu2[j];
        for (std::size_t j = 0; j < result.mult.mu3.size(); ++j)
            result.mult.mu3[j] += eta2 * gm.mu3[j];

        if (result.y.inf_norm() > 1e6)
            throw DivergenceError("descent-ascent iterate exceeded divergence guard");
    };

    // Short aggressive-ascent tail of the warm start: the same iteration with
    // a larger (still two-timescale) dual step finishes the multiplier travel
    // that would otherwise dominate the recorded run.
    if (!explicit_init && cfg.warm_start) {
        constexpr long kWarmupIters = 5000;
        // The stable dual step shrinks with the constraint-matrix norm (so
        // with K); halve on divergence and restart from the warm-start point.
        const OccupationMeasure y0 = result.y;
        const Multipliers mult0 = result.mult;
        double warm_eta2 = std::min(0.05, 0.5 * cfg.eta1);
        while (warm_eta2 > cfg.eta2) {
            try {
                for (long k = 0; k < kWarmupIters; ++k) step(kernel_of(k), warm_eta2);
                break;
            } catch (const DivergenceError&) {
                result.y = y0;
                result.mult = mult0;
                warm_eta2 *= 0.5;
            }
        }
    }

    const TransitionKernel* last_kernel = &init_kernel;
    for (long k = 0; k < cfg.iters; ++k) {
        const TransitionKernel& kernel = kernel_of(k);
        last_kernel = &kernel;
        if (cfg.record_every > 0 && k % cfg.record_every == 0)
            record_trace(result.traces, k, result.y, result.mult, kernel, params, costs, cfg);
        step(kernel, cfg.eta2);
    }
    record_trace(result.traces, cfg.iters, result.y, result.mult, *last_kernel, params,
                 costs, cfg);
    return result;
}

}  // namespace

SaddleResult gda(const SystemParams& params, const TransitionKernel& kernel,
                 const CostModel& costs, const SaddleConfig& cfg) {
    return run_descent_ascent(params, costs, cfg, kernel,
                              [&](long) -> const TransitionKernel& { return kernel; });
}

SaddleResult sgda(const SystemParams& params, const CostModel& costs,
                  const SaddleConfig& cfg) {
    Rng rng(cfg.seed);
    EmpiricalKernel init = estimate_kernel(params, cfg.minibatch_I, rng);
    EmpiricalKernel cumulative = init;
    TransitionKernel current = init.kernel;

    auto kernel_of = [&](long) -> const TransitionKernel& {
        EmpiricalKernel fresh = estimate_kernel(params, cfg.minibatch_I, rng);
        if (cfg.cumulative_kernel) {
            for (std::size_t j = 0; j < cumulative.counts.size(); ++j)
                cumulative.counts[j] += fresh.counts[j];
            const int K = params.K;
            for (int s = 0; s <= K; ++s)
                for (int a = 0; a < 2; ++a) {
                    if (!cumulative.kernel.admissible(s, a)) continue;
                    for (int b = 0; b < 2; ++b) {
                        const auto total = cumulative.row_count(s, a, b);
                        for (int sp = 0; sp <= K; ++sp)
                            cumulative.kernel.at(s, sp, a, b) =
                                static_cast<double>(
                                    cumulative.counts[cumulative.kernel.index(s, sp, a, b)]) /
                                static_cast<double>(total);
                    }
                }
            current = cumulative.kernel;
        } else {
            current = fresh.kernel;
        }
        return current;
    };
    return run_descent_ascent(params, costs, cfg, init.kernel, kernel_of);
}

}  // namespace wcmdp
