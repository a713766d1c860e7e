// Regularized Lagrangian of the relaxed problem, its exact gradients, and
// the deterministic / stochastic gradient descent-ascent iterations.

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "wcmdp/kernel.hpp"
#include "wcmdp/measure.hpp"
#include "wcmdp/model.hpp"

namespace wcmdp {

struct SaddleConfig {
    double Gamma = 0.5;
    double eta1 = 0.1;    // fast (descent) step
    double eta2 = 0.01;   // slow (ascent) step
    long iters = 50000;
    int minibatch_I = 10;
    std::uint64_t seed = 0;
    long record_every = 100;
    const OccupationMeasure* reference = nullptr;  // optional distance target
    bool cumulative_kernel = true;   // average observations across iterations
    bool clamp_nonnegative = false;  // project y onto y >= 0 after each step
    bool warm_start = true;          // price-iteration initialization
    // Explicit start point; when both are set the warm start is skipped.
    const OccupationMeasure* init_y = nullptr;
    const Multipliers* init_mult = nullptr;
};

struct IterTrace {
    long iteration = 0;
    double lagrangian = 0.0;
    double dist_to_ref = 0.0;  // Frobenius; 0 when no reference is set
    double flow_residual_inf = 0.0;
    double max_budget_violation = 0.0;
};

struct SaddleResult {
    OccupationMeasure y;
    Multipliers mult;
    std::vector<IterTrace> traces;
};

double lagrangian(const OccupationMeasure& y, const Multipliers& mult,
                  const TransitionKernel& kernel, const SystemParams& params,
                  const CostModel& costs, double Gamma);

OccupationMeasure grad_y(const OccupationMeasure& y, const Multipliers& mult,
                         const TransitionKernel& kernel, const SystemParams& params,
                         const CostModel& costs, double Gamma);

// Constraint residuals in Multipliers shape (ascent direction).
Multipliers grad_multipliers(const OccupationMeasure& y, const TransitionKernel& kernel,
                             const SystemParams& params);

// Initial point for gda/sgda: prices the budget constraints by dual ascent
// with an exact backward-induction best response, then reads the equality
// multipliers off the value function and the nonnegativity multipliers off
// the reduced costs. Cuts the multiplier travel that dominates plain
// descent-ascent transients.
std::pair<OccupationMeasure, Multipliers> saddle_warm_start(
    const SystemParams& params, const TransitionKernel& kernel, const CostModel& costs);

class DivergenceError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

SaddleResult gda(const SystemParams& params, const TransitionKernel& kernel,
                 const CostModel& costs, const SaddleConfig& cfg);

// As gda, but each iteration draws minibatch_I fresh transitions per
// admissible (s,a,b) and, by default, folds them into a running-average
// kernel estimate; with cumulative_kernel=false each iteration uses only
// its own minibatch.
SaddleResult sgda(const SystemParams& params, const CostModel& costs,
                  const SaddleConfig& cfg);

}  // namespace wcmdp
