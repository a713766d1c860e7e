// Relaxed occupation-measure LP: instance assembly and a self-contained
// primal-dual interior-point solver handling both the plain LP and its
// l2-regularized variant, with a KKT certificate.

#pragma once

#include <Eigen/Sparse>
#include <utility>

#include "wcmdp/kernel.hpp"
#include "wcmdp/measure.hpp"
#include "wcmdp/model.hpp"

namespace wcmdp {

using SparseMat = Eigen::SparseMatrix<double>;

// The LP over FlatIndex coordinates. The two full-buffer coordinates per
// epoch, y[t][K][1][b], are eliminated from the numerical core; equality
// rows therefore cover only initial-distribution and flow constraints, and
// the full-buffer multipliers mu2 are recovered as reduced costs.
struct LpInstance {
    FlatIndex idx;
    SystemParams params;
    CostModel costs;
    TransitionKernel kernel;

    Eigen::VectorXd c;          // reduced coordinates, size n_reduced
    double objective_constant;  // gamma*T, from the gamma*(1-pi_A) form
    SparseMat a_eq;             // (K+1)*T rows: K+1 initial, (K+1)(T-1) flow
    Eigen::VectorXd b_eq;
    SparseMat a_in;             // 2T budget rows: admission then high-rate per t
    Eigen::VectorXd b_in;

    std::size_t n_reduced() const { return static_cast<std::size_t>(c.size()); }

    // Mapping between the full tensor and the reduced coordinate vector.
    Eigen::VectorXd reduce(const OccupationMeasure& y) const;
    OccupationMeasure expand(const Eigen::VectorXd& x) const;

    double objective(const OccupationMeasure& y) const;
};

struct KktReport {
    double stationarity = 0.0;
    double primal_feasibility = 0.0;
    double dual_feasibility = 0.0;
    double complementarity = 0.0;

    bool certified(double tol = kKktTol) const {
        return stationarity <= tol && primal_feasibility <= tol &&
               dual_feasibility <= tol && complementarity <= tol;
    }
};

struct LpSolution {
    OccupationMeasure y;
    Multipliers mult;
    KktReport kkt;
    double objective = 0.0;  // c'y + gamma*T
    int iterations = 0;
};

class SolverError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
    KktReport residuals;
};

// pi_A(t) = sum_{s<K,b} y(t,s,1,b); pi_H(t) = sum_{s,a} y(t,s,a,1).
std::pair<double, double> budget_probs(const OccupationMeasure& y, int t);

LpInstance build_lp(const SystemParams& params, const TransitionKernel& kernel,
                    const CostModel& costs);

// Never-admit, low-rate measure propagated through the kernel; feasible by
// construction and used as the interior-point warm start.
OccupationMeasure propagate_policy_free(const SystemParams& params,
                                        const TransitionKernel& kernel);

// Minimizes objective + Gamma*||y||^2 over the occupation polytope via a
// predictor-corrector interior-point method. All KktReport residuals are
// at most tol on success; throws SolverError with residuals attached
// otherwise.
LpSolution solve_exact(const LpInstance& instance, double Gamma, double tol = kKktTol);

// (pi_A_hat, pi_H_hat) normalized by alpha*T and beta*T.
std::pair<double, double> normalized_metrics(const OccupationMeasure& y,
                                             const SystemParams& params);

// Residual-based KKT evaluation for an arbitrary primal-dual point.
KktReport evaluate_kkt(const LpInstance& instance, double Gamma,
                       const OccupationMeasure& y, const Multipliers& mult);

}  // namespace wcmdp
