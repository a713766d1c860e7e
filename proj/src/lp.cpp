#include "wcmdp/lp.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>
#include <cstdio>
#include <cstdlib>

namespace wcmdp {

namespace {

// Reduced coordinates drop y[t][K][1][b]; everything else keeps FlatIndex order.
struct Reduction {
    std::vector<std::ptrdiff_t> full_to_red;
    std::vector<std::size_t> red_to_full;

    explicit Reduction(const FlatIndex& idx) {
        full_to_red.assign(idx.size(), -1);
        red_to_full.reserve(idx.size());
        for (std::size_t j = 0; j < idx.size(); ++j) {
            auto [t, s, a, b] = idx.unflatten(j);
            (void)t;
            (void)b;
            if (s == idx.K && a == 1) continue;
            full_to_red[j] = static_cast<std::ptrdiff_t>(red_to_full.size());
            red_to_full.push_back(j);
        }
    }
};

}  // namespace

Eigen::VectorXd LpInstance::reduce(const OccupationMeasure& y) const {
    Reduction red(idx);
    Eigen::VectorXd x(static_cast<Eigen::Index>(red.red_to_full.size()));
    for (std::size_t i = 0; i < red.red_to_full.size(); ++i)
        x[static_cast<Eigen::Index>(i)] = y.y[red.red_to_full[i]];
    return x;
}

OccupationMeasure LpInstance::expand(const Eigen::VectorXd& x) const {
    Reduction red(idx);
    OccupationMeasure y(idx.T, idx.K);
    for (std::size_t i = 0; i < red.red_to_full.size(); ++i)
        y.y[red.red_to_full[i]] = x[static_cast<Eigen::Index>(i)];
    return y;
}

double LpInstance::objective(const OccupationMeasure& y) const {
    return c.dot(reduce(y)) + objective_constant;
}

std::pair<double, double> budget_probs(const OccupationMeasure& y, int t) {
    const int K = y.idx.K;
    double pi_a = 0.0, pi_h = 0.0;
    for (int s = 0; s <= K; ++s) {
        for (int a = 0; a < 2; ++a) pi_h += y(t, s, a, 1);
        if (s < K)
            for (int b = 0; b < 2; ++b) pi_a += y(t, s, 1, b);
    }
    return {pi_a, pi_h};
}

std::pair<double, double> normalized_metrics(const OccupationMeasure& y,
                                             const SystemParams& params) {
    double sum_a = 0.0, sum_h = 0.0;
    for (int t = 0; t < y.idx.T; ++t) {
        auto [pa, ph] = budget_probs(y, t);
        sum_a += pa;
        sum_h += ph;
    }
    return {sum_a / (params.alpha * y.idx.T), sum_h / (params.beta * y.idx.T)};
}

LpInstance build_lp(const SystemParams& params, const TransitionKernel& kernel,
                    const CostModel& costs) {
    validate(params);
    validate_costs(costs, params);

    const int K = params.K;
    const int T = params.T;
    LpInstance inst;
    inst.idx = FlatIndex{T, K};
    inst.params = params;
    inst.costs = costs;
    inst.kernel = kernel;

    Reduction red(inst.idx);
    const auto n = static_cast<Eigen::Index>(red.red_to_full.size());

    // Objective in the gamma*(1-pi_A) form; the dropped gamma*T is restored
    // as a reported constant.
    inst.c.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        auto [t, s, a, b] = inst.idx.unflatten(red.red_to_full[static_cast<std::size_t>(i)]);
        (void)t;
        double coeff = costs.storage_cost(s) + costs.processing_cost(b);
        if (a == 1 && s < K) coeff -= params.gamma;
        inst.c[i] = coeff;
    }
    inst.objective_constant = params.gamma * T;

    const auto m0 = params.initial_distribution();
    const Eigen::Index m_eq = static_cast<Eigen::Index>(K + 1) * T;
    inst.a_eq.resize(m_eq, n);
    inst.b_eq.setZero(m_eq);

    std::vector<Eigen::Triplet<double>> trip;
    auto rcol = [&](int t, int s, int a, int b) {
        return red.full_to_red[inst.idx.flatten(t, s, a, b)];
    };
    // Initial-distribution rows.
    for (int s = 0; s <= K; ++s) {
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                if (auto col = rcol(0, s, a, b); col >= 0)
                    trip.emplace_back(s, static_cast<Eigen::Index>(col), 1.0);
        inst.b_eq[s] = m0[static_cast<std::size_t>(s)];
    }
    // Flow rows, t = 0..T-2.
    for (int t = 0; t + 1 < T; ++t) {
        for (int s = 0; s <= K; ++s) {
            const Eigen::Index row = (K + 1) + static_cast<Eigen::Index>(t) * (K + 1) + s;
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    if (auto col = rcol(t + 1, s, a, b); col >= 0)
                        trip.emplace_back(row, static_cast<Eigen::Index>(col), 1.0);
            for (int sp = 0; sp <= K; ++sp)
                for (int a = 0; a < 2; ++a)
                    for (int b = 0; b < 2; ++b)
                        if (auto col = rcol(t, sp, a, b); col >= 0) {
                            const double prob = kernel(sp, s, a, b);
                            if (prob != 0.0)
                                trip.emplace_back(row, static_cast<Eigen::Index>(col), -prob);
                        }
        }
    }
    inst.a_eq.setFromTriplets(trip.begin(), trip.end());

    // Budget rows: admission (even), high rate (odd), per epoch.
    inst.a_in.resize(2 * static_cast<Eigen::Index>(T), n);
    inst.b_in.resize(2 * static_cast<Eigen::Index>(T));
    trip.clear();
    for (int t = 0; t < T; ++t) {
        const Eigen::Index row_a = 2 * static_cast<Eigen::Index>(t);
        for (int s = 0; s < K; ++s)
            for (int b = 0; b < 2; ++b)
                if (auto col = rcol(t, s, 1, b); col >= 0)
                    trip.emplace_back(row_a, static_cast<Eigen::Index>(col), 1.0);
        inst.b_in[row_a] = params.alpha;
        for (int s = 0; s <= K; ++s)
            for (int a = 0; a < 2; ++a)
                if (auto col = rcol(t, s, a, 1); col >= 0)
                    trip.emplace_back(row_a + 1, static_cast<Eigen::Index>(col), 1.0);
        inst.b_in[row_a + 1] = params.beta;
    }
    inst.a_in.setFromTriplets(trip.begin(), trip.end());
    return inst;
}

OccupationMeasure propagate_policy_free(const SystemParams& params,
                                        const TransitionKernel& kernel) {
    OccupationMeasure y(params.T, params.K);
    std::vector<double> m = params.initial_distribution();
    for (int t = 0; t < params.T; ++t) {
        for (int s = 0; s <= params.K; ++s) y.at(t, s, 0, 0) = m[static_cast<std::size_t>(s)];
        std::vector<double> next(m.size(), 0.0);
        for (int s = 0; s <= params.K; ++s)
            for (int sp = 0; sp <= params.K; ++sp)
                next[static_cast<std::size_t>(sp)] += m[static_cast<std::size_t>(s)] * kernel(s, sp, 0, 0);
        m = std::move(next);
    }
    return y;
}

namespace {

// Stationarity of the regularized Lagrangian at (y, mult), full coordinates.
double stationarity_inf_norm(const LpInstance& inst, double Gamma,
                             const OccupationMeasure& y, const Multipliers& mult) {
    const int K = inst.idx.K;
    const int T = inst.idx.T;
    const auto& params = inst.params;
    double worst = 0.0;
    for (int t = 0; t < T; ++t)
        for (int s = 0; s <= K; ++s)
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) {
                    double g = inst.costs.storage_cost(s) + inst.costs.processing_cost(b) +
                               2.0 * Gamma * y(t, s, a, b) - mult.lambda3(t, s, a, b);
                    if (a == 1 && s < K) g += mult.lambda1[static_cast<std::size_t>(t)] - params.gamma;
                    if (b == 1) g += mult.lambda2[static_cast<std::size_t>(t)];
                    if (t == 0) g += mult.mu1[static_cast<std::size_t>(s)];
                    if (s == K && a == 1) g += mult.mu2_at(t, b);
                    if (t >= 1) g += mult.mu3_at(t - 1, s);
                    if (t <= T - 2)
                        for (int spp = 0; spp <= K; ++spp)
                            g -= mult.mu3_at(t, spp) * inst.kernel(s, spp, a, b);
                    worst = std::max(worst, std::abs(g));
                }
    return worst;
}

}  // namespace

KktReport evaluate_kkt(const LpInstance& inst, double Gamma,
                       const OccupationMeasure& y, const Multipliers& mult) {
    const int K = inst.idx.K;
    const int T = inst.idx.T;
    const auto m0 = inst.params.initial_distribution();
    KktReport report;

    report.stationarity = stationarity_inf_norm(inst, Gamma, y, mult);

    double primal = 0.0;
    for (int s = 0; s <= K; ++s)
        primal = std::max(primal, std::abs(y.state_mass(0, s) - m0[static_cast<std::size_t>(s)]));
    for (int t = 0; t + 1 < T; ++t)
        for (int s = 0; s <= K; ++s) {
            double inflow = 0.0;
            for (int sp = 0; sp <= K; ++sp)
                for (int a = 0; a < 2; ++a)
                    for (int b = 0; b < 2; ++b)
                        inflow += y(t, sp, a, b) * inst.kernel(sp, s, a, b);
            primal = std::max(primal, std::abs(y.state_mass(t + 1, s) - inflow));
        }
    for (int t = 0; t < T; ++t) {
        for (int b = 0; b < 2; ++b) primal = std::max(primal, std::abs(y(t, K, 1, b)));
        auto [pa, ph] = budget_probs(y, t);
        primal = std::max(primal, pa - inst.params.alpha);
        primal = std::max(primal, ph - inst.params.beta);
    }
    for (double v : y.y) primal = std::max(primal, -v);
    report.primal_feasibility = primal;

    double dual = 0.0;
    for (double v : mult.lambda1) dual = std::max(dual, -v);
    for (double v : mult.lambda2) dual = std::max(dual, -v);
    for (double v : mult.lambda3.y) dual = std::max(dual, -v);
    report.dual_feasibility = dual;

    double comp = 0.0;
    for (int t = 0; t < T; ++t) {
        auto [pa, ph] = budget_probs(y, t);
        comp = std::max(comp, std::abs(mult.lambda1[static_cast<std::size_t>(t)] *
                                       (pa - inst.params.alpha)));
        comp = std::max(comp, std::abs(mult.lambda2[static_cast<std::size_t>(t)] *
                                       (ph - inst.params.beta)));
    }
    for (std::size_t j = 0; j < y.y.size(); ++j)
        comp = std::max(comp, std::abs(mult.lambda3.y[j] * y.y[j]));
    report.complementarity = comp;
    return report;
}

LpSolution solve_exact(const LpInstance& inst, double Gamma, double tol) {
    if (Gamma < 0.0) throw std::invalid_argument("solve_exact: Gamma must be nonnegative");
    const auto n = static_cast<Eigen::Index>(inst.n_reduced());
    const Eigen::Index m_eq = inst.a_eq.rows();
    const Eigen::Index m_in = inst.a_in.rows();
    const int K = inst.idx.K;
    const int T = inst.idx.T;

    // Warm start: blend the propagated never-admit measure with a uniform
    // interior component so all bound slacks start strictly positive.
    Eigen::VectorXd x =
        inst.reduce(propagate_policy_free(inst.params, inst.kernel)) * 0.99;
    x.array() += 0.01 / (4.0 * (K + 1));
    Eigen::VectorXd mu = Eigen::VectorXd::Zero(m_eq);
    Eigen::VectorXd zx = Eigen::VectorXd::Ones(n);
    Eigen::VectorXd w = (inst.b_in - inst.a_in * x).cwiseMax(1e-3);
    Eigen::VectorXd zb = Eigen::VectorXd::Ones(m_in);

    const SparseMat a_eq_t = SparseMat(inst.a_eq.transpose());
    const SparseMat a_in_t = SparseMat(inst.a_in.transpose());
    const double delta = 1e-11;  // static quasidefinite regularization

    Eigen::SparseLU<SparseMat, Eigen::COLAMDOrdering<int>> lu;
    bool pattern_analyzed = false;

    auto residuals = [&](KktReport& rep) {
        Eigen::VectorXd r_d = 2.0 * Gamma * x + inst.c + a_eq_t * mu + a_in_t * zb - zx;
        Eigen::VectorXd r_p = inst.a_eq * x - inst.b_eq;
        Eigen::VectorXd r_w = inst.a_in * x + w - inst.b_in;
        rep.stationarity = r_d.lpNorm<Eigen::Infinity>();
        rep.primal_feasibility =
            std::max(r_p.lpNorm<Eigen::Infinity>(), r_w.lpNorm<Eigen::Infinity>());
        rep.dual_feasibility = std::max(0.0, std::max(-zx.minCoeff(), -zb.minCoeff()));
        rep.complementarity = std::max(x.cwiseProduct(zx).lpNorm<Eigen::Infinity>(),
                                       w.cwiseProduct(zb).lpNorm<Eigen::Infinity>());
        return std::make_tuple(r_d, r_p, r_w);
    };

    const int max_iters = 200;
    int iter = 0;
    KktReport rep;
    // Late-stage numerics can corrupt an already-converged iterate, so keep
    // the best point seen and fall back to it.
    double best_score = std::numeric_limits<double>::infinity();
    Eigen::VectorXd best_x = x, best_mu = mu, best_w = w, best_zx = zx, best_zb = zb;
    for (; iter < max_iters; ++iter) {
        auto [r_d, r_p, r_w] = residuals(rep);
        if (std::getenv("WCMDP_IPM_DEBUG"))
            std::fprintf(stderr, "it %3d stat %.3e prim %.3e comp %.3e\n", iter,
                         rep.stationarity, rep.primal_feasibility, rep.complementarity);
        const double score = std::max({rep.stationarity, rep.primal_feasibility,
                                       rep.complementarity});
        if (score < best_score) {
            best_score = score;
            best_x = x;
            best_mu = mu;
            best_w = w;
            best_zx = zx;
            best_zb = zb;
        }
        if (score <= 0.1 * tol) break;

        const double mu_bar = (x.dot(zx) + w.dot(zb)) / static_cast<double>(n + m_in);
        // Barrier exhausted: no further progress is possible in doubles.
        if (mu_bar < 1e-13 && best_score <= tol) break;

        Eigen::VectorXd dxz = (zx.array() / x.array()).matrix();
        Eigen::VectorXd dwz = (zb.array() / w.array()).matrix();

        SparseMat kkt(n + m_eq, n + m_eq);
        {
            std::vector<Eigen::Triplet<double>> trip;
            SparseMat d(m_in, m_in);
            {
                std::vector<Eigen::Triplet<double>> dt;
                for (Eigen::Index i = 0; i < m_in; ++i) dt.emplace_back(i, i, dwz[i]);
                d.setFromTriplets(dt.begin(), dt.end());
            }
            SparseMat btdb = SparseMat(a_in_t * d * inst.a_in);
            trip.reserve(static_cast<std::size_t>(btdb.nonZeros() + n + m_eq) +
                         2 * static_cast<std::size_t>(inst.a_eq.nonZeros()));
            for (int kcol = 0; kcol < btdb.outerSize(); ++kcol)
                for (SparseMat::InnerIterator it(btdb, kcol); it; ++it)
                    trip.emplace_back(it.row(), it.col(), it.value());
            for (Eigen::Index i = 0; i < n; ++i)
                trip.emplace_back(i, i, 2.0 * Gamma + dxz[i] + delta);
            for (int kcol = 0; kcol < inst.a_eq.outerSize(); ++kcol)
                for (SparseMat::InnerIterator it(inst.a_eq, kcol); it; ++it) {
                    trip.emplace_back(n + it.row(), it.col(), it.value());
                    trip.emplace_back(it.col(), n + it.row(), it.value());
                }
            for (Eigen::Index i = 0; i < m_eq; ++i) trip.emplace_back(n + i, n + i, -delta);
            kkt.setFromTriplets(trip.begin(), trip.end());
        }
        if (!pattern_analyzed) {
            lu.analyzePattern(kkt);
            pattern_analyzed = true;
        }
        lu.factorize(kkt);
        if (lu.info() != Eigen::Success) {
            // Near-singular late-stage systems: settle for the best iterate if
            // it is already certified, otherwise report the failure.
            if (best_score <= tol) break;
            SolverError err("solve_exact: KKT factorization failed");
            err.residuals = rep;
            throw err;
        }

        auto solve_step = [&](const Eigen::VectorXd& comp_x, const Eigen::VectorXd& comp_w) {
            Eigen::VectorXd rhs(n + m_eq);
            rhs.head(n) = -r_d - (comp_x.array() / x.array()).matrix() -
                          a_in_t * ((zb.array() * r_w.array() - comp_w.array()) / w.array())
                                       .matrix();
            rhs.tail(m_eq) = -r_p;
            Eigen::VectorXd sol = lu.solve(rhs);
            // One refinement pass against the unregularized system.
            Eigen::VectorXd resid(n + m_eq);
            {
                Eigen::VectorXd sx = sol.head(n);
                Eigen::VectorXd sm = sol.tail(m_eq);
                Eigen::VectorXd hx = (2.0 * Gamma + 0.0) * sx + dxz.cwiseProduct(sx) +
                                     a_in_t * dwz.cwiseProduct(inst.a_in * sx) + a_eq_t * sm;
                resid.head(n) = rhs.head(n) - hx;
                resid.tail(m_eq) = rhs.tail(m_eq) - inst.a_eq * sx;
            }
            sol += lu.solve(resid);

            Eigen::VectorXd dx = sol.head(n);
            Eigen::VectorXd dmu = sol.tail(m_eq);
            Eigen::VectorXd dw = -r_w - inst.a_in * dx;
            Eigen::VectorXd dzx =
                ((-comp_x.array() - zx.array() * dx.array()) / x.array()).matrix();
            Eigen::VectorXd dzb =
                ((-comp_w.array() - zb.array() * dw.array()) / w.array()).matrix();
            return std::make_tuple(dx, dmu, dw, dzx, dzb);
        };

        auto max_step = [](const Eigen::VectorXd& v, const Eigen::VectorXd& dv) {
            double alpha = 1.0;
            for (Eigen::Index i = 0; i < v.size(); ++i)
                if (dv[i] < 0.0) alpha = std::min(alpha, -v[i] / dv[i]);
            return alpha;
        };

        // Predictor.
        Eigen::VectorXd comp_x = x.cwiseProduct(zx);
        Eigen::VectorXd comp_w = w.cwiseProduct(zb);
        auto [dx_a, dmu_a, dw_a, dzx_a, dzb_a] = solve_step(comp_x, comp_w);
        double ap = std::min(max_step(x, dx_a), max_step(w, dw_a));
        double ad = std::min(max_step(zx, dzx_a), max_step(zb, dzb_a));
        double mu_aff = ((x + ap * dx_a).dot(zx + ad * dzx_a) +
                         (w + ap * dw_a).dot(zb + ad * dzb_a)) /
                        static_cast<double>(n + m_in);
        double sigma = std::pow(std::max(mu_aff, 0.0) / mu_bar, 3.0);
        sigma = std::clamp(sigma, 1e-8, 1.0);

        // Corrector.
        comp_x += dx_a.cwiseProduct(dzx_a);
        comp_x.array() -= sigma * mu_bar;
        comp_w += dw_a.cwiseProduct(dzb_a);
        comp_w.array() -= sigma * mu_bar;
        auto [dx, dmu, dw, dzx, dzb] = solve_step(comp_x, comp_w);

        const double eta = mu_bar > 1e-4 ? 0.995 : 0.9995;
        ap = std::min(1.0, eta * std::min(max_step(x, dx), max_step(w, dw)));
        ad = std::min(1.0, eta * std::min(max_step(zx, dzx), max_step(zb, dzb)));
        x += ap * dx;
        w += ap * dw;
        mu += ad * dmu;
        zx += ad * dzx;
        zb += ad * dzb;
    }

    residuals(rep);
    if (std::max({rep.stationarity, rep.primal_feasibility, rep.complementarity}) >
        best_score) {
        x = best_x;
        mu = best_mu;
        w = best_w;
        zx = best_zx;
        zb = best_zb;
        residuals(rep);
    }
    if (!(rep.stationarity <= tol && rep.primal_feasibility <= tol &&
          rep.complementarity <= tol)) {
        SolverError err("solve_exact: iteration limit exceeded before reaching tolerance");
        err.residuals = rep;
        throw err;
    }

    double objective_x = inst.c.dot(x);
    if (Gamma == 0.0) {
        // Pure-LP objective polish. Strict complementarity identifies the
        // optimal face; the objective is constant on it, so any feasible
        // point on that face carries the exact optimal value even when the
        // iterates themselves stall a few digits short.
        std::vector<Eigen::Index> free_idx;
        for (Eigen::Index i = 0; i < n; ++i)
            if (zx[i] <= x[i]) free_idx.push_back(i);
        std::vector<Eigen::Index> act_rows;
        for (Eigen::Index j = 0; j < m_in; ++j)
            if (w[j] < zb[j]) act_rows.push_back(j);
        const Eigen::Index nf = static_cast<Eigen::Index>(free_idx.size());
        const Eigen::Index ma = static_cast<Eigen::Index>(act_rows.size());
        Eigen::MatrixXd a_eq_d(inst.a_eq);
        Eigen::MatrixXd a_in_d(inst.a_in);
        Eigen::MatrixXd face(m_eq + ma, nf);
        Eigen::VectorXd rhs(m_eq + ma);
        rhs.head(m_eq) = inst.b_eq;
        for (Eigen::Index r = 0; r < ma; ++r) rhs[m_eq + r] = inst.b_in[act_rows[r]];
        for (Eigen::Index cidx = 0; cidx < nf; ++cidx) {
            face.col(cidx).head(m_eq) = a_eq_d.col(free_idx[cidx]);
            for (Eigen::Index r = 0; r < ma; ++r)
                face(m_eq + r, cidx) = a_in_d(act_rows[r], free_idx[cidx]);
        }
        const Eigen::VectorXd xf = face.colPivHouseholderQr().solve(rhs);
        const double primal_res = (face * xf - rhs).lpNorm<Eigen::Infinity>();
        // The face value equals the optimum when c restricted to the face is
        // constant, i.e. c_free lies in the row space of the active system.
        Eigen::VectorXd c_free(nf);
        for (Eigen::Index cidx = 0; cidx < nf; ++cidx) c_free[cidx] = inst.c[free_idx[cidx]];
        const Eigen::MatrixXd face_t = face.transpose();
        const Eigen::VectorXd theta = face_t.colPivHouseholderQr().solve(c_free);
        const double dual_res = (face_t * theta - c_free).lpNorm<Eigen::Infinity>();
        Eigen::VectorXd xp = Eigen::VectorXd::Zero(n);
        for (Eigen::Index cidx = 0; cidx < nf; ++cidx) xp[free_idx[cidx]] = xf[cidx];
        if (primal_res <= 1e-8 && dual_res <= 1e-6)
            objective_x = std::min(objective_x, inst.c.dot(xp));
    }

    LpSolution sol;
    sol.y = inst.expand(x);
    sol.iterations = iter;
    sol.objective = objective_x + inst.objective_constant;

    Multipliers mult = Multipliers::zeros(T, K);
    for (int t = 0; t < T; ++t) {
        mult.lambda1[static_cast<std::size_t>(t)] = zb[2 * static_cast<Eigen::Index>(t)];
        mult.lambda2[static_cast<std::size_t>(t)] = zb[2 * static_cast<Eigen::Index>(t) + 1];
    }
    mult.lambda3 = inst.expand(zx);
    for (int s = 0; s <= K; ++s) mult.mu1[static_cast<std::size_t>(s)] = mu[s];
    for (int t = 0; t + 1 < T; ++t)
        for (int s = 0; s <= K; ++s)
            mult.mu3_at(t, s) = mu[(K + 1) + static_cast<Eigen::Index>(t) * (K + 1) + s];
    // Full-buffer multipliers as negated reduced costs of the eliminated
    // coordinates, so stationarity holds there too.
    for (int t = 0; t < T; ++t)
        for (int b = 0; b < 2; ++b) {
            double rc = inst.costs.storage_cost(K) + inst.costs.processing_cost(b);
            if (b == 1) rc += mult.lambda2[static_cast<std::size_t>(t)];
            if (t == 0) rc += mult.mu1[static_cast<std::size_t>(K)];
            if (t >= 1) rc += mult.mu3_at(t - 1, K);
            mult.mu2_at(t, b) = -rc;
        }
    sol.mult = mult;
    sol.kkt = evaluate_kkt(inst, Gamma, sol.y, sol.mult);
    return sol;
}

}  // namespace wcmdp
