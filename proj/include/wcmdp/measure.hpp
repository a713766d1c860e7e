// Occupation-measure tensor and the Lagrange multiplier bundle.

#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "wcmdp/model.hpp"

namespace wcmdp {

// y[t][s][a][b] = expected fraction of queues in state s taking actions
// (a,b) at epoch t.
struct OccupationMeasure {
    FlatIndex idx;
    std::vector<double> y;

    OccupationMeasure() = default;
    OccupationMeasure(int T, int K) : idx{T, K}, y(idx.size(), 0.0) {}

    double operator()(int t, int s, int a, int b) const { return y[idx.flatten(t, s, a, b)]; }
    double& at(int t, int s, int a, int b) { return y[idx.flatten(t, s, a, b)]; }

    // State marginal m_s(t) = sum_{a,b} y(t,s,a,b).
    double state_mass(int t, int s) const {
        double m = 0.0;
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) m += (*this)(t, s, a, b);
        return m;
    }

    double squared_norm() const {
        double total = 0.0;
        for (double v : y) total += v * v;
        return total;
    }
    double frobenius_distance(const OccupationMeasure& other) const {
        double total = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) {
            const double d = y[i] - other.y[i];
            total += d * d;
        }
        return std::sqrt(total);
    }
    double inf_norm() const {
        double m = 0.0;
        for (double v : y) m = std::max(m, std::abs(v));
        return m;
    }
};

// Lagrange multipliers of the relaxed problem. lambda components are kept
// nonnegative by projection; mu components are unconstrained.
struct Multipliers {
    std::vector<double> lambda1;  // [T], admission budget
    std::vector<double> lambda2;  // [T], high-rate budget
    OccupationMeasure lambda3;    // [T][K+1][2][2], nonnegativity
    std::vector<double> mu1;      // [K+1], initial distribution
    std::vector<double> mu2;      // [T][2], full-buffer zero, indexed t*2+b
    std::vector<double> mu3;      // [T-1][K+1], flow t -> t+1, indexed t*(K+1)+s

    static Multipliers zeros(int T, int K);

    double& mu2_at(int t, int b) { return mu2[static_cast<std::size_t>(t) * 2 + b]; }
    double mu2_at(int t, int b) const { return mu2[static_cast<std::size_t>(t) * 2 + b]; }
    double& mu3_at(int t, int s) {
        return mu3[static_cast<std::size_t>(t) * (lambda3.idx.K + 1) + s];
    }
    double mu3_at(int t, int s) const {
        return mu3[static_cast<std::size_t>(t) * (lambda3.idx.K + 1) + s];
    }
};

}  // namespace wcmdp
