#include "wcmdp/measure.hpp"

namespace wcmdp {

Multipliers Multipliers::zeros(int T, int K) {
    Multipliers mult;
    mult.lambda1.assign(static_cast<std::size_t>(T), 0.0);
    mult.lambda2.assign(static_cast<std::size_t>(T), 0.0);
    mult.lambda3 = OccupationMeasure(T, K);
    mult.mu1.assign(static_cast<std::size_t>(K) + 1, 0.0);
    mult.mu2.assign(static_cast<std::size_t>(T) * 2, 0.0);
    mult.mu3.assign(static_cast<std::size_t>(T > 0 ? T - 1 : 0) * (K + 1), 0.0);
    return mult;
}

}  // namespace wcmdp
