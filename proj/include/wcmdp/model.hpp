// Model parameters, cost functions and the flat indexing scheme shared by
// every other component of the library.

#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace wcmdp {

// Centralized tolerance constants.
constexpr double kMassTol = 1e-12;      // simplex normalization
constexpr double kRowSumTol = 1e-9;     // kernel row stochasticity
constexpr double kEpochMassTol = 1e-6;  // per-epoch occupation mass
constexpr double kKktTol = 1e-6;        // KKT certification
constexpr double kReachableTol = 1e-12; // state considered unreachable below this mass
constexpr double kDefaultTailEps = 1e-12;

// How jobs are serviced between batch arrivals: every buffered job may
// complete in a slot (Cjs) or at most the head-of-line job does (Sjs).
enum class Scenario { Cjs, Sjs };

std::string to_string(Scenario s);
Scenario scenario_from_string(const std::string& token);

struct SystemParams {
    int K = 10;            // buffer capacity per queue
    int T = 100;           // decision epochs (batch arrivals)
    double p = 0.14;       // geometric inter-arrival parameter
    double alpha = 0.5;    // admission budget
    double beta = 0.3;     // high-rate budget
    double gamma = 10.0;   // rejection-cost weight
    double b_low = 0.05;   // service-completion probability, low rate
    double b_high = 0.1;   // service-completion probability, high rate
    Scenario scenario = Scenario::Cjs;
    std::vector<double> m0;  // initial state distribution; empty = point mass on 0

    // Per-slot service completion probability for rate action b.
    double q(int b) const { return b == 0 ? b_low : b_high; }

    // m0 with the empty-queue default materialized.
    std::vector<double> initial_distribution() const;
};

class ValidationError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

// Returns params unchanged iff all invariants hold, throws ValidationError
// naming the violated field otherwise.
const SystemParams& validate(const SystemParams& params);

// Storage cost per state plus processing cost per rate action, tabulated on
// the finite domain. Both must be nondecreasing.
struct CostModel {
    std::vector<double> storage;       // size K+1
    std::array<double, 2> processing;  // indexed by rate action b

    double storage_cost(int s) const { return storage.at(static_cast<size_t>(s)); }
    double processing_cost(int b) const { return processing.at(static_cast<size_t>(b)); }

    // C_s(s) = s/K, C_p(b) = 2(1+q(b)).
    static CostModel defaults(const SystemParams& params);
};

void validate_costs(const CostModel& costs, const SystemParams& params);

// Bijection (t,s,a,b) <-> [0, T*(K+1)*4), lexicographic with t outermost.
struct FlatIndex {
    int T = 0;
    int K = 0;

    std::size_t size() const { return static_cast<std::size_t>(T) * (K + 1) * 4; }
    std::size_t per_epoch() const { return static_cast<std::size_t>(K + 1) * 4; }

    std::size_t flatten(int t, int s, int a, int b) const {
        return ((static_cast<std::size_t>(t) * (K + 1) + s) * 2 + a) * 2 + b;
    }
    std::tuple<int, int, int, int> unflatten(std::size_t i) const {
        int b = static_cast<int>(i % 2);
        i /= 2;
        int a = static_cast<int>(i % 2);
        i /= 2;
        int s = static_cast<int>(i % (K + 1));
        i /= (K + 1);
        return {static_cast<int>(i), s, a, b};
    }
};

// C_s(s) + C_p(b) + gamma*1[a=0]. Throws on out-of-range state.
double stage_cost(int s, int a, int b, const CostModel& costs, double gamma);

}  // namespace wcmdp
