#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "ordermem/random.hpp"
#include "ordermem/signs.hpp"

namespace ordermem {

/// Order-splitting model: M meta-orders active at all times, each emitting
/// market orders of one sign until its Pareto-tailed length is used up.
struct LmfConfig {
    int m = 1;
    double beta = 1.5;
    std::size_t n = 0;
    std::uint64_t seed = 0;
    std::int64_t l_min = 1;

    /// Throws std::invalid_argument on m < 1, beta <= 1, n < 1 or l_min < 1.
    void validate() const;
};

struct MetaOrder {
    std::size_t start = 0;        // index of the first emitted sign
    std::int64_t length = 0;      // signs actually emitted
    std::int64_t sampled_length = 0;
    Sign sign = Sign::buy;
    bool truncated = false;       // still active when the run ended

    friend bool operator==(const MetaOrder&, const MetaOrder&) = default;
};

struct SimOutput {
    SignSeries signs;
    /// Meta-orders in order of first emission. Orders that were active at the
    /// end but never picked are not logged.
    std::vector<MetaOrder> metaorders;
    /// owner[t] indexes `metaorders`: which meta-order emitted sign t.
    std::vector<std::uint32_t> owner;

    friend bool operator==(const SimOutput&, const SimOutput&) = default;
};

/// L = floor(X) with X Pareto on [l_min, inf), P(X > x) = (x / l_min)^-beta.
/// Then P(L > l) = ((l + 1) / l_min)^-beta, a tail of exponent beta.
[[nodiscard]] std::int64_t sample_length(double beta, std::int64_t l_min, Rng& rng);

/// Step-by-step generator; `simulate` and the streaming CLI both use it.
class LmfSimulator {
public:
    explicit LmfSimulator(const LmfConfig& config);

    struct Step {
        Sign sign;
        std::size_t slot;
        bool started;   // first sign of this meta-order
        bool finished;  // last sign; the slot was refilled
        std::int64_t sampled_length;
    };

    Step step();

private:
    struct Active {
        std::int64_t remaining;
        std::int64_t sampled;
        Sign sign;
        bool started;
    };
    Active fresh();

    LmfConfig config_;
    Rng rng_;
    std::vector<Active> active_;
};

[[nodiscard]] SimOutput simulate(const LmfConfig& config);

/// Large-lag prediction C(tau) ~ M^(beta-2) / beta * tau^-(beta-1).
[[nodiscard]] double theoretical_acf(int m, double beta, double tau);

}  // namespace ordermem
