#include "ordermem/lmf.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ordermem {

void LmfConfig::validate() const {
    if (m < 1) throw std::invalid_argument("lmf: M must be >= 1");
    if (!(beta > 1.0) || !std::isfinite(beta)) throw std::invalid_argument("lmf: beta must be > 1");
    if (n < 1) throw std::invalid_argument("lmf: n must be >= 1");
    if (l_min < 1) throw std::invalid_argument("lmf: l_min must be >= 1");
}

std::int64_t sample_length(double beta, std::int64_t l_min, Rng& rng) {
    if (!(beta > 0.0) || !std::isfinite(beta)) throw std::invalid_argument("sample_length: beta must be > 0");
    if (l_min < 1) throw std::invalid_argument("sample_length: l_min must be >= 1");
    const double u = rng.uniform_open_zero();
    const double x = static_cast<double>(l_min) * std::pow(u, -1.0 / beta);
    // Lengths beyond 2^62 cannot be emitted by any run anyway.
    constexpr double kCap = 0x1.0p62;
    if (!(x < kCap)) return static_cast<std::int64_t>(kCap);
    return std::max(l_min, static_cast<std::int64_t>(std::floor(x)));
}

LmfSimulator::LmfSimulator(const LmfConfig& config) : config_(config), rng_(config.seed) {
    config_.validate();
    active_.reserve(static_cast<std::size_t>(config_.m));
    for (int i = 0; i < config_.m; ++i) active_.push_back(fresh());
}

LmfSimulator::Active LmfSimulator::fresh() {
    const auto length = sample_length(config_.beta, config_.l_min, rng_);
    const Sign sign = rng_.coin() ? Sign::buy : Sign::sell;
    return Active{length, length, sign, false};
}

LmfSimulator::Step LmfSimulator::step() {
    const std::size_t slot = active_.size() == 1 ? 0 : static_cast<std::size_t>(rng_.below(active_.size()));
    Active& order = active_[slot];
    Step out{order.sign, slot, !order.started, false, order.sampled};
    order.started = true;
    if (--order.remaining == 0) {
        out.finished = true;
        order = fresh();
    }
    return out;
}

SimOutput simulate(const LmfConfig& config) {
    config.validate();
    LmfSimulator sim(config);
    SimOutput out;
    out.signs.asset_id = "LMF";
    out.signs.signs.reserve(config.n);
    out.owner.reserve(config.n);

    constexpr auto kUnlogged = std::numeric_limits<std::uint32_t>::max();
    std::vector<std::uint32_t> log_index(static_cast<std::size_t>(config.m), kUnlogged);
    for (std::size_t t = 0; t < config.n; ++t) {
        const auto step = sim.step();
        if (step.started) {
            log_index[step.slot] = static_cast<std::uint32_t>(out.metaorders.size());
            out.metaorders.push_back(MetaOrder{t, 0, step.sampled_length, step.sign, false});
        }
        const auto id = log_index[step.slot];
        ++out.metaorders[id].length;
        out.owner.push_back(id);
        out.signs.signs.push_back(step.sign);
        if (step.finished) log_index[step.slot] = kUnlogged;
    }
    for (const auto id : log_index) {
        if (id != kUnlogged) out.metaorders[id].truncated = true;
    }
    return out;
}

double theoretical_acf(int m, double beta, double tau) {
    if (m < 1) throw std::invalid_argument("theoretical_acf: M must be >= 1");
    if (!(beta > 1.0)) throw std::invalid_argument("theoretical_acf: beta must be > 1");
    if (!(tau >= 1.0)) throw std::invalid_argument("theoretical_acf: tau must be >= 1");
    return std::pow(static_cast<double>(m), beta - 2.0) / beta * std::pow(tau, -(beta - 1.0));
}

}  // namespace ordermem
