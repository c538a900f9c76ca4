#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "ordermem/signs.hpp"

namespace ordermem {

/// How many signs a "kappa" window spans. The default counts kappa signs;
/// the alternative reads the run condition s_n = ... = s_{n+kappa}
/// literally and spans kappa + 1 signs.
enum class RunConvention { kappa_signs, kappa_plus_one_signs };

/// Frequencies of same-sign windows for kappa = 1..kappa_max, both signs.
class RunTable {
public:
    RunTable() = default;
    RunTable(int kappa_max, std::vector<double> neg, std::vector<double> pos)
        : kappa_max_(kappa_max), neg_(std::move(neg)), pos_(std::move(pos)) {}

    [[nodiscard]] int kappa_max() const noexcept { return kappa_max_; }
    /// Throws std::out_of_range for kappa outside 1..kappa_max.
    [[nodiscard]] double at(Sign s, int kappa) const;

    friend bool operator==(const RunTable&, const RunTable&) = default;

private:
    int kappa_max_ = 0;
    std::vector<double> neg_;  // index kappa - 1
    std::vector<double> pos_;
};

/// One pass over the series. Windows are counted at every start position,
/// normalised by the number of start positions.
[[nodiscard]] RunTable run_probabilities(std::span<const Sign> signs, int kappa_max,
                                         RunConvention convention = RunConvention::kappa_signs);

[[nodiscard]] double run_probability(std::span<const Sign> signs, int kappa, Sign s,
                                     RunConvention convention = RunConvention::kappa_signs);

/// Sample autocorrelation C(1..tau_max) of a series of length n, with the
/// 2/sqrt(n) noise level.
struct AcfCurve {
    std::vector<double> values;  // values[tau - 1] = C(tau)
    std::size_t n = 0;
    double noise_level = 0.0;

    [[nodiscard]] std::size_t tau_max() const noexcept { return values.size(); }
    [[nodiscard]] double at(std::size_t tau) const { return values.at(tau - 1); }

    friend bool operator==(const AcfCurve&, const AcfCurve&) = default;
};

/// Wraps externally computed values (closed forms, other estimators).
[[nodiscard]] AcfCurve make_curve(std::vector<double> values, std::size_t n);

/// Mean-subtracted autocorrelation with the biased (1/N) normalisation:
///
///   C(tau) = sum_{i < N - tau} (x_i - m)(x_{i+tau} - m) / sum_i (x_i - m)^2
///
/// Evaluated by blocked FFT cross-correlation, so memory stays O(tau_max)
/// beyond the input itself. Throws std::invalid_argument unless
/// 1 <= tau_max < N, and std::domain_error for a zero-variance series.
[[nodiscard]] AcfCurve autocorrelation(std::span<const Sign> signs, std::size_t tau_max);
[[nodiscard]] AcfCurve autocorrelation(std::span<const double> series, std::size_t tau_max);

struct PowerLawFit {
    double a = 0.0;
    double b = 0.0;
    std::size_t points = 0;  // lags with C > 0 that entered the regression
};

/// OLS of log C(tau) on log tau over tau in [fit_min, fit_max] (clamped to
/// the curve) keeping only C > 0; C ~ a * tau^-b. Throws std::domain_error
/// with "insufficient positive support" below three usable lags.
[[nodiscard]] PowerLawFit fit_power_law(const AcfCurve& curve, std::size_t fit_min, std::size_t fit_max);

/// Largest tau* with C(tau) > noise for all tau <= tau* (0 if C(1) <= noise).
[[nodiscard]] std::size_t memory_length(const AcfCurve& curve);
[[nodiscard]] std::size_t memory_length(const AcfCurve& curve, double noise_level);

struct MemoryOptions {
    int kappa_max = 10;
    std::size_t tau_max = 10'000;  // clamped to N - 1
    std::size_t fit_min = 1;
    /// Defaults to min(tau*, 1000).
    std::optional<std::size_t> fit_max;
    RunConvention convention = RunConvention::kappa_signs;
};

struct MemoryMetrics {
    RunTable pi;
    double a = 0.0;
    double b = 0.0;
    std::size_t tau_star = 0;
    double tau_star_scaled = 0.0;
    std::size_t n = 0;
    std::size_t fit_min = 0;
    std::size_t fit_max = 0;

    friend bool operator==(const MemoryMetrics&, const MemoryMetrics&) = default;
};

[[nodiscard]] MemoryMetrics compute_metrics(std::span<const Sign> signs, const MemoryOptions& options = {});

}  // namespace ordermem
