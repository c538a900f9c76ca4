#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "ordermem/memory.hpp"

namespace ordermem {

/// Memory measures used as single-variable detectors of fund activity.
enum class MetricKind { pi10, a, b, tau, tau_scaled };

inline constexpr std::array<MetricKind, 5> kAllMetrics{MetricKind::pi10, MetricKind::a, MetricKind::b,
                                                       MetricKind::tau, MetricKind::tau_scaled};

[[nodiscard]] std::string_view metric_name(MetricKind kind);
[[nodiscard]] std::optional<MetricKind> parse_metric(std::string_view name);

/// Measures expected to shrink with activity (pi10, a, tau) are negated so
/// that AUC > 0.5 means detection in the expected direction.
[[nodiscard]] bool is_negated(MetricKind kind);

/// "-a" for negated metrics, the plain name otherwise.
[[nodiscard]] std::string oriented_name(MetricKind kind);

/// pi10 is the mean of the kappa = 10 run frequency over both signs, which
/// needs kappa_max >= 10.
[[nodiscard]] double metric_value(const MemoryMetrics& metrics, MetricKind kind);

[[nodiscard]] inline double oriented_value(const MemoryMetrics& metrics, MetricKind kind) {
    const double v = metric_value(metrics, kind);
    return is_negated(kind) ? -v : v;
}

}  // namespace ordermem
