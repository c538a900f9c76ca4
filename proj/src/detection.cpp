#include "ordermem/detection.hpp"

#include <stdexcept>

namespace ordermem {

std::string_view metric_name(MetricKind kind) {
    switch (kind) {
        case MetricKind::pi10: return "pi10";
        case MetricKind::a: return "a";
        case MetricKind::b: return "b";
        case MetricKind::tau: return "tau";
        case MetricKind::tau_scaled: return "tau_scaled";
    }
    return "?";
}

std::optional<MetricKind> parse_metric(std::string_view name) {
    for (const auto kind : kAllMetrics) {
        if (metric_name(kind) == name) return kind;
    }
    return std::nullopt;
}

bool is_negated(MetricKind kind) {
    return kind == MetricKind::pi10 || kind == MetricKind::a || kind == MetricKind::tau;
}

std::string oriented_name(MetricKind kind) {
    return (is_negated(kind) ? "-" : "") + std::string(metric_name(kind));
}

double metric_value(const MemoryMetrics& metrics, MetricKind kind) {
    switch (kind) {
        case MetricKind::pi10:
            if (metrics.pi.kappa_max() < 10) throw std::invalid_argument("pi10 needs kappa_max >= 10");
            return 0.5 * (metrics.pi.at(Sign::sell, 10) + metrics.pi.at(Sign::buy, 10));
        case MetricKind::a: return metrics.a;
        case MetricKind::b: return metrics.b;
        case MetricKind::tau: return static_cast<double>(metrics.tau_star);
        case MetricKind::tau_scaled: return metrics.tau_star_scaled;
    }
    throw std::logic_error("unknown metric");
}

}  // namespace ordermem
