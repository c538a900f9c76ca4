#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "ordermem/ingest.hpp"

namespace ordermem {

/// Net dollar change of all fund positions in `asset` from quarter q-1 to q,
/// over the quarter's traded volume. Positive means funds bought on net.
/// Throws std::invalid_argument without a volume or a prior quarter.
[[nodiscard]] double directional_ratio(const OwnershipPanel& panel, const std::string& asset, int quarter);

/// Sum of absolute per-fund changes over the same volume; S >= |r|.
[[nodiscard]] double absolute_ratio(const OwnershipPanel& panel, const std::string& asset, int quarter);

struct ActivityRatios {
    std::string asset_id;
    int quarter = 0;
    double r = 0.0;
    double R = 0.0;
    double S = 0.0;
};

[[nodiscard]] ActivityRatios activity_ratios(const OwnershipPanel& panel, const std::string& asset, int quarter);

/// Ratios for every (asset, quarter) with a volume entry, skipping the first
/// quarter of the panel. Ordered by quarter, then asset.
[[nodiscard]] std::vector<ActivityRatios> all_activity_ratios(const OwnershipPanel& panel);

struct GroupAssignment {
    int quarter = 0;
    int groups = 20;
    std::map<std::string, int> group_of;  // 1 = smallest values
};

/// Equal-population buckets: with assets ranked 1..n ascending (ties by
/// asset id), rank k lands in group ceil(k * G / n).
[[nodiscard]] GroupAssignment quantile_groups(const std::map<std::string, double>& values, int groups = 20,
                                              int quarter = 0);

struct GroupAverage {
    double mean = 0.0;
    std::size_t members = 0;  // members that had a metric
    std::size_t skipped = 0;  // members without one
};

[[nodiscard]] GroupAverage group_metric_average(const GroupAssignment& assignment,
                                                const std::map<std::string, double>& metrics, int group);

}  // namespace ordermem
