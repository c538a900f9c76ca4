#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "ordermem/activity.hpp"
#include "ordermem/classify.hpp"
#include "ordermem/detection.hpp"
#include "ordermem/memory.hpp"

namespace ordermem::cli {

/// Synthetic cross-section: assets split into contiguous equal blocks, one
/// block per entry of `m_levels`, each asset simulated with its block's M.
/// The block index is the activity group (1 = first level).
struct PanelConfig {
    std::size_t assets = 200;
    std::vector<int> m_levels;
    double beta = 1.5;
    std::size_t n = 200'000;
    std::uint64_t seed = 0;
    std::int64_t l_min = 1;
    MemoryOptions memory{10, 10'000, 10, 1000, RunConvention::kappa_signs};
    std::size_t threads = 1;
};

struct PanelAsset {
    std::string id;
    int group = 0;
    int m = 0;
    std::uint64_t seed = 0;
    MemoryMetrics metrics;
};

struct MetricAucs {
    std::string metric;  // oriented name, e.g. "-a"
    std::vector<CutAuc> cuts;
};

struct PanelReport {
    std::vector<PanelAsset> assets;
    GroupAssignment groups;
    std::vector<MetricAucs> aucs;  // oriented rows, then raw rows of negated metrics
};

/// Per-asset simulation seed derived from the panel seed.
[[nodiscard]] std::uint64_t asset_seed(std::uint64_t panel_seed, std::size_t index);

/// Throws std::invalid_argument with fewer than two M levels or fewer assets
/// than levels.
[[nodiscard]] PanelReport synthetic_panel(const PanelConfig& config);

}  // namespace ordermem::cli
