#include "ordermem/cli/panel.hpp"

#include <cstdio>
#include <stdexcept>

#include "ordermem/lmf.hpp"
#include "ordermem/parallel.hpp"

namespace ordermem::cli {

std::uint64_t asset_seed(std::uint64_t panel_seed, std::size_t index) {
    // splitmix64 finaliser over (seed, index)
    std::uint64_t z = panel_seed + 0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(index) + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

PanelReport synthetic_panel(const PanelConfig& config) {
    const std::size_t levels = config.m_levels.size();
    if (levels < 2) throw std::invalid_argument("panel needs at least two M levels");
    if (config.assets < levels) throw std::invalid_argument("panel needs at least one asset per M level");

    PanelReport report;
    report.groups.groups = static_cast<int>(levels);
    report.assets.resize(config.assets);
    for (std::size_t i = 0; i < config.assets; ++i) {
        auto& asset = report.assets[i];
        char id[32];
        std::snprintf(id, sizeof id, "A%06zu", i);
        asset.id = id;
        const std::size_t level = i * levels / config.assets;
        asset.group = static_cast<int>(level) + 1;
        asset.m = config.m_levels[level];
        asset.seed = asset_seed(config.seed, i);
        report.groups.group_of.emplace(asset.id, asset.group);
    }

    parallel_for(config.assets, config.threads, [&](std::size_t i) {
        auto& asset = report.assets[i];
        LmfSimulator sim(LmfConfig{asset.m, config.beta, config.n, asset.seed, config.l_min});
        std::vector<Sign> signs(config.n);
        for (auto& s : signs) s = sim.step().sign;
        asset.metrics = compute_metrics(signs, config.memory);
    });

    const auto add = [&](MetricKind kind, bool oriented) {
        QuarterScores quarter{report.groups, {}};
        for (const auto& asset : report.assets) {
            quarter.scores.emplace(asset.id,
                                   oriented ? oriented_value(asset.metrics, kind) : metric_value(asset.metrics, kind));
        }
        const std::vector<QuarterScores> quarters{std::move(quarter)};
        report.aucs.push_back({oriented ? oriented_name(kind) : std::string(metric_name(kind)), auc_by_cut(quarters)});
    };
    for (const auto kind : kAllMetrics) add(kind, true);
    for (const auto kind : kAllMetrics) {
        if (is_negated(kind)) add(kind, false);
    }
    return report;
}

}  // namespace ordermem::cli
