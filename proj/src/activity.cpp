#include "ordermem/activity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace ordermem {

namespace {

struct Changes {
    double net = 0.0;
    double gross = 0.0;
    double volume = 0.0;
};

Changes position_changes(const OwnershipPanel& panel, const std::string& asset, int quarter) {
    const auto range = panel.quarter_range();
    if (!range || quarter < range->first || quarter > range->second) {
        throw std::invalid_argument("quarter " + std::to_string(quarter) + " outside panel range");
    }
    if (quarter == range->first) throw std::invalid_argument("no prior quarter for quarter " + std::to_string(quarter));
    const auto volume = panel.volume(asset, quarter);
    if (!volume) throw std::invalid_argument("missing volume for " + asset + " in quarter " + std::to_string(quarter));

    Changes c;
    c.volume = *volume;
    for (const auto& fund : panel.funds_in(asset)) {
        const double delta = panel.position(fund, asset, quarter) - panel.position(fund, asset, quarter - 1);
        c.net += delta;
        c.gross += std::abs(delta);
    }
    return c;
}

}  // namespace

double directional_ratio(const OwnershipPanel& panel, const std::string& asset, int quarter) {
    const auto c = position_changes(panel, asset, quarter);
    return c.net / c.volume;
}

double absolute_ratio(const OwnershipPanel& panel, const std::string& asset, int quarter) {
    const auto c = position_changes(panel, asset, quarter);
    return c.gross / c.volume;
}

ActivityRatios activity_ratios(const OwnershipPanel& panel, const std::string& asset, int quarter) {
    const auto c = position_changes(panel, asset, quarter);
    const double r = c.net / c.volume;
    return ActivityRatios{asset, quarter, r, std::abs(r), c.gross / c.volume};
}

std::vector<ActivityRatios> all_activity_ratios(const OwnershipPanel& panel) {
    std::vector<ActivityRatios> out;
    const auto range = panel.quarter_range();
    if (!range) return out;
    std::vector<std::pair<int, std::string>> keys;
    for (const auto& [key, usd] : panel.volumes()) {
        if (key.second > range->first) keys.emplace_back(key.second, key.first);
    }
    std::sort(keys.begin(), keys.end());
    out.reserve(keys.size());
    for (const auto& [quarter, asset] : keys) out.push_back(activity_ratios(panel, asset, quarter));
    return out;
}

GroupAssignment quantile_groups(const std::map<std::string, double>& values, int groups, int quarter) {
    if (groups < 1) throw std::invalid_argument("number of groups must be >= 1");
    if (values.size() < static_cast<std::size_t>(groups)) {
        throw std::invalid_argument("fewer assets (" + std::to_string(values.size()) + ") than groups (" +
                                    std::to_string(groups) + ")");
    }
    std::vector<std::pair<double, const std::string*>> ranked;
    ranked.reserve(values.size());
    for (const auto& [asset, v] : values) {
        if (!std::isfinite(v)) throw std::invalid_argument("non-finite value for " + asset);
        ranked.emplace_back(v, &asset);
    }
    // Map order is ascending asset id, so a stable sort breaks ties by id.
    std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.first < b.first; });

    GroupAssignment out;
    out.quarter = quarter;
    out.groups = groups;
    const auto n = static_cast<long long>(ranked.size());
    for (long long rank = 1; rank <= n; ++rank) {
        const auto g = static_cast<int>((rank * groups + n - 1) / n);
        out.group_of.emplace(*ranked[static_cast<std::size_t>(rank - 1)].second, g);
    }
    return out;
}

GroupAverage group_metric_average(const GroupAssignment& assignment, const std::map<std::string, double>& metrics,
                                  int group) {
    GroupAverage out;
    double sum = 0.0;
    bool any_member = false;
    for (const auto& [asset, g] : assignment.group_of) {
        if (g != group) continue;
        any_member = true;
        const auto it = metrics.find(asset);
        if (it == metrics.end()) {
            ++out.skipped;
            continue;
        }
        sum += it->second;
        ++out.members;
    }
    if (!any_member) throw std::invalid_argument("group " + std::to_string(group) + " is empty");
    if (out.members == 0) throw std::invalid_argument("no metric for any member of group " + std::to_string(group));
    out.mean = sum / static_cast<double>(out.members);
    return out;
}

}  // namespace ordermem
