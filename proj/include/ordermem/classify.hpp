#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "ordermem/activity.hpp"

namespace ordermem {

/// 0 for groups <= k_cut, 1 (high activity) above. k_cut must lie in
/// 1..G-1 so that both categories can be populated.
[[nodiscard]] std::map<std::string, int> labels_from_cut(const GroupAssignment& assignment, int k_cut);

struct RocPoint {
    double fpr = 0.0;
    double tpr = 0.0;
};

struct RocResult {
    std::vector<RocPoint> points;  // (0,0) ... (1,1), one step per distinct score
    double auc = 0.5;
};

/// Larger scores are taken to indicate label 1. Tied scores move both rates
/// at once, which weighs tied pairs by one half.
[[nodiscard]] RocResult roc_auc(std::span<const double> scores, std::span<const int> labels);

/// Same over assets present in both maps.
[[nodiscard]] RocResult roc_auc(const std::map<std::string, double>& scores, const std::map<std::string, int>& labels);

/// One quarter's groups and the (oriented) metric per asset.
struct QuarterScores {
    GroupAssignment assignment;
    std::map<std::string, double> scores;
};

struct CutAuc {
    int k_cut = 0;
    double mean = 0.0;
    std::vector<double> per_quarter;
};

/// AUC at each requested k_cut (all of 1..G-1 when `cuts` is empty) for
/// each quarter, then averaged over quarters. All quarters must share G.
[[nodiscard]] std::vector<CutAuc> auc_by_cut(std::span<const QuarterScores> quarters,
                                             std::span<const int> cuts = {});

}  // namespace ordermem
