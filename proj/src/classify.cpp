#include "ordermem/classify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>

namespace ordermem {

std::map<std::string, int> labels_from_cut(const GroupAssignment& assignment, int k_cut) {
    if (k_cut < 1 || k_cut > assignment.groups - 1) {
        throw std::invalid_argument("k_cut " + std::to_string(k_cut) + " outside 1.." +
                                    std::to_string(assignment.groups - 1));
    }
    std::map<std::string, int> labels;
    for (const auto& [asset, g] : assignment.group_of) labels.emplace(asset, g <= k_cut ? 0 : 1);
    return labels;
}

RocResult roc_auc(std::span<const double> scores, std::span<const int> labels) {
    if (scores.size() != labels.size()) throw std::invalid_argument("scores and labels differ in length");
    std::uint64_t positives = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (!std::isfinite(scores[i])) throw std::invalid_argument("non-finite score");
        if (labels[i] != 0 && labels[i] != 1) throw std::invalid_argument("labels must be 0 or 1");
        positives += static_cast<std::uint64_t>(labels[i]);
    }
    const std::uint64_t negatives = scores.size() - positives;
    if (positives == 0 || negatives == 0) throw std::invalid_argument("ROC needs both classes");

    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

    // Twice the trapezoid area in units of one (positive, negative) pair.
    RocResult out;
    out.points.push_back({0.0, 0.0});
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    unsigned __int128 twice_area = 0;
    for (std::size_t i = 0; i < order.size();) {
        std::uint64_t step_tp = 0;
        std::uint64_t step_fp = 0;
        const double threshold = scores[order[i]];
        for (; i < order.size() && scores[order[i]] == threshold; ++i) {
            (labels[order[i]] ? step_tp : step_fp) += 1;
        }
        twice_area += static_cast<unsigned __int128>(step_fp) * (2 * tp + step_tp);
        tp += step_tp;
        fp += step_fp;
        out.points.push_back({static_cast<double>(fp) / static_cast<double>(negatives),
                              static_cast<double>(tp) / static_cast<double>(positives)});
    }
    out.auc = static_cast<double>(static_cast<long double>(twice_area) /
                                  (2.0L * static_cast<long double>(positives) * static_cast<long double>(negatives)));
    return out;
}

RocResult roc_auc(const std::map<std::string, double>& scores, const std::map<std::string, int>& labels) {
    std::vector<double> s;
    std::vector<int> l;
    for (const auto& [asset, label] : labels) {
        const auto it = scores.find(asset);
        if (it == scores.end()) continue;
        s.push_back(it->second);
        l.push_back(label);
    }
    return roc_auc(std::span<const double>(s), std::span<const int>(l));
}

std::vector<CutAuc> auc_by_cut(std::span<const QuarterScores> quarters, std::span<const int> cuts) {
    if (quarters.empty()) throw std::invalid_argument("auc_by_cut needs at least one quarter");
    const int groups = quarters.front().assignment.groups;
    for (const auto& q : quarters) {
        if (q.assignment.groups != groups) throw std::invalid_argument("quarters disagree on the number of groups");
    }
    std::vector<int> ks(cuts.begin(), cuts.end());
    if (ks.empty()) {
        for (int k = 1; k < groups; ++k) ks.push_back(k);
    }
    std::vector<CutAuc> out;
    for (const int k : ks) {
        CutAuc cut;
        cut.k_cut = k;
        for (const auto& q : quarters) {
            cut.per_quarter.push_back(roc_auc(q.scores, labels_from_cut(q.assignment, k)).auc);
        }
        cut.mean = std::accumulate(cut.per_quarter.begin(), cut.per_quarter.end(), 0.0) /
                   static_cast<double>(cut.per_quarter.size());
        out.push_back(std::move(cut));
    }
    return out;
}

}  // namespace ordermem
