#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <compare>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "facecutout/dataset.hpp"
#include "facecutout/error.hpp"
#include "facecutout/rng.hpp"

namespace facecutout {

struct Partition {
    enum class Kind { Train, Val, Test, Fold };

    Kind kind = Kind::Train;
    int fold = 0; // meaningful for Kind::Fold only

    static Partition train() { return {Kind::Train, 0}; }
    static Partition val() { return {Kind::Val, 0}; }
    static Partition test() { return {Kind::Test, 0}; }
    static Partition fold_index(int i) { return {Kind::Fold, i}; }

    std::string str() const {
        switch (kind) {
        case Kind::Train: return "train";
        case Kind::Val: return "val";
        case Kind::Test: return "test";
        case Kind::Fold: return "fold:" + std::to_string(fold);
        }
        return "?";
    }

    static Partition parse(const std::string& s) {
        if (s == "train") return train();
        if (s == "val") return val();
        if (s == "test") return test();
        if (s.rfind("fold:", 0) == 0) {
            try {
                std::size_t used = 0;
                const int i = std::stoi(s.substr(5), &used);
                if (used == s.size() - 5 && i >= 0) return fold_index(i);
            } catch (const std::exception&) {
            }
        }
        throw Error(Errc::Parse, "unknown split label '" + s + "'");
    }

    auto operator<=>(const Partition&) const = default;
};

struct SplitPlan {
    std::map<std::string, Partition> assignment;
    std::vector<double> ratios;
};

struct AuditReport {
    std::vector<int> leaks;
    bool ok = true;
};

namespace detail {

// Videos grouped by cluster; noise videos form one unit.
inline std::map<int, std::vector<std::string>> cluster_units(const DatasetManifest& manifest) {
    std::map<int, std::vector<std::string>> units;
    for (const auto& [video, cluster] : manifest.cluster_of()) units[cluster].push_back(video);
    return units;
}

inline std::vector<int> shuffled_cluster_ids(const std::map<int, std::vector<std::string>>& units,
                                             std::uint64_t seed) {
    std::vector<int> ids;
    ids.reserve(units.size());
    for (const auto& [id, videos] : units) ids.push_back(id);
    Rng rng(splitmix64(seed));
    rng.shuffle(ids);
    return ids;
}

} // namespace detail

/// Train/val/test split with whole clusters as the unit.
///
/// Clusters are visited in a seeded random order; each goes to the split whose
/// video count is furthest below its target (lowest split index on ties).
/// Each split's realized fraction ends within (largest cluster / total) of target.
inline SplitPlan cluster_split(const DatasetManifest& manifest, const std::array<double, 3>& ratios,
                               std::uint64_t seed) {
    double sum = 0.0;
    for (double r : ratios) {
        if (!(r > 0.0)) throw Error(Errc::InvalidArgument, "split ratios must be positive");
        sum += r;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw Error(Errc::InvalidArgument, "split ratios must sum to 1");

    const auto units = detail::cluster_units(manifest);
    if (units.size() < 3) throw Error(Errc::TooFewClusters, "need at least 3 clusters for a 3-way split");
    const auto order = detail::shuffled_cluster_ids(units, seed);

    const auto total = static_cast<double>(manifest.size());
    std::array<double, 3> count{};
    const std::array<Partition, 3> parts{Partition::train(), Partition::val(), Partition::test()};
    SplitPlan plan;
    plan.ratios.assign(ratios.begin(), ratios.end());
    for (int cluster : order) {
        std::size_t best = 0;
        double best_deficit = -INFINITY;
        for (std::size_t s = 0; s < 3; ++s) {
            const double deficit = ratios[s] * total - count[s];
            if (deficit > best_deficit) {
                best_deficit = deficit;
                best = s;
            }
        }
        const auto& videos = units.at(cluster);
        count[best] += static_cast<double>(videos.size());
        for (const auto& v : videos) plan.assignment[v] = parts[best];
    }
    return plan;
}

/// Every video labelled with the fold of its cluster; clusters are dealt
/// round-robin into `k` folds after a seeded shuffle.
inline SplitPlan fold_assignment(const DatasetManifest& manifest, int k, std::uint64_t seed) {
    if (k < 2) throw Error(Errc::InvalidArgument, "K must be >= 2");
    const auto units = detail::cluster_units(manifest);
    if (units.size() < static_cast<std::size_t>(k)) {
        throw Error(Errc::TooFewClusters, "need at least K clusters for K folds");
    }
    const auto order = detail::shuffled_cluster_ids(units, seed);
    SplitPlan plan;
    plan.ratios.assign(static_cast<std::size_t>(k), 1.0 / k);
    for (std::size_t i = 0; i < order.size(); ++i) {
        const auto fold = Partition::fold_index(static_cast<int>(i % static_cast<std::size_t>(k)));
        for (const auto& v : units.at(order[i])) plan.assignment[v] = fold;
    }
    return plan;
}

// Fold i validates on the clusters dealt to fold i and trains on the rest.
inline std::vector<SplitPlan> kfold_by_cluster(const DatasetManifest& manifest, int k, std::uint64_t seed) {
    const SplitPlan folds = fold_assignment(manifest, k, seed);
    std::vector<SplitPlan> out(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
        auto& plan = out[static_cast<std::size_t>(i)];
        plan.ratios = {1.0 - 1.0 / k, 1.0 / k};
        for (const auto& [video, part] : folds.assignment) {
            plan.assignment[video] = part.fold == i ? Partition::val() : Partition::train();
        }
    }
    return out;
}

// Lists clusters (noise as one unit) whose videos land in more than one split.
inline AuditReport leak_audit(const SplitPlan& plan, const DatasetManifest& manifest) {
    std::map<int, std::set<Partition>> seen;
    for (const auto& [video, cluster] : manifest.cluster_of()) {
        const auto it = plan.assignment.find(video);
        if (it == plan.assignment.end()) throw Error(Errc::UnassignedVideo, "video '" + video + "' is not in the plan");
        seen[cluster].insert(it->second);
    }
    AuditReport report;
    for (const auto& [cluster, parts] : seen) {
        if (parts.size() > 1) report.leaks.push_back(cluster);
    }
    report.ok = report.leaks.empty();
    return report;
}

} // namespace facecutout
