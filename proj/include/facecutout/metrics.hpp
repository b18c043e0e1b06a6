#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "facecutout/error.hpp"

namespace facecutout {

struct FramePrediction {
    std::string video_id;
    long frame_id = 0;
    double prob_fake = 0.0;
};

struct VideoScore {
    std::string video_id;
    double prob_fake = 0.0;
    int label = 0; // 1 fake, 0 real
};

struct MetricsReport {
    double logloss = 0.0;
    double auc = 0.0;
    double ap = 0.0;
    std::size_t n_videos = 0;
};

namespace detail {

inline void check_probability(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw Error(Errc::InvalidArgument, "probability outside [0,1]");
}

inline void check_scores(const std::vector<VideoScore>& scores) {
    for (const auto& s : scores) {
        check_probability(s.prob_fake);
        if (s.label != 0 && s.label != 1) throw Error(Errc::InvalidArgument, "label must be 0 or 1");
    }
}

} // namespace detail

// Mean of frame probabilities for one video (compensated summation).
inline double aggregate_video(const std::vector<FramePrediction>& frames) {
    if (frames.empty()) throw Error(Errc::NoFrames, "video has no frame predictions");
    double sum = 0.0;
    double comp = 0.0;
    for (const auto& f : frames) {
        detail::check_probability(f.prob_fake);
        const double y = f.prob_fake - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum / static_cast<double>(frames.size());
}

// Groups frames by video and averages each group; keyed by video_id.
inline std::map<std::string, double> aggregate_videos(const std::vector<FramePrediction>& frames) {
    std::map<std::string, std::vector<FramePrediction>> grouped;
    for (const auto& f : frames) grouped[f.video_id].push_back(f);
    std::map<std::string, double> out;
    for (const auto& [video, group] : grouped) out[video] = aggregate_video(group);
    return out;
}

inline double log_loss(const std::vector<VideoScore>& scores, double eps = 1e-7) {
    if (scores.empty()) throw Error(Errc::EmptyInput, "log_loss needs at least one score");
    detail::check_scores(scores);
    double sum = 0.0;
    for (const auto& s : scores) {
        const double p = std::clamp(s.prob_fake, eps, 1.0 - eps);
        sum += s.label == 1 ? std::log(p) : std::log(1.0 - p);
    }
    return -sum / static_cast<double>(scores.size());
}

/// ROC AUC as the Mann-Whitney statistic: P(fake score > real score) plus
/// half the tie probability, exact over all pairs (rank-sum form).
inline double roc_auc(const std::vector<VideoScore>& scores) {
    detail::check_scores(scores);
    std::vector<const VideoScore*> sorted;
    sorted.reserve(scores.size());
    for (const auto& s : scores) sorted.push_back(&s);
    std::sort(sorted.begin(), sorted.end(), [](auto* a, auto* b) { return a->prob_fake < b->prob_fake; });

    double positives = 0.0;
    double negatives = 0.0;
    double wins = 0.0; // counted in half-units to stay exact
    double negatives_below = 0.0;
    for (std::size_t i = 0; i < sorted.size();) {
        std::size_t j = i;
        double pos = 0.0;
        double neg = 0.0;
        while (j < sorted.size() && sorted[j]->prob_fake == sorted[i]->prob_fake) {
            (sorted[j]->label == 1 ? pos : neg) += 1.0;
            ++j;
        }
        wins += pos * (2.0 * negatives_below + neg);
        negatives_below += neg;
        positives += pos;
        negatives += neg;
        i = j;
    }
    if (positives == 0.0 || negatives == 0.0) throw Error(Errc::SingleClass, "AUC needs both classes");
    return wins / (2.0 * positives * negatives);
}

/// Average precision, sum over ranks of (R_n - R_{n-1}) * P_n, ranking by
/// descending score with ties broken by ascending video_id.
inline double average_precision(const std::vector<VideoScore>& scores) {
    detail::check_scores(scores);
    std::vector<const VideoScore*> ranked;
    ranked.reserve(scores.size());
    for (const auto& s : scores) ranked.push_back(&s);
    std::sort(ranked.begin(), ranked.end(), [](auto* a, auto* b) {
        if (a->prob_fake != b->prob_fake) return a->prob_fake > b->prob_fake;
        return a->video_id < b->video_id;
    });
    std::size_t positives = 0;
    for (const auto* s : ranked) positives += static_cast<std::size_t>(s->label);
    if (positives == 0) throw Error(Errc::NoPositives, "average precision needs a positive");

    double ap = 0.0;
    std::size_t hits = 0;
    for (std::size_t n = 0; n < ranked.size(); ++n) {
        if (ranked[n]->label != 1) continue;
        ++hits;
        ap += static_cast<double>(hits) / static_cast<double>(n + 1);
    }
    return ap / static_cast<double>(positives);
}

inline MetricsReport evaluate(const std::vector<VideoScore>& scores) {
    MetricsReport r;
    r.logloss = log_loss(scores);
    r.auc = roc_auc(scores);
    r.ap = average_precision(scores);
    r.n_videos = scores.size();
    return r;
}

} // namespace facecutout
