#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "facecutout/error.hpp"

namespace facecutout {

inline constexpr int kNoiseCluster = -1;

enum class Label { Real, Fake };

struct VideoRecord {
    std::string video_id;
    Label label = Label::Real;
    std::optional<std::string> source_video_id;
    std::optional<int> cluster_id;
    int n_frames = 0;
};

// video_id -> cluster id, kNoiseCluster for noise.
using ClusterAssignment = std::map<std::string, int>;

class DatasetManifest {
public:
    DatasetManifest() = default;
    explicit DatasetManifest(std::vector<VideoRecord> records) : records_(std::move(records)) {
        for (std::size_t i = 0; i < records_.size(); ++i) {
            const auto& r = records_[i];
            if (!index_.emplace(r.video_id, i).second) {
                throw Error(Errc::InvalidArgument, "duplicate video_id '" + r.video_id + "'");
            }
            if (r.label == Label::Fake && !r.source_video_id) {
                throw Error(Errc::InvalidArgument, "fake video '" + r.video_id + "' has no source_video_id");
            }
        }
    }

    const std::vector<VideoRecord>& records() const noexcept { return records_; }
    std::size_t size() const noexcept { return records_.size(); }

    const VideoRecord* find(const std::string& video_id) const {
        const auto it = index_.find(video_id);
        return it == index_.end() ? nullptr : &records_[it->second];
    }

    // Copy with cluster ids filled from `assign`; throws if a video has none.
    DatasetManifest with_clusters(const ClusterAssignment& assign) const {
        auto records = records_;
        for (auto& r : records) {
            const auto it = assign.find(r.video_id);
            if (it == assign.end()) throw Error(Errc::InvalidArgument, "no cluster for video '" + r.video_id + "'");
            r.cluster_id = it->second;
        }
        return DatasetManifest(std::move(records));
    }

    // Cluster id of each video, requiring all to be assigned.
    std::map<std::string, int> cluster_of() const {
        std::map<std::string, int> out;
        for (const auto& r : records_) {
            if (!r.cluster_id) throw Error(Errc::InvalidArgument, "video '" + r.video_id + "' has no cluster id");
            out[r.video_id] = *r.cluster_id;
        }
        return out;
    }

private:
    std::vector<VideoRecord> records_;
    std::map<std::string, std::size_t> index_;
};

} // namespace facecutout
