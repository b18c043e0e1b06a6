#pragma once

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "facecutout/clustering.hpp"
#include "facecutout/cutout.hpp"
#include "facecutout/dataset.hpp"
#include "facecutout/error.hpp"
#include "facecutout/io.hpp"
#include "facecutout/metrics.hpp"
#include "facecutout/simmask.hpp"
#include "facecutout/split.hpp"

namespace facecutout::pipeline {

namespace fs = std::filesystem;

// One row of the frame manifest: video_id,frame_id,path,label,source_video_id
struct FrameRow {
    std::string video_id;
    long frame_id = 0;
    fs::path path;
    Label label = Label::Real;
    std::optional<std::string> source_video_id;

    std::string image_id() const { return video_id + "/" + std::to_string(frame_id); }
};

inline Label parse_label(const std::string& s) {
    std::string lower;
    for (char c : s) lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (lower == "real" || lower == "0") return Label::Real;
    if (lower == "fake" || lower == "1") return Label::Fake;
    throw Error(Errc::Parse, "unknown label '" + s + "'");
}

inline std::string label_str(Label l) { return l == Label::Real ? "REAL" : "FAKE"; }

// Relative image paths resolve against `base_dir`.
inline std::vector<FrameRow> parse_manifest(const io::CsvTable& table, const fs::path& base_dir) {
    const auto c_vid = table.column("video_id");
    const auto c_frame = table.column("frame_id");
    const auto c_path = table.column("path");
    const auto c_label = table.column("label");
    const auto c_src = table.column("source_video_id");
    std::vector<FrameRow> rows;
    rows.reserve(table.rows.size());
    for (const auto& r : table.rows) {
        FrameRow row;
        row.video_id = r[c_vid];
        row.frame_id = io::parse_long(r[c_frame], "frame_id");
        row.path = r[c_path];
        if (row.path.is_relative()) row.path = base_dir / row.path;
        row.label = parse_label(r[c_label]);
        if (!r[c_src].empty()) row.source_video_id = r[c_src];
        if (row.video_id.empty()) throw Error(Errc::Parse, "empty video_id in manifest");
        rows.push_back(std::move(row));
    }
    return rows;
}

inline std::vector<FrameRow> read_manifest(const fs::path& path) {
    return parse_manifest(io::read_csv(path), path.parent_path());
}

// Video-level manifest: one record per video_id, n_frames counted from rows.
inline DatasetManifest video_manifest(const std::vector<FrameRow>& rows) {
    std::map<std::string, VideoRecord> videos;
    std::vector<std::string> order;
    for (const auto& row : rows) {
        auto [it, inserted] = videos.try_emplace(row.video_id);
        auto& rec = it->second;
        if (inserted) {
            rec.video_id = row.video_id;
            rec.label = row.label;
            rec.source_video_id = row.source_video_id;
            order.push_back(row.video_id);
        } else if (rec.label != row.label || rec.source_video_id != row.source_video_id) {
            throw Error(Errc::Parse, "inconsistent label/source for video '" + row.video_id + "'");
        }
        ++rec.n_frames;
    }
    std::vector<VideoRecord> records;
    records.reserve(order.size());
    for (const auto& id : order) records.push_back(videos.at(id));
    return DatasetManifest(std::move(records));
}

// File-name-safe form of an id; altered ids get a hash suffix so distinct ids stay distinct.
inline std::string safe_component(const std::string& id) {
    std::string out;
    bool changed = id.empty() || id == "." || id == "..";
    for (char c : id) {
        const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.';
        out += ok ? c : '_';
        changed |= !ok;
    }
    if (changed) {
        char buf[20];
        std::snprintf(buf, sizeof buf, "_%08x", static_cast<unsigned>(derive_seed(0, id) & 0xFFFFFFFFu));
        out += buf;
    }
    return out;
}

inline fs::path frame_relpath(const std::string& video_id, long frame_id) {
    return fs::path(safe_component(video_id)) / (std::to_string(frame_id) + ".png");
}

/// Runs fn(i) for i in [0, n) on `workers` threads pulling from a shared counter.
/// fn must not throw and must only write to per-index state.
inline void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn) {
    const auto threads = static_cast<std::size_t>(std::clamp<long>(workers, 1, static_cast<long>(std::max<std::size_t>(n, 1))));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    };
    if (threads == 1) {
        worker();
        return;
    }
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
}

// ---------------------------------------------------------------------------
// Difference masks

struct MaskKey {
    std::string video_id;
    long frame_id = 0;
    auto operator<=>(const MaskKey&) const = default;
};

// (video_id, frame_id) -> mask path relative to the masks directory.
using MaskIndex = std::map<MaskKey, std::string>;

inline std::string format_mask_index(const MaskIndex& index) {
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& [key, path] : index) {
        entries.push_back({{"video_id", key.video_id}, {"frame_id", key.frame_id}, {"mask", path}});
    }
    return nlohmann::json{{"masks", entries}}.dump(2) + "\n";
}

inline MaskIndex parse_mask_index(std::string_view text) {
    MaskIndex index;
    try {
        const auto doc = nlohmann::json::parse(text);
        for (const auto& e : doc.at("masks")) {
            index[{e.at("video_id").get<std::string>(), e.at("frame_id").get<long>()}] = e.at("mask").get<std::string>();
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::Parse, std::string("mask index: ") + e.what());
    }
    return index;
}

inline fs::path mask_index_path(const fs::path& masks_dir) { return masks_dir / "index.json"; }

struct Failure {
    std::size_t row = 0;
    std::string video_id;
    long frame_id = 0;
    std::string error;
};

inline nlohmann::json failures_json(const std::vector<Failure>& failures) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& f : failures) {
        arr.push_back({{"row", f.row}, {"video_id", f.video_id}, {"frame_id", f.frame_id}, {"error", f.error}});
    }
    return arr;
}

struct MaskReport {
    std::size_t written = 0;
    std::vector<Failure> failures;

    nlohmann::json to_json() const {
        return {{"written", written}, {"failed", failures.size()}, {"failures", failures_json(failures)}};
    }
};

/// One mask per fake frame whose source video has the same frame_id in the
/// manifest. Masks go to <masks_dir>/<video>/<frame>.png plus index.json.
/// Output bytes do not depend on `workers`.
inline MaskReport build_masks(const std::vector<FrameRow>& rows, const fs::path& masks_dir, double ssim_threshold,
                              int workers, int window = 11) {
    std::map<MaskKey, std::size_t> real_rows;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].label == Label::Real) real_rows.emplace(MaskKey{rows[i].video_id, rows[i].frame_id}, i);
    }
    std::vector<std::size_t> fakes;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].label == Label::Fake) fakes.push_back(i);
    }

    std::vector<std::optional<std::string>> errors(fakes.size());
    parallel_for(fakes.size(), workers, [&](std::size_t k) {
        const auto& row = rows[fakes[k]];
        try {
            const auto it = real_rows.find({row.source_video_id.value_or(""), row.frame_id});
            if (it == real_rows.end()) throw Error(Errc::DanglingSource, "no real frame for " + row.image_id());
            const auto real = io::read_png(rows[it->second].path);
            const auto fake = io::read_png(row.path);
            const auto mask = difference_mask(real, fake, ssim_threshold, window);
            io::write_png(masks_dir / frame_relpath(row.video_id, row.frame_id), mask);
        } catch (const std::exception& e) {
            errors[k] = e.what();
        }
    });

    MaskReport report;
    MaskIndex index;
    for (std::size_t k = 0; k < fakes.size(); ++k) {
        const auto& row = rows[fakes[k]];
        if (errors[k]) {
            report.failures.push_back({fakes[k], row.video_id, row.frame_id, *errors[k]});
            continue;
        }
        index[{row.video_id, row.frame_id}] = frame_relpath(row.video_id, row.frame_id).generic_string();
        ++report.written;
    }
    io::write_text(mask_index_path(masks_dir), format_mask_index(index));
    return report;
}

// ---------------------------------------------------------------------------
// Preprocessing resize

/// Aspect-preserving bilinear resize to fit target x target, centered on a
/// zero canvas.
inline RgbImage resize_pad(const RgbImage& image, int target = 224) {
    if (image.empty()) throw Error(Errc::EmptyImage, "cannot resize an empty image");
    if (target <= 0) throw Error(Errc::InvalidArgument, "target size must be positive");
    const int w = image.width();
    const int h = image.height();
    const double scale = std::min(static_cast<double>(target) / w, static_cast<double>(target) / h);
    const int nw = std::clamp(static_cast<int>(std::lround(w * scale)), 1, target);
    const int nh = std::clamp(static_cast<int>(std::lround(h * scale)), 1, target);
    const int ox = (target - nw) / 2;
    const int oy = (target - nh) / 2;
    const double sx = static_cast<double>(w) / nw;
    const double sy = static_cast<double>(h) / nh;

    RgbImage out(target, target, 0);
    for (int y = 0; y < nh; ++y) {
        const double fy = std::clamp((y + 0.5) * sy - 0.5, 0.0, static_cast<double>(h - 1));
        const int y0 = static_cast<int>(fy);
        const int y1 = std::min(y0 + 1, h - 1);
        const double ty = fy - y0;
        for (int x = 0; x < nw; ++x) {
            const double fx = std::clamp((x + 0.5) * sx - 0.5, 0.0, static_cast<double>(w - 1));
            const int x0 = static_cast<int>(fx);
            const int x1 = std::min(x0 + 1, w - 1);
            const double tx = fx - x0;
            auto* dst = out.pixel(ox + x, oy + y);
            for (int c = 0; c < 3; ++c) {
                const double top = image.pixel(x0, y0)[c] * (1 - tx) + image.pixel(x1, y0)[c] * tx;
                const double bot = image.pixel(x0, y1)[c] * (1 - tx) + image.pixel(x1, y1)[c] * tx;
                dst[c] = static_cast<std::uint8_t>(std::clamp(std::lround(top * (1 - ty) + bot * ty), 0L, 255L));
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Augmentation runs

struct JobConfig {
    fs::path manifest;
    std::optional<fs::path> landmarks_dir; // sidecars live next to images when unset
    std::optional<fs::path> masks_dir;
    fs::path output_dir;
    CutoutConfig cutout;
    int workers = 1;
    std::optional<int> resize; // resize_pad target applied to every output

    void validate() const {
        cutout.validate();
        if (workers < 1) throw Error(Errc::InvalidArgument, "workers must be >= 1");
        if (!fs::exists(manifest)) throw Error(Errc::Io, "manifest '" + manifest.string() + "' does not exist");
        if (landmarks_dir && !fs::is_directory(*landmarks_dir)) {
            throw Error(Errc::Io, "landmarks dir '" + landmarks_dir->string() + "' does not exist");
        }
        if (masks_dir && !fs::exists(mask_index_path(*masks_dir))) {
            throw Error(Errc::Io, "masks dir '" + masks_dir->string() + "' has no index.json");
        }
        if (resize && *resize <= 0) throw Error(Errc::InvalidArgument, "resize target must be positive");
    }
};

inline fs::path landmark_path_for(const FrameRow& row, const std::optional<fs::path>& landmarks_dir) {
    if (landmarks_dir) return *landmarks_dir / io::sidecar_path(row.path.filename());
    return io::sidecar_path(row.path);
}

struct RunReport {
    std::size_t total = 0;
    std::size_t applied = 0;
    std::size_t passthrough = 0;
    std::size_t failed = 0;
    std::map<std::string, std::size_t> per_strategy;
    double rho_sum = 0.0;
    std::size_t rho_count = 0;
    std::vector<Failure> failures;
    std::vector<Failure> warnings;

    double applied_fraction() const { return total ? static_cast<double>(applied) / static_cast<double>(total) : 0.0; }
    std::optional<double> mean_rho() const {
        return rho_count ? std::optional(rho_sum / static_cast<double>(rho_count)) : std::nullopt;
    }

    nlohmann::json to_json(const CutoutConfig& cfg) const {
        nlohmann::json strategies = nlohmann::json::object();
        for (auto s : kAllStrategies) strategies[std::string(to_string(s))] = 0;
        for (const auto& [name, n] : per_strategy) strategies[name] = n;
        const auto rho = mean_rho();
        return {
            {"total", total},
            {"applied", applied},
            {"passthrough", passthrough},
            {"failed", failed},
            {"applied_fraction", applied_fraction()},
            {"mean_rho", rho ? nlohmann::json(*rho) : nlohmann::json(nullptr)},
            {"rho_count", rho_count},
            {"strategies", strategies},
            {"config",
             {{"seed", cfg.seed},
              {"p", cfg.p},
              {"gamma_h", cfg.gamma_h},
              {"fill", std::string(to_string(cfg.fill))},
              {"max_attempts", cfg.max_attempts}}},
            {"failures", failures_json(failures)},
            {"warnings", failures_json(warnings)},
        };
    }
};

inline fs::path report_path(const fs::path& output_dir) { return output_dir / "report.json"; }

namespace detail {

struct RowOutcome {
    enum class Status { Applied, Passthrough, Failed } status = Status::Failed;
    std::optional<Strategy> strategy;
    std::optional<double> rho;
    std::string error;
    std::optional<std::string> warning;
};

inline RowOutcome augment_row(const FrameRow& row, const JobConfig& job, const std::optional<MaskIndex>& masks) {
    RowOutcome out;
    try {
        const auto lm_path = landmark_path_for(row, job.landmarks_dir);
        if (!fs::exists(lm_path)) throw Error(Errc::MissingLandmarks, "no landmark sidecar " + lm_path.string());
        const Landmarks68 landmarks = io::parse_landmarks(io::read_text(lm_path));
        const auto bytes = io::read_bytes(row.path);
        const RgbImage image = io::decode_png(bytes);

        std::optional<BinaryMask> diff;
        if (row.label == Label::Fake && masks) {
            const auto it = masks->find({row.video_id, row.frame_id});
            if (it == masks->end()) {
                out.warning = "MissingMask: no difference mask for " + row.image_id() + ", rho gate skipped";
            } else {
                diff = io::read_mask_png(*job.masks_dir / it->second);
            }
        }

        const auto result = face_cutout(image, landmarks, diff, job.cutout, row.image_id());
        const fs::path dest = job.output_dir / frame_relpath(row.video_id, row.frame_id);
        if (result.applied) {
            const RgbImage& img = result.image;
            io::write_bytes(dest, io::encode_png(job.resize ? resize_pad(img, *job.resize) : img));
            out.status = RowOutcome::Status::Applied;
            out.strategy = result.region->strategy;
            out.rho = result.region->rho;
        } else {
            if (job.resize) {
                io::write_bytes(dest, io::encode_png(resize_pad(image, *job.resize)));
            } else {
                io::write_bytes(dest, bytes);
            }
            out.status = RowOutcome::Status::Passthrough;
        }
    } catch (const std::exception& e) {
        out.status = RowOutcome::Status::Failed;
        out.error = e.what();
    }
    return out;
}

} // namespace detail

/// Augments every manifest row into output_dir/<video>/<frame>.png and
/// writes output_dir/report.json. Passthrough rows are copied byte for byte.
/// Per-row failures are recorded and do not stop the run. Outputs depend only
/// on the inputs and the seed, not on `workers`.
inline RunReport run_augment(const JobConfig& job) {
    job.validate();
    const auto rows = read_manifest(job.manifest);
    std::optional<MaskIndex> masks;
    if (job.masks_dir) masks = parse_mask_index(io::read_text(mask_index_path(*job.masks_dir)));
    fs::create_directories(job.output_dir);

    std::vector<detail::RowOutcome> outcomes(rows.size());
    parallel_for(rows.size(), job.workers,
                 [&](std::size_t i) { outcomes[i] = detail::augment_row(rows[i], job, masks); });

    RunReport report;
    report.total = rows.size();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& o = outcomes[i];
        if (o.warning) report.warnings.push_back({i, rows[i].video_id, rows[i].frame_id, *o.warning});
        switch (o.status) {
        case detail::RowOutcome::Status::Applied:
            ++report.applied;
            ++report.per_strategy[std::string(to_string(*o.strategy))];
            if (o.rho) {
                report.rho_sum += *o.rho;
                ++report.rho_count;
            }
            break;
        case detail::RowOutcome::Status::Passthrough: ++report.passthrough; break;
        case detail::RowOutcome::Status::Failed:
            ++report.failed;
            report.failures.push_back({i, rows[i].video_id, rows[i].frame_id, o.error});
            break;
        }
    }
    io::write_text(report_path(job.output_dir), report.to_json(job.cutout).dump(2) + "\n");
    return report;
}

// ---------------------------------------------------------------------------
// Preview

inline constexpr std::array<std::uint8_t, 3> kOutlineColor{0, 255, 0};

// Region pixels with a 4-neighbor outside the region (or on the image border).
inline BinaryMask region_outline(const BinaryMask& region) {
    BinaryMask out(region.width(), region.height());
    for (int y = 0; y < region.height(); ++y) {
        for (int x = 0; x < region.width(); ++x) {
            if (!region.get(x, y)) continue;
            const bool edge = x == 0 || y == 0 || x == region.width() - 1 || y == region.height() - 1 ||
                              !region.get(x - 1, y) || !region.get(x + 1, y) || !region.get(x, y - 1) ||
                              !region.get(x, y + 1);
            if (edge) out.set(x, y);
        }
    }
    return out;
}

struct PreviewResult {
    RgbImage composite;
    AugmentOutcome outcome;
};

/// Three panels side by side: original | overlay | augmented. The overlay is
/// the original with diff pixels tinted red and the chosen region outlined in
/// green; no other pixel differs from the original.
inline PreviewResult preview(const RgbImage& image, const Landmarks68& landmarks, const std::optional<BinaryMask>& diff,
                             const CutoutConfig& cfg, std::string_view image_id) {
    auto outcome = face_cutout(image, landmarks, diff, cfg, image_id);
    const int w = image.width();
    const int h = image.height();
    RgbImage overlay = image;
    if (diff) {
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                if (!diff->get(x, y)) continue;
                auto* p = overlay.pixel(x, y);
                p[0] = static_cast<std::uint8_t>((p[0] + 255) / 2);
                p[1] = static_cast<std::uint8_t>(p[1] / 2);
                p[2] = static_cast<std::uint8_t>(p[2] / 2);
            }
        }
    }
    if (outcome.region) {
        const auto outline = region_outline(outcome.region->raster);
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                if (outline.get(x, y)) overlay.set(x, y, kOutlineColor[0], kOutlineColor[1], kOutlineColor[2]);
            }
        }
    }
    RgbImage composite(3 * w, h);
    const RgbImage* panels[3] = {&image, &overlay, &outcome.image};
    for (int k = 0; k < 3; ++k) {
        for (int y = 0; y < h; ++y) {
            std::copy_n(panels[k]->pixel(0, y), static_cast<std::size_t>(w) * 3, composite.pixel(k * w, y));
        }
    }
    return {std::move(composite), std::move(outcome)};
}

// ---------------------------------------------------------------------------
// Clustering I/O: JSON lines {"video_id": str, "frame_id": int, "embedding": [128 floats]}

inline std::vector<FaceEmbedding> parse_embeddings(std::string_view text) {
    std::vector<FaceEmbedding> out;
    std::size_t start = 0;
    std::size_t line_no = 0;
    while (start < text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        const auto line = text.substr(start, end - start);
        start = end + 1;
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
        try {
            const auto doc = nlohmann::json::parse(line);
            FaceEmbedding e;
            e.video_id = doc.at("video_id").get<std::string>();
            e.frame_id = doc.at("frame_id").get<long>();
            e.vector = doc.at("embedding").get<std::vector<double>>();
            e.validate();
            out.push_back(std::move(e));
        } catch (const nlohmann::json::exception& ex) {
            throw Error(Errc::Parse, "embeddings line " + std::to_string(line_no) + ": " + ex.what());
        } catch (const Error& ex) {
            throw Error(Errc::Parse, "embeddings line " + std::to_string(line_no) + ": " + ex.what());
        }
    }
    return out;
}

inline std::string format_embedding(const FaceEmbedding& e) {
    return nlohmann::json{{"video_id", e.video_id}, {"frame_id", e.frame_id}, {"embedding", e.vector}}.dump() + "\n";
}

inline std::string format_clusters(const ClusterAssignment& assign) {
    io::CsvTable t{{"video_id", "cluster_id"}, {}};
    for (const auto& [video, cluster] : assign) t.rows.push_back({video, std::to_string(cluster)});
    return io::format_csv(t);
}

inline ClusterAssignment parse_clusters(const io::CsvTable& table) {
    const auto c_vid = table.column("video_id");
    const auto c_cluster = table.column("cluster_id");
    ClusterAssignment out;
    for (const auto& r : table.rows) {
        const long id = io::parse_long(r[c_cluster], "cluster_id");
        if (id < kNoiseCluster) throw Error(Errc::Parse, "cluster_id must be >= -1");
        out[r[c_vid]] = static_cast<int>(id);
    }
    return out;
}

inline std::string format_pca(const std::vector<FaceEmbedding>& embeddings,
                              const std::vector<std::array<double, 2>>& coords) {
    io::CsvTable t{{"video_id", "pc1", "pc2"}, {}};
    for (std::size_t i = 0; i < embeddings.size(); ++i) {
        t.rows.push_back({embeddings[i].video_id, io::format_double(coords[i][0]), io::format_double(coords[i][1])});
    }
    return io::format_csv(t);
}

// ---------------------------------------------------------------------------
// Split plans: video_id,split

inline std::string format_plan(const SplitPlan& plan) {
    io::CsvTable t{{"video_id", "split"}, {}};
    for (const auto& [video, part] : plan.assignment) t.rows.push_back({video, part.str()});
    return io::format_csv(t);
}

inline SplitPlan parse_plan(const io::CsvTable& table) {
    const auto c_vid = table.column("video_id");
    const auto c_split = table.column("split");
    SplitPlan plan;
    for (const auto& r : table.rows) plan.assignment[r[c_vid]] = Partition::parse(r[c_split]);
    return plan;
}

inline nlohmann::json audit_json(const AuditReport& report) { return {{"ok", report.ok}, {"leaks", report.leaks}}; }

// ---------------------------------------------------------------------------
// Evaluation: predictions video_id,frame_id,prob and labels video_id,label

inline std::vector<FramePrediction> parse_predictions(const io::CsvTable& table) {
    const auto c_vid = table.column("video_id");
    const auto c_frame = table.column("frame_id");
    const auto c_prob = table.column("prob");
    std::vector<FramePrediction> out;
    out.reserve(table.rows.size());
    for (const auto& r : table.rows) {
        out.push_back({r[c_vid], io::parse_long(r[c_frame], "frame_id"), io::parse_double(r[c_prob], "prob")});
    }
    return out;
}

inline std::map<std::string, int> parse_labels(const io::CsvTable& table) {
    const auto c_vid = table.column("video_id");
    const auto c_label = table.column("label");
    std::map<std::string, int> out;
    for (const auto& r : table.rows) out[r[c_vid]] = parse_label(r[c_label]) == Label::Fake ? 1 : 0;
    return out;
}

/// Video scores for every labelled video; a labelled video without frame
/// predictions is an error (NoFrames).
inline std::vector<VideoScore> video_scores(const std::vector<FramePrediction>& frames,
                                            const std::map<std::string, int>& labels) {
    const auto means = aggregate_videos(frames);
    std::vector<VideoScore> out;
    out.reserve(labels.size());
    for (const auto& [video, label] : labels) {
        const auto it = means.find(video);
        if (it == means.end()) throw Error(Errc::NoFrames, "no predictions for video '" + video + "'");
        out.push_back({video, it->second, label});
    }
    return out;
}

inline nlohmann::json metrics_json(const MetricsReport& r) {
    return {{"logloss", r.logloss}, {"auc", r.auc}, {"ap", r.ap}, {"n_videos", r.n_videos}};
}

} // namespace facecutout::pipeline
