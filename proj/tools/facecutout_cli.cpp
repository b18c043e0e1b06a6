// facecutout command line: mask, augment, cluster, split, audit, eval, preview.
//
// Exit codes: 0 success, 2 partial failure (some records failed or the audit
// found leaks), 1 fatal configuration or input error.

#include <array>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "facecutout/facecutout.hpp"

namespace fc = facecutout;
namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFatal = 1;
constexpr int kExitPartial = 2;

struct CutoutFlags {
    double p = 0.5;
    double gamma_h = 0.3;
    std::string fill = "zero";
    std::string mode = "combined";
    int max_attempts = 5;
    std::uint64_t seed = 777;

    void add(CLI::App* app) {
        app->add_option("--p", p, "Erasing probability")->check(CLI::Range(0.0, 1.0))->capture_default_str();
        app->add_option("--gamma-h", gamma_h, "Maximum overlap ratio rho for a cutout")
            ->check(CLI::Range(0.0, 1.0))
            ->capture_default_str();
        app->add_option("--fill", fill, "Fill for erased pixels")
            ->check(CLI::IsMember({"random", "zero", "max"}))
            ->capture_default_str();
        app->add_option("--mode", mode, "Proposal families")
            ->check(CLI::IsMember({"combined", "sensory", "hull"}))
            ->capture_default_str();
        app->add_option("--max-attempts", max_attempts, "Random-subset hull draws")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        app->add_option("--seed", seed, "Global seed")->capture_default_str();
    }

    fc::CutoutConfig config() const {
        fc::CutoutConfig cfg;
        cfg.p = p;
        cfg.gamma_h = gamma_h;
        cfg.fill = fc::parse_fill_mode(fill);
        cfg.max_attempts = max_attempts;
        cfg.seed = seed;
        cfg.mode = mode == "sensory" ? fc::CutoutMode::SensoryOnly
                   : mode == "hull"  ? fc::CutoutMode::HullOnly
                                     : fc::CutoutMode::Combined;
        return cfg;
    }
};

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
    } else {
        fc::io::write_text(out_path, text);
    }
}

fc::DatasetManifest clustered_manifest(const std::string& manifest_path, const std::string& clusters_path) {
    const auto rows = fc::pipeline::read_manifest(manifest_path);
    const auto clusters = fc::pipeline::parse_clusters(fc::io::read_csv(clusters_path));
    return fc::pipeline::video_manifest(rows).with_clusters(clusters);
}

std::array<double, 3> parse_ratios(const std::string& s) {
    const auto fields = fc::io::split_csv_line(s);
    if (fields.size() != 3) throw fc::Error(fc::Errc::InvalidArgument, "--ratios needs three comma-separated values");
    return {fc::io::parse_double(fields[0], "ratio"), fc::io::parse_double(fields[1], "ratio"),
            fc::io::parse_double(fields[2], "ratio")};
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Landmark-guided face cutout augmentation and leak-free dataset tooling"};
    app.require_subcommand(1);
    int exit_code = kExitOk;

    // mask
    std::string mask_manifest, mask_dir;
    double ssim_threshold = 0.5;
    int ssim_window = 11;
    int mask_workers = 1;
    auto* mask = app.add_subcommand("mask", "Build SSIM difference masks for fake frames");
    mask->add_option("--manifest", mask_manifest, "Frame manifest CSV")->required()->check(CLI::ExistingFile);
    mask->add_option("--out", mask_dir, "Output masks directory")->required();
    mask->add_option("--ssim-threshold", ssim_threshold, "Pixels with SSIM below this are marked")->capture_default_str();
    mask->add_option("--window", ssim_window, "SSIM window (odd)")->capture_default_str();
    mask->add_option("--workers", mask_workers, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
    mask->callback([&] {
        const auto rows = fc::pipeline::read_manifest(mask_manifest);
        const auto report = fc::pipeline::build_masks(rows, mask_dir, ssim_threshold, mask_workers, ssim_window);
        std::cout << report.to_json().dump(2) << "\n";
        if (!report.failures.empty()) exit_code = kExitPartial;
    });

    // augment
    fc::pipeline::JobConfig job;
    std::string aug_manifest, aug_landmarks, aug_masks, aug_out;
    int aug_resize = 0;
    CutoutFlags aug_flags;
    auto* augment = app.add_subcommand("augment", "Apply face cutout to every manifest frame");
    augment->add_option("--manifest", aug_manifest, "Frame manifest CSV")->required()->check(CLI::ExistingFile);
    augment->add_option("--landmarks-dir", aug_landmarks, "Directory of <image>.landmarks.json sidecars");
    augment->add_option("--masks-dir", aug_masks, "Difference masks directory (from `mask`)");
    augment->add_option("--out", aug_out, "Output directory")->required();
    augment->add_option("--workers", job.workers, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
    augment->add_option("--resize", aug_resize, "Resize outputs onto an NxN zero-padded canvas (0 = off)")
        ->check(CLI::NonNegativeNumber);
    aug_flags.add(augment);
    augment->callback([&] {
        job.manifest = aug_manifest;
        if (!aug_landmarks.empty()) job.landmarks_dir = aug_landmarks;
        if (!aug_masks.empty()) job.masks_dir = aug_masks;
        job.output_dir = aug_out;
        job.cutout = aug_flags.config();
        if (aug_resize > 0) job.resize = aug_resize;
        const auto report = fc::pipeline::run_augment(job);
        std::cout << report.to_json(job.cutout).dump(2) << "\n";
        if (report.failed > 0) exit_code = kExitPartial;
    });

    // cluster
    std::string emb_path, cl_manifest, cl_out, pca_out;
    fc::DbscanParams dbscan_params;
    auto* cluster = app.add_subcommand("cluster", "DBSCAN identity clusters from face embeddings");
    cluster->add_option("--embeddings", emb_path, "JSON-lines embeddings")->required()->check(CLI::ExistingFile);
    cluster->add_option("--manifest", cl_manifest, "Frame manifest; fakes inherit their source cluster")
        ->check(CLI::ExistingFile);
    cluster->add_option("--eps", dbscan_params.eps, "DBSCAN radius")->capture_default_str();
    cluster->add_option("--min-pts", dbscan_params.min_pts, "DBSCAN core threshold")->capture_default_str();
    cluster->add_option("--out", cl_out, "Cluster CSV (video_id,cluster_id); stdout if omitted");
    cluster->add_option("--pca", pca_out, "Write a 2-D PCA projection CSV (video_id,pc1,pc2)");
    cluster->callback([&] {
        const auto embeddings = fc::pipeline::parse_embeddings(fc::io::read_text(emb_path));
        auto assign = fc::video_clusters(embeddings, dbscan_params);
        if (!cl_manifest.empty()) {
            assign = fc::propagate_to_fakes(assign, fc::pipeline::video_manifest(fc::pipeline::read_manifest(cl_manifest)));
        }
        emit(fc::pipeline::format_clusters(assign), cl_out);
        if (!pca_out.empty()) {
            fc::PointSet points;
            for (const auto& e : embeddings) points.push_back(e.vector);
            fc::io::write_text(pca_out, fc::pipeline::format_pca(embeddings, fc::pca_2d(points)));
        }
    });

    // split
    std::string sp_manifest, sp_clusters, sp_ratios = "0.8,0.1,0.1", sp_out;
    int sp_folds = 0;
    std::uint64_t sp_seed = 777;
    auto* split = app.add_subcommand("split", "Cluster-level train/val/test or K-fold split");
    split->add_option("--manifest", sp_manifest, "Frame manifest CSV")->required()->check(CLI::ExistingFile);
    split->add_option("--clusters", sp_clusters, "Cluster CSV from `cluster`")->required()->check(CLI::ExistingFile);
    split->add_option("--ratios", sp_ratios, "train,val,test fractions")->capture_default_str();
    split->add_option("--folds", sp_folds, "K-fold assignment instead of ratios (K >= 2)");
    split->add_option("--seed", sp_seed, "Shuffle seed")->capture_default_str();
    split->add_option("--out", sp_out, "Plan CSV (video_id,split); stdout if omitted");
    split->callback([&] {
        const auto manifest = clustered_manifest(sp_manifest, sp_clusters);
        const auto plan = sp_folds > 0 ? fc::fold_assignment(manifest, sp_folds, sp_seed)
                                       : fc::cluster_split(manifest, parse_ratios(sp_ratios), sp_seed);
        emit(fc::pipeline::format_plan(plan), sp_out);
    });

    // audit
    std::string au_plan, au_manifest, au_clusters, au_out;
    auto* audit = app.add_subcommand("audit", "Check that no identity cluster crosses split boundaries");
    audit->add_option("--plan", au_plan, "Plan CSV")->required()->check(CLI::ExistingFile);
    audit->add_option("--manifest", au_manifest, "Frame manifest CSV")->required()->check(CLI::ExistingFile);
    audit->add_option("--clusters", au_clusters, "Cluster CSV")->required()->check(CLI::ExistingFile);
    audit->add_option("--out", au_out, "Report JSON; stdout if omitted");
    audit->callback([&] {
        const auto manifest = clustered_manifest(au_manifest, au_clusters);
        const auto plan = fc::pipeline::parse_plan(fc::io::read_csv(au_plan));
        const auto report = fc::leak_audit(plan, manifest);
        emit(fc::pipeline::audit_json(report).dump(2) + "\n", au_out);
        if (!report.ok) exit_code = kExitPartial;
    });

    // eval
    std::string ev_pred, ev_labels, ev_out;
    auto* eval = app.add_subcommand("eval", "Video-level LogLoss, ROC AUC and average precision");
    eval->add_option("--predictions", ev_pred, "video_id,frame_id,prob CSV")->required()->check(CLI::ExistingFile);
    eval->add_option("--labels", ev_labels, "video_id,label CSV")->required()->check(CLI::ExistingFile);
    eval->add_option("--out", ev_out, "Report JSON; stdout if omitted");
    eval->callback([&] {
        const auto frames = fc::pipeline::parse_predictions(fc::io::read_csv(ev_pred));
        const auto labels = fc::pipeline::parse_labels(fc::io::read_csv(ev_labels));
        const auto scores = fc::pipeline::video_scores(frames, labels);
        emit(fc::pipeline::metrics_json(fc::evaluate(scores)).dump(2) + "\n", ev_out);
    });

    // preview
    std::string pv_image, pv_landmarks, pv_mask, pv_out, pv_id;
    CutoutFlags pv_flags;
    pv_flags.p = 1.0;
    auto* prev = app.add_subcommand("preview", "Render original | mask overlay | augmented panels");
    prev->add_option("--image", pv_image, "Input PNG")->required()->check(CLI::ExistingFile);
    prev->add_option("--landmarks", pv_landmarks, "Landmark JSON (default: <image>.landmarks.json)");
    prev->add_option("--mask", pv_mask, "Difference mask PNG")->check(CLI::ExistingFile);
    prev->add_option("--id", pv_id, "Image id for seeding (default: file name)");
    prev->add_option("--out", pv_out, "Output PNG")->required();
    pv_flags.add(prev);
    prev->callback([&] {
        const auto image = fc::io::read_png(pv_image);
        const fs::path lm_path = pv_landmarks.empty() ? fc::io::sidecar_path(pv_image) : fs::path(pv_landmarks);
        const auto landmarks = fc::io::parse_landmarks(fc::io::read_text(lm_path));
        std::optional<fc::BinaryMask> diff;
        if (!pv_mask.empty()) diff = fc::io::read_mask_png(pv_mask);
        const std::string id = pv_id.empty() ? fs::path(pv_image).filename().string() : pv_id;
        const auto result = fc::pipeline::preview(image, landmarks, diff, pv_flags.config(), id);
        fc::io::write_png(pv_out, result.composite);
        const auto& o = result.outcome;
        std::cout << nlohmann::json{{"applied", o.applied},
                                    {"strategy", o.region ? nlohmann::json(std::string(fc::to_string(o.region->strategy)))
                                                          : nlohmann::json(nullptr)},
                                    {"rho", o.region && o.region->rho ? nlohmann::json(*o.region->rho)
                                                                      : nlohmann::json(nullptr)}}
                         .dump()
                  << "\n";
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitFatal;
    } catch (const std::exception& e) {
        std::cerr << "facecutout: " << e.what() << "\n";
        return kExitFatal;
    }
    return exit_code;
}
