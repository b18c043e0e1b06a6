#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "facecutout/error.hpp"
#include "facecutout/geometry.hpp"
#include "facecutout/image.hpp"
#include "facecutout/rng.hpp"

namespace facecutout {

enum class FillMode { Random, Zero, Max };

enum class SensoryGroup { Eyes, Nose, Mouth };

enum class Strategy { Eyes, Nose, Mouth, HullRandomSubset, HullConsecutive, HullQuadrant };

// Which proposal families face_cutout may draw from.
enum class CutoutMode { Combined, SensoryOnly, HullOnly };

inline std::string_view to_string(Strategy s) {
    switch (s) {
    case Strategy::Eyes: return "eyes";
    case Strategy::Nose: return "nose";
    case Strategy::Mouth: return "mouth";
    case Strategy::HullRandomSubset: return "hull_random_subset";
    case Strategy::HullConsecutive: return "hull_consecutive";
    case Strategy::HullQuadrant: return "hull_quadrant";
    }
    return "unknown";
}

inline constexpr std::array<Strategy, 6> kAllStrategies{Strategy::Eyes,           Strategy::Nose,
                                                        Strategy::Mouth,          Strategy::HullRandomSubset,
                                                        Strategy::HullConsecutive, Strategy::HullQuadrant};

inline std::string_view to_string(FillMode f) {
    switch (f) {
    case FillMode::Random: return "random";
    case FillMode::Zero: return "zero";
    case FillMode::Max: return "max";
    }
    return "unknown";
}

inline FillMode parse_fill_mode(std::string_view s) {
    if (s == "random") return FillMode::Random;
    if (s == "zero") return FillMode::Zero;
    if (s == "max") return FillMode::Max;
    throw Error(Errc::InvalidArgument, "unknown fill mode '" + std::string(s) + "'");
}

struct CutoutConfig {
    double p = 0.5;
    double gamma_h = 0.3;
    FillMode fill = FillMode::Zero;
    int max_attempts = 5;
    std::uint64_t seed = 777;
    CutoutMode mode = CutoutMode::Combined;

    void validate() const {
        if (!(p >= 0.0 && p <= 1.0)) throw Error(Errc::InvalidArgument, "p must lie in [0,1]");
        if (!(gamma_h >= 0.0 && gamma_h <= 1.0)) throw Error(Errc::InvalidArgument, "gamma_h must lie in [0,1]");
        if (max_attempts < 1) throw Error(Errc::InvalidArgument, "max_attempts must be >= 1");
    }
};

struct CutoutRegion {
    BinaryMask raster;
    Strategy strategy = Strategy::Eyes;
    int candidate_index = 0;
    std::optional<double> rho; // absent when no usable difference mask was given

    bool operator==(const CutoutRegion&) const = default;
};

struct AugmentOutcome {
    RgbImage image;
    bool applied = false;
    std::optional<CutoutRegion> region;

    bool operator==(const AugmentOutcome&) const = default;
};

/// Fraction of difference-mask pixels enveloped by the region, |region ∧ diff| / |diff|.
inline double overlap_ratio(const BinaryMask& region, const BinaryMask& diff) {
    if (!region.same_shape(diff)) throw Error(Errc::DimMismatch, "region and difference mask differ in size");
    const std::size_t total = diff.popcount();
    if (total == 0) throw Error(Errc::EmptyDiffMask, "difference mask has no set pixel");
    return static_cast<double>(region.intersection_count(diff)) / static_cast<double>(total);
}

namespace detail {

// Null when no diff was given or it has no set pixel; the ρ condition is skipped then.
inline const BinaryMask* usable_diff(const std::optional<BinaryMask>& diff) {
    return diff && diff->any() ? &*diff : nullptr;
}

inline std::optional<BinaryMask> try_rasterize(const Polygon& poly, int width, int height) {
    try {
        return rasterize_polygon(poly, width, height);
    } catch (const Error& e) {
        if (e.code() == Errc::EmptyAfterClamp) return std::nullopt;
        throw;
    }
}

inline std::optional<Polygon> try_hull(std::span<const Point2> points) {
    try {
        return convex_hull(points);
    } catch (const Error& e) {
        if (e.code() == Errc::FewerThanThreePoints || e.code() == Errc::AllCollinear) return std::nullopt;
        throw;
    }
}

// Tracks the best ρ-qualifying candidate by area.
struct MaxAreaPick {
    std::optional<CutoutRegion> best;
    double best_area = -1.0;

    void offer(BinaryMask raster, double area, Strategy strategy, int index, const BinaryMask* diff, double gamma_h) {
        std::optional<double> rho;
        if (diff) {
            rho = overlap_ratio(raster, *diff);
            if (*rho > gamma_h) return;
        }
        if (area > best_area) {
            best_area = area;
            best = CutoutRegion{std::move(raster), strategy, index, rho};
        }
    }
};

} // namespace detail

inline constexpr std::array<double, 5> kSensoryFractions{0.05, 0.10, 0.15, 0.20, 0.25};

// Dilation iterations for the five sensory candidates: max(1, ceil(d * j / 20)), j = 1..5.
inline std::array<int, 5> sensory_iterations(double line_length) {
    std::array<int, 5> out{};
    for (int j = 1; j <= 5; ++j) {
        out[static_cast<std::size_t>(j - 1)] = std::max(1, static_cast<int>(std::ceil(line_length * j / 20.0)));
    }
    return out;
}

inline std::pair<std::size_t, std::size_t> sensory_terminals(SensoryGroup group) {
    switch (group) {
    case SensoryGroup::Eyes: return {36, 45};
    case SensoryGroup::Nose: return {27, 33};
    case SensoryGroup::Mouth: return {48, 54};
    }
    return {36, 45};
}

inline Strategy strategy_of(SensoryGroup group) {
    switch (group) {
    case SensoryGroup::Eyes: return Strategy::Eyes;
    case SensoryGroup::Nose: return Strategy::Nose;
    case SensoryGroup::Mouth: return Strategy::Mouth;
    }
    return Strategy::Eyes;
}

/// Five nested band candidates: the terminal line of the group, dilated by
/// increasing iteration counts proportional to the line length.
inline std::vector<BinaryMask> sensory_candidates(const Landmarks68& landmarks, SensoryGroup group, int width,
                                                  int height) {
    const auto [first, last] = sensory_terminals(group);
    const Point2& a = landmarks[first];
    const Point2& b = landmarks[last];
    const BinaryMask line = draw_line(a, b, width, height);
    const double length = std::hypot(b.x - a.x, b.y - a.y);
    const auto iters = sensory_iterations(length);

    std::vector<BinaryMask> out;
    out.reserve(iters.size());
    // Each candidate grows the previous one; dilation composes additively.
    BinaryMask current = line;
    int done = 0;
    for (int k : iters) {
        current = binary_dilate(current, k - done);
        done = k;
        out.push_back(current);
    }
    return out;
}

/// Picks among sensory candidates: minimum ρ among those with ρ <= gamma_h
/// (ties go to the larger candidate), or the middle candidate without a diff.
inline std::optional<CutoutRegion> select_sensory(std::vector<BinaryMask> candidates, SensoryGroup group,
                                                  const std::optional<BinaryMask>& diff, double gamma_h) {
    const BinaryMask* d = detail::usable_diff(diff);
    const Strategy strategy = strategy_of(group);
    if (!d) {
        if (candidates.empty()) return std::nullopt;
        const std::size_t mid = candidates.size() / 2;
        if (!candidates[mid].any()) return std::nullopt;
        return CutoutRegion{std::move(candidates[mid]), strategy, static_cast<int>(mid), std::nullopt};
    }
    std::optional<std::size_t> best;
    double best_rho = 2.0;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (!candidates[i].any()) continue;
        const double rho = overlap_ratio(candidates[i], *d);
        if (rho <= gamma_h && rho <= best_rho) {
            best_rho = rho;
            best = i;
        }
    }
    if (!best) return std::nullopt;
    return CutoutRegion{std::move(candidates[*best]), strategy, static_cast<int>(*best), best_rho};
}

inline std::optional<CutoutRegion> sensory_cutout(const Landmarks68& landmarks, SensoryGroup group,
                                                  const std::optional<BinaryMask>& diff, double gamma_h, int width,
                                                  int height) {
    std::vector<BinaryMask> candidates;
    try {
        candidates = sensory_candidates(landmarks, group, width, height);
    } catch (const Error& e) {
        if (e.code() == Errc::DegenerateLine) return std::nullopt;
        throw;
    }
    return select_sensory(std::move(candidates), group, diff, gamma_h);
}

/// Hull strategy 1: `max_attempts` random subsets of 8..15 boundary points;
/// the convex hull of each is a candidate. Returns the largest-area candidate
/// with ρ <= gamma_h (first one wins ties).
inline std::optional<CutoutRegion> hull_random_subset(const Landmarks68& landmarks,
                                                      const std::optional<BinaryMask>& diff, const CutoutConfig& cfg,
                                                      Rng& rng, int width, int height) {
    const BinaryMask* d = detail::usable_diff(diff);
    const auto subset_size = static_cast<std::size_t>(rng.uniform_int(8, 15));
    std::vector<std::size_t> order(Landmarks68::kBoundaryCount);
    detail::MaxAreaPick pick;
    for (int attempt = 0; attempt < cfg.max_attempts; ++attempt) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        // Partial Fisher-Yates: the first subset_size entries are a uniform random sample.
        for (std::size_t i = 0; i < subset_size; ++i) {
            const auto j = i + rng.index(order.size() - i);
            std::swap(order[i], order[j]);
        }
        std::vector<Point2> pts;
        pts.reserve(subset_size);
        for (std::size_t i = 0; i < subset_size; ++i) pts.push_back(landmarks[order[i]]);
        auto hull = detail::try_hull(pts);
        if (!hull) continue;
        auto raster = detail::try_rasterize(*hull, width, height);
        if (!raster) continue;
        pick.offer(std::move(*raster), polygon_area(*hull), Strategy::HullRandomSubset, attempt, d, cfg.gamma_h);
    }
    return pick.best;
}

/// Hull strategy 2 with a fixed window size: every run of `window` consecutive
/// boundary points [s, s + window - 1], s = 0..27 - window, no wrap-around.
/// Largest-area ρ-qualifying window wins; ties go to the lowest start.
inline std::optional<CutoutRegion> hull_consecutive_windows(const Landmarks68& landmarks, int window,
                                                            const std::optional<BinaryMask>& diff, double gamma_h,
                                                            int width, int height) {
    const int n = static_cast<int>(Landmarks68::kBoundaryCount);
    if (window < 3 || window > n) throw Error(Errc::InvalidArgument, "window must lie in [3, 27]");
    const BinaryMask* d = detail::usable_diff(diff);
    detail::MaxAreaPick pick;
    for (int start = 0; start + window <= n; ++start) {
        const auto pts = landmarks.range(static_cast<std::size_t>(start), static_cast<std::size_t>(start + window - 1));
        auto hull = detail::try_hull(pts);
        if (!hull) continue;
        auto raster = detail::try_rasterize(*hull, width, height);
        if (!raster) continue;
        pick.offer(std::move(*raster), polygon_area(*hull), Strategy::HullConsecutive, start, d, gamma_h);
    }
    return pick.best;
}

inline std::optional<CutoutRegion> hull_consecutive(const Landmarks68& landmarks,
                                                    const std::optional<BinaryMask>& diff, const CutoutConfig& cfg,
                                                    Rng& rng, int width, int height) {
    const int window = static_cast<int>(rng.uniform_int(8, 15));
    return hull_consecutive_windows(landmarks, window, diff, cfg.gamma_h, width, height);
}

// Hull of all 27 boundary points: the face region the quadrant strategy splits.
inline Polygon face_boundary_polygon(const Landmarks68& landmarks) { return convex_hull(landmarks.boundary()); }

/// Hull strategy 3: split the boundary hull through its centroid into four
/// quadrants. With a diff, the minimum-ρ quadrant (lowest index on ties) if
/// it satisfies ρ <= gamma_h; otherwise a uniformly random non-empty quadrant.
inline std::optional<CutoutRegion> hull_quadrant(const Landmarks68& landmarks, const std::optional<BinaryMask>& diff,
                                                 const CutoutConfig& cfg, Rng& rng, int width, int height) {
    const BinaryMask* d = detail::usable_diff(diff);
    std::array<BinaryMask, 4> quads;
    try {
        quads = centroid_quadrants(face_boundary_polygon(landmarks), width, height);
    } catch (const Error& e) {
        if (e.code() == Errc::EmptyAfterClamp || e.code() == Errc::AllCollinear) return std::nullopt;
        throw;
    }
    if (d) {
        std::optional<std::size_t> best;
        double best_rho = 2.0;
        for (std::size_t i = 0; i < quads.size(); ++i) {
            if (!quads[i].any()) continue;
            const double rho = overlap_ratio(quads[i], *d);
            if (rho < best_rho) {
                best_rho = rho;
                best = i;
            }
        }
        if (!best || best_rho > cfg.gamma_h) return std::nullopt;
        return CutoutRegion{std::move(quads[*best]), Strategy::HullQuadrant, static_cast<int>(*best), best_rho};
    }
    std::vector<std::size_t> nonempty;
    for (std::size_t i = 0; i < quads.size(); ++i) {
        if (quads[i].any()) nonempty.push_back(i);
    }
    if (nonempty.empty()) return std::nullopt;
    const std::size_t pick = nonempty[rng.index(nonempty.size())];
    return CutoutRegion{std::move(quads[pick]), Strategy::HullQuadrant, static_cast<int>(pick), std::nullopt};
}

// Replaces region pixels; everything else is left bit-identical.
inline RgbImage fill_region(const RgbImage& image, const BinaryMask& region, FillMode fill, Rng& rng) {
    if (!image.same_shape(region)) throw Error(Errc::DimMismatch, "image and region differ in size");
    RgbImage out = image;
    for (int y = 0; y < image.height(); ++y) {
        for (int x = 0; x < image.width(); ++x) {
            if (!region.get(x, y)) continue;
            auto* px = out.pixel(x, y);
            for (int c = 0; c < 3; ++c) {
                switch (fill) {
                case FillMode::Random: px[c] = static_cast<std::uint8_t>(rng.uniform_int(0, 255)); break;
                case FillMode::Zero: px[c] = 0; break;
                case FillMode::Max: px[c] = 255; break;
                }
            }
        }
    }
    return out;
}

inline void check_landmarks_fit(const Landmarks68& landmarks, int width, int height) {
    for (std::size_t i = 0; i < Landmarks68::kCount; ++i) {
        const auto& p = landmarks[i];
        if (std::abs(p.x) >= 2.0 * width || std::abs(p.y) >= 2.0 * height) {
            throw Error(Errc::LandmarkImageMismatch,
                        "landmark " + std::to_string(i) + " lies beyond twice the image extent");
        }
    }
}

/// Landmark-guided cutout of one image.
///
/// The per-image RNG is seeded from (cfg.seed, image_id), so results do not
/// depend on call order. With probability 1 - p the input is returned as is.
/// Otherwise one of eyes / mouth / nose / hull is drawn uniformly (hull then
/// picks one of its three strategies uniformly); if no candidate passes the
/// ρ gate the image is returned unchanged.
inline AugmentOutcome face_cutout(const RgbImage& image, const Landmarks68& landmarks,
                                  const std::optional<BinaryMask>& diff, const CutoutConfig& cfg,
                                  std::string_view image_id) {
    cfg.validate();
    if (image.empty()) throw Error(Errc::EmptyImage, "input image is empty");
    if (diff && !image.same_shape(*diff)) throw Error(Errc::DimMismatch, "difference mask does not match image");
    check_landmarks_fit(landmarks, image.width(), image.height());

    Rng rng(derive_seed(cfg.seed, image_id));
    AugmentOutcome unchanged{image, false, std::nullopt};
    if (rng.uniform01() >= cfg.p) return unchanged;

    std::size_t choice = 3;
    switch (cfg.mode) {
    case CutoutMode::Combined: choice = rng.index(4); break;
    case CutoutMode::SensoryOnly: choice = rng.index(3); break;
    case CutoutMode::HullOnly: choice = 3; break;
    }

    const int w = image.width();
    const int h = image.height();
    std::optional<CutoutRegion> region;
    switch (choice) {
    case 0: region = sensory_cutout(landmarks, SensoryGroup::Eyes, diff, cfg.gamma_h, w, h); break;
    case 1: region = sensory_cutout(landmarks, SensoryGroup::Mouth, diff, cfg.gamma_h, w, h); break;
    case 2: region = sensory_cutout(landmarks, SensoryGroup::Nose, diff, cfg.gamma_h, w, h); break;
    default:
        switch (rng.index(3)) {
        case 0: region = hull_random_subset(landmarks, diff, cfg, rng, w, h); break;
        case 1: region = hull_consecutive(landmarks, diff, cfg, rng, w, h); break;
        default: region = hull_quadrant(landmarks, diff, cfg, rng, w, h); break;
        }
        break;
    }
    if (!region) return unchanged;

    AugmentOutcome out;
    out.image = fill_region(image, region->raster, cfg.fill, rng);
    out.applied = true;
    out.region = std::move(region);
    return out;
}

} // namespace facecutout
