#pragma once

// Test fixtures: synthetic landmark faces, images and manifests.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "facecutout/facecutout.hpp"

namespace fctest {

using namespace facecutout;

/// Frontal 68-point face in normalized [0,1] coordinates, scaled to the image.
/// `jitter` adds uniform noise of that many pixels to each point.
inline Landmarks68 synthetic_face(int width, int height, Rng* rng = nullptr, double jitter = 0.0) {
    std::vector<Point2> p(68);
    const double pi = std::numbers::pi;
    // jaw 0..16: lower half ellipse from left to right through the chin
    for (int k = 0; k <= 16; ++k) {
        const double phi = pi - pi * k / 16.0;
        p[k] = {0.5 + 0.38 * std::cos(phi), 0.45 + 0.45 * std::sin(phi)};
    }
    // eyebrows 17..21, 22..26
    for (int k = 0; k < 5; ++k) {
        const double t = k / 4.0;
        p[17 + k] = {0.18 + 0.26 * t, 0.30 - 0.05 * std::sin(pi * t)};
        p[22 + k] = {0.56 + 0.26 * t, 0.30 - 0.05 * std::sin(pi * t)};
    }
    // nose bridge 27..30, lower nose 31..35
    for (int k = 0; k < 4; ++k) p[27 + k] = {0.5, 0.38 + 0.06 * k};
    for (int k = 0; k < 5; ++k) p[31 + k] = {0.42 + 0.04 * k, 0.60 + 0.02 * std::sin(pi * k / 4.0)};
    // eyes: 36 outer-left corner .. 41, 42 inner corner .. 45 outer-right corner .. 47
    auto eye = [&](int base, double cx, double cy) {
        const double angles[6] = {pi, 2 * pi / 3 + pi, pi / 3 + pi, 0.0, pi / 3, 2 * pi / 3};
        for (int k = 0; k < 6; ++k) p[base + k] = {cx + 0.07 * std::cos(angles[k]), cy + 0.03 * std::sin(angles[k])};
    };
    eye(36, 0.32, 0.42);
    eye(42, 0.68, 0.42);
    // mouth outer 48..59 from the left corner clockwise, inner 60..67
    for (int k = 0; k < 12; ++k) {
        const double a = pi + 2 * pi * k / 12.0;
        p[48 + k] = {0.5 + 0.14 * std::cos(a), 0.76 + 0.06 * std::sin(a)};
    }
    for (int k = 0; k < 8; ++k) {
        const double a = pi + 2 * pi * k / 8.0;
        p[60 + k] = {0.5 + 0.09 * std::cos(a), 0.76 + 0.025 * std::sin(a)};
    }
    for (auto& q : p) {
        q.x *= width - 1;
        q.y *= height - 1;
        if (rng && jitter > 0) {
            q.x += (rng->uniform01() * 2 - 1) * jitter;
            q.y += (rng->uniform01() * 2 - 1) * jitter;
        }
    }
    return Landmarks68(p);
}

// Smooth gradient plus uniform texture noise.
inline RgbImage textured_image(int width, int height, Rng& rng, int noise = 60) {
    RgbImage img(width, height);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            for (int c = 0; c < 3; ++c) {
                const int base = 60 + (x * 97 + y * 57 + c * 31) % 120;
                const int v = base + static_cast<int>(rng.uniform_int(-noise / 2, noise / 2));
                img.pixel(x, y)[c] = static_cast<std::uint8_t>(std::clamp(v, 0, 255));
            }
        }
    }
    return img;
}

// Independent uniform noise in every channel.
inline RgbImage noise_image(int width, int height, Rng& rng) {
    RgbImage img(width, height);
    for (auto& b : img.bytes()) b = static_cast<std::uint8_t>(rng.uniform_int(0, 255));
    return img;
}

// Copy of `img` with a side x side block at (x0, y0) replaced by fresh noise.
inline RgbImage plant_block(const RgbImage& img, int x0, int y0, int side, Rng& rng) {
    RgbImage out = img;
    for (int y = y0; y < y0 + side; ++y) {
        for (int x = x0; x < x0 + side; ++x) {
            for (int c = 0; c < 3; ++c) out.pixel(x, y)[c] = static_cast<std::uint8_t>(rng.uniform_int(0, 255));
        }
    }
    return out;
}

inline BinaryMask block_mask(int width, int height, int x0, int y0, int side) {
    BinaryMask m(width, height);
    for (int y = y0; y < y0 + side; ++y) {
        for (int x = x0; x < x0 + side; ++x) m.set(x, y);
    }
    return m;
}

inline double iou(const BinaryMask& a, const BinaryMask& b) {
    const auto inter = a.intersection_count(b);
    const auto uni = a.popcount() + b.popcount() - inter;
    return uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

inline BinaryMask random_mask(int width, int height, Rng& rng, double density) {
    BinaryMask m(width, height);
    for (auto& b : m.bits()) b = rng.uniform01() < density ? 1 : 0;
    return m;
}

// Box-Muller on the library RNG, so fixtures match across platforms.
inline double gaussian(Rng& rng) {
    const double u1 = 1.0 - rng.uniform01();
    const double u2 = rng.uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

/// `per_blob` points around each of `blobs` random centers (spread `sigma`),
/// followed by `outliers` far-away points, in kEmbeddingDim dimensions.
inline PointSet planted_blobs(Rng& rng, int blobs, int per_blob, double sigma, int outliers,
                              std::size_t dim = kEmbeddingDim) {
    PointSet pts;
    for (int b = 0; b < blobs; ++b) {
        std::vector<double> c(dim);
        for (auto& v : c) v = gaussian(rng) * 3.0;
        for (int i = 0; i < per_blob; ++i) {
            auto p = c;
            for (auto& v : p) v += gaussian(rng) * sigma;
            pts.push_back(std::move(p));
        }
    }
    for (int o = 0; o < outliers; ++o) {
        std::vector<double> p(dim);
        for (auto& v : p) v = gaussian(rng) * 10.0;
        pts.push_back(std::move(p));
    }
    return pts;
}

/// Video-level manifest with `sizes[c]` videos in cluster c: one real per
/// cluster plus fakes of it (noise cluster ids are allowed).
inline DatasetManifest clustered_manifest(const std::vector<int>& sizes, const std::vector<int>& ids = {}) {
    std::vector<VideoRecord> recs;
    for (std::size_t c = 0; c < sizes.size(); ++c) {
        const int cid = ids.empty() ? static_cast<int>(c) : ids[c];
        const std::string real = "c" + std::to_string(c) + "_real";
        recs.push_back({real, Label::Real, std::nullopt, cid, 1});
        for (int k = 1; k < sizes[c]; ++k) {
            recs.push_back({"c" + std::to_string(c) + "_fake" + std::to_string(k), Label::Fake, real, cid, 1});
        }
    }
    return DatasetManifest(std::move(recs));
}

} // namespace fctest
