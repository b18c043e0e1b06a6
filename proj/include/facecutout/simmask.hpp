#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "facecutout/error.hpp"
#include "facecutout/image.hpp"

namespace facecutout {

struct SsimMap {
    int width = 0;
    int height = 0;
    std::vector<double> values;

    double at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
};

inline GrayImage to_gray(const RgbImage& image) {
    if (image.empty()) throw Error(Errc::EmptyImage, "cannot convert an empty image");
    GrayImage gray(image.width(), image.height());
    for (int y = 0; y < image.height(); ++y) {
        for (int x = 0; x < image.width(); ++x) {
            const auto* p = image.pixel(x, y);
            const double luma = (0.299 * p[0] + 0.587 * p[1] + 0.114 * p[2]) / 255.0;
            gray.at(x, y) = std::clamp(luma, 0.0, 1.0);
        }
    }
    return gray;
}

namespace detail {

// Half-sample symmetric reflection: ... c b a | a b c ... | z y x ...
inline int reflect_index(int i, int n) {
    const int period = 2 * n;
    i %= period;
    if (i < 0) i += period;
    return i < n ? i : period - 1 - i;
}

// Mean over a window x window box centered on each pixel, with reflected borders.
inline std::vector<double> box_mean(const std::vector<double>& src, int w, int h, int window) {
    const int r = window / 2;
    std::vector<double> tmp(src.size());
    std::vector<double> out(src.size());
    for (int y = 0; y < h; ++y) {
        const double* row = src.data() + static_cast<std::size_t>(y) * w;
        for (int x = 0; x < w; ++x) {
            double s = 0.0;
            for (int k = -r; k <= r; ++k) s += row[reflect_index(x + k, w)];
            tmp[static_cast<std::size_t>(y) * w + x] = s;
        }
    }
    const double norm = 1.0 / (static_cast<double>(window) * window);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double s = 0.0;
            for (int k = -r; k <= r; ++k) s += tmp[static_cast<std::size_t>(reflect_index(y + k, h)) * w + x];
            out[static_cast<std::size_t>(y) * w + x] = s * norm;
        }
    }
    return out;
}

} // namespace detail

/// Per-pixel SSIM with a uniform window, dynamic range L = 1.
///
/// Statistics are population moments over the window; borders are reflected.
/// Results are clamped to [-1, 1] to absorb rounding.
inline SsimMap ssim_map(const GrayImage& a, const GrayImage& b, int window = 11) {
    if (a.width() != b.width() || a.height() != b.height()) {
        throw Error(Errc::DimMismatch, "SSIM inputs differ in size");
    }
    const int w = a.width();
    const int h = a.height();
    if (window < 3 || window % 2 == 0 || window > std::min(w, h)) {
        throw Error(Errc::BadWindow, "window must be odd, >= 3 and <= min(width, height)");
    }
    constexpr double c1 = (0.01 * 1.0) * (0.01 * 1.0);
    constexpr double c2 = (0.03 * 1.0) * (0.03 * 1.0);

    const std::size_t n = static_cast<std::size_t>(w) * h;
    std::vector<double> va(a.values().begin(), a.values().end());
    std::vector<double> vb(b.values().begin(), b.values().end());
    std::vector<double> aa(n), bb(n), ab(n);
    for (std::size_t i = 0; i < n; ++i) {
        aa[i] = va[i] * va[i];
        bb[i] = vb[i] * vb[i];
        ab[i] = va[i] * vb[i];
    }
    const auto mu_a = detail::box_mean(va, w, h, window);
    const auto mu_b = detail::box_mean(vb, w, h, window);
    const auto m_aa = detail::box_mean(aa, w, h, window);
    const auto m_bb = detail::box_mean(bb, w, h, window);
    const auto m_ab = detail::box_mean(ab, w, h, window);

    SsimMap out{w, h, std::vector<double>(n)};
    for (std::size_t i = 0; i < n; ++i) {
        const double ma = mu_a[i];
        const double mb = mu_b[i];
        const double var_a = m_aa[i] - ma * ma;
        const double var_b = m_bb[i] - mb * mb;
        const double cov = m_ab[i] - ma * mb;
        const double num = (2.0 * ma * mb + c1) * (2.0 * cov + c2);
        const double den = (ma * ma + mb * mb + c1) * (var_a + var_b + c2);
        out.values[i] = std::clamp(num / den, -1.0, 1.0);
    }
    return out;
}

// 1 where the fake departs structurally from the real frame (SSIM below threshold).
inline BinaryMask difference_mask(const RgbImage& real, const RgbImage& fake, double ssim_threshold = 0.5,
                                  int window = 11) {
    if (real.width() != fake.width() || real.height() != fake.height()) {
        throw Error(Errc::DimMismatch, "real and fake frames differ in size");
    }
    const auto map = ssim_map(to_gray(real), to_gray(fake), window);
    BinaryMask mask(map.width, map.height);
    for (int y = 0; y < map.height; ++y) {
        for (int x = 0; x < map.width; ++x) {
            if (map.at(x, y) < ssim_threshold) mask.set(x, y);
        }
    }
    return mask;
}

} // namespace facecutout
