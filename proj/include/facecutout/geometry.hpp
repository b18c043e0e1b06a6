#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "facecutout/error.hpp"
#include "facecutout/image.hpp"

namespace facecutout {

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    bool operator==(const Point2&) const = default;
    auto operator<=>(const Point2&) const = default;
};

inline bool is_finite(const Point2& p) noexcept { return std::isfinite(p.x) && std::isfinite(p.y); }

// 2-D cross product of (b - a) x (c - a); positive for a left turn.
inline double orient(const Point2& a, const Point2& b, const Point2& c) noexcept {
    return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

/// The 68-point facial landmark scheme.
///
/// Index ranges: jaw [0,16], eyebrows [17,26], nose [27,35], eyes [36,47]
/// (left 36-41, right 42-47), mouth [48,67]. Jaw plus eyebrows form the
/// 27 boundary points used by the hull cutouts.
class Landmarks68 {
public:
    static constexpr std::size_t kCount = 68;
    static constexpr std::size_t kBoundaryCount = 27;

    Landmarks68() = default;

    explicit Landmarks68(std::span<const Point2> points) {
        if (points.size() != kCount) {
            throw Error(Errc::InvalidArgument, "expected 68 landmarks, got " + std::to_string(points.size()));
        }
        for (std::size_t i = 0; i < kCount; ++i) {
            if (!is_finite(points[i])) throw Error(Errc::InvalidArgument, "non-finite landmark " + std::to_string(i));
            points_[i] = points[i];
        }
    }

    const Point2& operator[](std::size_t i) const { return points_.at(i); }
    std::span<const Point2, kCount> points() const noexcept { return points_; }

    std::vector<Point2> range(std::size_t first, std::size_t last) const {
        return {points_.begin() + static_cast<std::ptrdiff_t>(first), points_.begin() + static_cast<std::ptrdiff_t>(last) + 1};
    }

    std::vector<Point2> boundary() const { return range(0, kBoundaryCount - 1); }

private:
    std::array<Point2, kCount> points_{};
};

// Closed polygon with at least three vertices and no repeated consecutive vertex.
class Polygon {
public:
    explicit Polygon(std::vector<Point2> vertices) {
        for (const auto& p : vertices) {
            if (!is_finite(p)) throw Error(Errc::InvalidArgument, "non-finite polygon vertex");
        }
        vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
        while (vertices.size() > 1 && vertices.front() == vertices.back()) vertices.pop_back();
        if (vertices.size() < 3) {
            throw Error(Errc::FewerThanThreePoints, "polygon needs at least 3 distinct vertices");
        }
        vertices_ = std::move(vertices);
    }

    std::span<const Point2> vertices() const noexcept { return vertices_; }
    std::size_t size() const noexcept { return vertices_.size(); }
    const Point2& operator[](std::size_t i) const noexcept { return vertices_[i]; }

private:
    std::vector<Point2> vertices_;
};

/// Convex hull by monotone chain.
///
/// Returns the strictly convex vertices (collinear boundary points dropped) in
/// counter-clockwise order, starting at the lexicographically smallest vertex.
inline Polygon convex_hull(std::span<const Point2> points) {
    if (points.size() < 3) throw Error(Errc::FewerThanThreePoints, "convex hull needs at least 3 points");
    std::vector<Point2> pts(points.begin(), points.end());
    for (const auto& p : pts) {
        if (!is_finite(p)) throw Error(Errc::InvalidArgument, "non-finite point");
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    std::vector<Point2> hull(2 * pts.size());
    std::size_t k = 0;
    for (const auto& p : pts) {
        while (k >= 2 && orient(hull[k - 2], hull[k - 1], p) <= 0) --k;
        hull[k++] = p;
    }
    for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
        while (k >= lower && orient(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k > 0 ? k - 1 : 0);
    if (hull.size() < 3) throw Error(Errc::AllCollinear, "all points are collinear");
    return Polygon(std::move(hull));
}

inline double polygon_signed_area(const Polygon& poly) noexcept {
    const auto v = poly.vertices();
    double sum = 0.0;
    for (std::size_t i = 0, n = v.size(); i < n; ++i) {
        const auto& a = v[i];
        const auto& b = v[(i + 1) % n];
        sum += a.x * b.y - b.x * a.y;
    }
    return 0.5 * sum;
}

// Shoelace area, always >= 0.
inline double polygon_area(const Polygon& poly) noexcept { return std::abs(polygon_signed_area(poly)); }

inline double polygon_perimeter(const Polygon& poly) noexcept {
    const auto v = poly.vertices();
    double sum = 0.0;
    for (std::size_t i = 0, n = v.size(); i < n; ++i) {
        sum += std::hypot(v[(i + 1) % n].x - v[i].x, v[(i + 1) % n].y - v[i].y);
    }
    return sum;
}

inline Point2 polygon_centroid(const Polygon& poly) {
    const auto v = poly.vertices();
    const double area = polygon_signed_area(poly);
    if (std::abs(area) < 1e-12) throw Error(Errc::DegenerateZeroArea, "polygon has zero area");
    double cx = 0.0;
    double cy = 0.0;
    for (std::size_t i = 0, n = v.size(); i < n; ++i) {
        const auto& a = v[i];
        const auto& b = v[(i + 1) % n];
        const double cross = a.x * b.y - b.x * a.y;
        cx += (a.x + b.x) * cross;
        cy += (a.y + b.y) * cross;
    }
    return {cx / (6.0 * area), cy / (6.0 * area)};
}

namespace detail {

constexpr double kRasterEps = 1e-9;

inline void fill_span(BinaryMask& mask, int y, double x0, double x1) {
    const int lo = std::max(0, static_cast<int>(std::ceil(x0 - kRasterEps)));
    const int hi = std::min(mask.width() - 1, static_cast<int>(std::floor(x1 + kRasterEps)));
    for (int x = lo; x <= hi; ++x) mask.set(x, y);
}

} // namespace detail

/// Scanline fill into a fresh mask without the emptiness check.
///
/// Pixel (x, y) has its center at integer coordinates (x, y). A pixel is set
/// when its center is inside the polygon under the even-odd rule or lies on
/// an edge. Vertices are clamped to the image before filling.
inline BinaryMask rasterize_polygon_unchecked(const Polygon& poly, int width, int height) {
    BinaryMask mask(width, height);
    std::vector<Point2> v(poly.vertices().begin(), poly.vertices().end());
    for (auto& p : v) {
        p.x = std::clamp(p.x, 0.0, static_cast<double>(width - 1));
        p.y = std::clamp(p.y, 0.0, static_cast<double>(height - 1));
    }
    double ymin = v[0].y;
    double ymax = v[0].y;
    for (const auto& p : v) {
        ymin = std::min(ymin, p.y);
        ymax = std::max(ymax, p.y);
    }
    const int row_lo = std::max(0, static_cast<int>(std::ceil(ymin - detail::kRasterEps)));
    const int row_hi = std::min(height - 1, static_cast<int>(std::floor(ymax + detail::kRasterEps)));
    const std::size_t n = v.size();
    std::vector<double> crossings;
    crossings.reserve(n);
    for (int row = row_lo; row <= row_hi; ++row) {
        const double y = row;
        crossings.clear();
        for (std::size_t i = 0; i < n; ++i) {
            const auto& a = v[i];
            const auto& b = v[(i + 1) % n];
            const double y0 = std::min(a.y, b.y);
            const double y1 = std::max(a.y, b.y);
            if (a.y == b.y) {
                if (std::abs(y - a.y) <= detail::kRasterEps) {
                    detail::fill_span(mask, row, std::min(a.x, b.x), std::max(a.x, b.x));
                }
                continue;
            }
            if (y < y0 - detail::kRasterEps || y > y1 + detail::kRasterEps) continue;
            const double x = a.x + (y - a.y) * (b.x - a.x) / (b.y - a.y);
            // Centers lying exactly on an edge belong to the polygon.
            const double rx = std::round(x);
            if (std::abs(x - rx) <= detail::kRasterEps && rx >= 0 && rx < width) {
                mask.set(static_cast<int>(rx), row);
            }
            if (y0 <= y && y < y1) crossings.push_back(x);
        }
        std::sort(crossings.begin(), crossings.end());
        for (std::size_t i = 0; i + 1 < crossings.size(); i += 2) {
            detail::fill_span(mask, row, crossings[i], crossings[i + 1]);
        }
    }
    return mask;
}

// Throws EmptyAfterClamp when the polygon lies wholly outside the image or covers no pixel center.
inline BinaryMask rasterize_polygon(const Polygon& poly, int width, int height) {
    if (width <= 0 || height <= 0) throw Error(Errc::InvalidArgument, "raster dimensions must be positive");
    double xmin = poly[0].x, xmax = poly[0].x, ymin = poly[0].y, ymax = poly[0].y;
    for (const auto& p : poly.vertices()) {
        xmin = std::min(xmin, p.x);
        xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y);
        ymax = std::max(ymax, p.y);
    }
    if (xmax < 0 || ymax < 0 || xmin > width - 1 || ymin > height - 1) {
        throw Error(Errc::EmptyAfterClamp, "polygon lies outside the image");
    }
    auto mask = rasterize_polygon_unchecked(poly, width, height);
    if (!mask.any()) throw Error(Errc::EmptyAfterClamp, "polygon covers no pixel");
    return mask;
}

/// One-pixel Bresenham segment between the rounded endpoints, clipped to the image.
inline BinaryMask draw_line(const Point2& a, const Point2& b, int width, int height) {
    if (width <= 0 || height <= 0) throw Error(Errc::InvalidArgument, "raster dimensions must be positive");
    if (!is_finite(a) || !is_finite(b)) throw Error(Errc::InvalidArgument, "non-finite line endpoint");
    long x0 = std::lround(a.x), y0 = std::lround(a.y);
    const long x1 = std::lround(b.x), y1 = std::lround(b.y);
    if (x0 == x1 && y0 == y1) throw Error(Errc::DegenerateLine, "line endpoints coincide");

    BinaryMask mask(width, height);
    const long dx = std::abs(x1 - x0);
    const long dy = -std::abs(y1 - y0);
    const long sx = x0 < x1 ? 1 : -1;
    const long sy = y0 < y1 ? 1 : -1;
    long err = dx + dy;
    for (;;) {
        if (x0 >= 0 && y0 >= 0 && x0 < width && y0 < height) mask.set(static_cast<int>(x0), static_cast<int>(y0));
        if (x0 == x1 && y0 == y1) break;
        const long e2 = 2 * err;
        if (e2 >= dy) {
            err += dy;
            x0 += sx;
        }
        if (e2 <= dx) {
            err += dx;
            y0 += sy;
        }
    }
    return mask;
}

/// `iterations` rounds of dilation with the 3x3 full-square element.
///
/// Equivalent to marking every pixel within Chebyshev distance `iterations`
/// of a set pixel, computed with separable running-window sums.
inline BinaryMask binary_dilate(const BinaryMask& mask, int iterations) {
    if (iterations < 0) throw Error(Errc::InvalidArgument, "iterations must be >= 0");
    if (iterations == 0 || mask.empty()) return mask;
    const int w = mask.width();
    const int h = mask.height();
    const int r = iterations;

    std::vector<int> prefix(static_cast<std::size_t>(std::max(w, h)) + 1);
    BinaryMask rows(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) prefix[x + 1] = prefix[x] + (mask.get(x, y) ? 1 : 0);
        for (int x = 0; x < w; ++x) {
            const int lo = std::max(0, x - r);
            const int hi = std::min(w - 1, x + r);
            if (prefix[hi + 1] - prefix[lo] > 0) rows.set(x, y);
        }
    }
    BinaryMask out(w, h);
    for (int x = 0; x < w; ++x) {
        for (int y = 0; y < h; ++y) prefix[y + 1] = prefix[y] + (rows.get(x, y) ? 1 : 0);
        for (int y = 0; y < h; ++y) {
            const int lo = std::max(0, y - r);
            const int hi = std::min(h - 1, y + r);
            if (prefix[hi + 1] - prefix[lo] > 0) out.set(x, y);
        }
    }
    return out;
}

/// Rasterizes `poly` and splits its pixels through the area centroid.
///
/// Order is row-major: upper-left, upper-right, lower-left, lower-right,
/// with x <= cx / y <= cy on the left / upper side.
inline std::array<BinaryMask, 4> centroid_quadrants(const Polygon& poly, int width, int height) {
    const Point2 c = polygon_centroid(poly);
    const BinaryMask full = rasterize_polygon(poly, width, height);
    std::array<BinaryMask, 4> quads{BinaryMask(width, height), BinaryMask(width, height), BinaryMask(width, height),
                                    BinaryMask(width, height)};
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            if (!full.get(x, y)) continue;
            const int col = x <= c.x ? 0 : 1;
            const int row = y <= c.y ? 0 : 1;
            quads[static_cast<std::size_t>(row * 2 + col)].set(x, y);
        }
    }
    return quads;
}

} // namespace facecutout
