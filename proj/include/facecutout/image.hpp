#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "facecutout/error.hpp"

namespace facecutout {

// Per-pixel 0/1 raster, row-major.
class BinaryMask {
public:
    BinaryMask() = default;
    BinaryMask(int width, int height)
        : width_(width), height_(height),
          data_(static_cast<std::size_t>(std::max(width, 0)) * static_cast<std::size_t>(std::max(height, 0)), 0) {
        if (width <= 0 || height <= 0) {
            throw Error(Errc::InvalidArgument, "mask dimensions must be positive");
        }
    }

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    bool contains(int x, int y) const noexcept { return x >= 0 && y >= 0 && x < width_ && y < height_; }

    bool get(int x, int y) const { return data_[index(x, y)] != 0; }
    void set(int x, int y, bool value = true) { data_[index(x, y)] = value ? 1 : 0; }

    std::span<const std::uint8_t> bits() const noexcept { return data_; }
    std::span<std::uint8_t> bits() noexcept { return data_; }

    std::size_t popcount() const noexcept {
        return static_cast<std::size_t>(std::count(data_.begin(), data_.end(), std::uint8_t{1}));
    }

    bool any() const noexcept {
        return std::any_of(data_.begin(), data_.end(), [](std::uint8_t v) { return v != 0; });
    }

    bool same_shape(const BinaryMask& other) const noexcept {
        return width_ == other.width_ && height_ == other.height_;
    }

    // |this ∧ other|
    std::size_t intersection_count(const BinaryMask& other) const {
        require_same_shape(other);
        std::size_t n = 0;
        for (std::size_t i = 0; i < data_.size(); ++i) {
            n += static_cast<std::size_t>(data_[i] & other.data_[i]);
        }
        return n;
    }

    bool subset_of(const BinaryMask& other) const {
        require_same_shape(other);
        for (std::size_t i = 0; i < data_.size(); ++i) {
            if (data_[i] && !other.data_[i]) return false;
        }
        return true;
    }

    BinaryMask& operator|=(const BinaryMask& other) {
        require_same_shape(other);
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] |= other.data_[i];
        return *this;
    }

    BinaryMask& operator&=(const BinaryMask& other) {
        require_same_shape(other);
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] &= other.data_[i];
        return *this;
    }

    friend BinaryMask operator|(BinaryMask a, const BinaryMask& b) { return a |= b; }
    friend BinaryMask operator&(BinaryMask a, const BinaryMask& b) { return a &= b; }

    bool operator==(const BinaryMask&) const = default;

private:
    std::size_t index(int x, int y) const noexcept {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
    }

    void require_same_shape(const BinaryMask& other) const {
        if (!same_shape(other)) throw Error(Errc::DimMismatch, "mask dimensions differ");
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> data_;
};

// 8-bit interleaved RGB image, row-major.
class RgbImage {
public:
    RgbImage() = default;
    RgbImage(int width, int height, std::uint8_t fill = 0)
        : width_(width), height_(height),
          data_(static_cast<std::size_t>(std::max(width, 0)) * static_cast<std::size_t>(std::max(height, 0)) * 3, fill) {
        if (width <= 0 || height <= 0) {
            throw Error(Errc::EmptyImage, "image dimensions must be positive");
        }
    }

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    bool empty() const noexcept { return data_.empty(); }

    std::uint8_t* pixel(int x, int y) noexcept { return data_.data() + offset(x, y); }
    const std::uint8_t* pixel(int x, int y) const noexcept { return data_.data() + offset(x, y); }

    void set(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b) noexcept {
        auto* p = pixel(x, y);
        p[0] = r;
        p[1] = g;
        p[2] = b;
    }

    std::span<const std::uint8_t> bytes() const noexcept { return data_; }
    std::span<std::uint8_t> bytes() noexcept { return data_; }

    bool same_shape(const BinaryMask& m) const noexcept { return width_ == m.width() && height_ == m.height(); }

    bool operator==(const RgbImage&) const = default;

private:
    std::size_t offset(int x, int y) const noexcept {
        return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x)) * 3;
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> data_;
};

// Luminance in [0,1], row-major.
class GrayImage {
public:
    GrayImage() = default;
    GrayImage(int width, int height, double fill = 0.0)
        : width_(width), height_(height),
          data_(static_cast<std::size_t>(std::max(width, 0)) * static_cast<std::size_t>(std::max(height, 0)), fill) {
        if (width <= 0 || height <= 0) {
            throw Error(Errc::EmptyImage, "image dimensions must be positive");
        }
        if (!(fill >= 0.0 && fill <= 1.0)) throw Error(Errc::InvalidArgument, "gray value outside [0,1]");
    }

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }

    double at(int x, int y) const noexcept { return data_[static_cast<std::size_t>(y) * width_ + x]; }
    double& at(int x, int y) noexcept { return data_[static_cast<std::size_t>(y) * width_ + x]; }

    std::span<const double> values() const noexcept { return data_; }

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<double> data_;
};

} // namespace facecutout
