#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace cvxseg {

struct Pixel {
    int x = 0;
    int y = 0;
    friend bool operator==(const Pixel&, const Pixel&) = default;
};

using PixelSet = std::vector<Pixel>;

/// Real-valued function on the pixel lattice, row-major, mesh size 1.
class ScalarField {
public:
    ScalarField() = default;
    ScalarField(int width, int height, double fill = 0.0)
        : width_(width),
          height_(height),
          values_(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill) {
        if (width < 1 || height < 1)
            throw std::invalid_argument("field dimensions must be positive");
    }

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t size() const { return values_.size(); }

    bool in_bounds(int x, int y) const {
        return x >= 0 && x < width_ && y >= 0 && y < height_;
    }

    double& at(int x, int y) { return values_[index(x, y)]; }
    double at(int x, int y) const { return values_[index(x, y)]; }
    double& operator[](std::size_t i) { return values_[i]; }
    double operator[](std::size_t i) const { return values_[i]; }

    std::vector<double>& values() { return values_; }
    const std::vector<double>& values() const { return values_; }

    std::size_t index(int x, int y) const {
        return static_cast<std::size_t>(y) * width_ + x;
    }

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<double> values_;
};

/// {0,1} indicator on the lattice: 1 marks background, 0 the object.
class BinaryField {
public:
    BinaryField() = default;
    BinaryField(int width, int height, std::uint8_t fill = 1)
        : width_(width),
          height_(height),
          values_(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill) {
        if (width < 1 || height < 1)
            throw std::invalid_argument("field dimensions must be positive");
        if (fill > 1)
            throw std::invalid_argument("binary fill must be 0 or 1");
    }

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t size() const { return values_.size(); }

    bool in_bounds(int x, int y) const {
        return x >= 0 && x < width_ && y >= 0 && y < height_;
    }

    std::uint8_t& at(int x, int y) { return values_[index(x, y)]; }
    std::uint8_t at(int x, int y) const { return values_[index(x, y)]; }
    std::uint8_t& operator[](std::size_t i) { return values_[i]; }
    std::uint8_t operator[](std::size_t i) const { return values_[i]; }

    std::vector<std::uint8_t>& values() { return values_; }
    const std::vector<std::uint8_t>& values() const { return values_; }

    std::size_t index(int x, int y) const {
        return static_cast<std::size_t>(y) * width_ + x;
    }

    std::size_t count(std::uint8_t v) const {
        std::size_t n = 0;
        for (std::uint8_t u : values_) n += (u == v);
        return n;
    }

    friend bool operator==(const BinaryField&, const BinaryField&) = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> values_;
};

inline ScalarField to_scalar(const BinaryField& u) {
    ScalarField out(u.width(), u.height());
    for (std::size_t i = 0; i < u.size(); ++i) out[i] = u[i];
    return out;
}

inline PixelSet object_pixels(const BinaryField& u) {
    PixelSet out;
    for (int y = 0; y < u.height(); ++y)
        for (int x = 0; x < u.width(); ++x)
            if (u.at(x, y) == 0) out.push_back({x, y});
    return out;
}

/// True if (x,y) is an object pixel on the object's perimeter: it touches the
/// image border or has a 4-neighbor in the background.
inline bool on_perimeter(const BinaryField& u, int x, int y) {
    if (u.at(x, y) != 0) return false;
    if (x == 0 || y == 0 || x == u.width() - 1 || y == u.height() - 1) return true;
    return u.at(x - 1, y) == 1 || u.at(x + 1, y) == 1 ||
           u.at(x, y - 1) == 1 || u.at(x, y + 1) == 1;
}

/// Perimeter of the object {u = 0}, 4-connectivity, row-major order.
inline PixelSet boundary_extract(const BinaryField& u) {
    PixelSet out;
    for (int y = 0; y < u.height(); ++y)
        for (int x = 0; x < u.width(); ++x)
            if (on_perimeter(u, x, y)) out.push_back({x, y});
    return out;
}

/// Copy of u with the object perimeter read as 0.5.
inline ScalarField ternary_view(const BinaryField& u) {
    ScalarField out = to_scalar(u);
    for (int y = 0; y < u.height(); ++y)
        for (int x = 0; x < u.width(); ++x)
            if (on_perimeter(u, x, y)) out.at(x, y) = 0.5;
    return out;
}

/// Normalized disagreement count: |{v1 != v2}| / |{v1 = 1}|.
inline double relative_variation(const BinaryField& v1, const BinaryField& v2) {
    if (v1.width() != v2.width() || v1.height() != v2.height())
        throw std::invalid_argument("relative variation requires equal dimensions");
    std::size_t ones = 0, diff = 0;
    for (std::size_t i = 0; i < v1.size(); ++i) {
        ones += (v1[i] == 1);
        diff += (v1[i] != v2[i]);
    }
    if (ones == 0)
        throw std::invalid_argument("zero denominator in relative variation");
    return static_cast<double>(diff) / static_cast<double>(ones);
}

}  // namespace cvxseg
