#pragma once

#include <array>
#include <stdexcept>
#include <vector>

namespace cvxseg {

using Color = std::array<double, 3>;

/// 8-bit-range raster, 1 (gray) or 3 (RGB) channels, values in [0, 255],
/// interleaved row-major.
struct Image {
    int width = 0;
    int height = 0;
    int channels = 1;
    std::vector<double> data;

    Image() = default;
    Image(int w, int h, int c, double fill = 0.0)
        : width(w), height(h), channels(c),
          data(static_cast<std::size_t>(w) * h * c, fill) {
        if (w < 1 || h < 1 || (c != 1 && c != 3))
            throw std::invalid_argument("image must have positive size and 1 or 3 channels");
    }

    double& at(int x, int y, int c = 0) {
        return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }
    double at(int x, int y, int c = 0) const {
        return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }

    Color pixel(int x, int y) const {
        Color c{0.0, 0.0, 0.0};
        for (int i = 0; i < channels; ++i) c[i] = at(x, y, i);
        return c;
    }
};

}  // namespace cvxseg
