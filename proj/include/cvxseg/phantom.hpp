#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

#include "cvxseg/field.hpp"
#include "cvxseg/hull.hpp"
#include "cvxseg/image.hpp"

namespace cvxseg {

/// Synthetic two-tone test scene: a shape at fg_intensity on a bg_intensity
/// canvas with optional Gaussian noise, plus seed labels and ground truth.
struct PhantomSpec {
    std::string shape = "disc";  // disc | rectangle | l-shape | random-convex-polygon
    int width = 64;
    int height = 64;
    double fg_intensity = 200.0;
    double bg_intensity = 50.0;
    double noise_std = 0.0;
    std::uint64_t seed = 0;
    double disc_radius = 15.0;  // also scales the other shapes
};

struct Phantom {
    Image image;        // grayscale, quantized to 8-bit values
    BinaryField truth;  // 0 = object
    PixelSet fg_labels;
    PixelSet bg_labels;
    Pixel fg_center;    // where the object seed blob sits
};

namespace detail {

inline void stamp_disc(BinaryField& mask, double cx, double cy, double r) {
    for (int y = 0; y < mask.height(); ++y)
        for (int x = 0; x < mask.width(); ++x)
            if ((x - cx) * (x - cx) + (y - cy) * (y - cy) <= r * r) mask.at(x, y) = 0;
}

inline void stamp_rect(BinaryField& mask, int x0, int y0, int x1, int y1) {
    for (int y = y0; y <= y1; ++y)
        for (int x = x0; x <= x1; ++x)
            if (mask.in_bounds(x, y)) mask.at(x, y) = 0;
}

}  // namespace detail

inline Phantom gen_phantom(const PhantomSpec& spec) {
    if (spec.width < 16 || spec.height < 16)
        throw std::invalid_argument("phantom canvas too small");
    const int w = spec.width, h = spec.height;
    const double cx = (w - 1) / 2.0, cy = (h - 1) / 2.0;
    std::mt19937_64 rng(spec.seed);

    Phantom out;
    out.truth = BinaryField(w, h, 1);
    out.fg_center = {static_cast<int>(cx), static_cast<int>(cy)};

    if (spec.shape == "disc") {
        if (2 * spec.disc_radius + 4 > std::min(w, h))
            throw std::invalid_argument("shape larger than canvas");
        detail::stamp_disc(out.truth, cx, cy, spec.disc_radius);
    } else if (spec.shape == "rectangle") {
        const int rx = static_cast<int>(spec.disc_radius);
        const int ry = static_cast<int>(0.75 * spec.disc_radius);
        if (2 * rx + 4 > w || 2 * ry + 4 > h)
            throw std::invalid_argument("shape larger than canvas");
        detail::stamp_rect(out.truth, static_cast<int>(cx) - rx, static_cast<int>(cy) - ry,
                           static_cast<int>(cx) + rx, static_cast<int>(cy) + ry);
    } else if (spec.shape == "l-shape") {
        // Square of side ~2.6 r minus its top-right quadrant.
        const int side = static_cast<int>(2.6 * spec.disc_radius);
        const int x0 = static_cast<int>(cx) - side / 2, y0 = static_cast<int>(cy) - side / 2;
        const int x1 = x0 + side - 1, y1 = y0 + side - 1;
        const int xm = x0 + side / 2, ym = y0 + side / 2;
        if (x0 < 2 || y0 < 2 || x1 > w - 3 || y1 > h - 3)
            throw std::invalid_argument("shape larger than canvas");
        detail::stamp_rect(out.truth, x0, y0, x1, ym - 1);       // lower block
        detail::stamp_rect(out.truth, x0, ym, xm - 1, y1);       // left arm
        out.fg_center = {x0 + side / 4, y0 + side / 4};
    } else if (spec.shape == "random-convex-polygon") {
        std::uniform_real_distribution<double> uni(0.0, 1.0);
        const double rmax = std::min(w, h) / 2.0 - 4.0;
        const double rmin = std::max(6.0, rmax / 2.5);
        PixelSet pts;
        const int npts = 6 + static_cast<int>(uni(rng) * 7);
        for (int i = 0; i < npts; ++i) {
            double ang = uni(rng) * 2.0 * std::numbers::pi;
            double rad = rmin + uni(rng) * (rmax - rmin);
            pts.push_back({static_cast<int>(cx + rad * std::cos(ang)),
                           static_cast<int>(cy + rad * std::sin(ang))});
        }
        out.truth = rasterize_hull(convex_hull(pts), w, h);
    } else {
        throw std::invalid_argument("unknown phantom shape '" + spec.shape + "'");
    }

    // Image: two tones plus seeded noise, quantized like the files we write.
    out.image = Image(w, h, 1);
    std::normal_distribution<double> noise(0.0, 1.0);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double v = out.truth.at(x, y) == 0 ? spec.fg_intensity : spec.bg_intensity;
            if (spec.noise_std > 0) v += spec.noise_std * noise(rng);
            v = std::clamp(v, 0.0, 255.0);
            out.image.at(x, y) = std::floor(v + 0.5);
        }

    // Seeds: a small blob inside the object, a two-pixel frame outside it.
    for (int dy = -3; dy <= 3; ++dy)
        for (int dx = -3; dx <= 3; ++dx) {
            int x = out.fg_center.x + dx, y = out.fg_center.y + dy;
            if (dx * dx + dy * dy <= 9 && out.truth.in_bounds(x, y) &&
                out.truth.at(x, y) == 0)
                out.fg_labels.push_back({x, y});
        }
    if (out.fg_labels.empty())
        throw std::invalid_argument("phantom seed blob missed the object");
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            if ((x < 2 || y < 2 || x >= w - 2 || y >= h - 2) && out.truth.at(x, y) == 1)
                out.bg_labels.push_back({x, y});
    return out;
}

/// 0/255 raster of a label set, the format load_labels expects back.
inline Image label_mask_image(const PixelSet& labels, int width, int height) {
    Image img(width, height, 1, 0.0);
    for (const Pixel& p : labels) img.at(p.x, p.y) = 255.0;
    return img;
}

}  // namespace cvxseg
