#pragma once

#include <cmath>
#include <random>
#include <stdexcept>

#include "cvxseg/distance.hpp"
#include "cvxseg/field.hpp"
#include "cvxseg/gmm.hpp"
#include "cvxseg/image.hpp"

namespace cvxseg {

/// Foreground posterior gamma0 G0 / (gamma0 G0 + gamma1 G1). A vanishing
/// denominator yields the uninformative 0.5. The background posterior is
/// defined as 1 - p0, so the pair sums to 1 exactly.
inline double posterior_p0(double g0, double g1, double gamma0, double gamma1) {
    if (gamma0 < 0 || gamma1 < 0 || (gamma0 == 0 && gamma1 == 0))
        throw std::invalid_argument("posterior weights must be nonnegative, not both zero");
    if (g0 < 0 || g1 < 0)
        throw std::invalid_argument("densities must be nonnegative");
    const double den = gamma0 * g0 + gamma1 * g1;
    if (den <= 0.0) return 0.5;
    return gamma0 * g0 / den;
}

/// Pixelwise region force f = w1 f1 - w0 f0 with f_i the clamped negative
/// log posterior. Negative values favor background under the threshold rule.
struct ForceField {
    ScalarField f;
    ScalarField f0;
    ScalarField f1;
    double w0 = 0.5;
    double w1 = 0.5;
    double gamma0 = 1.0;
    double gamma1 = 1.0;
    std::size_t uninformative = 0;  // pixels where both densities vanished
};

inline ForceField build_force(const Image& img, const Gmm& fg_model, const Gmm& bg_model,
                              double w0, double w1, double gamma0, double gamma1,
                              double p_floor = 1e-6) {
    if (p_floor <= 0.0 || p_floor >= 0.5)
        throw std::invalid_argument("probability floor must lie in (0, 0.5)");
    ForceField out;
    out.f = ScalarField(img.width, img.height);
    out.f0 = ScalarField(img.width, img.height);
    out.f1 = ScalarField(img.width, img.height);
    out.w0 = w0;
    out.w1 = w1;
    out.gamma0 = gamma0;
    out.gamma1 = gamma1;
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) {
            const Color c = img.pixel(x, y);
            const double g0 = fg_model.density(c);
            const double g1 = bg_model.density(c);
            if (gamma0 * g0 + gamma1 * g1 <= 0.0) ++out.uninformative;
            const double p0 = posterior_p0(g0, g1, gamma0, gamma1);
            const double p1 = 1.0 - p0;
            out.f0.at(x, y) = -std::log(std::max(p0, p_floor));
            out.f1.at(x, y) = -std::log(std::max(p1, p_floor));
            out.f.at(x, y) = w1 * out.f1.at(x, y) - w0 * out.f0.at(x, y);
        }
    return out;
}

namespace detail {

inline std::vector<Color> gather_colors(const Image& img, const PixelSet& pixels) {
    std::vector<Color> out;
    out.reserve(pixels.size());
    for (const Pixel& p : pixels) out.push_back(img.pixel(p.x, p.y));
    return out;
}

}  // namespace detail

struct ModelPair {
    Gmm fg;
    Gmm bg;
};

/// Initial color models: foreground from the hull interior, background from
/// pixels farther than s from the hull.
inline ModelPair init_models(const Image& img, const BinaryField& hull_mask, double s,
                             int k_fg, int k_bg, std::mt19937_64& rng) {
    if (img.width != hull_mask.width() || img.height != hull_mask.height())
        throw std::invalid_argument("hull mask dimensions do not match image");
    PixelSet fg_pixels = object_pixels(hull_mask);
    if (fg_pixels.empty()) throw std::invalid_argument("no object labels");
    PixelSet bg_pixels = distance_beyond(hull_mask, s);
    if (bg_pixels.empty())
        throw std::invalid_argument(
            "no background pixels beyond margin s; reduce the background margin");
    ModelPair out;
    out.fg = fit_gmm(detail::gather_colors(img, fg_pixels), img.channels, k_fg, rng);
    out.bg = fit_gmm(detail::gather_colors(img, bg_pixels), img.channels, k_bg, rng);
    return out;
}

/// Refit both models from the current object/background partition of u.
inline ModelPair refit_models(const Image& img, const BinaryField& u, int k_fg, int k_bg,
                              std::mt19937_64& rng) {
    PixelSet fg_pixels = object_pixels(u);
    PixelSet bg_pixels;
    for (int y = 0; y < u.height(); ++y)
        for (int x = 0; x < u.width(); ++x)
            if (u.at(x, y) == 1) bg_pixels.push_back({x, y});
    ModelPair out;
    out.fg = fit_gmm(detail::gather_colors(img, fg_pixels), img.channels, k_fg, rng);
    out.bg = fit_gmm(detail::gather_colors(img, bg_pixels), img.channels, k_bg, rng);
    return out;
}

}  // namespace cvxseg
