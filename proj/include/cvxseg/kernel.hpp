#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace cvxseg {

enum class KernelKind { disc, gaussian, counting };

/// Finitely supported stencil of weights on a (2k+1) x (2k+1) window.
struct Kernel {
    KernelKind kind = KernelKind::disc;
    int half = 0;       // stencil half-width k
    double radius = 0;  // support radius for disc/counting kinds
    int support = 0;    // number of nonzero offsets
    std::vector<double> weights;

    int width() const { return 2 * half + 1; }
    double weight(int dx, int dy) const {
        return weights[static_cast<std::size_t>(dy + half) * width() + (dx + half)];
    }
    double& weight(int dx, int dy) {
        return weights[static_cast<std::size_t>(dy + half) * width() + (dx + half)];
    }
};

/// Uniform weights 1/N on the lattice disc dx^2+dy^2 <= r^2 (N = lattice
/// count), so the weights sum to 1 exactly.
inline Kernel make_disc_kernel(double r) {
    if (r < 1.0) throw std::invalid_argument("radius below mesh size");
    Kernel k;
    k.kind = KernelKind::disc;
    k.half = static_cast<int>(std::ceil(r));
    k.radius = r;
    k.weights.assign(static_cast<std::size_t>(k.width()) * k.width(), 0.0);
    int count = 0;
    for (int dy = -k.half; dy <= k.half; ++dy)
        for (int dx = -k.half; dx <= k.half; ++dx)
            if (dx * dx + dy * dy <= r * r) ++count;
    k.support = count;
    const double w = 1.0 / count;
    for (int dy = -k.half; dy <= k.half; ++dy)
        for (int dx = -k.half; dx <= k.half; ++dx)
            if (dx * dx + dy * dy <= r * r) k.weight(dx, dy) = w;
    return k;
}

/// Same support as the disc kernel but with unit weights; convolving a binary
/// field counts disc pixels.
inline Kernel make_counting_kernel(double r) {
    Kernel k = make_disc_kernel(r);
    k.kind = KernelKind::counting;
    for (double& w : k.weights)
        if (w != 0.0) w = 1.0;
    return k;
}

/// Sampled Gaussian exp(-(dx^2+dy^2)/(2 sigma^2)) on a size x size stencil,
/// normalized to sum 1. sigma is the standard deviation.
inline Kernel make_gaussian_kernel(int size, double sigma) {
    if (size < 3 || size % 2 == 0)
        throw std::invalid_argument("gaussian kernel size must be odd and >= 3");
    if (sigma <= 0) throw std::invalid_argument("gaussian sigma must be positive");
    Kernel k;
    k.kind = KernelKind::gaussian;
    k.half = size / 2;
    k.weights.assign(static_cast<std::size_t>(size) * size, 0.0);
    double sum = 0.0;
    for (int dy = -k.half; dy <= k.half; ++dy)
        for (int dx = -k.half; dx <= k.half; ++dx) {
            double w = std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
            k.weight(dx, dy) = w;
            sum += w;
        }
    for (double& w : k.weights) w /= sum;
    k.support = size * size;
    return k;
}

}  // namespace cvxseg
