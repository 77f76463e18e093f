#pragma once

#include <limits>
#include <span>
#include <stdexcept>

#include "cvxseg/convolve.hpp"
#include "cvxseg/field.hpp"
#include "cvxseg/hull.hpp"
#include "cvxseg/kernel.hpp"

namespace cvxseg {

/// Which field feeds the disc convolutions: the plain {0,1} indicator or the
/// view with 0.5 on the object perimeter. The indicator prefactor is always
/// strict binary, so object pixels read exactly 0 either way.
enum class BoundaryView { strict, ternary };

/// Pointwise convexity residual u (b_r*u) - u/2 for one disc radius.
/// Nonnegative everywhere iff the object is convex (up to lattice slack).
struct ConstraintField {
    double radius = 0;
    ScalarField values;

    double min() const {
        double m = std::numeric_limits<double>::infinity();
        for (double v : values.values()) m = std::min(m, v);
        return m;
    }
};

/// Residual from an already computed disc convolution of u.
inline ConstraintField constraint_from_convolution(const BinaryField& u,
                                                   const ScalarField& disc_conv_u,
                                                   double radius) {
    ConstraintField c{radius, ScalarField(u.width(), u.height())};
    for (std::size_t i = 0; i < u.size(); ++i)
        c.values[i] = (u[i] == 0) ? 0.0 : disc_conv_u[i] - 0.5;
    return c;
}

inline ConstraintField constraint_field(const BinaryField& u, const Kernel& kernel,
                                        BoundaryView view = BoundaryView::strict) {
    if (kernel.kind != KernelKind::disc)
        throw std::invalid_argument("constraint requires radial kernel");
    ScalarField input = (view == BoundaryView::ternary) ? ternary_view(u) : to_scalar(u);
    ScalarField conv = convolve(input, kernel, PadMode::constant(1.0));
    return constraint_from_convolution(u, conv, kernel.radius);
}

/// Minimum of the residual over all pixels and radii; >= 0 certifies the
/// discrete constraint set.
inline double min_violation(const BinaryField& u, std::span<const double> radii,
                            BoundaryView view = BoundaryView::strict) {
    if (radii.empty()) throw std::invalid_argument("min_violation requires radii");
    double m = std::numeric_limits<double>::infinity();
    for (double r : radii)
        m = std::min(m, constraint_field(u, make_disc_kernel(r), view).min());
    return m;
}

/// Fraction of the radius-r lattice disc at a perimeter pixel that lies in
/// the background. Perimeter pixels count half, pixels beyond the image count
/// as background. At least 0.5 at convex boundary points, up to lattice slack.
inline double half_ball_test(const BinaryField& object_mask, double r, Pixel x) {
    if (!object_mask.in_bounds(x.x, x.y) || !on_perimeter(object_mask, x.x, x.y))
        throw std::invalid_argument("half ball test requires a boundary pixel");
    const int k = static_cast<int>(std::ceil(r));
    long long n = 0;
    double area = 0.0;
    for (int dy = -k; dy <= k; ++dy)
        for (int dx = -k; dx <= k; ++dx) {
            if (dx * dx + dy * dy > r * r) continue;
            ++n;
            const int px = x.x + dx, py = x.y + dy;
            if (!object_mask.in_bounds(px, py) || object_mask.at(px, py) == 1)
                area += 1.0;
            else if (on_perimeter(object_mask, px, py))
                area += 0.5;
        }
    return area / static_cast<double>(n);
}

struct ConvexityCheck {
    bool convex = false;
    double score = 0.0;  // area(raster hull \ object) / area(object)
};

/// Geometric convexity oracle: how much the rasterized convex hull of the
/// object exceeds the object itself.
inline ConvexityCheck is_convex_discrete(const BinaryField& object_mask, double tol = 0.01) {
    PixelSet obj = object_pixels(object_mask);
    if (obj.empty()) throw std::invalid_argument("empty object region");
    Polygon hull = convex_hull(obj);
    BinaryField raster = rasterize_hull(hull, object_mask.width(), object_mask.height());
    std::size_t extra = 0;
    for (std::size_t i = 0; i < raster.size(); ++i)
        extra += (raster[i] == 0 && object_mask[i] == 1);
    ConvexityCheck out;
    out.score = static_cast<double>(extra) / static_cast<double>(obj.size());
    out.convex = out.score <= tol;
    return out;
}

}  // namespace cvxseg
