#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "cvxseg/field.hpp"

namespace cvxseg {

/// Simple polygon, vertices in counterclockwise order (positive signed area
/// in (x, y) coordinates). Degenerate inputs yield a point or a segment.
struct Polygon {
    std::vector<std::array<double, 2>> vertices;

    double signed_area() const {
        double a = 0.0;
        const std::size_t n = vertices.size();
        for (std::size_t i = 0; i < n; ++i) {
            const auto& p = vertices[i];
            const auto& q = vertices[(i + 1) % n];
            a += p[0] * q[1] - q[0] * p[1];
        }
        return 0.5 * a;
    }
};

namespace detail {

inline long long cross(const Pixel& o, const Pixel& a, const Pixel& b) {
    return static_cast<long long>(a.x - o.x) * (b.y - o.y) -
           static_cast<long long>(a.y - o.y) * (b.x - o.x);
}

}  // namespace detail

/// Monotone-chain convex hull; collinear interior points dropped.
inline Polygon convex_hull(const PixelSet& points) {
    if (points.empty()) throw std::invalid_argument("no object labels");
    PixelSet pts = points;
    std::sort(pts.begin(), pts.end(),
              [](const Pixel& a, const Pixel& b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    Polygon poly;
    if (pts.size() == 1) {
        poly.vertices.push_back({double(pts[0].x), double(pts[0].y)});
        return poly;
    }

    const std::size_t n = pts.size();
    PixelSet chain(2 * n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {  // lower
        while (k >= 2 && detail::cross(chain[k - 2], chain[k - 1], pts[i]) <= 0) --k;
        chain[k++] = pts[i];
    }
    for (std::size_t i = n - 1, t = k + 1; i-- > 0;) {  // upper
        while (k >= t && detail::cross(chain[k - 2], chain[k - 1], pts[i]) <= 0) --k;
        chain[k++] = pts[i];
    }
    chain.resize(k - 1);  // last point repeats the first

    // Collinear inputs collapse to the two extreme points (a segment).
    for (const Pixel& p : chain)
        poly.vertices.push_back({double(p.x), double(p.y)});
    return poly;
}

namespace detail {

// Inclusive horizontal span [xmin, xmax] of a convex polygon on line Y = y,
// or false when the line misses the polygon.
inline bool convex_row_span(const Polygon& poly, double y, double& xmin, double& xmax) {
    bool any = false;
    xmin = std::numeric_limits<double>::infinity();
    xmax = -xmin;
    const std::size_t n = poly.vertices.size();
    for (std::size_t i = 0; i < n; ++i) {
        const auto& a = poly.vertices[i];
        const auto& b = poly.vertices[(i + 1) % n];
        const double ylo = std::min(a[1], b[1]), yhi = std::max(a[1], b[1]);
        if (y < ylo || y > yhi) continue;
        any = true;
        if (a[1] == b[1]) {
            xmin = std::min({xmin, a[0], b[0]});
            xmax = std::max({xmax, a[0], b[0]});
        } else {
            double t = (y - a[1]) / (b[1] - a[1]);
            double x = a[0] + t * (b[0] - a[0]);
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
        }
    }
    return any;
}

}  // namespace detail

/// Rasterize a convex polygon: a pixel is object (value 0) iff its center
/// lies inside or on the polygon. Intersections within 1e-9 of a lattice
/// coordinate snap to it, so hulls of lattice points rasterize exactly.
inline BinaryField rasterize_hull(const Polygon& poly, int width, int height) {
    BinaryField out(width, height, 1);
    if (poly.vertices.empty()) return out;

    constexpr double snap = 1e-9;
    if (poly.vertices.size() == 1) {
        int x = static_cast<int>(std::llround(poly.vertices[0][0]));
        int y = static_cast<int>(std::llround(poly.vertices[0][1]));
        if (out.in_bounds(x, y)) out.at(x, y) = 0;
        return out;
    }
    if (poly.vertices.size() == 2) {
        // Lattice segment walk (degenerate hulls come from lattice points).
        int x0 = static_cast<int>(std::llround(poly.vertices[0][0]));
        int y0 = static_cast<int>(std::llround(poly.vertices[0][1]));
        int x1 = static_cast<int>(std::llround(poly.vertices[1][0]));
        int y1 = static_cast<int>(std::llround(poly.vertices[1][1]));
        int g = std::gcd(std::abs(x1 - x0), std::abs(y1 - y0));
        if (g == 0) g = 1;
        for (int i = 0; i <= g; ++i) {
            int x = x0 + (x1 - x0) / g * i;
            int y = y0 + (y1 - y0) / g * i;
            if (out.in_bounds(x, y)) out.at(x, y) = 0;
        }
        return out;
    }

    double ymin = std::numeric_limits<double>::infinity(), ymax = -ymin;
    for (const auto& v : poly.vertices) {
        ymin = std::min(ymin, v[1]);
        ymax = std::max(ymax, v[1]);
    }
    const int y0 = std::max(0, static_cast<int>(std::ceil(ymin - snap)));
    const int y1 = std::min(height - 1, static_cast<int>(std::floor(ymax + snap)));
    for (int y = y0; y <= y1; ++y) {
        double xa, xb;
        if (!detail::convex_row_span(poly, y, xa, xb)) continue;
        const int xs = std::max(0, static_cast<int>(std::ceil(xa - snap)));
        const int xe = std::min(width - 1, static_cast<int>(std::floor(xb + snap)));
        for (int x = xs; x <= xe; ++x) out.at(x, y) = 0;
    }
    return out;
}

}  // namespace cvxseg
