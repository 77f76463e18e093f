#pragma once

#include <limits>
#include <vector>

#include "cvxseg/field.hpp"

namespace cvxseg {

namespace detail {

// 1D squared-distance transform (lower envelope of parabolas).
inline void dt_1d(const std::vector<double>& f, std::vector<double>& d,
                  std::vector<int>& v, std::vector<double>& z, int n) {
    int k = 0;
    v[0] = 0;
    z[0] = -std::numeric_limits<double>::infinity();
    z[1] = std::numeric_limits<double>::infinity();
    for (int q = 1; q < n; ++q) {
        double s = ((f[q] + q * q) - (f[v[k]] + v[k] * v[k])) / (2.0 * q - 2.0 * v[k]);
        while (s <= z[k]) {
            --k;
            s = ((f[q] + q * q) - (f[v[k]] + v[k] * v[k])) / (2.0 * q - 2.0 * v[k]);
        }
        ++k;
        v[k] = q;
        z[k] = s;
        z[k + 1] = std::numeric_limits<double>::infinity();
    }
    k = 0;
    for (int q = 0; q < n; ++q) {
        while (z[k + 1] < q) ++k;
        d[q] = (q - v[k]) * double(q - v[k]) + f[v[k]];
    }
}

}  // namespace detail

/// Exact squared Euclidean distance to the nearest object pixel {u = 0}.
/// Pixels of an empty object read +inf.
inline ScalarField squared_distance_transform(const BinaryField& u) {
    const int w = u.width(), h = u.height();
    // Finite sentinel: the parabola intersections in dt_1d must not produce
    // inf - inf.
    const double far = 1e18;
    ScalarField dist(w, h);
    for (std::size_t i = 0; i < u.size(); ++i)
        dist[i] = (u[i] == 0) ? 0.0 : far;

    const int n = std::max(w, h);
    std::vector<double> f(n), d(n), z(n + 1);
    std::vector<int> v(n);

    for (int x = 0; x < w; ++x) {  // columns
        for (int y = 0; y < h; ++y) f[y] = dist.at(x, y);
        detail::dt_1d(f, d, v, z, h);
        for (int y = 0; y < h; ++y) dist.at(x, y) = d[y];
    }
    for (int y = 0; y < h; ++y) {  // rows
        for (int x = 0; x < w; ++x) f[x] = dist.at(x, y);
        detail::dt_1d(f, d, v, z, w);
        for (int x = 0; x < w; ++x) dist.at(x, y) = d[x];
    }
    for (double& v2 : dist.values())
        if (v2 >= 0.5 * far) v2 = std::numeric_limits<double>::infinity();
    return dist;
}

/// Pixels whose Euclidean distance to the nearest object pixel strictly
/// exceeds s.
inline PixelSet distance_beyond(const BinaryField& object_mask, double s) {
    if (object_mask.count(0) == 0)
        throw std::invalid_argument("empty object region");
    if (s < 0)
        throw std::invalid_argument("distance margin must be nonnegative");
    ScalarField d2 = squared_distance_transform(object_mask);
    const double s2 = s * s;
    PixelSet out;
    for (int y = 0; y < object_mask.height(); ++y)
        for (int x = 0; x < object_mask.width(); ++x)
            if (d2.at(x, y) > s2) out.push_back({x, y});
    return out;
}

}  // namespace cvxseg
