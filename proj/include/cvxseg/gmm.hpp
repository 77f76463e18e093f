#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "cvxseg/image.hpp"

namespace cvxseg {

namespace detail {

using Mat3 = std::array<double, 9>;  // row-major, top-left dims x dims in use

inline double det_sym(const Mat3& m, int dims) {
    if (dims == 1) return m[0];
    return m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
           m[2] * (m[3] * m[7] - m[4] * m[6]);
}

inline Mat3 invert_sym(const Mat3& m, int dims) {
    Mat3 inv{};
    if (dims == 1) {
        inv[0] = 1.0 / m[0];
        return inv;
    }
    const double d = det_sym(m, 3);
    inv[0] = (m[4] * m[8] - m[5] * m[7]) / d;
    inv[1] = (m[2] * m[7] - m[1] * m[8]) / d;
    inv[2] = (m[1] * m[5] - m[2] * m[4]) / d;
    inv[3] = inv[1];
    inv[4] = (m[0] * m[8] - m[2] * m[6]) / d;
    inv[5] = (m[2] * m[3] - m[0] * m[5]) / d;
    inv[6] = inv[2];
    inv[7] = inv[5];
    inv[8] = (m[0] * m[4] - m[1] * m[3]) / d;
    return inv;
}

// Smallest eigenvalue of a symmetric matrix (trigonometric formula for 3x3).
inline double min_eigenvalue_sym(const Mat3& a, int dims) {
    if (dims == 1) return a[0];
    const double p1 = a[1] * a[1] + a[2] * a[2] + a[5] * a[5];
    const double q = (a[0] + a[4] + a[8]) / 3.0;
    if (p1 == 0.0) return std::min({a[0], a[4], a[8]});
    const double p2 = (a[0] - q) * (a[0] - q) + (a[4] - q) * (a[4] - q) +
                      (a[8] - q) * (a[8] - q) + 2.0 * p1;
    const double p = std::sqrt(p2 / 6.0);
    Mat3 b{};
    for (int i = 0; i < 9; ++i) b[i] = a[i] / p;
    b[0] -= q / p;
    b[4] -= q / p;
    b[8] -= q / p;
    double r = det_sym(b, 3) / 2.0;
    r = std::clamp(r, -1.0, 1.0);
    const double phi = std::acos(r) / 3.0;
    return q + 2.0 * p * std::cos(phi + 2.0 * std::numbers::pi / 3.0);
}

inline double sq_dist(const Color& a, const Color& b, int dims) {
    double s = 0.0;
    for (int i = 0; i < dims; ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return s;
}

}  // namespace detail

struct GmmComponent {
    double weight = 0.0;
    Color mean{0.0, 0.0, 0.0};
    detail::Mat3 cov{};
    detail::Mat3 inv_cov{};
    double norm = 0.0;  // (2 pi)^(-p/2) det^(-1/2)

    void finalize(int dims) {
        inv_cov = detail::invert_sym(cov, dims);
        const double det = detail::det_sym(cov, dims);
        norm = std::pow(2.0 * std::numbers::pi, -0.5 * dims) / std::sqrt(det);
    }

    double density(const Color& c, int dims) const {
        double q = 0.0;
        for (int i = 0; i < dims; ++i)
            for (int j = 0; j < dims; ++j)
                q += (c[i] - mean[i]) * inv_cov[i * 3 + j] * (c[j] - mean[j]);
        return norm * std::exp(-0.5 * q);
    }
};

/// Gaussian mixture over 1- or 3-channel colors. Weights sum to 1 and every
/// covariance has eigenvalues at or above the regularization floor.
struct Gmm {
    int dims = 1;
    double covariance_floor = 0.0;
    std::vector<GmmComponent> components;

    double density(const Color& c) const {
        double s = 0.0;
        for (const auto& comp : components) s += comp.weight * comp.density(c, dims);
        return s;
    }
};

inline double gmm_density(const Gmm& model, const Color& c) { return model.density(c); }

namespace detail {

inline std::vector<int> kmeans_pp(const std::vector<Color>& samples, int dims, int k,
                                  std::mt19937_64& rng) {
    const std::size_t n = samples.size();
    std::vector<Color> centers;
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    centers.push_back(samples[static_cast<std::size_t>(uni(rng) * n) % n]);
    std::vector<double> d2(n);
    while (static_cast<int>(centers.size()) < k) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double best = sq_dist(samples[i], centers[0], dims);
            for (std::size_t c = 1; c < centers.size(); ++c)
                best = std::min(best, sq_dist(samples[i], centers[c], dims));
            d2[i] = best;
            total += best;
        }
        if (total <= 0.0) {  // all samples coincide with a center
            centers.push_back(samples[static_cast<std::size_t>(uni(rng) * n) % n]);
            continue;
        }
        double target = uni(rng) * total, acc = 0.0;
        std::size_t pick = n - 1;
        for (std::size_t i = 0; i < n; ++i) {
            acc += d2[i];
            if (acc >= target) { pick = i; break; }
        }
        centers.push_back(samples[pick]);
    }

    // Lloyd iterations until assignments stabilize.
    std::vector<int> assign(n, 0), prev(n, -1);
    for (int iter = 0; iter < 50 && assign != prev; ++iter) {
        prev = assign;
        for (std::size_t i = 0; i < n; ++i) {
            int best = 0;
            double bd = sq_dist(samples[i], centers[0], dims);
            for (int c = 1; c < k; ++c) {
                double d = sq_dist(samples[i], centers[c], dims);
                if (d < bd) { bd = d; best = c; }
            }
            assign[i] = best;
        }
        std::vector<Color> sum(k, Color{0, 0, 0});
        std::vector<std::size_t> cnt(k, 0);
        for (std::size_t i = 0; i < n; ++i) {
            for (int d = 0; d < dims; ++d) sum[assign[i]][d] += samples[i][d];
            ++cnt[assign[i]];
        }
        for (int c = 0; c < k; ++c) {
            if (cnt[c] == 0) continue;  // dead cluster keeps its center
            for (int d = 0; d < dims; ++d) centers[c][d] = sum[c][d] / cnt[c];
        }
    }
    return assign;
}

inline void clamp_covariance(Mat3& cov, int dims, double floor) {
    const double lo = min_eigenvalue_sym(cov, dims);
    if (lo >= floor) return;
    const double bump = floor - lo;
    for (int i = 0; i < dims; ++i) cov[i * 3 + i] += bump;
}

}  // namespace detail

/// EM fit with k-means++ initialization. Stops when the log-likelihood gain
/// drops below 1e-6 or after 100 iterations. Covariances are floored at
/// 1e-4 * (data variance + 1e-8). loglik_trace, when given, receives the
/// per-iteration log-likelihood (non-decreasing while the floor is inactive).
inline Gmm fit_gmm(const std::vector<Color>& samples, int dims, int k,
                   std::mt19937_64& rng, std::vector<double>* loglik_trace = nullptr) {
    if (k < 1) throw std::invalid_argument("component count must be positive");
    if (dims != 1 && dims != 3) throw std::invalid_argument("dims must be 1 or 3");
    const std::size_t n = samples.size();
    if (n < static_cast<std::size_t>(10 * k))
        throw std::invalid_argument("insufficient samples for K components");

    double var = 0.0;
    {
        Color mean{0, 0, 0};
        for (const auto& s : samples)
            for (int d = 0; d < dims; ++d) mean[d] += s[d];
        for (int d = 0; d < dims; ++d) mean[d] /= n;
        for (const auto& s : samples)
            for (int d = 0; d < dims; ++d) var += (s[d] - mean[d]) * (s[d] - mean[d]);
        var /= (n * dims);
    }
    const double floor = 1e-4 * (var + 1e-8);

    Gmm model;
    model.dims = dims;
    model.covariance_floor = floor;
    model.components.resize(k);

    // Initial parameters from the hard k-means assignment.
    std::vector<int> assign = detail::kmeans_pp(samples, dims, k, rng);
    {
        std::vector<std::size_t> cnt(k, 0);
        for (int a : assign) ++cnt[a];
        for (int c = 0; c < k; ++c) {
            auto& comp = model.components[c];
            comp.weight = std::max(1.0, static_cast<double>(cnt[c])) / n;
            if (cnt[c] > 0) {
                for (std::size_t i = 0; i < n; ++i)
                    if (assign[i] == c)
                        for (int d = 0; d < dims; ++d) comp.mean[d] += samples[i][d];
                for (int d = 0; d < dims; ++d) comp.mean[d] /= cnt[c];
                for (std::size_t i = 0; i < n; ++i)
                    if (assign[i] == c)
                        for (int a = 0; a < dims; ++a)
                            for (int b = 0; b < dims; ++b)
                                comp.cov[a * 3 + b] += (samples[i][a] - comp.mean[a]) *
                                                       (samples[i][b] - comp.mean[b]);
                for (int d = 0; d < 9; ++d) comp.cov[d] /= cnt[c];
            }
            detail::clamp_covariance(comp.cov, dims, floor);
            comp.finalize(dims);
        }
        double wsum = 0.0;
        for (auto& comp : model.components) wsum += comp.weight;
        for (auto& comp : model.components) comp.weight /= wsum;
    }

    std::vector<double> resp(n * k);
    double prev_ll = -std::numeric_limits<double>::infinity();
    for (int iter = 0; iter < 100; ++iter) {
        // E step, with the log-likelihood of the current parameters.
        long double ll = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double total = 0.0;
            for (int c = 0; c < k; ++c) {
                double p = model.components[c].weight *
                           model.components[c].density(samples[i], dims);
                resp[i * k + c] = p;
                total += p;
            }
            if (total > 0.0) {
                for (int c = 0; c < k; ++c) resp[i * k + c] /= total;
                ll += std::log(total);
            } else {
                for (int c = 0; c < k; ++c) resp[i * k + c] = 1.0 / k;
                ll += std::log(std::numeric_limits<double>::min());
            }
        }
        if (loglik_trace) loglik_trace->push_back(static_cast<double>(ll));

        // M step.
        for (int c = 0; c < k; ++c) {
            auto& comp = model.components[c];
            double rsum = 0.0;
            for (std::size_t i = 0; i < n; ++i) rsum += resp[i * k + c];
            comp.weight = rsum / n;
            if (rsum < 1e-12) { comp.finalize(dims); continue; }  // dead component
            Color mean{0, 0, 0};
            for (std::size_t i = 0; i < n; ++i)
                for (int d = 0; d < dims; ++d) mean[d] += resp[i * k + c] * samples[i][d];
            for (int d = 0; d < dims; ++d) mean[d] /= rsum;
            detail::Mat3 cov{};
            for (std::size_t i = 0; i < n; ++i)
                for (int a = 0; a < dims; ++a)
                    for (int b = 0; b < dims; ++b)
                        cov[a * 3 + b] += resp[i * k + c] * (samples[i][a] - mean[a]) *
                                          (samples[i][b] - mean[b]);
            for (int d = 0; d < 9; ++d) cov[d] /= rsum;
            detail::clamp_covariance(cov, dims, floor);
            comp.mean = mean;
            comp.cov = cov;
            comp.finalize(dims);
        }
        double wsum = 0.0;
        for (auto& comp : model.components) wsum += comp.weight;
        for (auto& comp : model.components) comp.weight /= wsum;

        if (static_cast<double>(ll) - prev_ll < 1e-6 && iter > 0) break;
        prev_ll = static_cast<double>(ll);
    }
    return model;
}

}  // namespace cvxseg
