#pragma once

#include <algorithm>
#include <cassert>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cvxseg/convexity.hpp"
#include "cvxseg/convolve.hpp"
#include "cvxseg/field.hpp"
#include "cvxseg/hull.hpp"
#include "cvxseg/kernel.hpp"
#include "cvxseg/region_force.hpp"

namespace cvxseg {

struct SolverConfig {
    std::vector<double> radii{4.0, 9.0, 14.0, 19.0};
    double lambda = 0.1;   // boundary length weight
    double w0 = 0.5;       // foreground force weight
    double w1 = 0.5;       // background force weight
    double tau = 1.0;      // multiplier ascent step
    double theta = 1.0;    // proximal weight in the threshold rule
    double rho = 2.0;      // band threshold, in counting-kernel units
    double band_radius = 3.0;
    int gaussian_size = 5;
    double gaussian_sigma = 0.5;
    double background_margin = 5.0;  // s: initial background sampling margin
    double tolerance = 1e-3;         // stop when the relative variation drops below
    int max_iterations = 5000;
    int force_refresh_period = 50;
    int variation_period = 300;
    int fg_components = 2;
    int bg_components = 3;
    double gamma0 = 1.0;
    double gamma1 = 1.0;
    double p_floor = 1e-6;
    std::uint64_t seed = 0;
    // The cost's length term is G_sigma*(1-2u); this switch restores the
    // sqrt(pi/sigma) prefactor of the length approximation.
    bool exact_length_gradient = false;
    // Replace the plain b_i*(u + g_i u) constraint term by the exact
    // linearization g_i (b_i*u) + b_i*(g_i u).
    bool exact_constraint_gradient = false;
    PadMode constraint_pad = PadMode::constant(1.0);
    PadMode length_pad = PadMode::replicate();
};

inline SolverConfig validated(SolverConfig cfg) {
    if (!std::is_sorted(cfg.radii.begin(), cfg.radii.end()))
        throw std::invalid_argument("radii must be sorted ascending");
    for (double r : cfg.radii)
        if (r < 1.0) throw std::invalid_argument("radius below mesh size");
    if (cfg.lambda < 0 || cfg.w0 < 0 || cfg.w1 < 0)
        throw std::invalid_argument("weights must be nonnegative");
    if (cfg.tau <= 0) throw std::invalid_argument("multiplier step must be positive");
    if (cfg.theta < 0 || cfg.rho < 0)
        throw std::invalid_argument("theta and rho must be nonnegative");
    if (cfg.band_radius < 1.0) throw std::invalid_argument("radius below mesh size");
    if (cfg.tolerance <= 0) throw std::invalid_argument("tolerance must be positive");
    if (cfg.max_iterations < 0) throw std::invalid_argument("max iterations must be nonnegative");
    if (cfg.force_refresh_period < 1 || cfg.variation_period < 1)
        throw std::invalid_argument("periods must be positive");
    if (cfg.fg_components < 1 || cfg.bg_components < 1)
        throw std::invalid_argument("component counts must be positive");
    return cfg;
}

struct RunReport {
    int iterations = 0;
    std::string stop_reason;  // "tolerance" or "max-iterations"
    std::optional<double> final_rv;
    std::vector<std::pair<double, double>> min_violation_per_radius;  // (radius, min residual)
    double convexity_score = 0.0;
    double wall_seconds = 0.0;
    std::vector<std::pair<int, double>> rv_history;  // (iteration, rv)
};

struct SolverState {
    BinaryField u;
    std::vector<ScalarField> multipliers;  // one nonnegative field per radius
    ForceField force;
    Gmm fg_model;
    Gmm bg_model;
    BinaryField hull_mask;                        // 0 where u is pinned to the object
    std::vector<std::uint8_t> background_labels;  // 1 where u is pinned to background
    std::mt19937_64 rng;
    int iteration = 0;
};

struct IterationStats {
    int t = 0;
    std::optional<double> rv;            // present on variation-period multiples
    std::vector<double> min_constraint;  // per radius, residual driving the multiplier step
    std::size_t band_size = 0;
};

struct IterationTrace {
    const BinaryField& u_prev;
    const BinaryField& u_next;
    const PixelSet& band;
    const std::vector<ScalarField>& multipliers;
};

using SolverObserver = std::function<void(const IterationStats&, const IterationTrace&)>;

namespace detail {

struct SolverWorkspace {
    SolverConfig cfg;
    std::vector<Kernel> disc_kernels;
    std::vector<std::unique_ptr<FftConvolver>> disc_convs;
    Kernel gauss_kernel;
    std::unique_ptr<FftConvolver> gauss_conv;
    Kernel band_kernel;
    std::unique_ptr<FftConvolver> band_conv;

    SolverWorkspace(int width, int height, const SolverConfig& validated_cfg)
        : cfg(validated_cfg),
          gauss_kernel(make_gaussian_kernel(cfg.gaussian_size, cfg.gaussian_sigma)),
          band_kernel(make_counting_kernel(cfg.band_radius)) {
        for (double r : cfg.radii) {
            disc_kernels.push_back(make_disc_kernel(r));
            disc_convs.push_back(
                std::make_unique<FftConvolver>(width, height, disc_kernels.back()));
        }
        gauss_conv = std::make_unique<FftConvolver>(width, height, gauss_kernel);
        band_conv = std::make_unique<FftConvolver>(width, height, band_kernel);
    }

    // b_i * ternary(u) per radius, background padding.
    std::vector<ScalarField> constraint_convolutions(const ScalarField& u_tern) {
        std::vector<ScalarField> out;
        out.reserve(disc_convs.size());
        for (auto& conv : disc_convs) out.push_back(conv->apply(u_tern, cfg.constraint_pad));
        return out;
    }

    PixelSet band(const BinaryField& u) {
        ScalarField counts = band_conv->apply(to_scalar(u), PadMode::replicate());
        const double n = band_kernel.support;
        PixelSet out;
        for (int y = 0; y < u.height(); ++y)
            for (int x = 0; x < u.width(); ++x)
                if (std::abs(counts.at(x, y) - n * u.at(x, y)) >= cfg.rho)
                    out.push_back({x, y});
        return out;
    }

    // Linearized cost: sum_i [0.5 g_i - b_i*(u + g_i u)] + f + lambda G*(1-2u),
    // with the ternary view inside every disc convolution.
    ScalarField cost(const BinaryField& u, const ScalarField& u_tern,
                     const std::vector<ScalarField>& disc_conv_u,
                     const std::vector<ScalarField>& multipliers, const ScalarField& f) {
        const int w = u.width(), h = u.height();
        ScalarField out(w, h);

        ScalarField one_minus_2u(w, h);
        for (std::size_t i = 0; i < u.size(); ++i) one_minus_2u[i] = 1.0 - 2.0 * u[i];
        ScalarField length_term = gauss_conv->apply(one_minus_2u, cfg.length_pad);
        const double length_scale =
            cfg.exact_length_gradient ? std::sqrt(std::numbers::pi / cfg.gaussian_sigma) : 1.0;

        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] = f[i] + cfg.lambda * length_scale * length_term[i];

        ScalarField gu(w, h);
        for (std::size_t r = 0; r < disc_convs.size(); ++r) {
            const ScalarField& g = multipliers[r];
            for (std::size_t i = 0; i < gu.size(); ++i) gu[i] = g[i] * u_tern[i];
            ScalarField conv_gu = disc_convs[r]->apply(gu, PadMode::constant(0.0));
            if (cfg.exact_constraint_gradient) {
                for (std::size_t i = 0; i < out.size(); ++i)
                    out[i] += 0.5 * g[i] - g[i] * disc_conv_u[r][i] - conv_gu[i];
            } else {
                for (std::size_t i = 0; i < out.size(); ++i)
                    out[i] += 0.5 * g[i] - disc_conv_u[r][i] - conv_gu[i];
            }
        }
        return out;
    }
};

}  // namespace detail

/// Pixels where the counting-kernel statistic |k*u - N u| reaches rho: the
/// narrow band around the current object boundary.
inline PixelSet narrow_band(const BinaryField& u, double band_radius, double rho) {
    SolverConfig cfg;
    cfg.radii.clear();
    cfg.band_radius = band_radius;
    cfg.rho = rho;
    detail::SolverWorkspace ws(u.width(), u.height(), validated(cfg));
    return ws.band(u);
}

/// Pointwise linearized cost of the Lagrangian at (u, multipliers).
inline ScalarField linearized_cost(const BinaryField& u,
                                   const std::vector<ScalarField>& multipliers,
                                   const ScalarField& f, const SolverConfig& cfg) {
    if (multipliers.size() != cfg.radii.size())
        throw std::invalid_argument("one multiplier field per radius required");
    detail::SolverWorkspace ws(u.width(), u.height(), validated(cfg));
    ScalarField u_tern = ternary_view(u);
    return ws.cost(u, u_tern, ws.constraint_convolutions(u_tern), multipliers, f);
}

/// Threshold update on the band with label projection. Pixels outside the
/// band are unchanged; ties (cost exactly zero) go to background.
inline BinaryField update_u(const BinaryField& u, const PixelSet& band,
                            const ScalarField& cost, double theta,
                            const BinaryField& hull_mask,
                            const std::vector<std::uint8_t>& background_labels) {
    BinaryField out = u;
    for (const Pixel& p : band) {
        std::uint8_t value =
            (cost.at(p.x, p.y) + theta * (0.5 - u.at(p.x, p.y)) <= 0.0) ? 1 : 0;
        if (hull_mask.at(p.x, p.y) == 0)
            value = 0;
        else if (background_labels[hull_mask.index(p.x, p.y)])
            value = 1;
        out.at(p.x, p.y) = value;
    }
    return out;
}

/// Projected gradient-ascent step g <- max(0, g - tau C) per radius.
inline void update_multipliers(std::vector<ScalarField>& multipliers,
                               const std::vector<ConstraintField>& constraints, double tau) {
    if (tau <= 0) throw std::invalid_argument("multiplier step must be positive");
    if (multipliers.size() != constraints.size())
        throw std::invalid_argument("one multiplier field per constraint required");
    for (std::size_t r = 0; r < multipliers.size(); ++r)
        for (std::size_t i = 0; i < multipliers[r].size(); ++i)
            multipliers[r][i] =
                std::max(0.0, multipliers[r][i] - tau * constraints[r].values[i]);
}

/// Initial state: u = indicator of the rasterized hull of the object labels,
/// zero multipliers, force from the initial color models. Background labels
/// inside the hull are discarded.
inline SolverState initialize(const Image& img, const PixelSet& object_labels,
                              const PixelSet& background_labels, const SolverConfig& cfg_in) {
    const SolverConfig cfg = validated(cfg_in);
    for (const Pixel& p : object_labels)
        if (p.x < 0 || p.x >= img.width || p.y < 0 || p.y >= img.height)
            throw std::invalid_argument("object label outside image");
    for (const Pixel& p : background_labels)
        if (p.x < 0 || p.x >= img.width || p.y < 0 || p.y >= img.height)
            throw std::invalid_argument("background label outside image");

    SolverState st;
    st.hull_mask = rasterize_hull(convex_hull(object_labels), img.width, img.height);
    st.u = st.hull_mask;
    st.background_labels.assign(st.u.size(), 0);
    for (const Pixel& p : background_labels)
        if (st.hull_mask.at(p.x, p.y) == 1)
            st.background_labels[st.hull_mask.index(p.x, p.y)] = 1;
    st.multipliers.assign(cfg.radii.size(), ScalarField(img.width, img.height, 0.0));
    st.rng.seed(cfg.seed);
    ModelPair models = init_models(img, st.hull_mask, cfg.background_margin,
                                   cfg.fg_components, cfg.bg_components, st.rng);
    st.fg_model = std::move(models.fg);
    st.bg_model = std::move(models.bg);
    st.force = build_force(img, st.fg_model, st.bg_model, cfg.w0, cfg.w1, cfg.gamma0,
                           cfg.gamma1, cfg.p_floor);
    return st;
}

struct RunResult {
    BinaryField u;
    RunReport report;
};

/// Full iteration: band, linearized threshold update, multiplier ascent,
/// periodic force refresh and relative-variation stopping test.
inline RunResult segment(const Image& img, const PixelSet& object_labels,
                         const PixelSet& background_labels, const SolverConfig& cfg_in,
                         const SolverObserver& observer = {}) {
    const auto t_start = std::chrono::steady_clock::now();
    const SolverConfig cfg = validated(cfg_in);
    SolverState st = initialize(img, object_labels, background_labels, cfg);
    detail::SolverWorkspace ws(img.width, img.height, cfg);

    BinaryField snapshot = st.u;
    double rv = std::numeric_limits<double>::infinity();
    RunReport report;

    int t = 0;
    while (t < cfg.max_iterations && rv > cfg.tolerance) {
        PixelSet band = ws.band(st.u);
        ScalarField u_tern = ternary_view(st.u);
        std::vector<ScalarField> disc_conv_u = ws.constraint_convolutions(u_tern);
        ScalarField cost = ws.cost(st.u, u_tern, disc_conv_u, st.multipliers, st.force.f);

        std::vector<ConstraintField> constraints;
        constraints.reserve(cfg.radii.size());
        for (std::size_t r = 0; r < cfg.radii.size(); ++r)
            constraints.push_back(
                constraint_from_convolution(st.u, disc_conv_u[r], cfg.radii[r]));

        BinaryField u_next =
            update_u(st.u, band, cost, cfg.theta, st.hull_mask, st.background_labels);
        update_multipliers(st.multipliers, constraints, cfg.tau);

        BinaryField u_prev = std::exchange(st.u, std::move(u_next));
        ++t;
        st.iteration = t;

        if (t % cfg.force_refresh_period == 0) {
            const std::size_t fg_count = st.u.count(0);
            const std::size_t bg_count = st.u.count(1);
            if (fg_count >= static_cast<std::size_t>(10 * cfg.fg_components) &&
                bg_count >= static_cast<std::size_t>(10 * cfg.bg_components)) {
                ModelPair models =
                    refit_models(img, st.u, cfg.fg_components, cfg.bg_components, st.rng);
                st.fg_model = std::move(models.fg);
                st.bg_model = std::move(models.bg);
                st.force = build_force(img, st.fg_model, st.bg_model, cfg.w0, cfg.w1,
                                       cfg.gamma0, cfg.gamma1, cfg.p_floor);
            }
        }

        std::optional<double> rv_now;
        if (t % cfg.variation_period == 0) {
            if (snapshot.count(1) > 0) {
                rv = relative_variation(snapshot, st.u);
                rv_now = rv;
                report.rv_history.emplace_back(t, rv);
            }
            snapshot = st.u;
        }

        if (observer) {
            IterationStats stats;
            stats.t = t;
            stats.rv = rv_now;
            stats.band_size = band.size();
            for (const auto& c : constraints) stats.min_constraint.push_back(c.min());
            observer(stats, IterationTrace{u_prev, st.u, band, st.multipliers});
        }

#ifndef NDEBUG
        for (std::size_t i = 0; i < st.u.size(); ++i) {
            assert(!(st.hull_mask[i] == 0) || st.u[i] == 0);
            assert(!st.background_labels[i] || st.u[i] == 1);
        }
        for (const auto& g : st.multipliers)
            for (double v : g.values()) assert(v >= 0.0);
#endif
    }

    report.iterations = t;
    report.stop_reason = (rv <= cfg.tolerance) ? "tolerance" : "max-iterations";
    if (std::isfinite(rv)) report.final_rv = rv;
    ScalarField u_strict = to_scalar(st.u);
    for (std::size_t r = 0; r < cfg.radii.size(); ++r) {
        ScalarField conv = ws.disc_convs[r]->apply(u_strict, cfg.constraint_pad);
        report.min_violation_per_radius.emplace_back(
            cfg.radii[r], constraint_from_convolution(st.u, conv, cfg.radii[r]).min());
    }
    report.convexity_score = is_convex_discrete(st.u).score;
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return {std::move(st.u), std::move(report)};
}

}  // namespace cvxseg
