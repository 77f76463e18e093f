#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

#include <fftw3.h>

#include "cvxseg/field.hpp"
#include "cvxseg/kernel.hpp"

namespace cvxseg {

/// Out-of-domain read policy for convolutions.
struct PadMode {
    enum class Kind { constant, replicate };
    Kind kind = Kind::constant;
    double value = 0.0;

    static PadMode constant(double v) { return {Kind::constant, v}; }
    static PadMode replicate() { return {Kind::replicate, 0.0}; }
};

namespace detail {

inline double padded_read(const ScalarField& f, int x, int y, PadMode pad) {
    if (f.in_bounds(x, y)) return f.at(x, y);
    if (pad.kind == PadMode::Kind::constant) return pad.value;
    return f.at(std::clamp(x, 0, f.width() - 1), std::clamp(y, 0, f.height() - 1));
}

inline void check_kernel_fits(const ScalarField& f, const Kernel& k) {
    if (k.width() > f.width() || k.width() > f.height())
        throw std::invalid_argument("kernel larger than field");
}

}  // namespace detail

/// Literal nested-summation convolution: out(x) = sum_o w(o) field(x+o).
/// Reference oracle for the transform-based path.
inline ScalarField convolve_direct(const ScalarField& field, const Kernel& kernel,
                                   PadMode pad) {
    detail::check_kernel_fits(field, kernel);
    ScalarField out(field.width(), field.height());
    const int k = kernel.half;
    for (int y = 0; y < field.height(); ++y)
        for (int x = 0; x < field.width(); ++x) {
            double acc = 0.0;
            for (int dy = -k; dy <= k; ++dy)
                for (int dx = -k; dx <= k; ++dx) {
                    double w = kernel.weight(dx, dy);
                    if (w != 0.0) acc += w * detail::padded_read(field, x + dx, y + dy, pad);
                }
            out.at(x, y) = acc;
        }
    return out;
}

/// FFT convolution of fixed-size fields with a fixed kernel. The field is
/// embedded in a (w+2k) x (h+2k) frame filled per PadMode, so the circular
/// transform never wraps into the read window.
class FftConvolver {
public:
    FftConvolver(int width, int height, const Kernel& kernel)
        : w_(width), h_(height), half_(kernel.half),
          pw_(width + 2 * kernel.half), ph_(height + 2 * kernel.half) {
        if (kernel.width() > width || kernel.width() > height)
            throw std::invalid_argument("kernel larger than field");
        const std::size_t real_n = static_cast<std::size_t>(pw_) * ph_;
        const std::size_t cplx_n = static_cast<std::size_t>(ph_) * (pw_ / 2 + 1);
        real_ = fftw_alloc_real(real_n);
        field_spec_ = fftw_alloc_complex(cplx_n);
        kernel_spec_ = fftw_alloc_complex(cplx_n);
        product_ = fftw_alloc_complex(cplx_n);
        forward_ = fftw_plan_dft_r2c_2d(ph_, pw_, real_, field_spec_, FFTW_ESTIMATE);
        inverse_ = fftw_plan_dft_c2r_2d(ph_, pw_, product_, real_, FFTW_ESTIMATE);

        // Kernel embedded at negated offsets so that the circular product
        // realizes out(x) = sum_o w(o) field(x+o).
        std::fill(real_, real_ + real_n, 0.0);
        for (int dy = -half_; dy <= half_; ++dy)
            for (int dx = -half_; dx <= half_; ++dx) {
                double w = kernel.weight(dx, dy);
                if (w == 0.0) continue;
                int row = (-dy % ph_ + ph_) % ph_;
                int col = (-dx % pw_ + pw_) % pw_;
                real_[static_cast<std::size_t>(row) * pw_ + col] = w;
            }
        fftw_execute(forward_);
        std::copy(reinterpret_cast<double*>(field_spec_),
                  reinterpret_cast<double*>(field_spec_) + 2 * cplx_n,
                  reinterpret_cast<double*>(kernel_spec_));
    }

    FftConvolver(const FftConvolver&) = delete;
    FftConvolver& operator=(const FftConvolver&) = delete;

    ~FftConvolver() {
        fftw_destroy_plan(forward_);
        fftw_destroy_plan(inverse_);
        fftw_free(real_);
        fftw_free(field_spec_);
        fftw_free(kernel_spec_);
        fftw_free(product_);
    }

    int width() const { return w_; }
    int height() const { return h_; }

    ScalarField apply(const ScalarField& field, PadMode pad) {
        if (field.width() != w_ || field.height() != h_)
            throw std::invalid_argument("field dimensions do not match convolver");
        for (int py = 0; py < ph_; ++py)
            for (int px = 0; px < pw_; ++px)
                real_[static_cast<std::size_t>(py) * pw_ + px] =
                    detail::padded_read(field, px - half_, py - half_, pad);
        fftw_execute(forward_);
        const std::size_t cplx_n = static_cast<std::size_t>(ph_) * (pw_ / 2 + 1);
        for (std::size_t i = 0; i < cplx_n; ++i) {
            const double ar = field_spec_[i][0], ai = field_spec_[i][1];
            const double br = kernel_spec_[i][0], bi = kernel_spec_[i][1];
            product_[i][0] = ar * br - ai * bi;
            product_[i][1] = ar * bi + ai * br;
        }
        fftw_execute(inverse_);
        const double scale = 1.0 / (static_cast<double>(pw_) * ph_);
        ScalarField out(w_, h_);
        for (int y = 0; y < h_; ++y)
            for (int x = 0; x < w_; ++x)
                out.at(x, y) =
                    real_[static_cast<std::size_t>(y + half_) * pw_ + (x + half_)] * scale;
        return out;
    }

private:
    int w_, h_, half_, pw_, ph_;
    double* real_ = nullptr;
    fftw_complex* field_spec_ = nullptr;
    fftw_complex* kernel_spec_ = nullptr;
    fftw_complex* product_ = nullptr;
    fftw_plan forward_{}, inverse_{};
};

/// Fast convolution; agrees with convolve_direct to within 1e-10 per pixel.
inline ScalarField convolve(const ScalarField& field, const Kernel& kernel, PadMode pad) {
    detail::check_kernel_fits(field, kernel);
    FftConvolver conv(field.width(), field.height(), kernel);
    return conv.apply(field, pad);
}

}  // namespace cvxseg
