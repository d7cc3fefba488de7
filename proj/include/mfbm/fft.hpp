#pragma once

#include <fftw3.h>

#include <complex>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace mfbm {

/// RAII wrapper around an FFTW real<->halfcomplex transform pair of a fixed
/// size. Plan creation is serialized globally; each instance owns its
/// buffers, so distinct instances may execute concurrently.
class RealFft {
public:
    explicit RealFft(int size) : size_(size) {
        if (size < 2) throw std::invalid_argument("RealFft: size must be >= 2");
        std::lock_guard<std::mutex> lock(plan_mutex());
        rbuf_ = fftw_alloc_real(size);
        cbuf_ = fftw_alloc_complex(size / 2 + 1);
        fwd_ = fftw_plan_dft_r2c_1d(size, rbuf_, cbuf_, FFTW_ESTIMATE);
        bwd_ = fftw_plan_dft_c2r_1d(size, cbuf_, rbuf_, FFTW_ESTIMATE);
        if (!fwd_ || !bwd_) throw std::runtime_error("RealFft: plan creation failed");
    }

    ~RealFft() {
        std::lock_guard<std::mutex> lock(plan_mutex());
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(bwd_);
        fftw_free(rbuf_);
        fftw_free(cbuf_);
    }

    RealFft(const RealFft&) = delete;
    RealFft& operator=(const RealFft&) = delete;

    int size() const { return size_; }
    int spectrum_size() const { return size_ / 2 + 1; }

    /// real[size] -> complex[size/2+1], unnormalized.
    void forward(const std::vector<double>& in, std::vector<std::complex<double>>& out) {
        check(in.size() == static_cast<std::size_t>(size_));
        for (int i = 0; i < size_; ++i) rbuf_[i] = in[i];
        fftw_execute(fwd_);
        out.resize(spectrum_size());
        for (int i = 0; i < spectrum_size(); ++i) out[i] = {cbuf_[i][0], cbuf_[i][1]};
    }

    /// complex[size/2+1] -> real[size], unnormalized (scale by 1/size to invert).
    void backward(const std::vector<std::complex<double>>& in, std::vector<double>& out) {
        check(in.size() == static_cast<std::size_t>(spectrum_size()));
        for (int i = 0; i < spectrum_size(); ++i) {
            cbuf_[i][0] = in[i].real();
            cbuf_[i][1] = in[i].imag();
        }
        fftw_execute(bwd_);
        out.resize(size_);
        for (int i = 0; i < size_; ++i) out[i] = rbuf_[i];
    }

private:
    static std::mutex& plan_mutex() {
        static std::mutex m;
        return m;
    }
    static void check(bool ok) {
        if (!ok) throw std::invalid_argument("RealFft: buffer size mismatch");
    }

    int size_;
    double* rbuf_;
    fftw_complex* cbuf_;
    fftw_plan fwd_, bwd_;
};

}  // namespace mfbm
