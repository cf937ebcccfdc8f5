// fftw_plan.hpp
// Small RAII holders for FFTW plans. Plans are made once with FFTW_UNALIGNED
// and run through the new-array execute functions on caller buffers, so a
// const plan can be shared by concurrent callers. Only planning and
// destruction touch FFTW's global state and they take a process-wide lock.
#pragma once

#include <fftw3.h>

#include <complex>
#include <mutex>
#include <vector>

namespace hydroblow::detail {

inline std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

class R2RPlan {
public:
    R2RPlan(int n, fftw_r2r_kind kind) : n_(n) {
        std::vector<double> a(n), b(n);
        std::lock_guard lock(fftw_planner_mutex());
        plan_ = fftw_plan_r2r_1d(n, a.data(), b.data(), kind, FFTW_ESTIMATE | FFTW_UNALIGNED);
    }
    R2RPlan(const R2RPlan&) = delete;
    R2RPlan& operator=(const R2RPlan&) = delete;
    ~R2RPlan() {
        std::lock_guard lock(fftw_planner_mutex());
        fftw_destroy_plan(plan_);
    }

    int size() const noexcept { return n_; }
    void execute(double* in, double* out) const { fftw_execute_r2r(plan_, in, out); }

private:
    int n_;
    fftw_plan plan_;
};

/// Unnormalized real <-> half-complex transforms of length n.
class RealFFT {
public:
    explicit RealFFT(int n) : n_(n) {
        std::vector<double> r(n);
        std::vector<std::complex<double>> c(n / 2 + 1);
        auto* cp = reinterpret_cast<fftw_complex*>(c.data());
        std::lock_guard lock(fftw_planner_mutex());
        fwd_ = fftw_plan_dft_r2c_1d(n, r.data(), cp, FFTW_ESTIMATE | FFTW_UNALIGNED);
        bwd_ = fftw_plan_dft_c2r_1d(n, cp, r.data(), FFTW_ESTIMATE | FFTW_UNALIGNED);
    }
    RealFFT(const RealFFT&) = delete;
    RealFFT& operator=(const RealFFT&) = delete;
    ~RealFFT() {
        std::lock_guard lock(fftw_planner_mutex());
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(bwd_);
    }

    int size() const noexcept { return n_; }
    void forward(double* in, std::complex<double>* out) const {
        fftw_execute_dft_r2c(fwd_, in, reinterpret_cast<fftw_complex*>(out));
    }
    /// Overwrites `in` (c2r transforms destroy their input).
    void backward(std::complex<double>* in, double* out) const {
        fftw_execute_dft_c2r(bwd_, reinterpret_cast<fftw_complex*>(in), out);
    }

private:
    int n_;
    fftw_plan fwd_;
    fftw_plan bwd_;
};

}  // namespace hydroblow::detail
