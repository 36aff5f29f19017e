#pragma once

// Internal spectral helpers shared by the propagator and the fixed-point
// solver. Not installed; include only from stokes sources.

#include <fftw3.h>

#include <complex>
#include <mutex>
#include <vector>

#include "nsblow/common.hpp"

namespace nsblow::stokes::detail {

using cvec = std::vector<std::complex<double>>;

inline std::mutex& fftw_mutex() {
    static std::mutex mu;  // FFTW planning is not thread-safe
    return mu;
}

struct Box {
    double L = 0.0;
    int n = 0;

    int nz() const { return n / 2 + 1; }
    std::size_t real_size() const {
        return static_cast<std::size_t>(n) * n * n;
    }
    std::size_t spec_size() const {
        return static_cast<std::size_t>(n) * n * nz();
    }
    double dx() const { return 2.0 * L / n; }
    double freq(int m) const {
        int k = m < n / 2 ? m : m - n;
        return M_PI / L * k;
    }
    double freq_z(int m) const { return M_PI / L * m; }
};

inline void fft_r2c(const Box& box, std::vector<double> in, cvec& out) {
    out.resize(box.spec_size());
    std::lock_guard<std::mutex> lk(fftw_mutex());
    fftw_plan plan = fftw_plan_dft_r2c_3d(
        box.n, box.n, box.n, in.data(),
        reinterpret_cast<fftw_complex*>(out.data()), FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);
}

/// Destroys the spectral input and includes the 1/n^3 normalization.
inline void fft_c2r(const Box& box, cvec& in, std::vector<double>& out) {
    out.resize(box.real_size());
    {
        std::lock_guard<std::mutex> lk(fftw_mutex());
        fftw_plan plan = fftw_plan_dft_c2r_3d(
            box.n, box.n, box.n, reinterpret_cast<fftw_complex*>(in.data()),
            out.data(), FFTW_ESTIMATE);
        fftw_execute(plan);
        fftw_destroy_plan(plan);
    }
    double scale = 1.0 / static_cast<double>(box.real_size());
    parallel_for(out.size(), [&](std::size_t i) { out[i] *= scale; });
}

/// Applies fn(xi, q2, idx) over every retained mode (zero mode included).
template <typename Fn>
void for_each_mode(const Box& box, Fn&& fn) {
    int nz = box.nz();
    parallel_for(static_cast<std::size_t>(box.n) * box.n, [&](std::size_t s) {
        int mx = static_cast<int>(s) / box.n, my = static_cast<int>(s) % box.n;
        Vec3 xi{box.freq(mx), box.freq(my), 0.0};
        for (int mz = 0; mz < nz; ++mz) {
            xi.z = box.freq_z(mz);
            fn(xi, xi.norm2(), s * nz + mz);
        }
    });
}

/// In-place Leray projection; the zero mode is nulled.
inline void leray(const Box& box, std::array<cvec, 3>& f) {
    for_each_mode(box, [&](const Vec3& xi, double q2, std::size_t idx) {
        if (q2 == 0.0) {
            for (int i = 0; i < 3; ++i) f[i][idx] = 0.0;
            return;
        }
        std::complex<double> dot =
            xi.x * f[0][idx] + xi.y * f[1][idx] + xi.z * f[2][idx];
        dot /= q2;
        f[0][idx] -= xi.x * dot;
        f[1][idx] -= xi.y * dot;
        f[2][idx] -= xi.z * dot;
    });
}

}  // namespace nsblow::stokes::detail
