#pragma once

// Thin RAII layer over FFTW3 for the in-place complex transforms used by the
// multiplier and the spectral checks. Planning is serialised (FFTW planners
// are not re-entrant); execution on distinct buffers is thread safe.

#include <complex>
#include <memory>
#include <mutex>
#include <span>

#include <fftw3.h>

namespace landau::fft {

enum class Sign { forward = FFTW_FORWARD, backward = FFTW_BACKWARD };

namespace detail {
inline std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
struct PlanDeleter {
    void operator()(fftw_plan_s* p) const {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(p);
    }
};
using PlanHandle = std::unique_ptr<fftw_plan_s, PlanDeleter>;

inline fftw_complex* as_fftw(std::span<std::complex<double>> data) {
    return reinterpret_cast<fftw_complex*>(data.data());
}
} // namespace detail

/// Unnormalised in-place DFT: out[m] = sum_j in[j] exp(sign * 2 pi i m j / n).
inline void transform_1d(std::span<std::complex<double>> data, Sign sign) {
    const int n = static_cast<int>(data.size());
    detail::PlanHandle plan;
    {
        std::lock_guard lock(detail::planner_mutex());
        plan.reset(fftw_plan_dft_1d(n, detail::as_fftw(data), detail::as_fftw(data),
                                    static_cast<int>(sign), FFTW_ESTIMATE));
    }
    fftw_execute(plan.get());
}

/// Unnormalised in-place 2-D DFT of a row-major n0 x n1 array.
inline void transform_2d(std::span<std::complex<double>> data, int n0, int n1, Sign sign) {
    detail::PlanHandle plan;
    {
        std::lock_guard lock(detail::planner_mutex());
        plan.reset(fftw_plan_dft_2d(n0, n1, detail::as_fftw(data), detail::as_fftw(data),
                                    static_cast<int>(sign), FFTW_ESTIMATE));
    }
    fftw_execute(plan.get());
}

/// Signed frequency index of DFT bin m for length n (Nyquist maps to -n/2).
constexpr int signed_index(int m, int n) { return m < n / 2 ? m : m - n; }

} // namespace landau::fft
