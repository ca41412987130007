#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <mutex>
#include <span>
#include <tuple>
#include <vector>

#include <fftw3.h>

namespace qshear::fft {

/// FFTW sign convention: forward is e^{-2 pi i nk/N}, backward e^{+2 pi i nk/N}. Unnormalized.
enum class Sign { forward = FFTW_FORWARD, backward = FFTW_BACKWARD };

namespace detail {

// rank 2 plan when axis < 0, otherwise a batch of 1D transforms along axis 0 or 1.
using PlanKey = std::tuple<std::size_t, std::size_t, int, int>;

struct PlanCache {
    std::mutex mutex;
    std::map<PlanKey, fftw_plan> plans;
    ~PlanCache() {
        for (auto& [key, plan] : plans) fftw_destroy_plan(plan);
    }
};

inline PlanCache& cache() {
    static PlanCache c;
    return c;
}

inline fftw_plan plan_for(std::size_t n1, std::size_t n2, int axis, Sign sign) {
    auto& c = cache();
    std::lock_guard lock(c.mutex);
    PlanKey key{n1, n2, axis, static_cast<int>(sign)};
    if (auto it = c.plans.find(key); it != c.plans.end()) return it->second;

    std::vector<std::complex<double>> scratch(n1 * n2);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    int s = static_cast<int>(sign);
    fftw_plan plan;
    if (axis < 0) {
        plan = fftw_plan_dft_2d(static_cast<int>(n1), static_cast<int>(n2), buf, buf, s, flags);
    } else if (axis == 0) {
        int n = static_cast<int>(n1);
        plan = fftw_plan_many_dft(1, &n, static_cast<int>(n2), buf, nullptr,
                                  static_cast<int>(n2), 1, buf, nullptr,
                                  static_cast<int>(n2), 1, s, flags);
    } else {
        int n = static_cast<int>(n2);
        plan = fftw_plan_many_dft(1, &n, static_cast<int>(n1), buf, nullptr, 1,
                                  static_cast<int>(n2), buf, nullptr, 1,
                                  static_cast<int>(n2), s, flags);
    }
    c.plans.emplace(key, plan);
    return plan;
}

inline void execute(fftw_plan plan, std::span<std::complex<double>> data) {
    auto* buf = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(plan, buf, buf);
}

} // namespace detail

/// In-place 2D DFT of a row-major n1 x n2 array.
inline void dft2(std::span<std::complex<double>> data, std::size_t n1, std::size_t n2, Sign sign) {
    detail::execute(detail::plan_for(n1, n2, -1, sign), data);
}

/// In-place 1D DFTs along axis 0 (index n1) or axis 1 (index n2) of a row-major n1 x n2 array.
inline void dft_axis(std::span<std::complex<double>> data, std::size_t n1, std::size_t n2,
                     int axis, Sign sign) {
    detail::execute(detail::plan_for(n1, n2, axis == 0 ? 0 : 1, sign), data);
}

} // namespace qshear::fft
