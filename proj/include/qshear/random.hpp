#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "qst.hpp"

namespace qshear {

using Rng = std::mt19937_64;

inline double gaussian(Rng& rng) {
    return std::normal_distribution<double>(0.0, 1.0)(rng);
}

inline double uniform(Rng& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline Quaternion random_quaternion(Rng& rng) {
    return {gaussian(rng), gaussian(rng), gaussian(rng), gaussian(rng)};
}

inline QField random_qfield(Rng& rng, std::size_t n1, std::size_t n2, Extent e = {}) {
    QField F(n1, n2, Domain::spatial, e);
    for (auto& h : F.samples.data()) h = random_quaternion(rng);
    return F;
}

inline CField random_cfield(Rng& rng, std::size_t n1, std::size_t n2, Extent e = {}) {
    CField f(n1, n2, Domain::spatial, e);
    for (auto& z : f.samples.data()) z = {gaussian(rng), gaussian(rng)};
    return f;
}

/// Random spatial field whose right-sided spectrum lives on mask(i, j).
template <typename Mask>
QField band_limited_qfield(Rng& rng, std::size_t n1, std::size_t n2, Mask&& mask, Extent e = {}) {
    QField spec(n1, n2, Domain::frequency, e);
    for (std::size_t i = 0; i < n1; ++i)
        for (std::size_t j = 0; j < n2; ++j)
            if (mask(i, j)) spec(i, j) = random_quaternion(rng);
    return qft_right_inverse(spec);
}

/// Lattice points where |Delta/C - 1| <= tol.
inline auto flat_band_mask(const FrameTable& t, double tol) {
    return [&t, tol](std::size_t i, std::size_t j) { return std::abs(t.delta(i, j) / t.C - 1.0) <= tol; };
}

/// Lattice points where Delta > rel * max Delta.
inline auto covered_mask(const FrameTable& t, double rel) {
    return [&t, rel](std::size_t i, std::size_t j) { return t.delta(i, j) > rel * t.max; };
}

/// Sum of 1 to 3 Gaussian-enveloped carriers h_c g(x) e^{2 pi i k_c.x} centered at the origin,
/// with carriers inside the generator band and samples below 1e-14 of the peak set to zero.
inline QField smooth_centered_qfield(Rng& rng, std::size_t n, double kmin = 3.0, double kmax = 10.0) {
    QField F(n, n);
    int count = 1 + int(rng() % 3);
    for (int c = 0; c < count; ++c) {
        double sigma = uniform(rng, 0.06, 0.12);
        double k1 = std::round(uniform(rng, kmin, kmax)) * (rng() % 2 ? 1.0 : -1.0);
        double k2 = std::round(uniform(rng, -0.5, 0.5) * std::abs(k1));
        Quaternion h = random_quaternion(rng);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                double x = F.coord(0, i), y = F.coord(1, j);
                double g = std::exp(-(x * x + y * y) / (2.0 * sigma * sigma));
                auto z = std::polar(g, 2.0 * std::numbers::pi * (k1 * x + k2 * y));
                F(i, j) += mul_right(h, z);
            }
    }
    double peak = 0.0;
    for (const auto& h : F.samples.data()) peak = std::max(peak, qnorm(h));
    for (auto& h : F.samples.data())
        if (qnorm(h) < 1e-14 * peak) h = {};
    return F;
}

/// Centered Gaussian exp(-|x|^2 / (2 sigma^2)) in the scalar part.
inline QField gaussian_qfield(std::size_t n, double sigma) {
    QField F(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double x = F.coord(0, i), y = F.coord(1, j);
            F(i, j) = Quaternion(std::exp(-(x * x + y * y) / (2.0 * sigma * sigma)));
        }
    return F;
}

} // namespace qshear
