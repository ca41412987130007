#pragma once

#include <algorithm>

#include "oracles.hpp"
#include "qshear/qst.hpp"

namespace support {

using namespace qshear;

inline oracle::QGrid to_grid(const QField& F) {
    oracle::QGrid g;
    for (const auto& h : F.samples.data()) g.push_back({h.a0, h.a1, h.a2, h.a3});
    return g;
}

inline oracle::CGrid to_grid(const CField& f) {
    return {f.samples.data().begin(), f.samples.data().end()};
}

inline Quaternion to_q(const oracle::Q4& q) { return {q[0], q[1], q[2], q[3]}; }

inline double max_diff(const QField& F, const oracle::QGrid& g) {
    double d = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
        const auto& h = F.samples[k];
        d = std::max({d, std::abs(h.a0 - g[k][0]), std::abs(h.a1 - g[k][1]), std::abs(h.a2 - g[k][2]),
                      std::abs(h.a3 - g[k][3])});
    }
    return d;
}

inline double max_diff(const CField& f, const oracle::CGrid& g) {
    double d = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) d = std::max(d, std::abs(f.samples[k] - g[k]));
    return d;
}

inline double max_norm(const QField& F) {
    double m = 0.0;
    for (const auto& h : F.samples.data()) m = std::max(m, qnorm(h));
    return m;
}

inline oracle::Window window(const GeneratorSpec& g) {
    return {g.r0, g.r1, g.angular_width, g.slope_shift, g.center1, g.center2};
}

} // namespace support
