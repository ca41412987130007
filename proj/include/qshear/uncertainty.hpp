#pragma once

#include <cmath>
#include <numbers>

#include <boost/math/special_functions/digamma.hpp>

#include "qst.hpp"

namespace qshear {

enum class MomentKind { norm2, log };

/// Cell average of ln||x|| over [-h1/2, h1/2] x [-h2/2, h2/2] by 16 x 16 midpoint subcells.
inline double origin_log_average(double h1, double h2) {
    constexpr int n = 16;
    double acc = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double x = ((i + 0.5) / n - 0.5) * h1, y = ((j + 0.5) / n - 0.5) * h2;
            acc += 0.5 * std::log(x * x + y * y);
        }
    return acc / (n * n);
}

namespace detail {

template <typename Weight>
double weighted_sum(std::size_t n1, std::size_t n2, const Quaternion* data, Weight&& weight) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n1; ++i)
        for (std::size_t j = 0; j < n2; ++j) acc += weight(i, j) * qnorm2(data[i * n2 + j]);
    return acc;
}

// Coordinate weights of a lattice with the field's centered coordinates.
inline Grid2<double> moment_weights(const QField& like, MomentKind kind) {
    Grid2<double> w(like.n1(), like.n2());
    for (std::size_t i = 0; i < like.n1(); ++i)
        for (std::size_t j = 0; j < like.n2(); ++j) {
            double x = like.coord(0, i), y = like.coord(1, j);
            double r2 = x * x + y * y;
            w(i, j) = kind == MomentKind::norm2 ? r2 : (r2 > 0.0 ? 0.5 * std::log(r2) : 0.0);
        }
    if (kind == MomentKind::log) {
        double h1 = std::abs(like.coord(0, 1)), h2 = std::abs(like.coord(1, 1));
        w(0, 0) = origin_log_average(h1, h2);
    }
    return w;
}

} // namespace detail

/// Riemann-sum moment sum ||x||^2 ||F||^2 dA or sum ln||x|| ||F||^2 dA in centered coordinates.
/// For the log kind the origin sample is weighted by the cell average of ln||x||;
/// strict rejects a nonzero origin sample instead.
inline double moments(const QField& F, MomentKind kind, bool strict = false) {
    if (kind == MomentKind::log && strict && qnorm2(F(0, 0)) != 0.0)
        throw Error("log moment: nonzero sample at the origin coordinate");
    auto w = detail::moment_weights(F, kind);
    return detail::weighted_sum(F.n1(), F.n2(), F.samples.data().data(),
                                [&](std::size_t i, std::size_t j) { return w(i, j); }) *
           F.cell_area();
}

/// sum_{m,l} w_{ml} sum_t k(t) ||S F(a_m, s_l, t)||^2 dt with the moment weight k.
inline double coefficient_moment(const CoefficientVolume& V, MomentKind kind) {
    QField like(V.n1, V.n2, Domain::spatial, V.extent);
    auto w = detail::moment_weights(like, kind);
    double dt = like.cell_area();
    double total = 0.0;
    for (std::size_t m = 0; m < V.grid.M(); ++m)
        for (std::size_t l = 0; l < V.grid.L(); ++l) {
            double s = detail::weighted_sum(V.n1, V.n2, V.data.data() + V.offset(m, l),
                                            [&](std::size_t i, std::size_t j) { return w(i, j); });
            total += V.grid.weight(m, l) * s * dt;
        }
    return total;
}

/// psi(1/2) - ln(pi) = Gamma'(1/2)/Gamma(1/2) - ln(pi).
inline double log_uncertainty_constant() {
    return boost::math::digamma(0.5) - std::log(std::numbers::pi);
}

struct UncertaintyReport {
    double C = 0.0;
    double norm2 = 0.0;
    double spatial_spread = 0.0;
    double freq_spread = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
    double log_spatial = 0.0;
    double log_freq = 0.0;
    double log_lhs = 0.0;
    double log_rhs = 0.0;
    double gap = 0.0;
};

namespace detail {

inline void require_nonzero(const QField& F, const char* op) {
    if (energy(F) == 0.0) throw Error(std::string(op) + ": zero input");
}

} // namespace detail

/// sqrt(spatial) sqrt(freq) >= sqrt(C)/(2 pi) ||F||^2, reported as ratio lhs/rhs.
inline UncertaintyReport heisenberg(const QField& F, const QGenerator& G, const SamplingGrid& grid,
                                    const FrameTable& table) {
    detail::require_nonzero(F, "heisenberg");
    UncertaintyReport r;
    r.C = table.C;
    r.norm2 = energy(F);
    r.spatial_spread = coefficient_moment(qst_forward(F, G, grid), MomentKind::norm2);
    r.freq_spread = moments(qft_right_forward(F), MomentKind::norm2);
    r.lhs = std::sqrt(r.spatial_spread) * std::sqrt(r.freq_spread);
    r.rhs = std::sqrt(r.C) / (2.0 * std::numbers::pi) * r.norm2;
    r.ratio = r.lhs / r.rhs;
    return r;
}

/// Logarithmic estimate: coefficient ln-moment + C * spectral ln-moment >= C (psi(1/2) - ln pi) ||F||^2.
inline UncertaintyReport log_uncertainty(const QField& F, const QGenerator& G, const SamplingGrid& grid,
                                         const FrameTable& table) {
    detail::require_nonzero(F, "log_uncertainty");
    UncertaintyReport r;
    r.C = table.C;
    r.norm2 = energy(F);
    r.log_spatial = coefficient_moment(qst_forward(F, G, grid), MomentKind::log);
    r.log_freq = table.C * moments(qft_right_forward(F), MomentKind::log);
    r.log_lhs = r.log_spatial + r.log_freq;
    r.log_rhs = table.C * log_uncertainty_constant() * r.norm2;
    r.gap = r.log_lhs - r.log_rhs;
    return r;
}

inline UncertaintyReport uncertainty_report(const QField& F, const QGenerator& G, const SamplingGrid& grid,
                                            const FrameTable& table) {
    UncertaintyReport r = heisenberg(F, G, grid, table);
    UncertaintyReport l = log_uncertainty(F, G, grid, table);
    r.log_spatial = l.log_spatial;
    r.log_freq = l.log_freq;
    r.log_lhs = l.log_lhs;
    r.log_rhs = l.log_rhs;
    r.gap = l.gap;
    return r;
}

/// Both sides of sum_{m,l} w sum_w ||F_R[S F](w)||^2 ||w||^2 dw = sum_w Delta(w) ||w||^2 ||F^(w)||^2 dw.
inline std::pair<double, double> frequency_collapse(const QField& F, const QGenerator& G, const SamplingGrid& grid,
                                                    const FrameTable& table) {
    CoefficientVolume V = qst_forward(F, G, grid);
    double lhs = 0.0;
    for (std::size_t m = 0; m < grid.M(); ++m)
        for (std::size_t l = 0; l < grid.L(); ++l)
            lhs += grid.weight(m, l) * moments(qft_right_forward(V.slice(m, l)), MomentKind::norm2);
    QField Fh = qft_right_forward(F);
    auto w = detail::moment_weights(Fh, MomentKind::norm2);
    double rhs = 0.0;
    for (std::size_t k = 0; k < Fh.samples.size(); ++k) rhs += table.delta[k] * w[k] * qnorm2(Fh.samples[k]);
    return {lhs, rhs * Fh.cell_area()};
}

} // namespace qshear
