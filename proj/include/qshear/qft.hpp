#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <span>

#include "fft.hpp"
#include "field.hpp"

namespace qshear {

// Discrete transforms on the periodic cell. With dt = L1L2/(N1N2) and dw = 1/(L1L2):
//   forward  F^[k] = dt * sum_n (kernel) F[n]
//   inverse  F[n]  = dw * sum_k (kernel)^-1 F^[k]
// so for the unit cell the forward sum carries 1/(N1N2) and the inverse unit weight.
// Parseval: sum_n ||F[n]||^2 dt = sum_k ||F^[k]||^2 dw.

namespace detail {

inline void scale(std::span<std::complex<double>> d, double w) {
    for (auto& z : d) z *= w;
}

inline CField dft(const CField& f, Domain to, fft::Sign sign) {
    CField out = f;
    out.domain = to;
    fft::dft2(out.samples.data(), f.n1(), f.n2(), sign);
    scale(out.samples.data(), f.cell_area());
    return out;
}

} // namespace detail

/// Classical 2D transform of a complex spatial field, kernel e^{-2 pi i w.t}.
inline CField dft_forward(const CField& f) {
    require_domain(f, Domain::spatial, "dft_forward");
    return detail::dft(f, Domain::frequency, fft::Sign::forward);
}

inline CField dft_inverse(const CField& fhat) {
    require_domain(fhat, Domain::frequency, "dft_inverse");
    return detail::dft(fhat, Domain::spatial, fft::Sign::backward);
}

namespace detail {

// Left factor e^{-/+ 2 pi i n1 k1/N1} along axis 0 acting on u + j v:
// e^{-i a}(u + j v) = e^{-i a} u + j e^{+i a} v.
inline QField left_i_pass(const QField& F, bool forward) {
    auto [u, v] = split_field(F);
    auto su = forward ? fft::Sign::forward : fft::Sign::backward;
    auto sv = forward ? fft::Sign::backward : fft::Sign::forward;
    fft::dft_axis(u.samples.data(), F.n1(), F.n2(), 0, su);
    fft::dft_axis(v.samples.data(), F.n1(), F.n2(), 0, sv);
    return join_field(u, v);
}

// Right factor e^{-/+ 2 pi j n2 k2/N2} along axis 1 acting on p + i q with p, q in C_j:
// (p + i q) e^{-j b} = p e^{-j b} + i q e^{-j b}.
inline void right_j_pass(QField& F, bool forward) {
    std::size_t n = F.samples.size();
    std::vector<std::complex<double>> p(n), q(n);
    for (std::size_t k = 0; k < n; ++k) {
        const auto& h = F.samples[k];
        p[k] = {h.a0, h.a2};
        q[k] = {h.a1, h.a3};
    }
    auto s = forward ? fft::Sign::forward : fft::Sign::backward;
    fft::dft_axis(p, F.n1(), F.n2(), 1, s);
    fft::dft_axis(q, F.n1(), F.n2(), 1, s);
    for (std::size_t k = 0; k < n; ++k) F.samples[k] = {p[k].real(), q[k].real(), p[k].imag(), q[k].imag()};
}

} // namespace detail

/// Two-sided QFT: F^(w) = sum e^{-2 pi i t1 w1} F(t) e^{-2 pi j t2 w2} dt.
inline QField qft_forward(const QField& F) {
    require_domain(F, Domain::spatial, "qft_forward");
    QField out = detail::left_i_pass(F, true);
    detail::right_j_pass(out, true);
    double w = F.cell_area();
    for (auto& h : out.samples.data()) h *= w;
    out.domain = Domain::frequency;
    return out;
}

inline QField qft_inverse(const QField& Fhat) {
    require_domain(Fhat, Domain::frequency, "qft_inverse");
    QField out = Fhat;
    detail::right_j_pass(out, false);
    out = detail::left_i_pass(out, false);
    double w = Fhat.cell_area();
    for (auto& h : out.samples.data()) h *= w;
    out.domain = Domain::spatial;
    return out;
}

/// Two-sided QFT by direct double summation of the kernel, O(N1^2 N2^2).
inline QField qft_forward_direct(const QField& F) {
    require_domain(F, Domain::spatial, "qft_forward_direct");
    std::size_t n1 = F.n1(), n2 = F.n2();
    QField out(n1, n2, Domain::frequency, F.extent);
    const double tau = 2.0 * std::numbers::pi;
    for (std::size_t k1 = 0; k1 < n1; ++k1)
        for (std::size_t k2 = 0; k2 < n2; ++k2) {
            Quaternion acc;
            for (std::size_t i = 0; i < n1; ++i) {
                double a = tau * double((i * k1) % n1) / double(n1);
                Quaternion left{std::cos(a), -std::sin(a), 0.0, 0.0};
                for (std::size_t j = 0; j < n2; ++j) {
                    double b = tau * double((j * k2) % n2) / double(n2);
                    Quaternion right{std::cos(b), 0.0, -std::sin(b), 0.0};
                    acc += left * F(i, j) * right;
                }
            }
            out(k1, k2) = acc * F.cell_area();
        }
    return out;
}

/// Right-sided QFT: F^(w) = sum F(t) e^{-2 pi i w.t} dt, i.e. the classical transform of f1 and f2.
inline QField qft_right_forward(const QField& F) {
    require_domain(F, Domain::spatial, "qft_right_forward");
    auto [u, v] = split_field(F);
    return join_field(dft_forward(u), dft_forward(v));
}

inline QField qft_right_inverse(const QField& Fhat) {
    require_domain(Fhat, Domain::frequency, "qft_right_inverse");
    auto [u, v] = split_field(Fhat);
    return join_field(dft_inverse(u), dft_inverse(v));
}

/// Discretized <F, G>_2 = sum F conj(G) dA.
inline Quaternion pair(const QField& F, const QField& G) {
    require_compatible(F, G, "pair");
    Quaternion acc;
    for (std::size_t k = 0; k < F.samples.size(); ++k) acc += qinner(F.samples[k], G.samples[k]);
    return acc * F.cell_area();
}

inline double energy(const QField& F) {
    double acc = 0.0;
    for (const auto& h : F.samples.data()) acc += qnorm2(h);
    return acc * F.cell_area();
}

/// Circular convolution (f * g)(t) = sum_x f(x) g(t - x) dt.
inline CField cconvolve(const CField& f, const CField& g) {
    require_compatible(f, g, "cconvolve");
    require_domain(f, Domain::spatial, "cconvolve");
    CField fh = dft_forward(f), gh = dft_forward(g);
    for (std::size_t k = 0; k < fh.samples.size(); ++k) fh.samples[k] *= gh.samples[k];
    return dft_inverse(fh);
}

template <typename T>
BasicField<T> check_op(const BasicField<T>& F) {
    return reflect(F);
}

inline CField conj_field(CField f) {
    for (auto& z : f.samples.data()) z = std::conj(z);
    return f;
}

/// F~ = conj(f1) - j check(f2).
inline QField tilde_op(const QField& F) {
    auto [u, v] = split_field(F);
    CField mv = reflect(v);
    for (auto& z : mv.samples.data()) z = -z;
    return join_field(conj_field(u), mv);
}

/// F * G = [f1*g1 - conj(check f2)*g2] + j [conj(check f1)*g2 + f2*g1].
inline QField qconvolve(const QField& F, const QField& G) {
    require_compatible(F, G, "qconvolve");
    require_domain(F, Domain::spatial, "qconvolve");
    auto [f1, f2] = split_field(F);
    auto [g1, g2] = split_field(G);
    CField cf1 = conj_field(reflect(f1)), cf2 = conj_field(reflect(f2));
    CField a = cconvolve(f1, g1), b = cconvolve(cf2, g2);
    CField c = cconvolve(cf1, g2), d = cconvolve(f2, g1);
    for (std::size_t k = 0; k < a.samples.size(); ++k) {
        a.samples[k] -= b.samples[k];
        c.samples[k] += d.samples[k];
    }
    return join_field(a, c);
}

} // namespace qshear
