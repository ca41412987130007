#pragma once

#include <cmath>
#include <complex>
#include <string>

#include "parallel.hpp"
#include "qft.hpp"
#include "shearlet.hpp"

namespace qshear {

/// Psi = psi1 + j psi2 with spectrum Psi^ = psi1^ + j psi2^.
struct QGenerator {
    Generator psi1, psi2;

    Quaternion spectrum(double w1, double w2) const {
        return recompose(psi1.spectrum(w1, w2), psi2.spectrum(w1, w2));
    }
    double density(double w1, double w2) const {
        return std::norm(psi1.spectrum(w1, w2)) + std::norm(psi2.spectrum(w1, w2));
    }
    bool is_zero() const { return psi1.is_zero() && psi2.is_zero(); }
};

/// psi1 = default window, psi2 = same radial profile with the angular window shifted in slope.
inline QGenerator default_qgenerator(GeneratorSpec base = {}, double psi2_slope_shift = 0.5) {
    GeneratorSpec g2 = base;
    g2.slope_shift += psi2_slope_shift;
    return {Generator(base), Generator(g2)};
}

/// h Psi = (h_u psi1 - conj(h_v) psi2) + j (conj(h_u) psi2 + h_v psi1).
inline QGenerator left_multiply(const Quaternion& h, const QGenerator& G) {
    auto p = symplectic_split(h);
    return {scaled(G.psi1, p.u) + scaled(G.psi2, -std::conj(p.v)),
            scaled(G.psi2, std::conj(p.u)) + scaled(G.psi1, p.v)};
}

inline QGenerator operator+(const QGenerator& a, const QGenerator& b) {
    return {a.psi1 + b.psi1, a.psi2 + b.psi2};
}

using CoefficientVolume = BasicVolume<Quaternion>;

/// |A_a|^{1/2} Psi^(w S_s A_a) e^{-2 pi i w.t}, phase multiplied on the right.
inline QField qatom_spectrum(const QGenerator& G, const ShearParams& p, std::size_t n1, std::size_t n2,
                             Extent e = {}) {
    CField u = atom_spectrum(G.psi1, p, n1, n2, e), v = atom_spectrum(G.psi2, p, n1, n2, e);
    return join_field(u, v);
}

/// Spatial atom Psi_{a,s,t}.
inline QField qatom(const QGenerator& G, const ShearParams& p, std::size_t n1, std::size_t n2, Extent e = {}) {
    return qft_right_inverse(qatom_spectrum(G, p, n1, n2, e));
}

/// Slice at (a, s) from F^ = qft_right_forward(F): inverse of |A|^{1/2} F^(w) conj(Psi^(w S A)).
inline QField qst_slice(const QField& Fhat, const QGenerator& G, double a, double s) {
    require_domain(Fhat, Domain::frequency, "qst_slice");
    QField psi = qatom_spectrum(G, {a, s}, Fhat.n1(), Fhat.n2(), Fhat.extent);
    QField prod = Fhat;
    for (std::size_t k = 0; k < prod.samples.size(); ++k)
        prod.samples[k] = Fhat.samples[k] * qconj(psi.samples[k]);
    return qft_right_inverse(prod);
}

/// Quaternion shearlet coefficients via the frequency path.
inline CoefficientVolume qst_forward(const QField& F, const QGenerator& G, const SamplingGrid& grid) {
    require_domain(F, Domain::spatial, "qst_forward");
    if (grid.size() == 0) throw Error("qst_forward: empty sampling grid");
    QField Fhat = qft_right_forward(F);
    CoefficientVolume vol(grid, F.n1(), F.n2(), F.extent);
    parallel_for(grid.size(), [&](std::size_t idx) {
        std::size_t m = idx / grid.L(), l = idx % grid.L();
        vol.set_slice(m, l, qst_slice(Fhat, G, grid.scales[m], grid.shears[l]));
    });
    return vol;
}

/// Spatial path: F * (tilde check Psi)_{a,s,0}.
inline CoefficientVolume qst_forward_convolution(const QField& F, const QGenerator& G, const SamplingGrid& grid) {
    require_domain(F, Domain::spatial, "qst_forward_convolution");
    CoefficientVolume vol(grid, F.n1(), F.n2(), F.extent);
    parallel_for(grid.size(), [&](std::size_t idx) {
        std::size_t m = idx / grid.L(), l = idx % grid.L();
        QField psi = qatom(G, {grid.scales[m], grid.shears[l]}, F.n1(), F.n2(), F.extent);
        vol.set_slice(m, l, qconvolve(F, check_op(tilde_op(psi))));
    });
    return vol;
}

/// Inner-product definition <F, Psi_{a,s,t}>_2 at every lattice t, by direct summation.
inline CoefficientVolume qst_forward_direct(const QField& F, const QGenerator& G, const SamplingGrid& grid) {
    require_domain(F, Domain::spatial, "qst_forward_direct");
    std::size_t n1 = F.n1(), n2 = F.n2();
    CoefficientVolume vol(grid, n1, n2, F.extent);
    double dt = F.cell_area();
    parallel_for(grid.size(), [&](std::size_t idx) {
        std::size_t m = idx / grid.L(), l = idx % grid.L();
        QField psi = qatom(G, {grid.scales[m], grid.shears[l]}, n1, n2, F.extent);
        for (std::size_t p = 0; p < n1; ++p)
            for (std::size_t q = 0; q < n2; ++q) {
                Quaternion acc;
                for (std::size_t i = 0; i < n1; ++i)
                    for (std::size_t j = 0; j < n2; ++j)
                        acc += F(i, j) * qconj(psi((i + n1 - p) % n1, (j + n2 - q) % n2));
                vol.at(m, l, p, q) = acc * dt;
            }
    });
    return vol;
}

/// The four classical transforms of the decomposition.
struct ClassicalComponents {
    ClassicalVolume psi1_f1, psi1_f2, psi2c_f1c, psi2c_f2c;
};

inline ClassicalComponents classical_components(const QField& F, const QGenerator& G, const SamplingGrid& grid) {
    auto [f1, f2] = split_field(F);
    Generator psi2c = G.psi2.reflect();
    return {classical_transform(f1, G.psi1, grid), classical_transform(f2, G.psi1, grid),
            classical_transform(check_op(f1), psi2c, grid), classical_transform(check_op(f2), psi2c, grid)};
}

/// S F = (S_{psi1} f1 + conj(S_{psi2 check} f2 check)) + j (S_{psi1} f2 - conj(S_{psi2 check} f1 check)).
inline CoefficientVolume qst_decompose(const QField& F, const QGenerator& G, const SamplingGrid& grid) {
    require_domain(F, Domain::spatial, "qst_decompose");
    auto c = classical_components(F, G, grid);
    CoefficientVolume vol(grid, F.n1(), F.n2(), F.extent);
    for (std::size_t k = 0; k < vol.data.size(); ++k)
        vol.data[k] = recompose(c.psi1_f1.data[k] + std::conj(c.psi2c_f2c.data[k]),
                                c.psi1_f2.data[k] - std::conj(c.psi2c_f1c.data[k]));
    return vol;
}

inline FrameTable admissibility_q(const QGenerator& G, const SamplingGrid& grid, std::size_t n1, std::size_t n2,
                                  Extent e = {}, std::array<double, 2> reference = {8.0, 2.0}) {
    auto density = [&](double x, double y) { return G.density(x, y); };
    return frame_table(density, grid, n1, n2, e, reference);
}

/// sum_{m,l} w_{ml} sum_t ||S F(a_m, s_l, t)||^2 dt.
inline double qst_energy(const CoefficientVolume& V) {
    double dt = V.extent.L1 * V.extent.L2 / double(V.n1 * V.n2);
    double total = 0.0;
    for (std::size_t m = 0; m < V.grid.M(); ++m)
        for (std::size_t l = 0; l < V.grid.L(); ++l) {
            double acc = 0.0;
            std::size_t off = V.offset(m, l);
            for (std::size_t k = 0; k < V.slice_size(); ++k) acc += qnorm2(V.data[off + k]);
            total += V.grid.weight(m, l) * acc * dt;
        }
    return total;
}

/// Energy per (m, l) slice, unweighted by w.
inline std::vector<double> slice_energies(const CoefficientVolume& V) {
    double dt = V.extent.L1 * V.extent.L2 / double(V.n1 * V.n2);
    std::vector<double> out;
    for (std::size_t s = 0; s < V.grid.size(); ++s) {
        double acc = 0.0;
        for (std::size_t k = 0; k < V.slice_size(); ++k) acc += qnorm2(V.data[s * V.slice_size() + k]);
        out.push_back(acc * dt);
    }
    return out;
}

/// sum_w ||F^(w)||^2 Delta(w) dw.
inline double spectral_energy(const QField& Fhat, const FrameTable& table) {
    require_domain(Fhat, Domain::frequency, "spectral_energy");
    double acc = 0.0;
    for (std::size_t k = 0; k < Fhat.samples.size(); ++k) acc += qnorm2(Fhat.samples[k]) * table.delta[k];
    return acc * Fhat.cell_area();
}

struct MoyalResult {
    Quaternion lhs, rhs_exact, rhs_constant;
};

inline MoyalResult moyal(const QField& F, const QField& G, const QGenerator& gen, const SamplingGrid& grid,
                         const FrameTable& table) {
    require_compatible(F, G, "moyal");
    CoefficientVolume VF = qst_forward(F, gen, grid), VG = qst_forward(G, gen, grid);
    double dt = F.cell_area();
    MoyalResult r;
    for (std::size_t m = 0; m < grid.M(); ++m)
        for (std::size_t l = 0; l < grid.L(); ++l) {
            Quaternion acc;
            std::size_t off = VF.offset(m, l);
            for (std::size_t k = 0; k < VF.slice_size(); ++k) acc += qinner(VF.data[off + k], VG.data[off + k]);
            r.lhs += acc * (grid.weight(m, l) * dt);
        }
    QField Fh = qft_right_forward(F), Gh = qft_right_forward(G);
    for (std::size_t k = 0; k < Fh.samples.size(); ++k)
        r.rhs_exact += qinner(Fh.samples[k], Gh.samples[k]) * table.delta[k];
    r.rhs_exact *= Fh.cell_area();
    r.rhs_constant = pair(F, G) * table.C;
    return r;
}

enum class InversionMode { paper_constant, frame_corrected };

inline const char* to_string(InversionMode m) {
    return m == InversionMode::paper_constant ? "paper_constant" : "frame_corrected";
}

inline InversionMode parse_mode(const std::string& s) {
    if (s == "paper_constant") return InversionMode::paper_constant;
    if (s == "frame_corrected") return InversionMode::frame_corrected;
    throw Error("unknown inversion mode '" + s + "'");
}

/// sum_{m,l} w (S F)(a,s,.) * Psi_{a,s,0} in frequency, divided by C or by Delta(w).
inline QField qst_inverse(const CoefficientVolume& V, const QGenerator& G, const FrameTable& table,
                          InversionMode mode, double eps = 1e-6) {
    const auto& grid = V.grid;
    if (table.delta.n1() != V.n1 || table.delta.n2() != V.n2 || !(table.extent == V.extent))
        throw Error("qst_inverse: frame table does not match the coefficient volume");
    std::vector<QField> parts(grid.size());
    parallel_for(grid.size(), [&](std::size_t idx) {
        std::size_t m = idx / grid.L(), l = idx % grid.L();
        QField Sh = qft_right_forward(V.slice(m, l));
        QField psi = qatom_spectrum(G, {grid.scales[m], grid.shears[l]}, V.n1, V.n2, V.extent);
        double w = grid.weight(m, l);
        for (std::size_t k = 0; k < Sh.samples.size(); ++k) Sh.samples[k] = Sh.samples[k] * psi.samples[k] * w;
        parts[idx] = std::move(Sh);
    });
    QField acc(V.n1, V.n2, Domain::frequency, V.extent);
    for (const auto& p : parts)
        for (std::size_t k = 0; k < acc.samples.size(); ++k) acc.samples[k] += p.samples[k];

    if (mode == InversionMode::paper_constant) {
        if (!(table.C > 0.0)) throw Error("qst_inverse: admissibility constant is zero");
        for (auto& h : acc.samples.data()) h *= 1.0 / table.C;
    } else {
        double floor = eps * table.max;
        bool any = false;
        for (std::size_t k = 0; k < acc.samples.size(); ++k) {
            double d = table.delta[k];
            if (d > floor && d > 0.0) {
                acc.samples[k] *= 1.0 / d;
                any = true;
            } else {
                acc.samples[k] = {};
            }
        }
        if (!any) throw Error("qst_inverse: division region is empty");
    }
    return qft_right_inverse(acc);
}

/// T_{t'} F(x) = F(x - t') for t' = (p1, p2) lattice steps.
template <typename T>
BasicField<T> lattice_translate(const BasicField<T>& F, long p1, long p2) {
    BasicField<T> out = F;
    long n1 = long(F.n1()), n2 = long(F.n2());
    for (long i = 0; i < n1; ++i)
        for (long j = 0; j < n2; ++j)
            out(i, j) = F(((i - p1) % n1 + n1) % n1, ((j - p2) % n2 + n2) % n2);
    return out;
}

/// G(x) = F(diag(c1, c2) x) on the periodic lattice, integer c1, c2.
template <typename T>
BasicField<T> lattice_dilate(const BasicField<T>& F, std::size_t c1, std::size_t c2) {
    BasicField<T> out = F;
    for (std::size_t i = 0; i < F.n1(); ++i)
        for (std::size_t j = 0; j < F.n2(); ++j) out(i, j) = F((c1 * i) % F.n1(), (c2 * j) % F.n2());
    return out;
}

} // namespace qshear
