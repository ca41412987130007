#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "parallel.hpp"
#include "qft.hpp"

namespace qshear {

struct ShearParams {
    double a = 1.0;
    double s = 0.0;
    double t1 = 0.0, t2 = 0.0;
};

using Mat2 = std::array<std::array<double, 2>, 2>;

inline Mat2 matmul(const Mat2& x, const Mat2& y) {
    Mat2 r{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) r[i][j] = x[i][0] * y[0][j] + x[i][1] * y[1][j];
    return r;
}

inline double det(const Mat2& m) { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }

struct ShearMatrices {
    Mat2 A, S;
};

/// A_a = diag(a, sqrt(a)), S_s = [[1, s], [0, 1]].
inline ShearMatrices make_matrices(const ShearParams& p) {
    if (!(p.a > 0.0)) throw Error("scale a must be positive, got " + std::to_string(p.a));
    return {Mat2{{{p.a, 0.0}, {0.0, std::sqrt(p.a)}}}, Mat2{{{1.0, p.s}, {0.0, 1.0}}}};
}

/// Row vector w S_s A_a = (a w1, sqrt(a)(s w1 + w2)).
inline std::array<double, 2> warp(double w1, double w2, double a, double s) {
    return {a * w1, std::sqrt(a) * (s * w1 + w2)};
}

/// C-infinity step: 0 for x <= 0, 1 for x >= 1, nu(x) + nu(1 - x) = 1.
inline double smooth_step(double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    double p = std::exp(-1.0 / x), q = std::exp(-1.0 / (1.0 - x));
    return p / (p + q);
}

/// Raised-cosine bump on [0, 2], peak 1 at u = 1, with bump(u)^2 + bump(u + 1)^2 = 1 on [0, 1].
inline double bump(double u) {
    constexpr double h = std::numbers::pi / 2.0;
    if (u <= 0.0 || u >= 2.0) return 0.0;
    if (u <= 1.0) return std::sin(h * smooth_step(u));
    return std::cos(h * smooth_step(u - 1.0));
}

/// Band-limited classical generator psi^(w1, w2) = b(|w1|) v((w2/w1 - slope_shift)/angular_width),
/// optionally translated in space by center (phase e^{-2 pi i w.center}).
struct GeneratorSpec {
    double r0 = 1.0, r1 = 4.0;
    double angular_width = 1.0;
    double slope_shift = 0.0;
    double center1 = 0.0, center2 = 0.0;

    double radial(double w1) const {
        double r = std::abs(w1);
        if (r <= r0 || r >= r1) return 0.0;
        return bump(2.0 * std::log(r / r0) / std::log(r1 / r0));
    }

    double angular(double rho) const { return bump((rho - slope_shift) / angular_width + 1.0); }

    std::complex<double> spectrum(double w1, double w2) const {
        double b = radial(w1);
        if (b == 0.0) return 0.0;
        double v = angular(w2 / w1);
        if (v == 0.0) return 0.0;
        if (center1 == 0.0 && center2 == 0.0) return b * v;
        return b * v * std::polar(1.0, -2.0 * std::numbers::pi * (w1 * center1 + w2 * center2));
    }

    void validate() const {
        if (!(r0 > 0.0) || !(r1 > r0))
            throw Error("generator radial band must satisfy 0 < r0 < r1, got r0=" + std::to_string(r0) +
                        " r1=" + std::to_string(r1));
        if (!(angular_width > 0.0)) throw Error("generator angular width must be positive");
    }
};

/// Complex linear combination of windows; spectrum sum_k c_k psi_k^(+-w).
struct Generator {
    struct Term {
        std::complex<double> coeff;
        GeneratorSpec window;
    };
    std::vector<Term> terms;
    bool reflected = false;

    Generator() = default;
    Generator(const GeneratorSpec& g) : terms{{1.0, g}} {}

    static Generator zero() { return {}; }
    bool is_zero() const { return terms.empty(); }

    std::complex<double> spectrum(double w1, double w2) const {
        if (reflected) w1 = -w1, w2 = -w2;
        std::complex<double> acc = 0.0;
        for (const auto& t : terms) acc += t.coeff * t.window.spectrum(w1, w2);
        return acc;
    }

    /// psi_check(x) = psi(-x), spectrum psi^(-w).
    Generator reflect() const {
        Generator r = *this;
        r.reflected = !r.reflected;
        return r;
    }
};

inline Generator scaled(const Generator& g, std::complex<double> c) {
    Generator r = g;
    for (auto& t : r.terms) t.coeff *= c;
    return r;
}

inline Generator operator+(const Generator& g, const Generator& h) {
    if (g.is_zero()) return h;
    if (h.is_zero()) return g;
    if (g.reflected != h.reflected) throw Error("cannot add reflected and unreflected generators");
    Generator r = g;
    r.terms.insert(r.terms.end(), h.terms.begin(), h.terms.end());
    return r;
}

/// Scales a_m = a_max 2^{-m} and shears s_l = -S + l ds with weights w = da ds / a^3,
/// da = a ln 2 being the log-measure of the dyadic scale cell.
struct SamplingGrid {
    std::vector<double> scales, shears;
    std::vector<double> w;  // (m, l) row-major
    std::vector<double> scale_cells;
    double shear_cell = 0.0;

    std::size_t M() const { return scales.size(); }
    std::size_t L() const { return shears.size(); }
    std::size_t size() const { return M() * L(); }
    double weight(std::size_t m, std::size_t l) const { return w[m * L() + l]; }

    /// Grid from explicit nodes and weights; cells are recovered from w = da ds / a^3.
    static SamplingGrid from_nodes(std::vector<double> scales, std::vector<double> shears, std::vector<double> w) {
        if (w.size() != scales.size() * shears.size()) throw Error("sampling grid: weight count mismatch");
        SamplingGrid g;
        g.shear_cell = shears.size() > 1 ? shears[1] - shears[0] : 1.0;
        for (std::size_t m = 0; m < scales.size(); ++m) {
            double a = scales[m];
            g.scale_cells.push_back(shears.empty() ? 0.0 : w[m * shears.size()] * a * a * a / g.shear_cell);
        }
        g.scales = std::move(scales);
        g.shears = std::move(shears);
        g.w = std::move(w);
        return g;
    }

    static SamplingGrid from_cells(std::vector<double> scales, std::vector<double> cells, std::vector<double> shears,
                                   double ds) {
        SamplingGrid g;
        for (std::size_t m = 0; m < scales.size(); ++m)
            for (std::size_t l = 0; l < shears.size(); ++l)
                g.w.push_back(cells[m] * ds / (scales[m] * scales[m] * scales[m]));
        g.scales = std::move(scales);
        g.scale_cells = std::move(cells);
        g.shears = std::move(shears);
        g.shear_cell = ds;
        return g;
    }

    bool operator==(const SamplingGrid& o) const {
        return scales == o.scales && shears == o.shears && w == o.w;
    }
};

inline SamplingGrid dyadic_grid(std::size_t M, std::size_t L, double a_max, double S, double ds) {
    if (M == 0 || L == 0) throw Error("sampling grid must have M >= 1 and L >= 1");
    if (!(a_max > 0.0)) throw Error("a_max must be positive");
    if (!(ds > 0.0)) throw Error("shear spacing must be positive");
    std::vector<double> scales, cells, shears;
    for (std::size_t m = 0; m < M; ++m) {
        double a = a_max * std::exp2(-double(m));
        scales.push_back(a);
        cells.push_back(a * std::numbers::ln2);
    }
    for (std::size_t l = 0; l < L; ++l) shears.push_back(-S + double(l) * ds);
    return SamplingGrid::from_cells(scales, cells, shears, ds);
}

inline SamplingGrid default_grid() { return dyadic_grid(4, 5, 1.0, 1.0, 0.5); }

/// Splits every (a, s) cell into r x r subcells covering the same log-scale and shear range.
inline SamplingGrid refine(const SamplingGrid& g, int r) {
    if (r < 1) throw Error("refinement factor must be >= 1");
    std::vector<double> scales, cells, shears;
    for (std::size_t m = 0; m < g.M(); ++m) {
        double ratio = g.scale_cells[m] / g.scales[m];
        for (int k = 0; k < r; ++k) {
            double off = (double(k) + 0.5) / r - 0.5;
            double a = g.scales[m] * std::exp(-off * ratio);
            scales.push_back(a);
            cells.push_back(a * ratio / r);
        }
    }
    for (double s : g.shears)
        for (int k = 0; k < r; ++k) shears.push_back(s + ((double(k) + 0.5) / r - 0.5) * g.shear_cell);
    return SamplingGrid::from_cells(scales, cells, shears, g.shear_cell / r);
}

/// Samples |A_a|^{1/2} psi^(w S_s A_a) e^{-2 pi i w.t} on the frequency lattice.
inline CField atom_spectrum(const Generator& g, const ShearParams& p, std::size_t n1, std::size_t n2,
                            Extent e = {}) {
    make_matrices(p);
    CField out(n1, n2, Domain::frequency, e);
    double amp = std::pow(p.a, 0.75);
    // A reflected generator is sampled at the reflected lattice index, so that on the
    // Nyquist lines (where -N/2 == N/2) the atom of psi-check is the index-reflected atom of psi.
    auto coord = [&](int axis, std::size_t i) {
        std::size_t n = axis == 0 ? n1 : n2;
        return g.reflected ? -out.coord(axis, (n - i) % n) : out.coord(axis, i);
    };
    for (std::size_t i = 0; i < n1; ++i)
        for (std::size_t j = 0; j < n2; ++j) {
            double w1 = coord(0, i), w2 = coord(1, j);
            auto v = warp(w1, w2, p.a, p.s);
            auto z = amp * g.spectrum(v[0], v[1]);
            if (z != 0.0 && (p.t1 != 0.0 || p.t2 != 0.0))
                z *= std::polar(1.0, -2.0 * std::numbers::pi * (w1 * p.t1 + w2 * p.t2));
            out(i, j) = z;
        }
    return out;
}

inline CField atom(const Generator& g, const ShearParams& p, std::size_t n1, std::size_t n2, Extent e = {}) {
    return dft_inverse(atom_spectrum(g, p, n1, n2, e));
}

/// One coefficient slice at (a, s): inverse of |A|^{1/2} f^(w) conj(psi^(w S A)).
inline CField classical_slice(const CField& fhat, const Generator& g, double a, double s) {
    require_domain(fhat, Domain::frequency, "classical_slice");
    CField psi = atom_spectrum(g, {a, s}, fhat.n1(), fhat.n2(), fhat.extent);
    CField prod = fhat;
    for (std::size_t k = 0; k < prod.samples.size(); ++k) prod.samples[k] *= std::conj(psi.samples[k]);
    return dft_inverse(prod);
}

/// Inner-product definition <f, psi_{a,s,t}> by direct summation over the lattice.
inline std::complex<double> classical_coefficient_direct(const CField& f, const Generator& g, const ShearParams& p) {
    require_domain(f, Domain::spatial, "classical_coefficient_direct");
    CField psi = atom(g, p, f.n1(), f.n2(), f.extent);
    std::complex<double> acc = 0.0;
    for (std::size_t k = 0; k < f.samples.size(); ++k) acc += f.samples[k] * std::conj(psi.samples[k]);
    return acc * f.cell_area();
}

/// Convolution form f * conj(check psi_{a,s,0}) of one slice.
inline CField classical_slice_convolution(const CField& f, const Generator& g, double a, double s) {
    CField psi = atom(g, {a, s}, f.n1(), f.n2(), f.extent);
    CField k = reflect(psi);
    for (auto& z : k.samples.data()) z = std::conj(z);
    return cconvolve(f, k);
}

/// Coefficients indexed (m, l, n1, n2), row-major.
template <typename T>
struct BasicVolume {
    SamplingGrid grid;
    std::size_t n1 = 0, n2 = 0;
    Extent extent{};
    std::vector<T> data;

    BasicVolume() = default;
    BasicVolume(SamplingGrid g, std::size_t N1, std::size_t N2, Extent e = {})
        : grid(std::move(g)), n1(N1), n2(N2), extent(e), data(grid.size() * N1 * N2) {}

    std::size_t slice_size() const { return n1 * n2; }
    std::size_t offset(std::size_t m, std::size_t l) const { return (m * grid.L() + l) * slice_size(); }

    T& at(std::size_t m, std::size_t l, std::size_t i, std::size_t j) { return data[offset(m, l) + i * n2 + j]; }
    const T& at(std::size_t m, std::size_t l, std::size_t i, std::size_t j) const {
        return data[offset(m, l) + i * n2 + j];
    }

    BasicField<T> slice(std::size_t m, std::size_t l) const {
        BasicField<T> f(n1, n2, Domain::spatial, extent);
        std::copy_n(data.begin() + offset(m, l), slice_size(), f.samples.data().begin());
        return f;
    }

    void set_slice(std::size_t m, std::size_t l, const BasicField<T>& f) {
        std::copy(f.samples.data().begin(), f.samples.data().end(), data.begin() + offset(m, l));
    }

    bool operator==(const BasicVolume&) const = default;
};

using ClassicalVolume = BasicVolume<std::complex<double>>;

/// Classical shearlet transform over the sampling grid, computed slice by slice in frequency.
inline ClassicalVolume classical_transform(const CField& f, const Generator& g, const SamplingGrid& grid) {
    require_domain(f, Domain::spatial, "classical_transform");
    CField fhat = dft_forward(f);
    ClassicalVolume vol(grid, f.n1(), f.n2(), f.extent);
    parallel_for(grid.size(), [&](std::size_t idx) {
        std::size_t m = idx / grid.L(), l = idx % grid.L();
        vol.set_slice(m, l, classical_slice(fhat, g, grid.scales[m], grid.shears[l]));
    });
    return vol;
}

/// Frame function table Delta(w) on the lattice and its value C at a reference point.
struct FrameTable {
    Grid2<double> delta;
    Extent extent{};
    double C = 0.0;
    double max = 0.0;
    std::array<double, 2> reference{8.0, 2.0};

    /// max |Delta/C - 1| over lattice points selected by mask(i, j).
    template <typename Mask>
    double flatness_deviation(Mask&& mask) const {
        double dev = 0.0;
        for (std::size_t i = 0; i < delta.n1(); ++i)
            for (std::size_t j = 0; j < delta.n2(); ++j)
                if (mask(i, j)) dev = std::max(dev, std::abs(delta(i, j) / C - 1.0));
        return dev;
    }
};

/// Delta(w) = sum_{m,l} w_{ml} a_m^{3/2} n(w S_l A_m), for a nonnegative spectral density n.
template <typename Density>
double frame_value(const Density& density, const SamplingGrid& grid, double w1, double w2) {
    double acc = 0.0;
    for (std::size_t m = 0; m < grid.M(); ++m) {
        double a = grid.scales[m];
        double amp = std::pow(a, 1.5);
        for (std::size_t l = 0; l < grid.L(); ++l) {
            auto v = warp(w1, w2, a, grid.shears[l]);
            acc += grid.weight(m, l) * amp * density(v[0], v[1]);
        }
    }
    return acc;
}

template <typename Density>
FrameTable frame_table(const Density& density, const SamplingGrid& grid, std::size_t n1, std::size_t n2,
                       Extent e, std::array<double, 2> reference) {
    if (grid.size() == 0) throw Error("admissibility: empty sampling grid");
    FrameTable t;
    t.delta = Grid2<double>(n1, n2);
    t.extent = e;
    t.reference = reference;
    CField lattice(n1, n2, Domain::frequency, e);
    parallel_for(n1, [&](std::size_t i) {
        for (std::size_t j = 0; j < n2; ++j)
            t.delta(i, j) = frame_value(density, grid, lattice.coord(0, i), lattice.coord(1, j));
    });
    for (double d : t.delta.data()) t.max = std::max(t.max, d);
    t.C = frame_value(density, grid, reference[0], reference[1]);
    return t;
}

inline FrameTable admissibility_classical(const Generator& g, const SamplingGrid& grid, std::size_t n1,
                                          std::size_t n2, Extent e = {},
                                          std::array<double, 2> reference = {8.0, 2.0}) {
    auto density = [&](double x, double y) { return std::norm(g.spectrum(x, y)); };
    return frame_table(density, grid, n1, n2, e, reference);
}

} // namespace qshear
