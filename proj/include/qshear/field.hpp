#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "quaternion.hpp"

namespace qshear {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Domain { spatial, frequency };

inline const char* to_string(Domain d) {
    return d == Domain::spatial ? "spatial" : "frequency";
}

/// Physical side lengths of the periodic cell.
struct Extent {
    double L1 = 1.0, L2 = 1.0;
    bool operator==(const Extent&) const = default;
};

/// Row-major n1 x n2 array; index (i, j) with i along the first spatial axis.
template <typename T>
class Grid2 {
public:
    Grid2() = default;
    Grid2(std::size_t n1, std::size_t n2, T fill = T{}) : n1_(n1), n2_(n2), data_(n1 * n2, fill) {}

    std::size_t n1() const { return n1_; }
    std::size_t n2() const { return n2_; }
    std::size_t size() const { return data_.size(); }

    T& operator()(std::size_t i, std::size_t j) { return data_[i * n2_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * n2_ + j]; }
    T& operator[](std::size_t k) { return data_[k]; }
    const T& operator[](std::size_t k) const { return data_[k]; }

    std::vector<T>& data() { return data_; }
    const std::vector<T>& data() const { return data_; }

    bool same_shape(const Grid2& o) const { return n1_ == o.n1_ && n2_ == o.n2_; }
    bool operator==(const Grid2&) const = default;

private:
    std::size_t n1_ = 0, n2_ = 0;
    std::vector<T> data_;
};

/// Uniformly sampled function on the periodic cell [0,L1) x [0,L2), or its spectrum.
template <typename T>
struct BasicField {
    Grid2<T> samples;
    Domain domain = Domain::spatial;
    Extent extent{};

    BasicField() = default;
    BasicField(std::size_t n1, std::size_t n2, Domain d = Domain::spatial, Extent e = {})
        : samples(n1, n2), domain(d), extent(e) {
        if (n1 < 2 || n2 < 2 || n1 % 2 || n2 % 2)
            throw Error("field dimensions must be even and >= 2, got " + std::to_string(n1) +
                        "x" + std::to_string(n2));
        if (!(e.L1 > 0.0) || !(e.L2 > 0.0)) throw Error("field extent must be positive");
    }

    std::size_t n1() const { return samples.n1(); }
    std::size_t n2() const { return samples.n2(); }
    T& operator()(std::size_t i, std::size_t j) { return samples(i, j); }
    const T& operator()(std::size_t i, std::size_t j) const { return samples(i, j); }

    /// Quadrature weight of one sample: L1L2/(N1N2) in space, 1/(L1L2) in frequency.
    double cell_area() const {
        double a = extent.L1 * extent.L2;
        return domain == Domain::spatial ? a / double(n1() * n2()) : 1.0 / a;
    }

    /// Centered coordinate of index i along axis (0 or 1): t in [-L/2, L/2) or k/L with k in [-N/2, N/2).
    double coord(int axis, std::size_t i) const {
        std::size_t n = axis == 0 ? n1() : n2();
        double L = axis == 0 ? extent.L1 : extent.L2;
        double c = i < n / 2 ? double(i) : double(i) - double(n);
        return domain == Domain::spatial ? c * L / double(n) : c / L;
    }

    bool compatible(const BasicField& o) const {
        return samples.same_shape(o.samples) && domain == o.domain && extent == o.extent;
    }
};

using QField = BasicField<Quaternion>;
using CField = BasicField<std::complex<double>>;

template <typename T>
void require_domain(const BasicField<T>& f, Domain d, const char* op) {
    if (f.domain != d)
        throw Error(std::string(op) + ": expected " + to_string(d) + "-domain field, got " +
                    to_string(f.domain));
}

template <typename T>
void require_compatible(const BasicField<T>& f, const BasicField<T>& g, const char* op) {
    if (!f.compatible(g)) throw Error(std::string(op) + ": shape/domain/extent mismatch");
}

/// f1 and f2 of F = f1 + j f2, sample by sample.
inline std::pair<CField, CField> split_field(const QField& F) {
    CField u(F.n1(), F.n2(), F.domain, F.extent), v = u;
    for (std::size_t k = 0; k < F.samples.size(); ++k) {
        auto p = symplectic_split(F.samples[k]);
        u.samples[k] = p.u;
        v.samples[k] = p.v;
    }
    return {u, v};
}

inline QField join_field(const CField& u, const CField& v) {
    require_compatible(u, v, "join_field");
    QField F(u.n1(), u.n2(), u.domain, u.extent);
    for (std::size_t k = 0; k < F.samples.size(); ++k) F.samples[k] = recompose(u.samples[k], v.samples[k]);
    return F;
}

/// Index reflection n -> -n mod N on both axes.
template <typename T>
BasicField<T> reflect(const BasicField<T>& f) {
    BasicField<T> r = f;
    std::size_t n1 = f.n1(), n2 = f.n2();
    for (std::size_t i = 0; i < n1; ++i)
        for (std::size_t j = 0; j < n2; ++j) r(i, j) = f((n1 - i) % n1, (n2 - j) % n2);
    return r;
}

inline double max_abs_diff(const QField& a, const QField& b) {
    double m = 0.0;
    for (std::size_t k = 0; k < a.samples.size(); ++k) {
        auto d = a.samples[k] - b.samples[k];
        m = std::max({m, std::abs(d.a0), std::abs(d.a1), std::abs(d.a2), std::abs(d.a3)});
    }
    return m;
}

inline double max_abs_diff(const CField& a, const CField& b) {
    double m = 0.0;
    for (std::size_t k = 0; k < a.samples.size(); ++k)
        m = std::max(m, std::abs(a.samples[k] - b.samples[k]));
    return m;
}

/// Relative L2 distance ||a - b|| / ||b|| over samples.
inline double relative_l2(const QField& a, const QField& b) {
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < a.samples.size(); ++k) {
        num += qnorm2(a.samples[k] - b.samples[k]);
        den += qnorm2(b.samples[k]);
    }
    return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

} // namespace qshear
