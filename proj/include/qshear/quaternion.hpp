#pragma once

#include <cmath>
#include <complex>
#include <ostream>

namespace qshear {

/// h = a0 + i a1 + j a2 + k a3 with Hamilton's rules ij = k = -ji.
template <typename T>
struct basic_quaternion {
    T a0{}, a1{}, a2{}, a3{};

    constexpr basic_quaternion() = default;
    constexpr basic_quaternion(T r) : a0(r) {}
    constexpr basic_quaternion(T r, T x, T y, T z) : a0(r), a1(x), a2(y), a3(z) {}

    constexpr basic_quaternion& operator+=(const basic_quaternion& o) {
        a0 += o.a0; a1 += o.a1; a2 += o.a2; a3 += o.a3;
        return *this;
    }
    constexpr basic_quaternion& operator-=(const basic_quaternion& o) {
        a0 -= o.a0; a1 -= o.a1; a2 -= o.a2; a3 -= o.a3;
        return *this;
    }
    constexpr basic_quaternion& operator*=(T s) {
        a0 *= s; a1 *= s; a2 *= s; a3 *= s;
        return *this;
    }
    constexpr bool operator==(const basic_quaternion&) const = default;
};

using Quaternion = basic_quaternion<double>;

template <typename T>
constexpr basic_quaternion<T> operator+(basic_quaternion<T> a, const basic_quaternion<T>& b) {
    return a += b;
}
template <typename T>
constexpr basic_quaternion<T> operator-(basic_quaternion<T> a, const basic_quaternion<T>& b) {
    return a -= b;
}
template <typename T>
constexpr basic_quaternion<T> operator-(const basic_quaternion<T>& a) {
    return {-a.a0, -a.a1, -a.a2, -a.a3};
}
template <typename T>
constexpr basic_quaternion<T> operator*(basic_quaternion<T> a, T s) {
    return a *= s;
}
template <typename T>
constexpr basic_quaternion<T> operator*(T s, basic_quaternion<T> a) {
    return a *= s;
}

/// Hamilton product, component form.
template <typename T>
constexpr basic_quaternion<T> qmul(const basic_quaternion<T>& p, const basic_quaternion<T>& q) {
    return {
        p.a0 * q.a0 - p.a1 * q.a1 - p.a2 * q.a2 - p.a3 * q.a3,
        p.a0 * q.a1 + p.a1 * q.a0 + p.a2 * q.a3 - p.a3 * q.a2,
        p.a0 * q.a2 - p.a1 * q.a3 + p.a2 * q.a0 + p.a3 * q.a1,
        p.a0 * q.a3 + p.a1 * q.a2 - p.a2 * q.a1 + p.a3 * q.a0,
    };
}

template <typename T>
constexpr basic_quaternion<T> operator*(const basic_quaternion<T>& p, const basic_quaternion<T>& q) {
    return qmul(p, q);
}

template <typename T>
constexpr basic_quaternion<T> qconj(const basic_quaternion<T>& h) {
    return {h.a0, -h.a1, -h.a2, -h.a3};
}

template <typename T>
constexpr T qnorm2(const basic_quaternion<T>& h) {
    return h.a0 * h.a0 + h.a1 * h.a1 + h.a2 * h.a2 + h.a3 * h.a3;
}

/// Euclidean norm sqrt(h conj(h)).
template <typename T>
T qnorm(const basic_quaternion<T>& h) {
    return std::sqrt(qnorm2(h));
}

/// <h1, h2> = h1 conj(h2).
template <typename T>
constexpr basic_quaternion<T> qinner(const basic_quaternion<T>& h1, const basic_quaternion<T>& h2) {
    return qmul(h1, qconj(h2));
}

inline constexpr Quaternion qi{0.0, 1.0, 0.0, 0.0};
inline constexpr Quaternion qj{0.0, 0.0, 1.0, 0.0};
inline constexpr Quaternion qk{0.0, 0.0, 0.0, 1.0};

/// h = u + j v with u = a0 + i a1, v = a2 - i a3.
template <typename T>
struct basic_symplectic_pair {
    std::complex<T> u, v;
    constexpr bool operator==(const basic_symplectic_pair&) const = default;
};

using SymplecticPair = basic_symplectic_pair<double>;

template <typename T>
constexpr basic_symplectic_pair<T> symplectic_split(const basic_quaternion<T>& h) {
    return {{h.a0, h.a1}, {h.a2, -h.a3}};
}

template <typename T>
constexpr basic_quaternion<T> recompose(const std::complex<T>& u, const std::complex<T>& v) {
    return {u.real(), u.imag(), v.real(), -v.imag()};
}

template <typename T>
constexpr basic_quaternion<T> recompose(const basic_symplectic_pair<T>& p) {
    return recompose(p.u, p.v);
}

/// Embeds an i-complex number: z = x + i y.
template <typename T>
constexpr basic_quaternion<T> from_complex(const std::complex<T>& z) {
    return {z.real(), z.imag(), T{}, T{}};
}

/// h z for i-complex z, via the split: (u + jv) z = u z + j (v z).
template <typename T>
constexpr basic_quaternion<T> mul_right(const basic_quaternion<T>& h, const std::complex<T>& z) {
    auto p = symplectic_split(h);
    return recompose(p.u * z, p.v * z);
}

template <typename T>
std::ostream& operator<<(std::ostream& os, const basic_quaternion<T>& h) {
    return os << '(' << h.a0 << ", " << h.a1 << ", " << h.a2 << ", " << h.a3 << ')';
}

} // namespace qshear
