#pragma once
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>

// Small fixed-size tensor algebra on a 4-dimensional manifold chart.
// Index order conventions: Ten3 is Gamma^l_{mn} stored as (l,m,n);
// Ten4 is R^l_{mnr} stored as (l,m,n,r).

namespace curvgreen {

inline constexpr int kDim = 4;

using Vec4 = std::array<double, 4>;
using cplx = std::complex<double>;

template <class T>
struct M4 {
    std::array<T, 16> a{};
    T& operator()(int i, int j) { return a[4 * i + j]; }
    const T& operator()(int i, int j) const { return a[4 * i + j]; }
};

template <class T>
struct T3 {
    std::array<T, 64> a{};
    T& operator()(int i, int j, int k) { return a[16 * i + 4 * j + k]; }
    const T& operator()(int i, int j, int k) const { return a[16 * i + 4 * j + k]; }
};

template <class T>
struct T4 {
    std::array<T, 256> a{};
    T& operator()(int i, int j, int k, int l) { return a[64 * i + 16 * j + 4 * k + l]; }
    const T& operator()(int i, int j, int k, int l) const { return a[64 * i + 16 * j + 4 * k + l]; }
};

using Mat4 = M4<double>;
using Ten3 = T3<double>;
using Ten4 = T4<double>;
using CMat4 = M4<cplx>;
using CTen4 = T4<cplx>;

template <class T>
M4<T> operator+(const M4<T>& x, const M4<T>& y) {
    M4<T> r;
    for (int i = 0; i < 16; ++i) r.a[i] = x.a[i] + y.a[i];
    return r;
}
template <class T>
M4<T> operator-(const M4<T>& x, const M4<T>& y) {
    M4<T> r;
    for (int i = 0; i < 16; ++i) r.a[i] = x.a[i] - y.a[i];
    return r;
}
template <class T, class S>
M4<T> operator*(S s, const M4<T>& x) {
    M4<T> r;
    for (int i = 0; i < 16; ++i) r.a[i] = s * x.a[i];
    return r;
}
template <class T>
T4<T> operator+(const T4<T>& x, const T4<T>& y) {
    T4<T> r;
    for (int i = 0; i < 256; ++i) r.a[i] = x.a[i] + y.a[i];
    return r;
}
template <class T>
T4<T> operator-(const T4<T>& x, const T4<T>& y) {
    T4<T> r;
    for (int i = 0; i < 256; ++i) r.a[i] = x.a[i] - y.a[i];
    return r;
}
template <class T, class S>
T4<T> operator*(S s, const T4<T>& x) {
    T4<T> r;
    for (int i = 0; i < 256; ++i) r.a[i] = s * x.a[i];
    return r;
}

inline Vec4 operator+(const Vec4& x, const Vec4& y) {
    return {x[0] + y[0], x[1] + y[1], x[2] + y[2], x[3] + y[3]};
}
inline Vec4 operator-(const Vec4& x, const Vec4& y) {
    return {x[0] - y[0], x[1] - y[1], x[2] - y[2], x[3] - y[3]};
}
inline Vec4 operator*(double s, const Vec4& x) { return {s * x[0], s * x[1], s * x[2], s * x[3]}; }

template <class T>
M4<T> matmul(const M4<T>& x, const M4<T>& y) {
    M4<T> r;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            T s{};
            for (int k = 0; k < 4; ++k) s += x(i, k) * y(k, j);
            r(i, j) = s;
        }
    return r;
}

template <class T>
M4<T> transpose(const M4<T>& x) {
    M4<T> r;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) r(i, j) = x(j, i);
    return r;
}

inline Vec4 matvec(const Mat4& m, const Vec4& v) {
    Vec4 r{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) r[i] += m(i, j) * v[j];
    return r;
}

inline double dot(const Vec4& x, const Vec4& y) {
    return x[0] * y[0] + x[1] * y[1] + x[2] * y[2] + x[3] * y[3];
}

inline double quad_form(const Mat4& g, const Vec4& u, const Vec4& v) {
    double s = 0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) s += g(i, j) * u[i] * v[j];
    return s;
}

// Determinant by cofactor expansion; exact for the sizes involved.
template <class T>
T det4(const M4<T>& m) {
    auto d3 = [&](int r0, int r1, int r2, int c0, int c1, int c2) {
        return m(r0, c0) * (m(r1, c1) * m(r2, c2) - m(r1, c2) * m(r2, c1)) -
               m(r0, c1) * (m(r1, c0) * m(r2, c2) - m(r1, c2) * m(r2, c0)) +
               m(r0, c2) * (m(r1, c0) * m(r2, c1) - m(r1, c1) * m(r2, c0));
    };
    return m(0, 0) * d3(1, 2, 3, 1, 2, 3) - m(0, 1) * d3(1, 2, 3, 0, 2, 3) +
           m(0, 2) * d3(1, 2, 3, 0, 1, 3) - m(0, 3) * d3(1, 2, 3, 0, 1, 2);
}

// Inverse via Gauss-Jordan with partial pivoting. Returns false if singular
// (pivot below tol relative to the largest entry).
template <class T>
bool invert4(const M4<T>& m, M4<T>& out, double tol = 1e-13) {
    double scale = 0;
    for (int i = 0; i < 16; ++i) scale = std::max(scale, std::abs(m.a[i]));
    if (scale == 0) return false;
    std::array<std::array<T, 8>, 4> w{};
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) w[i][j] = m(i, j);
        w[i][4 + i] = T(1);
    }
    for (int c = 0; c < 4; ++c) {
        int piv = c;
        for (int r = c + 1; r < 4; ++r)
            if (std::abs(w[r][c]) > std::abs(w[piv][c])) piv = r;
        if (std::abs(w[piv][c]) < tol * scale) return false;
        std::swap(w[piv], w[c]);
        T inv_p = T(1) / w[c][c];
        for (int j = 0; j < 8; ++j) w[c][j] = w[c][j] * inv_p;
        for (int r = 0; r < 4; ++r) {
            if (r == c) continue;
            T f = w[r][c];
            for (int j = 0; j < 8; ++j) w[r][j] = w[r][j] - f * w[c][j];
        }
    }
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) out(i, j) = w[i][4 + j];
    return true;
}

template <class T>
double max_abs(const M4<T>& m) {
    double r = 0;
    for (auto& v : m.a) r = std::max(r, std::abs(v));
    return r;
}
template <class T>
double max_abs(const T4<T>& m) {
    double r = 0;
    for (auto& v : m.a) r = std::max(r, std::abs(v));
    return r;
}
inline double max_abs(const Vec4& v) {
    double r = 0;
    for (double x : v) r = std::max(r, std::abs(x));
    return r;
}
template <class T>
double max_abs_diff(const M4<T>& x, const M4<T>& y) {
    double r = 0;
    for (int i = 0; i < 16; ++i) r = std::max(r, std::abs(x.a[i] - y.a[i]));
    return r;
}
template <class T>
double max_abs_diff(const T4<T>& x, const T4<T>& y) {
    double r = 0;
    for (int i = 0; i < 256; ++i) r = std::max(r, std::abs(x.a[i] - y.a[i]));
    return r;
}

}  // namespace curvgreen
