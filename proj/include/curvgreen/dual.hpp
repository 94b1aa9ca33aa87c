#pragma once
#include <cmath>

#include "curvgreen/tensor.hpp"

// Forward-mode scalar carrying exact first and second derivatives with
// respect to the four chart coordinates. Metric families evaluated on Dual2
// coordinates yield machine-exact dg and ddg (no finite-difference error).

namespace curvgreen {

struct Dual2 {
    double v = 0;
    Vec4 g{};
    Mat4 h{};  // symmetric Hessian

    Dual2() = default;
    Dual2(double value) : v(value) {}

    static Dual2 variable(double value, int index) {
        Dual2 d(value);
        d.g[index] = 1.0;
        return d;
    }
};

inline Dual2 operator-(const Dual2& a) {
    Dual2 r;
    r.v = -a.v;
    for (int i = 0; i < 4; ++i) r.g[i] = -a.g[i];
    for (int i = 0; i < 16; ++i) r.h.a[i] = -a.h.a[i];
    return r;
}

inline Dual2 operator+(const Dual2& a, const Dual2& b) {
    Dual2 r;
    r.v = a.v + b.v;
    for (int i = 0; i < 4; ++i) r.g[i] = a.g[i] + b.g[i];
    for (int i = 0; i < 16; ++i) r.h.a[i] = a.h.a[i] + b.h.a[i];
    return r;
}
inline Dual2 operator-(const Dual2& a, const Dual2& b) { return a + (-b); }

inline Dual2 operator*(const Dual2& a, const Dual2& b) {
    Dual2 r;
    r.v = a.v * b.v;
    for (int i = 0; i < 4; ++i) r.g[i] = a.g[i] * b.v + a.v * b.g[i];
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            r.h(i, j) = a.h(i, j) * b.v + a.g[i] * b.g[j] + a.g[j] * b.g[i] + a.v * b.h(i, j);
    return r;
}

// Chain rule for f(u) with f', f'' supplied.
inline Dual2 chain(const Dual2& u, double f, double df, double ddf) {
    Dual2 r;
    r.v = f;
    for (int i = 0; i < 4; ++i) r.g[i] = df * u.g[i];
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) r.h(i, j) = df * u.h(i, j) + ddf * u.g[i] * u.g[j];
    return r;
}

inline Dual2 operator/(const Dual2& a, const Dual2& b) {
    double iv = 1.0 / b.v;
    return a * chain(b, iv, -iv * iv, 2.0 * iv * iv * iv);
}

inline Dual2 operator+(const Dual2& a, double b) { return a + Dual2(b); }
inline Dual2 operator+(double a, const Dual2& b) { return Dual2(a) + b; }
inline Dual2 operator-(const Dual2& a, double b) { return a - Dual2(b); }
inline Dual2 operator-(double a, const Dual2& b) { return Dual2(a) - b; }
inline Dual2 operator*(const Dual2& a, double b) { return a * Dual2(b); }
inline Dual2 operator*(double a, const Dual2& b) { return Dual2(a) * b; }
inline Dual2 operator/(const Dual2& a, double b) { return a * Dual2(1.0 / b); }
inline Dual2 operator/(double a, const Dual2& b) { return Dual2(a) / b; }

inline Dual2 exp(const Dual2& u) {
    double e = std::exp(u.v);
    return chain(u, e, e, e);
}
inline Dual2 log(const Dual2& u) { return chain(u, std::log(u.v), 1.0 / u.v, -1.0 / (u.v * u.v)); }
inline Dual2 sqrt(const Dual2& u) {
    double s = std::sqrt(u.v);
    return chain(u, s, 0.5 / s, -0.25 / (s * u.v));
}
inline Dual2 pow(const Dual2& u, double p) {
    double f = std::pow(u.v, p);
    return chain(u, f, p * f / u.v, p * (p - 1.0) * f / (u.v * u.v));
}
inline Dual2 sin(const Dual2& u) { return chain(u, std::sin(u.v), std::cos(u.v), -std::sin(u.v)); }
inline Dual2 cos(const Dual2& u) { return chain(u, std::cos(u.v), -std::sin(u.v), -std::cos(u.v)); }

using DualPoint = std::array<Dual2, 4>;

inline DualPoint dual_point(const Vec4& x) {
    return {Dual2::variable(x[0], 0), Dual2::variable(x[1], 1), Dual2::variable(x[2], 2),
            Dual2::variable(x[3], 3)};
}

}  // namespace curvgreen
