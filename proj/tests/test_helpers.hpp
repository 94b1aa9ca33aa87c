#pragma once
#include <array>
#include <cmath>

#include "curvgreen/metric.hpp"

// Shared closed-form oracles for the round 4-sphere in the
// stereographic-conformal chart.
namespace sphere_oracle {

inline std::array<double, 5> embed(const curvgreen::Vec4& u, double a) {
    double rho2 = curvgreen::dot(u, u) / (4 * a * a);
    std::array<double, 5> X;
    for (int i = 0; i < 4; ++i) X[i] = u[i] / (1 + rho2);
    X[4] = a * (1 - rho2) / (1 + rho2);
    return X;
}

// Great-circle angle between two chart points.
inline double angle(const curvgreen::Vec4& u, const curvgreen::Vec4& v, double a) {
    auto X = embed(u, a), Y = embed(v, a);
    double d = 0;
    for (int i = 0; i < 5; ++i) d += X[i] * Y[i];
    double c = d / (a * a);
    c = std::max(-1.0, std::min(1.0, c));
    return std::acos(c);
}

inline double geodesic_distance(const curvgreen::Vec4& u, const curvgreen::Vec4& v, double a) {
    return a * angle(u, v, a);
}

// Van Vleck determinant on S^4: (theta / sin theta)^3.
inline double van_vleck(double theta) {
    if (theta == 0) return 1.0;
    double r = theta / std::sin(theta);
    return r * r * r;
}

// Chart coordinates of the antipode of u.
inline curvgreen::Vec4 antipode(const curvgreen::Vec4& u, double a) {
    double r2 = curvgreen::dot(u, u);
    return (-4.0 * a * a / r2) * u;
}

}  // namespace sphere_oracle
