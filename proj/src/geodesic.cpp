#include "curvgreen/geodesic.hpp"

#include <algorithm>
#include <cmath>

namespace curvgreen {

namespace {

constexpr int kStateDim = 56;
using State = std::array<double, kStateDim>;
// Layout: x[0..3], u[4..7], then per direction a: dx(4), du(4) at 8 + 8a,
// then frame columns E^mu_A at 40 + 4A.

void geodesic_rhs(const MetricModel& model, const State& y, State& dy) {
    Vec4 x{y[0], y[1], y[2], y[3]};
    Vec4 u{y[4], y[5], y[6], y[7]};
    ChristoffelData cd = model.christoffel(x);

    // Gu(l,n) = Gamma^l_{mn} u^m
    Mat4 Gu;
    for (int l = 0; l < 4; ++l)
        for (int n = 0; n < 4; ++n) {
            double s = 0;
            for (int m = 0; m < 4; ++m) s += cd.gamma(l, m, n) * u[m];
            Gu(l, n) = s;
        }
    for (int i = 0; i < 4; ++i) dy[i] = u[i];
    for (int l = 0; l < 4; ++l) {
        double s = 0;
        for (int n = 0; n < 4; ++n) s += Gu(l, n) * u[n];
        dy[4 + l] = -s;
    }
    // dGuu(s,l) = d_s Gamma^l_{mn} u^m u^n
    Mat4 dGuu;
    for (int s = 0; s < 4; ++s)
        for (int l = 0; l < 4; ++l) {
            double acc = 0;
            for (int m = 0; m < 4; ++m)
                for (int n = 0; n < 4; ++n) acc += cd.dgamma(s, l, m, n) * u[m] * u[n];
            dGuu(s, l) = acc;
        }
    for (int a = 0; a < 4; ++a) {
        const double* dx = &y[8 + 8 * a];
        const double* du = dx + 4;
        double* ddx = &dy[8 + 8 * a];
        double* ddu = ddx + 4;
        for (int i = 0; i < 4; ++i) ddx[i] = du[i];
        for (int l = 0; l < 4; ++l) {
            double s = 0;
            for (int r = 0; r < 4; ++r) s += dGuu(r, l) * dx[r];
            for (int n = 0; n < 4; ++n) s += 2.0 * Gu(l, n) * du[n];
            ddu[l] = -s;
        }
    }
    for (int A = 0; A < 4; ++A) {
        const double* E = &y[40 + 4 * A];
        double* dE = &dy[40 + 4 * A];
        for (int l = 0; l < 4; ++l) {
            double s = 0;
            for (int n = 0; n < 4; ++n) s += Gu(l, n) * E[n];
            dE[l] = -s;
        }
    }
}

// One fixed step of the 5th-order Dormand-Prince solution (6 stages).
void dp5_step(const MetricModel& model, State& y, double h) {
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    State k1, k2, k3, k4, k5, k6, t;
    geodesic_rhs(model, y, k1);
    for (int i = 0; i < kStateDim; ++i) t[i] = y[i] + h * a21 * k1[i];
    geodesic_rhs(model, t, k2);
    for (int i = 0; i < kStateDim; ++i) t[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    geodesic_rhs(model, t, k3);
    for (int i = 0; i < kStateDim; ++i)
        t[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    geodesic_rhs(model, t, k4);
    for (int i = 0; i < kStateDim; ++i)
        t[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    geodesic_rhs(model, t, k5);
    for (int i = 0; i < kStateDim; ++i)
        t[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    geodesic_rhs(model, t, k6);
    for (int i = 0; i < kStateDim; ++i)
        y[i] += h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
}

State initial_state(const Vec4& base, const Vec4& w) {
    State y{};
    for (int i = 0; i < 4; ++i) y[i] = base[i];
    for (int i = 0; i < 4; ++i) y[4 + i] = w[i];
    for (int a = 0; a < 4; ++a) y[8 + 8 * a + 4 + a] = 1.0;  // du_a(0) = e_a
    for (int A = 0; A < 4; ++A) y[40 + 4 * A + A] = 1.0;     // E(0) = I
    return y;
}

RayPoint extract(const State& y, double lambda) {
    RayPoint p;
    p.lambda = lambda;
    for (int i = 0; i < 4; ++i) p.x[i] = y[i];
    for (int i = 0; i < 4; ++i) p.u[i] = y[4 + i];
    for (int a = 0; a < 4; ++a)
        for (int i = 0; i < 4; ++i) p.jac(i, a) = y[8 + 8 * a + i];
    for (int A = 0; A < 4; ++A)
        for (int i = 0; i < 4; ++i) p.frame(i, A) = y[40 + 4 * A + i];
    return p;
}

}  // namespace

std::vector<RayPoint> shoot_ray(const MetricModel& model, const Vec4& base, const Vec4& w,
                                const std::vector<double>& lambdas, const ShootOptions& opts) {
    std::vector<RayPoint> out;
    out.reserve(lambdas.size());
    if (model.flat()) {
        // Straight lines; sensitivities and frame are exact.
        for (double lam : lambdas) {
            RayPoint p;
            p.lambda = lam;
            p.x = base + lam * w;
            p.u = w;
            for (int i = 0; i < 4; ++i) p.jac(i, i) = lam;
            for (int i = 0; i < 4; ++i) p.frame(i, i) = 1.0;
            out.push_back(p);
        }
        return out;
    }
    State y = initial_state(base, w);
    double lam = 0;
    double lam_max = lambdas.empty() ? 1.0 : lambdas.back();
    for (double target : lambdas) {
        double span = target - lam;
        if (span < 0) fail(errc::validation_error, "shoot_ray lambdas must be ascending");
        if (span > 0) {
            int n = std::max(1, int(std::ceil(opts.steps * span / std::max(lam_max, 1e-300))));
            double h = span / n;
            for (int i = 0; i < n; ++i) dp5_step(model, y, h);
        }
        lam = target;
        out.push_back(extract(y, lam));
    }
    return out;
}

namespace {

// Damped Newton on the shooting map. Returns true on convergence.
bool newton_shoot(const MetricModel& model, const Vec4& base, const Vec4& target, Vec4& w,
                  const GeodesicOptions& opts, int& iters_out, RayPoint* end_out) {
    ShootOptions sh;
    sh.steps = opts.steps;
    double scale = std::max(1.0, max_abs(target - base));
    RayPoint end;
    auto shoot = [&](const Vec4& ww) {
        auto pts = shoot_ray(model, base, ww, {1.0}, sh);
        return pts[0];
    };
    end = shoot(w);
    double res = max_abs(end.x - target);
    int it = 0;
    for (; it < opts.max_iters && res > opts.tol * scale; ++it) {
        Mat4 jinv;
        if (!invert4(end.jac, jinv, 1e-12)) return false;  // conjugate-degenerate
        Vec4 r = end.x - target;
        Vec4 dw = matvec(jinv, r);
        double damp = 1.0;
        bool improved = false;
        for (int half = 0; half < 12; ++half, damp *= 0.5) {
            Vec4 wt = w - damp * dw;
            RayPoint e2 = shoot(wt);
            double r2 = max_abs(e2.x - target);
            if (r2 < res) {
                w = wt;
                end = e2;
                res = r2;
                improved = true;
                break;
            }
        }
        if (!improved) break;
    }
    iters_out = it;
    if (end_out) *end_out = end;
    return res <= opts.tol * scale;
}

}  // namespace

Vec4 solve_exp_inverse(const MetricModel& model, const Vec4& base, const Vec4& target,
                       const Vec4* hint, const GeodesicOptions& opts) {
    if (model.flat()) return target - base;
    Vec4 w = hint ? *hint : target - base;
    int iters = 0;
    if (!newton_shoot(model, base, target, w, opts, iters, nullptr))
        fail(errc::no_convergence, "geodesic shooting failed to converge");
    return w;
}

GeodesicSolution solve_geodesic(const MetricPtr& model, const SpacetimePoint& x,
                                const SpacetimePoint& xprime, const GeodesicOptions& opts) {
    if (!model->in_chart(x.x) || !model->in_chart(xprime.x))
        fail(errc::out_of_chart, "geodesic endpoint outside chart domain");
    if (x.chart_id != xprime.chart_id)
        fail(errc::validation_error, "geodesic endpoints must share a chart");

    GeodesicSolution sol;
    sol.model = model;
    sol.x = x;
    sol.xprime = xprime;
    sol.g0 = model->components(x.x);
    sol.g1 = model->components(xprime.x);
    sol.det_g0 = det4(sol.g0);
    sol.det_g1 = det4(sol.g1);

    Vec4 chord = xprime.x - x.x;
    double chord_size = max_abs(chord);
    double scale = std::max(1.0, chord_size);

    if (chord_size < 1e-14 * scale) {
        sol.coincident = true;
        sol.tangent0 = {0, 0, 0, 0};
        sol.length2 = 0;
        sol.residual = 0;
        for (int i = 0; i < 4; ++i) sol.jac_end(i, i) = 1.0;
        for (int i = 0; i < 4; ++i) sol.frame_end(i, i) = 1.0;
        sol.samples.push_back({0.0, x.x, {0, 0, 0, 0}});
        return sol;
    }

    std::vector<double> rec;
    for (int i = 1; i <= opts.record_samples; ++i)
        rec.push_back(double(i) / opts.record_samples);

    if (model->flat()) {
        sol.tangent0 = chord;
        sol.length2 = quad_form(sol.g0, chord, chord);
        sol.residual = 0;
        for (int i = 0; i < 4; ++i) sol.jac_end(i, i) = 1.0;
        for (int i = 0; i < 4; ++i) sol.frame_end(i, i) = 1.0;
        sol.samples.push_back({0.0, x.x, chord});
        for (double lam : rec) sol.samples.push_back({lam, x.x + lam * chord, chord});
        sol.all_tangents = {chord};
        return sol;
    }

    // Multistart set: the chord plus sign-alternating perturbations.
    std::vector<Vec4> starts = {chord};
    for (int k = 0; k < opts.multistart; ++k) {
        Vec4 p = chord;
        for (int i = 0; i < 4; ++i) {
            double sgn = ((k >> i) & 1) ? 1.0 : -1.0;
            p[i] += sgn * opts.perturb * chord_size;
        }
        starts.push_back(p);
    }

    std::vector<Vec4> converged;
    Vec4 best_w{};
    RayPoint best_end;
    int best_iters = 0;
    bool have = false;
    for (const Vec4& s : starts) {
        Vec4 w = s;
        int iters = 0;
        RayPoint end;
        if (!newton_shoot(*model, x.x, xprime.x, w, opts, iters, &end)) continue;
        bool dup = false;
        for (const Vec4& c : converged)
            if (max_abs(w - c) < 1e-6 * std::max(1.0, max_abs(c))) dup = true;
        if (dup) continue;
        converged.push_back(w);
        double l2 = quad_form(sol.g0, w, w);
        if (!have || std::abs(l2) < std::abs(quad_form(sol.g0, best_w, best_w)) - 1e-12) {
            best_w = w;
            best_end = end;
            best_iters = iters;
            have = true;
        }
    }
    if (!have) fail(errc::no_convergence, "geodesic shooting: no start converged");
    if (converged.size() > 1) {
        // Equal-minimal-length distinct solutions are a degenerate
        // configuration (e.g. antipodal points).
        double lbest = std::abs(quad_form(sol.g0, best_w, best_w));
        int ties = 0;
        for (const Vec4& c : converged)
            if (std::abs(std::abs(quad_form(sol.g0, c, c)) - lbest) < 1e-8 * (lbest + 1e-30)) ++ties;
        if (ties > 1)
            fail(errc::multiple_geodesics, "distinct minimal geodesics connect the points");
    }

    sol.tangent0 = best_w;
    sol.length2 = quad_form(sol.g0, best_w, best_w);
    sol.residual = max_abs(best_end.x - xprime.x);
    sol.jac_end = best_end.jac;
    sol.frame_end = best_end.frame;
    sol.newton_iters = best_iters;
    sol.multiplicity = int(converged.size());
    sol.all_tangents = converged;

    ShootOptions sh;
    sh.steps = opts.steps;
    auto pts = shoot_ray(*model, x.x, best_w, rec, sh);
    sol.samples.push_back({0.0, x.x, best_w});
    for (const auto& p : pts) {
        sol.samples.push_back({p.lambda, p.x, p.u});
        // Conjugate-point monitor: det J / lambda^4 changes sign or collapses
        // when the Van Vleck determinant diverges.
        double l4 = std::pow(p.lambda, 4);
        double dj = det4(p.jac) / l4;
        if (dj < 1e-10) fail(errc::conjugate_point, "conjugate point along the geodesic");
    }
    return sol;
}

}  // namespace curvgreen
