#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "curvgreen/metric.hpp"
#include "curvgreen/richardson.hpp"

using namespace curvgreen;

namespace {

std::mt19937_64 rng(20240811u);

Vec4 random_point(double box) {
    std::uniform_real_distribution<double> u(-box, box);
    return {u(rng), u(rng), u(rng), u(rng)};
}

// High-order finite-difference oracle for metric derivatives: independent of
// the Dual2 path.
Ten3 fd_dg(const MetricModel& m, const Vec4& x, double h) {
    Ten3 out;
    for (int r = 0; r < 4; ++r) {
        auto sample = [&](double step) {
            Vec4 y = x;
            y[r] += step;
            return m.components(y);
        };
        Mat4 p1 = sample(h), m1 = sample(-h), p2 = sample(2 * h), m2 = sample(-2 * h);
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b)
                out(r, a, b) =
                    (-p2(a, b) + 8 * p1(a, b) - 8 * m1(a, b) + m2(a, b)) / (12.0 * h);
    }
    return out;
}

double bianchi_violation(const Ten4& riem) {
    double worst = 0;
    for (int l = 0; l < 4; ++l)
        for (int m = 0; m < 4; ++m)
            for (int n = 0; n < 4; ++n)
                for (int r = 0; r < 4; ++r) {
                    double cyc = riem(l, m, n, r) + riem(l, n, r, m) + riem(l, r, m, n);
                    worst = std::max(worst, std::abs(cyc));
                }
    return worst;
}

double antisym_violation(const Ten4& riem) {
    double worst = 0;
    for (int l = 0; l < 4; ++l)
        for (int m = 0; m < 4; ++m)
            for (int n = 0; n < 4; ++n)
                for (int r = 0; r < 4; ++r)
                    worst = std::max(worst, std::abs(riem(l, m, n, r) + riem(l, m, r, n)));
    return worst;
}

}  // namespace

TEST_CASE("minkowski metric and curvature") {
    auto m = make_minkowski();
    SpacetimePoint p{0, {0.3, -1.2, 0.7, 2.0}};
    auto ma = metric_at(*m, p);
    CHECK(ma.g(0, 0) == doctest::Approx(1.0));
    for (int i = 1; i < 4; ++i) CHECK(ma.g(i, i) == doctest::Approx(-1.0));
    CHECK(ma.det == doctest::Approx(-1.0));
    Mat4 prod = matmul(ma.g, ma.ginv);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) CHECK(prod(i, j) == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-12));
    auto cb = curvature_at(*m, p);
    CHECK(max_abs(cb.riemann) == 0.0);
    CHECK(cb.scalar == 0.0);
}

TEST_CASE("sphere chart at origin and against the embedding") {
    double a = 1.0;
    auto m = make_sphere_s4(a);
    auto ma = metric_at(*m, SpacetimePoint{0, {0, 0, 0, 0}});
    for (int i = 0; i < 4; ++i) CHECK(ma.g(i, i) == doctest::Approx(1.0));
    CHECK(ma.det == doctest::Approx(1.0));

    // Embedding map into R^5; induced metric must match the chart components.
    auto embed = [&](const Vec4& u) {
        double r2 = dot(u, u);
        double rho2 = r2 / (4 * a * a);
        std::array<double, 5> X;
        for (int i = 0; i < 4; ++i) X[i] = u[i] / (1 + rho2);
        X[4] = a * (1 - rho2) / (1 + rho2);
        return X;
    };
    Vec4 u{0.4, -0.2, 0.9, 0.1};
    double h = 1e-5;
    Mat4 induced;
    std::array<std::array<double, 5>, 4> dX;
    for (int i = 0; i < 4; ++i) {
        Vec4 up = u, um = u;
        up[i] += h;
        um[i] -= h;
        auto Xp = embed(up), Xm = embed(um);
        for (int A = 0; A < 5; ++A) dX[i][A] = (Xp[A] - Xm[A]) / (2 * h);
    }
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            double s = 0;
            for (int A = 0; A < 5; ++A) s += dX[i][A] * dX[j][A];
            induced(i, j) = s;
        }
    Mat4 g = m->components(u);
    CHECK(max_abs_diff(g, induced) < 1e-8);
}

TEST_CASE("sphere curvature is constant curvature 12/a^2") {
    for (double a : {1.0, 2.0}) {
        auto m = make_sphere_s4(a);
        for (int trial = 0; trial < 5; ++trial) {
            SpacetimePoint p{0, random_point(0.8 * a)};
            auto cb = curvature_at(*m, p);
            Mat4 g = m->components(p.x);
            CHECK(cb.scalar == doctest::Approx(12.0 / (a * a)).epsilon(1e-10));
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j)
                    CHECK(cb.ricci(i, j) == doctest::Approx(3.0 / (a * a) * g(i, j)).epsilon(1e-9));
            // Constant-curvature identity R^l_{mnr} = (g^l... ) / a^2 via the
            // lowered form R_{lmnr} = (g_{ln} g_{mr} - g_{lr} g_{mn}) / a^2.
            for (int l = 0; l < 4; ++l)
                for (int mm = 0; mm < 4; ++mm)
                    for (int n = 0; n < 4; ++n)
                        for (int r = 0; r < 4; ++r) {
                            double lowered = 0;
                            for (int s = 0; s < 4; ++s) lowered += g(l, s) * cb.riemann(s, mm, n, r);
                            double expect = (g(l, n) * g(mm, r) - g(l, r) * g(mm, n)) / (a * a);
                            CHECK(lowered == doctest::Approx(expect).epsilon(1e-8));
                        }
            CHECK(bianchi_violation(cb.riemann) < 1e-10);
            CHECK(antisym_violation(cb.riemann) < 1e-12);
        }
    }
}

TEST_CASE("dual-number metric derivatives against finite differences") {
    auto check = [&](const MetricModel& m, const Vec4& x) {
        MetricDerivs md = m.metric_derivs(x);
        Ten3 fd = fd_dg(m, x, 1e-4);
        for (int i = 0; i < 64; ++i) CHECK(md.dg.a[i] == doctest::Approx(fd.a[i]).epsilon(1e-7));
    };
    check(*make_sphere_s4(1.0), {0.3, -0.1, 0.5, 0.2});
    check(*make_conformally_flat(0.3, 1.2, {0, 0, 0, 0}, Signature::riemannian),
          {0.4, 0.1, -0.3, 0.6});
    check(*make_de_sitter(0.5, Signature::riemannian), {1.2, 1.4, 1.1, 0.3});
}

TEST_CASE("de sitter riemannian section has R = 12 H^2") {
    double H = 0.5;
    auto m = make_de_sitter(H, Signature::riemannian);
    SpacetimePoint p{0, {1.2, 1.3, 1.5, 0.4}};
    auto cb = curvature_at(*m, p);
    Mat4 g = m->components(p.x);
    CHECK(cb.scalar == doctest::Approx(12.0 * H * H).epsilon(1e-9));
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            CHECK(cb.ricci(i, j) - 0.25 * cb.scalar * g(i, j) == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(bianchi_violation(cb.riemann) < 1e-10);
}

TEST_CASE("de sitter lorentzian chart: constant curvature, R = -12 H^2 in our conventions") {
    double H = 0.7;
    auto m = make_de_sitter(H, Signature::lorentzian);
    SpacetimePoint p{0, {-1.4, 0.2, -0.3, 0.9}};
    auto cb = curvature_at(*m, p);
    Mat4 g = m->components(p.x);
    CHECK(cb.scalar == doctest::Approx(-12.0 * H * H).epsilon(1e-9));
    double worst = 0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            worst = std::max(worst, std::abs(cb.ricci(i, j) - 0.25 * cb.scalar * g(i, j)));
    CHECK(worst < 1e-10);
    CHECK_THROWS_AS(metric_at(*m, SpacetimePoint{0, {0.5, 0, 0, 0}}), Error);  // eta >= 0
}

TEST_CASE("first bianchi and antisymmetry across the catalog") {
    std::vector<MetricPtr> cat = {
        make_sphere_s4(1.0),
        make_de_sitter(1.0, Signature::riemannian),
        make_conformally_flat(0.2, 1.0, {0.1, 0.2, -0.1, 0.0}, Signature::riemannian),
        make_conformally_flat(0.15, 1.5, {0, 0, 0, 0}, Signature::lorentzian),
    };
    for (auto& m : cat) {
        for (int trial = 0; trial < 10; ++trial) {
            Vec4 x = random_point(0.5);
            if (m->name() == "desitter") x = {1.2 + 0.3 * x[0], 1.4 + 0.3 * x[1],
                                              1.5 + 0.3 * x[2], x[3]};
            if (!m->in_chart(x)) continue;
            auto cb = curvature_at(*m, SpacetimePoint{0, x});
            CHECK(bianchi_violation(cb.riemann) < 1e-10);
            CHECK(antisym_violation(cb.riemann) < 1e-11);
            double scale = max_abs(cb.ricci);
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j)
                    CHECK(cb.ricci(i, j) == doctest::Approx(cb.ricci(j, i)).epsilon(1e-10).scale(scale + 1));
        }
    }
}

TEST_CASE("degenerate user metric raises SingularMetric") {
    auto fn = [](const DualPoint&) {
        M4<Dual2> g;
        g(0, 0) = Dual2(1.0);
        g(1, 1) = Dual2(1.0);
        g(2, 2) = Dual2(1.0);
        g(3, 3) = Dual2(0.0);  // degenerate direction
        return g;
    };
    auto m = make_user_metric(fn, Signature::riemannian, "degenerate");
    try {
        metric_at(*m, SpacetimePoint{0, {0, 0, 0, 0}});
        FAIL("expected SingularMetric");
    } catch (const Error& e) {
        CHECK(e.code() == errc::singular_metric);
    }
}

TEST_CASE("grid metric reproduces sphere curvature to interpolation accuracy") {
    double a = 1.0;
    auto exact = make_sphere_s4(a);
    MetricGrid grid;
    grid.order = 5;
    grid.dims = {13, 13, 13, 13};
    grid.spacing = {0.05, 0.05, 0.05, 0.05};
    grid.origin = {-0.3, -0.3, -0.3, -0.3};
    grid.components.assign(10, {});
    for (auto& c : grid.components)
        c.resize(std::size_t(13) * 13 * 13 * 13);
    for (int i0 = 0; i0 < 13; ++i0)
        for (int i1 = 0; i1 < 13; ++i1)
            for (int i2 = 0; i2 < 13; ++i2)
                for (int i3 = 0; i3 < 13; ++i3) {
                    Vec4 x{grid.origin[0] + grid.spacing[0] * i0,
                           grid.origin[1] + grid.spacing[1] * i1,
                           grid.origin[2] + grid.spacing[2] * i2,
                           grid.origin[3] + grid.spacing[3] * i3};
                    Mat4 g = exact->components(x);
                    std::size_t idx = ((std::size_t(i0) * 13 + i1) * 13 + i2) * 13 + i3;
                    int k = 0;
                    for (int mth = 0; mth < 4; ++mth)
                        for (int n = mth; n < 4; ++n) grid.components[k++][idx] = g(mth, n);
                }
    auto gm = make_user_grid(grid, Signature::riemannian);
    SpacetimePoint p{0, {0.02, -0.01, 0.015, 0.005}};
    auto cb = curvature_at(*gm, p);
    CHECK(cb.scalar == doctest::Approx(12.0 / (a * a)).epsilon(2e-4));
    CHECK_FALSE(gm->in_chart({5, 0, 0, 0}));
}
