#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "curvgreen/geodesic.hpp"
#include "test_helpers.hpp"

using namespace curvgreen;

TEST_CASE("flat space geodesics are straight lines") {
    auto m = make_minkowski();
    SpacetimePoint x{0, {0.1, 0.2, 0.3, 0.4}};
    Vec4 v{2.0, 0.5, -0.3, 1.1};
    SpacetimePoint xp{0, x.x + v};
    auto sol = solve_geodesic(m, x, xp);
    CHECK(max_abs(sol.tangent0 - v) == 0.0);
    Mat4 eta = signature_matrix(Signature::lorentzian);
    CHECK(sol.length2 == doctest::Approx(quad_form(eta, v, v)).epsilon(1e-14));
    CHECK(sol.residual == 0.0);
    CHECK(sol.samples.back().x[0] == doctest::Approx(xp.x[0]));
}

TEST_CASE("sphere great circle at angle 0.3") {
    auto m = make_sphere_s4(1.0);
    SpacetimePoint x{0, {0.05, -0.1, 0.2, 0.0}};
    // Move along a chart direction far enough that the sphere angle is ~0.3,
    // then verify length against the embedding closed form.
    SpacetimePoint xp{0, {0.25, 0.12, -0.05, 0.14}};
    auto sol = solve_geodesic(m, x, xp);
    double theta = sphere_oracle::angle(x.x, xp.x, 1.0);
    CHECK(theta > 0.1);
    CHECK(std::sqrt(sol.length2) == doctest::Approx(theta).epsilon(1e-10));
    CHECK(sol.residual < 1e-10);

    // endpoints reproduced
    CHECK(max_abs(sol.samples.back().x - xp.x) < 1e-10);

    // tangent norm conserved along the path
    double n0 = quad_form(m->components(sol.samples.front().x), sol.samples.front().u,
                          sol.samples.front().u);
    for (const auto& s : sol.samples) {
        double n = quad_form(m->components(s.x), s.u, s.u);
        CHECK(n == doctest::Approx(n0).epsilon(1e-9));
    }
}

TEST_CASE("sphere distances across separations and radii") {
    for (double a : {1.0, 2.0}) {
        auto m = make_sphere_s4(a);
        std::mt19937_64 rng(7u);
        std::uniform_real_distribution<double> u(-0.6 * a, 0.6 * a);
        for (int t = 0; t < 8; ++t) {
            SpacetimePoint x{0, {u(rng), u(rng), u(rng), u(rng)}};
            SpacetimePoint xp{0, {u(rng), u(rng), u(rng), u(rng)}};
            double d = sphere_oracle::geodesic_distance(x.x, xp.x, a);
            if (d < 1e-3) continue;
            auto sol = solve_geodesic(m, x, xp);
            CHECK(std::sqrt(sol.length2) == doctest::Approx(d).epsilon(1e-9));
        }
    }
}

TEST_CASE("antipodal points are degenerate") {
    auto m = make_sphere_s4(1.0);
    Vec4 u{0.7, 0.1, -0.2, 0.3};
    Vec4 v = sphere_oracle::antipode(u, 1.0);
    bool threw = false;
    try {
        solve_geodesic(m, SpacetimePoint{0, u}, SpacetimePoint{0, v});
    } catch (const Error& e) {
        threw = true;
        CHECK((e.code() == errc::multiple_geodesics || e.code() == errc::conjugate_point ||
               e.code() == errc::no_convergence));
        CHECK((e.code() == errc::multiple_geodesics || e.code() == errc::conjugate_point));
    }
    CHECK(threw);
}

TEST_CASE("coincident points give the trivial solution") {
    auto m = make_sphere_s4(1.0);
    SpacetimePoint x{0, {0.2, 0.1, 0.0, -0.3}};
    auto sol = solve_geodesic(m, x, x);
    CHECK(sol.coincident);
    CHECK(sol.length2 == 0.0);
    CHECK(max_abs(sol.tangent0) == 0.0);
}

TEST_CASE("exp-inverse warm start matches cold start") {
    auto m = make_sphere_s4(1.0);
    Vec4 base{0.1, 0.0, -0.2, 0.3};
    Vec4 target{0.4, 0.2, 0.1, 0.1};
    Vec4 cold = solve_exp_inverse(*m, base, target, nullptr);
    Vec4 hint = cold + Vec4{1e-3, -2e-3, 0.5e-3, 0.0};
    Vec4 warm = solve_exp_inverse(*m, base, target, &hint);
    CHECK(max_abs(cold - warm) < 1e-9);
}

TEST_CASE("de sitter lorentzian geodesic endpoints") {
    auto m = make_de_sitter(0.5, Signature::lorentzian);
    SpacetimePoint x{0, {-2.0, 0.1, 0.0, 0.2}};
    SpacetimePoint xp{0, {-1.8, 0.4, 0.1, 0.0}};
    auto sol = solve_geodesic(m, x, xp);
    CHECK(sol.residual < 1e-9);
    CHECK(max_abs(sol.samples.back().x - xp.x) < 1e-9);
}
