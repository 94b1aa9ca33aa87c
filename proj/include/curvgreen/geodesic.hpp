#pragma once
#include <vector>

#include "curvgreen/metric.hpp"

namespace curvgreen {

// State of one geodesic ray integrated from a base point: position, tangent,
// velocity-sensitivity Jacobian J = dx/dw (w = initial tangent), and the
// parallel frame E (columns are the base-point coordinate basis vectors
// transported along the ray).
struct RayPoint {
    double lambda = 0;
    Vec4 x{};
    Vec4 u{};
    Mat4 jac;    // dx(lambda)/dw
    Mat4 frame;  // E(lambda), E(0) = identity
};

struct ShootOptions {
    int steps = 128;  // fixed integration steps over [0, lambda_end]
};

// Integrates the geodesic + sensitivity + frame system from `base` with
// initial tangent `w`, recording the state at each requested lambda
// (ascending, in (0, 1]).
std::vector<RayPoint> shoot_ray(const MetricModel& model, const Vec4& base, const Vec4& w,
                                const std::vector<double>& lambdas, const ShootOptions& opts = {});

struct GeodesicOptions {
    double tol = 1e-11;       // Newton residual tolerance (chart coordinates)
    int max_iters = 40;
    int multistart = 8;       // perturbed-chord starts beyond the chord itself
    double perturb = 0.15;    // relative size of chord perturbations
    int steps = 128;
    int record_samples = 17;  // lambda samples stored on the solution
};

struct GeodesicSample {
    double lambda = 0;
    Vec4 x{};
    Vec4 u{};
};

// Two-point geodesic, affine parameter lambda in [0,1], lambda = 0 at x and
// lambda = 1 at xprime. tangent0 = dx/dlambda at x.
struct GeodesicSolution {
    MetricPtr model;
    SpacetimePoint x, xprime;
    Vec4 tangent0{};
    double length2 = 0;  // g(tangent0, tangent0); signed in Lorentzian signature
    double residual = 0;
    std::vector<GeodesicSample> samples;
    Mat4 jac_end;    // dy(1)/dtangent0
    Mat4 frame_end;  // parallel frame at xprime
    Mat4 g0, g1;     // metric at x and xprime
    double det_g0 = 0, det_g1 = 0;
    int multiplicity = 1;
    std::vector<Vec4> all_tangents;  // distinct converged tangents (diagnostics)
    int newton_iters = 0;
    bool coincident = false;
};

GeodesicSolution solve_geodesic(const MetricPtr& model, const SpacetimePoint& x,
                                const SpacetimePoint& xprime, const GeodesicOptions& opts = {});

// Solves for the initial tangent only (no bookkeeping): w with
// exp_base(w) = target. Used by the fan engine and endpoint stencils.
// `hint` warm-starts Newton (pass nullptr for a chord start).
Vec4 solve_exp_inverse(const MetricModel& model, const Vec4& base, const Vec4& target,
                       const Vec4* hint, const GeodesicOptions& opts = {});

}  // namespace curvgreen
