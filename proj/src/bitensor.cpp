#include "curvgreen/bitensor.hpp"

#include <cmath>

#include "curvgreen/richardson.hpp"

namespace curvgreen {

BiScalarPack world_function(const GeodesicSolution& sol) {
    BiScalarPack p;
    p.sigma = 0.5 * sol.length2;
    if (sol.coincident) {
        p.sigma_mixed = BiTensor::from_mat4(sol.x, sol.xprime, slots_dd_xxp(), -1.0 * sol.g0);
        return p;
    }
    Vec4 u_end = sol.samples.back().u;
    p.sigma_grad_x = -1.0 * matvec(sol.g0, sol.tangent0);
    p.sigma_grad_xp = matvec(sol.g1, u_end);
    return p;
}

BiTensor sigma_mixed_sensitivity(const GeodesicSolution& sol) {
    Mat4 jinv;
    if (!invert4(sol.jac_end, jinv))
        fail(errc::conjugate_point, "exponential-map Jacobian singular (conjugate point)");
    Mat4 m = -1.0 * matmul(sol.g0, jinv);
    return BiTensor::from_mat4(sol.x, sol.xprime, slots_dd_xxp(), m);
}

BiTensor sigma_mixed(const GeodesicSolution& sol, const StencilOptions& opts) {
    if (sol.coincident)
        return BiTensor::from_mat4(sol.x, sol.xprime, slots_dd_xxp(), -1.0 * sol.g0);
    const MetricModel& model = *sol.model;
    if (model.flat()) return sigma_mixed_sensitivity(sol);

    double sep = max_abs(sol.xprime.x - sol.x.x);
    double h0 = opts.h0 > 0 ? opts.h0 : std::min(0.05 * model.length_scale(), 0.25 * sep);

    Mat4 jinv;
    invert4(sol.jac_end, jinv);
    GeodesicOptions gopt;
    gopt.steps = 128;

    // sigma_{;mu}(x, x' + d) = -g(x) . w(x, x' + d)
    auto grad_at = [&](const Vec4& d) {
        Vec4 hint = sol.tangent0 + matvec(jinv, d);
        Vec4 target = sol.xprime.x + d;
        Vec4 w = solve_exp_inverse(model, sol.x.x, target, &hint, gopt);
        return -1.0 * matvec(sol.g0, w);
    };

    BiTensor out(sol.x, sol.xprime, slots_dd_xxp());
    for (int nu = 0; nu < 4; ++nu) {
        auto sample = [&](double h) {
            Vec4 dp{}, dm{};
            dp[nu] = h;
            dm[nu] = -h;
            Vec4 gp = grad_at(dp), gm = grad_at(dm);
            std::vector<double> row(4);
            for (int mu = 0; mu < 4; ++mu) row[mu] = (gp[mu] - gm[mu]) / (2.0 * h);
            return row;
        };
        VectorLadderResult r = richardson_vec(sample, h0, opts.rungs);
        for (int mu = 0; mu < 4; ++mu) out(mu, nu) = r.value[mu];
    }
    return out;
}

std::pair<double, double> van_vleck(const GeodesicSolution& sol) {
    if (sol.coincident) return {1.0, 1.0};
    double detj = det4(sol.jac_end);
    double delta = std::sqrt(std::abs(sol.det_g0) / std::abs(sol.det_g1)) / detj;
    if (detj <= 0 || delta <= 0)
        fail(errc::conjugate_point, "Van Vleck determinant not positive");
    return {delta, std::sqrt(delta)};
}

BiTensor parallel_propagator(const GeodesicSolution& sol) {
    Mat4 einv;
    if (!invert4(sol.frame_end, einv)) fail(errc::internal, "parallel frame not invertible");
    // g^mu_{nu'} = (E^-1)^mu_nu; lower the first index at x.
    Mat4 m = matmul(sol.g0, einv);
    return BiTensor::from_mat4(sol.x, sol.xprime, slots_dd_xxp(), m);
}

CoincidenceResult coincidence_extrapolate(const std::function<BiTensor(double)>& field, double h0,
                                          int depth) {
    if (depth < 2) fail(errc::validation_error, "coincidence ladder needs at least 2 rungs");
    std::vector<BiTensor> rungs;
    double h = h0;
    for (int i = 0; i < depth; ++i, h *= 0.5) rungs.push_back(field(h));
    std::size_t n = rungs[0].data().size();
    for (auto& r : rungs)
        if (r.data().size() != n) fail(errc::internal, "coincidence ladder rank mismatch");

    CoincidenceResult out;
    out.limit = rungs[0];
    double err_last = 0, err_prev = 0;
    for (std::size_t c = 0; c < n; ++c) {
        std::vector<std::vector<double>> t(depth);
        double prev = 0;
        for (int i = 0; i < depth; ++i) {
            t[i].resize(i + 1);
            t[i][0] = rungs[i].data()[c];
            double p4 = 4.0;
            for (int j = 1; j <= i; ++j, p4 *= 4.0)
                t[i][j] = (p4 * t[i][j - 1] - t[i - 1][j - 1]) / (p4 - 1.0);
            if (i == depth - 1) err_last = std::max(err_last, std::abs(t[i][i] - prev));
            if (i == depth - 2 && depth > 2) err_prev = std::max(err_prev, std::abs(t[i][i] - prev));
            prev = t[i][i];
        }
        out.limit.data()[c] = prev;
    }
    if (depth > 2 && err_last > 8.0 * err_prev && err_last > 1e-12)
        fail(errc::no_convergence, "coincidence extrapolants oscillate");
    out.error = err_last;
    return out;
}

}  // namespace curvgreen
