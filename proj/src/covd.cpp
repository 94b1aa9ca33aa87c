#include "curvgreen/covd.hpp"

#include <cmath>

#include "curvgreen/richardson.hpp"

namespace curvgreen {

namespace {

std::size_t pow4(int n) {
    std::size_t r = 1;
    for (int i = 0; i < n; ++i) r *= 4;
    return r;
}

double pick_step(const MetricModel& model, const CovDerivOptions& opts) {
    return opts.h0 > 0 ? opts.h0 : 0.02 * model.length_scale();
}

void check_in_chart(const MetricModel& model, const Vec4& x, double h) {
    for (int a = 0; a < 4; ++a)
        for (double s : {-2.0, 2.0}) {
            Vec4 y = x;
            y[a] += s * h;
            if (!model.in_chart(y))
                fail(errc::stencil_out_of_domain, "stencil leaves the chart domain");
        }
}

// One covariant derivative: partials by Richardson central differences plus
// Christoffel corrections on the active slots. New index appended last.
CovDerivResult first_derivative(const MetricModel& model, const SampledField& field,
                                const std::vector<Variance>& variances, const Vec4& x, double h0,
                                int rungs) {
    check_in_chart(model, x, h0);
    std::vector<double> center = field(x);
    std::size_t n = center.size();
    std::size_t block = pow4(int(variances.size()));
    if (variances.empty()) block = 1;
    if (n % block != 0) fail(errc::validation_error, "field size incompatible with slot list");
    std::size_t copies = n / block;  // inert (primed) multiplicity folded in front

    CovDerivResult out;
    out.value.assign(n * 4, 0.0);
    for (int a = 0; a < 4; ++a) {
        auto sample = [&](double h) {
            Vec4 xp = x, xm = x;
            xp[a] += h;
            xm[a] -= h;
            std::vector<double> fp = field(xp), fm = field(xm);
            std::vector<double> d(n);
            for (std::size_t i = 0; i < n; ++i) d[i] = (fp[i] - fm[i]) / (2.0 * h);
            return d;
        };
        VectorLadderResult r = richardson_vec(sample, h0, rungs);
        out.error = std::max(out.error, r.error);
        for (std::size_t i = 0; i < n; ++i) out.value[i * 4 + a] = r.value[i];
    }

    if (!variances.empty()) {
        ChristoffelData cd = model.christoffel(x);
        int rank = int(variances.size());
        std::vector<int> idx(rank, 0);
        std::vector<double> corrected = out.value;
        for (std::size_t c = 0; c < copies; ++c)
            for (std::size_t b = 0; b < block; ++b) {
                std::size_t rem = b;
                for (int s = rank - 1; s >= 0; --s) {
                    idx[s] = int(rem & 3);
                    rem >>= 2;
                }
                for (int a = 0; a < 4; ++a) {
                    double corr = 0;
                    for (int s = 0; s < rank; ++s) {
                        std::size_t stride = pow4(rank - 1 - s);
                        std::size_t base = b - std::size_t(idx[s]) * stride;
                        for (int cix = 0; cix < 4; ++cix) {
                            double comp = center[c * block + base + std::size_t(cix) * stride];
                            if (variances[s] == Variance::down)
                                corr -= cd.gamma(cix, a, idx[s]) * comp;
                            else
                                corr += cd.gamma(idx[s], a, cix) * comp;
                        }
                    }
                    corrected[(c * block + b) * 4 + a] += corr;
                }
            }
        out.value = corrected;
    }
    return out;
}

}  // namespace

CovDerivResult covariant_derivative(const MetricModel& model, const SampledField& field,
                                    const std::vector<Variance>& variances, const Vec4& x,
                                    int order, const CovDerivOptions& opts) {
    if (order != 1 && order != 2) fail(errc::validation_error, "derivative order must be 1 or 2");
    double h0 = pick_step(model, opts);
    if (order == 1) return first_derivative(model, field, variances, x, h0, opts.rungs);

    // order 2: differentiate the (pointwise) first derivative field.
    std::vector<Variance> inner_vars = variances;
    double inner_err = 0;
    SampledField dfield = [&](const Vec4& y) {
        CovDerivResult r = first_derivative(model, field, variances, y, h0, opts.rungs);
        inner_err = std::max(inner_err, r.error);
        return r.value;
    };
    inner_vars.push_back(Variance::down);
    CovDerivResult r = first_derivative(model, dfield, inner_vars, x, h0, opts.rungs);
    r.error = std::max(r.error, inner_err);
    return r;
}

ScalarHessian scalar_cov_hessian(const MetricModel& model,
                                 const std::function<double(const Vec4&)>& f, const Vec4& x,
                                 const CovDerivOptions& opts) {
    double h0 = pick_step(model, opts);
    check_in_chart(model, x, h0);
    ScalarHessian out;
    out.value = f(x);

    auto shift = [&](int a, double s, int b, double t) {
        Vec4 y = x;
        y[a] += s;
        if (b >= 0) y[b] += t;
        return f(y);
    };

    for (int a = 0; a < 4; ++a) {
        LadderResult g = richardson(
            [&](double h) { return (shift(a, h, -1, 0) - shift(a, -h, -1, 0)) / (2 * h); }, h0,
            opts.rungs);
        out.grad[a] = g.value;
        out.error = std::max(out.error, g.error);
        LadderResult d2 = richardson(
            [&](double h) {
                return (shift(a, h, -1, 0) - 2 * out.value + shift(a, -h, -1, 0)) / (h * h);
            },
            h0, opts.rungs);
        out.hess(a, a) = d2.value;
        out.error = std::max(out.error, d2.error);
    }
    for (int a = 0; a < 4; ++a)
        for (int b = a + 1; b < 4; ++b) {
            LadderResult d2 = richardson(
                [&](double h) {
                    return (shift(a, h, b, h) - shift(a, h, b, -h) - shift(a, -h, b, h) +
                            shift(a, -h, b, -h)) /
                           (4 * h * h);
                },
                h0, opts.rungs);
            out.hess(a, b) = d2.value;
            out.hess(b, a) = d2.value;
            out.error = std::max(out.error, d2.error);
        }
    out.cov_grad = out.grad;
    ChristoffelData cd = model.christoffel(x);
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            for (int c = 0; c < 4; ++c) out.hess(a, b) -= cd.gamma(c, a, b) * out.grad[c];
    return out;
}

}  // namespace curvgreen
