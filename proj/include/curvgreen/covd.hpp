#pragma once
#include <functional>
#include <vector>

#include "curvgreen/bitensor.hpp"
#include "curvgreen/metric.hpp"

namespace curvgreen {

// A sampled tensor field: components (dense, 4^rank, ambient chart) as a
// function of the unprimed point. Primed slots of a bitensor are inert and
// should simply be treated as extra component copies by the caller.
using SampledField = std::function<std::vector<double>(const Vec4&)>;

struct CovDerivOptions {
    double h0 = 0;   // 0 -> from model length scale
    int rungs = 3;   // Richardson rungs of step halving
};

struct CovDerivResult {
    // New derivative indices are appended last: T_{...;a} then T_{...;ab}.
    std::vector<double> value;
    double error = 0;
};

// Covariant derivative of a sampled field at x. `variances` lists the
// variance of each active (unprimed) slot; inert slots get Variance-free
// treatment by passing them as part of the component block (see above).
// order 1: T_{...;a}; order 2: T_{...;ab} = (T_{...;a})_{;b}.
CovDerivResult covariant_derivative(const MetricModel& model, const SampledField& field,
                                    const std::vector<Variance>& variances, const Vec4& x,
                                    int order, const CovDerivOptions& opts = {});

// Covariant Hessian of a scalar field, assembled directly from second partial
// differences (cheaper than the nested route for expensive samplers):
// F_{;ab} = d_a d_b F - Gamma^c_{ab} d_c F.
struct ScalarHessian {
    double value = 0;
    Vec4 grad{};      // partial derivatives
    Vec4 cov_grad{};  // = grad for a scalar
    Mat4 hess;        // covariant Hessian
    double error = 0;
};
ScalarHessian scalar_cov_hessian(const MetricModel& model,
                                 const std::function<double(const Vec4&)>& f, const Vec4& x,
                                 const CovDerivOptions& opts = {});

}  // namespace curvgreen
