#pragma once
#include <cmath>
#include <functional>
#include <vector>

#include "curvgreen/errors.hpp"

namespace curvgreen {

struct LadderResult {
    double value = 0;
    double error = 0;  // estimate from the last two extrapolants
    int rungs = 0;
};

// Richardson extrapolation of f(h) -> f(0) under an even-power error model
// f(h) = L + c1 h^2 + c2 h^4 + ... on the ladder h0, h0/2, h0/4, ...
// `depth` is the number of rungs (>= 2).
inline LadderResult richardson(const std::function<double(double)>& f, double h0, int depth,
                               bool throw_on_oscillation = false) {
    if (depth < 2) fail(errc::validation_error, "richardson needs at least 2 rungs");
    std::vector<std::vector<double>> t(depth);
    double h = h0;
    double prev_diag = 0;
    double prev_err = 0;
    LadderResult r;
    for (int i = 0; i < depth; ++i, h *= 0.5) {
        t[i].resize(i + 1);
        t[i][0] = f(h);
        double p4 = 4.0;
        for (int j = 1; j <= i; ++j, p4 *= 4.0)
            t[i][j] = (p4 * t[i][j - 1] - t[i - 1][j - 1]) / (p4 - 1.0);
        if (i > 0) {
            double err = std::abs(t[i][i] - prev_diag);
            if (i > 1 && throw_on_oscillation && err > 4.0 * prev_err && prev_err > 0 &&
                err > 1e-12 * std::abs(t[i][i]))
                fail(errc::no_convergence, "richardson ladder extrapolants oscillate");
            prev_err = err;
            r.error = err;
        }
        prev_diag = t[i][i];
    }
    r.value = prev_diag;
    r.rungs = depth;
    return r;
}

// Same ladder applied component-wise to a vector-valued sample.
struct VectorLadderResult {
    std::vector<double> value;
    double error = 0;  // max over components
};

inline VectorLadderResult richardson_vec(const std::function<std::vector<double>(double)>& f,
                                         double h0, int depth) {
    if (depth < 2) fail(errc::validation_error, "richardson needs at least 2 rungs");
    std::vector<std::vector<double>> samples;
    double h = h0;
    for (int i = 0; i < depth; ++i, h *= 0.5) samples.push_back(f(h));
    std::size_t n = samples[0].size();
    VectorLadderResult out;
    out.value.resize(n);
    for (std::size_t c = 0; c < n; ++c) {
        std::vector<std::vector<double>> t(depth);
        double prev = 0;
        for (int i = 0; i < depth; ++i) {
            t[i].resize(i + 1);
            t[i][0] = samples[i][c];
            double p4 = 4.0;
            for (int j = 1; j <= i; ++j, p4 *= 4.0)
                t[i][j] = (p4 * t[i][j - 1] - t[i - 1][j - 1]) / (p4 - 1.0);
            if (i == depth - 1) out.error = std::max(out.error, std::abs(t[i][i] - prev));
            prev = t[i][i];
        }
        out.value[c] = prev;
    }
    return out;
}

}  // namespace curvgreen
