#pragma once
#include <functional>
#include <utility>
#include <vector>

#include "curvgreen/geodesic.hpp"

namespace curvgreen {

enum class PointTag { x, xprime };
enum class Variance { up, down };

struct Slot {
    PointTag at = PointTag::x;
    Variance var = Variance::down;
};

// Two-point tensor with index slots split between x and x'. Components are a
// dense array over 4^rank entries, slow index first.
class BiTensor {
  public:
    BiTensor() = default;
    BiTensor(SpacetimePoint x, SpacetimePoint xp, std::vector<Slot> slots)
        : x_(x), xp_(xp), slots_(std::move(slots)) {
        std::size_t n = 1;
        for (std::size_t i = 0; i < slots_.size(); ++i) n *= 4;
        comp_.assign(n, 0.0);
    }

    int rank() const { return int(slots_.size()); }
    const std::vector<Slot>& slots() const { return slots_; }
    const SpacetimePoint& base_x() const { return x_; }
    const SpacetimePoint& base_xprime() const { return xp_; }

    double& operator()(int i, int j) { return comp_[4 * i + j]; }
    double operator()(int i, int j) const { return comp_[4 * i + j]; }
    double& operator()(int i, int j, int k, int l) { return comp_[64 * i + 16 * j + 4 * k + l]; }
    double operator()(int i, int j, int k, int l) const {
        return comp_[64 * i + 16 * j + 4 * k + l];
    }
    std::vector<double>& data() { return comp_; }
    const std::vector<double>& data() const { return comp_; }

    Mat4 as_mat4() const {
        Mat4 m;
        for (int i = 0; i < 16; ++i) m.a[i] = comp_[i];
        return m;
    }
    static BiTensor from_mat4(const SpacetimePoint& x, const SpacetimePoint& xp,
                              std::vector<Slot> slots, const Mat4& m) {
        BiTensor t(x, xp, std::move(slots));
        for (int i = 0; i < 16; ++i) t.comp_[i] = m.a[i];
        return t;
    }

  private:
    SpacetimePoint x_, xp_;
    std::vector<Slot> slots_;
    std::vector<double> comp_;
};

inline std::vector<Slot> slots_dd_xxp() {
    return {{PointTag::x, Variance::down}, {PointTag::xprime, Variance::down}};
}

struct BiScalarPack {
    double sigma = 0;
    Vec4 sigma_grad_x{};   // sigma_{;mu} at x (lower index)
    Vec4 sigma_grad_xp{};  // sigma_{;mu'} at x' (lower index)
    BiTensor sigma_mixed;  // sigma_{;mu nu'}
    double vanvleck = 1;
    double sqrt_vanvleck = 1;
};

// sigma and its first derivatives from a solved geodesic.
BiScalarPack world_function(const GeodesicSolution& sol);

struct StencilOptions {
    double h0 = 0;  // 0 -> chosen from separation and length scale
    int rungs = 3;
};

// Mixed second derivative sigma_{;mu nu'} by endpoint-displacement stencils of
// the boundary-value problem (the primary route for this operation).
BiTensor sigma_mixed(const GeodesicSolution& sol, const StencilOptions& opts = {});

// Same object from the exponential-map sensitivity Jacobian:
// sigma_{;mu nu'} = -g(x) J^{-1}. Exact up to ODE tolerance; used on hot
// paths and as a cross-check of the stencil route.
BiTensor sigma_mixed_sensitivity(const GeodesicSolution& sol);

// Van Vleck determinant: Delta = det(sigma_{;mu nu'}) / (sgn sqrt|g| sqrt|g'|)
// with the sign fixed so Delta -> 1 at coincidence. Returns (Delta, sqrt).
std::pair<double, double> van_vleck(const GeodesicSolution& sol);

// Parallel displacement bivector g_{mu nu'}; transports vectors at x' to x.
BiTensor parallel_propagator(const GeodesicSolution& sol);

struct CoincidenceResult {
    BiTensor limit;
    double error = 0;
};

// Richardson extrapolation of a bitensor-valued function of separation h on
// the ladder h0, h0/2, ... assuming an even-power error model.
CoincidenceResult coincidence_extrapolate(const std::function<BiTensor(double)>& field, double h0,
                                          int depth);

}  // namespace curvgreen
