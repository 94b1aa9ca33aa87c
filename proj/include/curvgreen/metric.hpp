#pragma once
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "curvgreen/dual.hpp"
#include "curvgreen/errors.hpp"
#include "curvgreen/tensor.hpp"

namespace curvgreen {

enum class Signature { lorentzian, riemannian };

// Flat-signature matrix: diag(1,-1,-1,-1) or identity.
Mat4 signature_matrix(Signature s);

struct SpacetimePoint {
    int chart_id = 0;
    Vec4 x{};
};

struct MetricAt {
    Mat4 g;
    Mat4 ginv;
    double det = 0;
    double sqrt_abs_det = 0;
};

// dg(r,m,n) = d_r g_{mn}; ddg(s,r,m,n) = d_s d_r g_{mn}
struct MetricDerivs {
    Mat4 g;
    Ten3 dg;
    Ten4 ddg;
};

// gamma(l,m,n) = Gamma^l_{mn}; dgamma(s,l,m,n) = d_s Gamma^l_{mn}
struct ChristoffelData {
    Ten3 gamma;
    Ten4 dgamma;
};

// Sign conventions (fixed here, used everywhere):
//   Gamma^l_{mn} = (1/2) g^{lr} (d_m g_{rn} + d_n g_{rm} - d_r g_{mn})
//   R^l_{mnr}    = d_n Gamma^l_{mr} - d_r Gamma^l_{mn}
//                  + Gamma^l_{ns} Gamma^s_{mr} - Gamma^l_{rs} Gamma^s_{mn}
//   R_{mn}       = R^l_{mln},    R = g^{mn} R_{mn}
// With these choices the round 4-sphere of radius a has R = +12/a^2 and
// R_{mn} = (3/a^2) g_{mn}.
struct CurvatureBundle {
    Ten3 christoffel;
    Ten4 riemann;  // R^l_{mnr}
    Mat4 ricci;
    double scalar = 0;
};

class MetricModel {
  public:
    virtual ~MetricModel() = default;

    virtual std::string name() const = 0;
    virtual Signature signature() const = 0;

    // Metric components with exact first/second derivatives (AD path).
    virtual M4<Dual2> components_d2(const DualPoint& x) const = 0;

    virtual Mat4 components(const Vec4& x) const;
    virtual MetricDerivs metric_derivs(const Vec4& x) const;
    virtual ChristoffelData christoffel(const Vec4& x) const;

    virtual bool in_chart(const Vec4&) const { return true; }
    virtual bool flat() const { return false; }
    // Characteristic curvature length, used to scale stencils and ladders.
    virtual double length_scale() const { return 1.0; }
    // Stable description for cache keys and result envelopes.
    virtual std::string spec_string() const = 0;
};

using MetricPtr = std::shared_ptr<const MetricModel>;

MetricAt metric_at(const MetricModel& model, const SpacetimePoint& p);
CurvatureBundle curvature_at(const MetricModel& model, const SpacetimePoint& p);

// Assembles Christoffel data from metric derivatives (generic path).
ChristoffelData christoffel_from_derivs(const MetricDerivs& md);
CurvatureBundle curvature_from_christoffel(const Mat4& g, const ChristoffelData& cd);

// Catalog ------------------------------------------------------------------

MetricPtr make_minkowski();
MetricPtr make_euclidean_flat();
// Round 4-sphere of radius a, stereographic-conformal chart:
//   g_ij = delta_ij / (1 + |u|^2/(4 a^2))^2, chart covers all but one point.
MetricPtr make_sphere_s4(double a);
// De Sitter with Hubble rate H. Riemannian mode (default) is the Euclidean
// section, i.e. the round sphere of radius 1/H in the polar-angle chart
// (exercises the generic AD path). Lorentzian mode is the conformal planar
// chart ds^2 = (H eta)^-2 (d eta^2 - dx^2), eta < 0; note R = -12 H^2 there
// under the sign conventions above.
MetricPtr make_de_sitter(double H, Signature sig = Signature::riemannian);
// Conformally flat g = Omega^2 * eta_hat with a Gaussian-bump profile
// Omega(x) = 1 + amp * exp(-|x - c|^2 / (2 w^2)).
MetricPtr make_conformally_flat(double amp, double width, const Vec4& center,
                                Signature sig = Signature::riemannian);
// User-supplied metric as a Dual2-evaluable component function.
MetricPtr make_user_metric(std::function<M4<Dual2>(const DualPoint&)> fn, Signature sig,
                           std::string label, double scale = 1.0, bool is_flat = false);

// User metric from coefficient tables on a uniform 4D grid with Lagrange
// interpolation of the given order.
struct MetricGrid {
    Vec4 origin{};
    Vec4 spacing{};
    std::array<int, 4> dims{};
    int order = 3;  // polynomial interpolation order per axis
    // components[k] has dims[0]*...*dims[3] values; k indexes the 10
    // independent (m<=n) entries in row-major (m,n) order.
    std::vector<std::vector<double>> components;
};
MetricPtr make_user_grid(MetricGrid grid, Signature sig);

// Factory from a name + parameter map (the config-file surface).
MetricPtr make_metric(const std::string& name, const std::map<std::string, double>& params);

}  // namespace curvgreen
