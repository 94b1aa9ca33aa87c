#include "curvgreen/metric.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace curvgreen {

const char* errc_name(errc c) {
    switch (c) {
        case errc::ok: return "OK";
        case errc::singular_metric: return "SINGULAR_METRIC";
        case errc::out_of_chart: return "OUT_OF_CHART";
        case errc::no_convergence: return "NO_CONVERGENCE";
        case errc::multiple_geodesics: return "MULTIPLE_GEODESICS";
        case errc::conjugate_point: return "CONJUGATE_POINT";
        case errc::stencil_out_of_domain: return "STENCIL_OUT_OF_DOMAIN";
        case errc::cap_exceeded: return "CAP_EXCEEDED";
        case errc::domain_error: return "DOMAIN_ERROR";
        case errc::truncation_overflow: return "TRUNCATION_OVERFLOW";
        case errc::null_separation: return "NULL_SEPARATION";
        case errc::interpolation_unstable: return "INTERPOLATION_UNSTABLE";
        case errc::series_missing: return "SERIES_MISSING";
        case errc::parse_error: return "PARSE_ERROR";
        case errc::validation_error: return "VALIDATION_ERROR";
        case errc::metric_not_found: return "METRIC_NOT_FOUND";
        case errc::io_error: return "IO_ERROR";
        case errc::internal: return "INTERNAL";
    }
    return "UNKNOWN";
}

Mat4 signature_matrix(Signature s) {
    Mat4 m;
    m(0, 0) = 1;
    double sp = (s == Signature::lorentzian) ? -1.0 : 1.0;
    m(1, 1) = m(2, 2) = m(3, 3) = sp;
    return m;
}

Mat4 MetricModel::components(const Vec4& x) const {
    DualPoint p{Dual2(x[0]), Dual2(x[1]), Dual2(x[2]), Dual2(x[3])};
    M4<Dual2> gd = components_d2(p);
    Mat4 g;
    for (int i = 0; i < 16; ++i) g.a[i] = gd.a[i].v;
    return g;
}

MetricDerivs MetricModel::metric_derivs(const Vec4& x) const {
    M4<Dual2> gd = components_d2(dual_point(x));
    MetricDerivs md;
    for (int m = 0; m < 4; ++m)
        for (int n = 0; n < 4; ++n) {
            const Dual2& c = gd(m, n);
            md.g(m, n) = c.v;
            for (int r = 0; r < 4; ++r) {
                md.dg(r, m, n) = c.g[r];
                for (int s = 0; s < 4; ++s) md.ddg(s, r, m, n) = c.h(s, r);
            }
        }
    return md;
}

ChristoffelData MetricModel::christoffel(const Vec4& x) const {
    return christoffel_from_derivs(metric_derivs(x));
}

ChristoffelData christoffel_from_derivs(const MetricDerivs& md) {
    Mat4 ginv;
    if (!invert4(md.g, ginv)) fail(errc::singular_metric, "metric not invertible");
    ChristoffelData cd;
    // Gamma_{r,mn} (all lower) then raise.
    Ten3 lower;
    for (int r = 0; r < 4; ++r)
        for (int m = 0; m < 4; ++m)
            for (int n = 0; n < 4; ++n)
                lower(r, m, n) = 0.5 * (md.dg(m, r, n) + md.dg(n, r, m) - md.dg(r, m, n));
    for (int l = 0; l < 4; ++l)
        for (int m = 0; m < 4; ++m)
            for (int n = 0; n < 4; ++n) {
                double s = 0;
                for (int r = 0; r < 4; ++r) s += ginv(l, r) * lower(r, m, n);
                cd.gamma(l, m, n) = s;
            }
    // d_s ginv = -ginv dg(s) ginv
    Ten3 dginv;
    for (int s = 0; s < 4; ++s) {
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) {
                double acc = 0;
                for (int c = 0; c < 4; ++c)
                    for (int d = 0; d < 4; ++d) acc += ginv(a, c) * md.dg(s, c, d) * ginv(d, b);
                dginv(s, a, b) = -acc;
            }
    }
    for (int s = 0; s < 4; ++s)
        for (int l = 0; l < 4; ++l)
            for (int m = 0; m < 4; ++m)
                for (int n = 0; n < 4; ++n) {
                    double acc = 0;
                    for (int r = 0; r < 4; ++r) {
                        acc += dginv(s, l, r) * lower(r, m, n);
                        acc += 0.5 * ginv(l, r) *
                               (md.ddg(s, m, r, n) + md.ddg(s, n, r, m) - md.ddg(s, r, m, n));
                    }
                    cd.dgamma(s, l, m, n) = acc;
                }
    return cd;
}

CurvatureBundle curvature_from_christoffel(const Mat4& g, const ChristoffelData& cd) {
    CurvatureBundle cb;
    cb.christoffel = cd.gamma;
    for (int l = 0; l < 4; ++l)
        for (int m = 0; m < 4; ++m)
            for (int n = 0; n < 4; ++n)
                for (int r = 0; r < 4; ++r) {
                    double v = cd.dgamma(n, l, m, r) - cd.dgamma(r, l, m, n);
                    for (int s = 0; s < 4; ++s)
                        v += cd.gamma(l, n, s) * cd.gamma(s, m, r) -
                             cd.gamma(l, r, s) * cd.gamma(s, m, n);
                    cb.riemann(l, m, n, r) = v;
                }
    for (int m = 0; m < 4; ++m)
        for (int n = 0; n < 4; ++n) {
            double v = 0;
            for (int l = 0; l < 4; ++l) v += cb.riemann(l, m, l, n);
            cb.ricci(m, n) = v;
        }
    Mat4 ginv;
    invert4(g, ginv);
    double R = 0;
    for (int m = 0; m < 4; ++m)
        for (int n = 0; n < 4; ++n) R += ginv(m, n) * cb.ricci(m, n);
    cb.scalar = R;
    return cb;
}

MetricAt metric_at(const MetricModel& model, const SpacetimePoint& p) {
    if (!model.in_chart(p.x)) fail(errc::out_of_chart, "point outside chart domain");
    MetricAt r;
    r.g = model.components(p.x);
    r.det = det4(r.g);
    double scale = max_abs(r.g);
    if (std::abs(r.det) < 1e-10 * scale * scale * scale * scale)
        fail(errc::singular_metric, "metric determinant vanishes at point");
    bool want_neg = model.signature() == Signature::lorentzian;
    if (want_neg != (r.det < 0))
        fail(errc::singular_metric, "metric determinant sign inconsistent with signature");
    if (!invert4(r.g, r.ginv)) fail(errc::singular_metric, "metric not invertible");
    r.sqrt_abs_det = std::sqrt(std::abs(r.det));
    return r;
}

CurvatureBundle curvature_at(const MetricModel& model, const SpacetimePoint& p) {
    if (!model.in_chart(p.x)) fail(errc::out_of_chart, "point outside chart domain");
    MetricAt check = metric_at(model, p);  // propagates SingularMetric
    return curvature_from_christoffel(check.g, model.christoffel(p.x));
}

// --------------------------------------------------------------------------

namespace {

class FlatMetric final : public MetricModel {
  public:
    explicit FlatMetric(Signature sig) : sig_(sig), eta_(signature_matrix(sig)) {}
    std::string name() const override {
        return sig_ == Signature::lorentzian ? "minkowski" : "euclidean_flat";
    }
    Signature signature() const override { return sig_; }
    M4<Dual2> components_d2(const DualPoint&) const override {
        M4<Dual2> g;
        for (int i = 0; i < 4; ++i) g(i, i) = Dual2(eta_(i, i));
        return g;
    }
    Mat4 components(const Vec4&) const override { return eta_; }
    MetricDerivs metric_derivs(const Vec4&) const override {
        MetricDerivs md;
        md.g = eta_;
        return md;
    }
    ChristoffelData christoffel(const Vec4&) const override { return {}; }
    bool flat() const override { return true; }
    std::string spec_string() const override { return name(); }

  private:
    Signature sig_;
    Mat4 eta_;
};

// Conformal-to-constant metrics g = e^{2 phi} eta_hat; Christoffel and its
// derivative follow from phi alone.
class ConformalMetric : public MetricModel {
  public:
    explicit ConformalMetric(Signature sig) : sig_(sig), eta_(signature_matrix(sig)) {}
    Signature signature() const override { return sig_; }

    virtual Dual2 log_omega(const DualPoint& x) const = 0;

    M4<Dual2> components_d2(const DualPoint& x) const override {
        Dual2 w = exp(2.0 * log_omega(x));
        M4<Dual2> g;
        for (int i = 0; i < 4; ++i) g(i, i) = w * eta_(i, i);
        return g;
    }
    Mat4 components(const Vec4& x) const override {
        double w = std::exp(2.0 * log_omega(dual_const(x)).v);
        Mat4 g;
        for (int i = 0; i < 4; ++i) g(i, i) = w * eta_(i, i);
        return g;
    }
    MetricDerivs metric_derivs(const Vec4& x) const override {
        Dual2 phi = log_omega(dual_point(x));
        double w = std::exp(2.0 * phi.v);
        MetricDerivs md;
        for (int i = 0; i < 4; ++i) md.g(i, i) = w * eta_(i, i);
        for (int r = 0; r < 4; ++r)
            for (int m = 0; m < 4; ++m) {
                md.dg(r, m, m) = 2.0 * phi.g[r] * md.g(m, m);
                for (int s = 0; s < 4; ++s)
                    md.ddg(s, r, m, m) =
                        (2.0 * phi.h(s, r) + 4.0 * phi.g[s] * phi.g[r]) * md.g(m, m);
            }
        return md;
    }
    ChristoffelData christoffel(const Vec4& x) const override {
        Dual2 phi = log_omega(dual_point(x));
        ChristoffelData cd;
        for (int l = 0; l < 4; ++l)
            for (int m = 0; m < 4; ++m)
                for (int n = 0; n < 4; ++n) {
                    double v = 0;
                    if (l == m) v += phi.g[n];
                    if (l == n) v += phi.g[m];
                    if (m == n) v -= eta_(m, m) * phi.g[l] / eta_(l, l);
                    cd.gamma(l, m, n) = v;
                    for (int s = 0; s < 4; ++s) {
                        double dv = 0;
                        if (l == m) dv += phi.h(s, n);
                        if (l == n) dv += phi.h(s, m);
                        if (m == n) dv -= eta_(m, m) * phi.h(s, l) / eta_(l, l);
                        cd.dgamma(s, l, m, n) = dv;
                    }
                }
        return cd;
    }

  protected:
    static DualPoint dual_const(const Vec4& x) {
        return {Dual2(x[0]), Dual2(x[1]), Dual2(x[2]), Dual2(x[3])};
    }
    Signature sig_;
    Mat4 eta_;
};

class SphereS4 final : public ConformalMetric {
  public:
    explicit SphereS4(double a) : ConformalMetric(Signature::riemannian), a_(a) {}
    std::string name() const override { return "s4"; }
    Dual2 log_omega(const DualPoint& x) const override {
        Dual2 r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3];
        return -log(1.0 + r2 / (4.0 * a_ * a_));
    }
    double length_scale() const override { return a_; }
    std::string spec_string() const override {
        std::ostringstream os;
        os << "s4(a=" << a_ << ")";
        return os.str();
    }
    double radius() const { return a_; }

  private:
    double a_;
};

class DeSitterLorentzian final : public ConformalMetric {
  public:
    explicit DeSitterLorentzian(double H) : ConformalMetric(Signature::lorentzian), H_(H) {}
    std::string name() const override { return "desitter"; }
    Dual2 log_omega(const DualPoint& x) const override { return -log(-H_ * x[0]); }
    bool in_chart(const Vec4& x) const override { return x[0] < -1e-8 / H_; }
    double length_scale() const override { return 1.0 / H_; }
    std::string spec_string() const override {
        std::ostringstream os;
        os << "desitter(H=" << H_ << ",lorentzian)";
        return os.str();
    }

  private:
    double H_;
};

// Euclidean section of de Sitter: round sphere of radius 1/H in the
// polar-angle chart (chi, theta, phi, psi). Goes through the generic AD path.
class DeSitterRiemannian final : public MetricModel {
  public:
    explicit DeSitterRiemannian(double H) : H_(H) {}
    std::string name() const override { return "desitter"; }
    Signature signature() const override { return Signature::riemannian; }
    M4<Dual2> components_d2(const DualPoint& x) const override {
        double a2 = 1.0 / (H_ * H_);
        Dual2 s0 = sin(x[0]), s1 = sin(x[1]), s2 = sin(x[2]);
        M4<Dual2> g;
        g(0, 0) = Dual2(a2);
        g(1, 1) = a2 * s0 * s0;
        g(2, 2) = a2 * s0 * s0 * s1 * s1;
        g(3, 3) = a2 * s0 * s0 * s1 * s1 * s2 * s2;
        return g;
    }
    bool in_chart(const Vec4& x) const override {
        const double m = 0.02;
        const double pi = 3.14159265358979323846;
        for (int i = 0; i < 3; ++i)
            if (x[i] < m || x[i] > pi - m) return false;
        return true;
    }
    double length_scale() const override { return 1.0 / H_; }
    std::string spec_string() const override {
        std::ostringstream os;
        os << "desitter(H=" << H_ << ",riemannian)";
        return os.str();
    }

  private:
    double H_;
};

class ConformallyFlat final : public ConformalMetric {
  public:
    ConformallyFlat(double amp, double width, Vec4 center, Signature sig)
        : ConformalMetric(sig), amp_(amp), w_(width), c_(center) {}
    std::string name() const override { return "conformally_flat"; }
    Dual2 log_omega(const DualPoint& x) const override {
        Dual2 r2 = Dual2(0.0);
        for (int i = 0; i < 4; ++i) {
            Dual2 d = x[i] - c_[i];
            r2 = r2 + d * d;
        }
        return log(1.0 + amp_ * exp(-r2 / (2.0 * w_ * w_)));
    }
    double length_scale() const override { return w_; }
    std::string spec_string() const override {
        std::ostringstream os;
        os << "conformally_flat(amp=" << amp_ << ",width=" << w_ << ",center=[" << c_[0] << ","
           << c_[1] << "," << c_[2] << "," << c_[3] << "]"
           << (sig_ == Signature::lorentzian ? ",lorentzian" : "") << ")";
        return os.str();
    }

  private:
    double amp_, w_;
    Vec4 c_;
};

class UserDualMetric final : public MetricModel {
  public:
    UserDualMetric(std::function<M4<Dual2>(const DualPoint&)> fn, Signature sig, std::string label,
                   double scale, bool is_flat)
        : fn_(std::move(fn)), sig_(sig), label_(std::move(label)), scale_(scale), flat_(is_flat) {}
    std::string name() const override { return "user_defined"; }
    Signature signature() const override { return sig_; }
    M4<Dual2> components_d2(const DualPoint& x) const override { return fn_(x); }
    bool flat() const override { return flat_; }
    double length_scale() const override { return scale_; }
    std::string spec_string() const override { return "user_defined(" + label_ + ")"; }

  private:
    std::function<M4<Dual2>(const DualPoint&)> fn_;
    Signature sig_;
    std::string label_;
    double scale_;
    bool flat_;
};

class GridMetric final : public MetricModel {
  public:
    GridMetric(MetricGrid grid, Signature sig) : grid_(std::move(grid)), sig_(sig) {
        if (grid_.components.size() != 10)
            fail(errc::validation_error, "grid metric needs 10 component tables");
        std::size_t n = std::size_t(grid_.dims[0]) * grid_.dims[1] * grid_.dims[2] * grid_.dims[3];
        for (auto& c : grid_.components)
            if (c.size() != n) fail(errc::validation_error, "grid component table size mismatch");
        if (grid_.order < 1 || grid_.order > 6)
            fail(errc::validation_error, "grid interpolation order must be in [1,6]");
        for (int a = 0; a < 4; ++a)
            if (grid_.dims[a] < grid_.order + 1)
                fail(errc::validation_error, "grid too small for interpolation order");
    }
    std::string name() const override { return "user_grid"; }
    Signature signature() const override { return sig_; }

    bool in_chart(const Vec4& x) const override {
        for (int a = 0; a < 4; ++a) {
            double t = (x[a] - grid_.origin[a]) / grid_.spacing[a];
            if (t < 0 || t > grid_.dims[a] - 1) return false;
        }
        return true;
    }

    M4<Dual2> components_d2(const DualPoint& x) const override {
        int p = grid_.order;
        std::array<int, 4> base;
        std::array<std::vector<Dual2>, 4> w;
        for (int a = 0; a < 4; ++a) {
            double t = (x[a].v - grid_.origin[a]) / grid_.spacing[a];
            int b = int(std::floor(t)) - p / 2;
            b = std::clamp(b, 0, grid_.dims[a] - p - 1);
            base[a] = b;
            w[a].resize(p + 1);
            for (int j = 0; j <= p; ++j) {
                Dual2 basis(1.0);
                double xj = grid_.origin[a] + (b + j) * grid_.spacing[a];
                for (int k = 0; k <= p; ++k) {
                    if (k == j) continue;
                    double xk = grid_.origin[a] + (b + k) * grid_.spacing[a];
                    basis = basis * ((x[a] - xk) / (xj - xk));
                }
                w[a][j] = basis;
            }
        }
        std::array<Dual2, 10> comp{};
        for (int j0 = 0; j0 <= p; ++j0)
            for (int j1 = 0; j1 <= p; ++j1)
                for (int j2 = 0; j2 <= p; ++j2) {
                    Dual2 w012 = w[0][j0] * w[1][j1] * w[2][j2];
                    for (int j3 = 0; j3 <= p; ++j3) {
                        Dual2 ww = w012 * w[3][j3];
                        std::size_t idx = index(base[0] + j0, base[1] + j1, base[2] + j2,
                                                base[3] + j3);
                        for (int k = 0; k < 10; ++k)
                            comp[k] = comp[k] + grid_.components[k][idx] * ww;
                    }
                }
        M4<Dual2> g;
        int k = 0;
        for (int m = 0; m < 4; ++m)
            for (int n = m; n < 4; ++n) {
                g(m, n) = comp[k];
                g(n, m) = comp[k];
                ++k;
            }
        return g;
    }
    double length_scale() const override {
        double s = 1e300;
        for (int a = 0; a < 4; ++a) s = std::min(s, grid_.spacing[a] * (grid_.dims[a] - 1));
        return s / 4.0;
    }
    std::string spec_string() const override {
        std::ostringstream os;
        os << "user_grid(dims=" << grid_.dims[0] << "x" << grid_.dims[1] << "x" << grid_.dims[2]
           << "x" << grid_.dims[3] << ",order=" << grid_.order << ")";
        return os.str();
    }

  private:
    std::size_t index(int i0, int i1, int i2, int i3) const {
        return ((std::size_t(i0) * grid_.dims[1] + i1) * grid_.dims[2] + i2) * grid_.dims[3] + i3;
    }
    MetricGrid grid_;
    Signature sig_;
};

double get_param(const std::map<std::string, double>& p, const std::string& key, double def) {
    auto it = p.find(key);
    return it == p.end() ? def : it->second;
}

}  // namespace

MetricPtr make_minkowski() { return std::make_shared<FlatMetric>(Signature::lorentzian); }
MetricPtr make_euclidean_flat() { return std::make_shared<FlatMetric>(Signature::riemannian); }
MetricPtr make_sphere_s4(double a) {
    if (a <= 0) fail(errc::validation_error, "sphere radius must be positive");
    return std::make_shared<SphereS4>(a);
}
MetricPtr make_de_sitter(double H, Signature sig) {
    if (H <= 0) fail(errc::validation_error, "Hubble rate must be positive");
    if (sig == Signature::lorentzian) return std::make_shared<DeSitterLorentzian>(H);
    return std::make_shared<DeSitterRiemannian>(H);
}
MetricPtr make_conformally_flat(double amp, double width, const Vec4& center, Signature sig) {
    if (width <= 0) fail(errc::validation_error, "profile width must be positive");
    if (amp <= -1.0) fail(errc::validation_error, "profile amplitude must exceed -1");
    return std::make_shared<ConformallyFlat>(amp, width, center, sig);
}
MetricPtr make_user_metric(std::function<M4<Dual2>(const DualPoint&)> fn, Signature sig,
                           std::string label, double scale, bool is_flat) {
    return std::make_shared<UserDualMetric>(std::move(fn), sig, std::move(label), scale, is_flat);
}
MetricPtr make_user_grid(MetricGrid grid, Signature sig) {
    return std::make_shared<GridMetric>(std::move(grid), sig);
}

MetricPtr make_metric(const std::string& name, const std::map<std::string, double>& params) {
    if (name == "minkowski") return make_minkowski();
    if (name == "euclidean_flat" || name == "euclidean") return make_euclidean_flat();
    if (name == "s4" || name == "round_sphere_s4")
        return make_sphere_s4(get_param(params, "a", 1.0));
    if (name == "desitter" || name == "de_sitter") {
        Signature sig = get_param(params, "lorentzian", 0.0) != 0.0 ? Signature::lorentzian
                                                                    : Signature::riemannian;
        return make_de_sitter(get_param(params, "H", 1.0), sig);
    }
    if (name == "conformally_flat") {
        Vec4 c{get_param(params, "c0", 0.0), get_param(params, "c1", 0.0),
               get_param(params, "c2", 0.0), get_param(params, "c3", 0.0)};
        Signature sig = get_param(params, "lorentzian", 0.0) != 0.0 ? Signature::lorentzian
                                                                    : Signature::riemannian;
        return make_conformally_flat(get_param(params, "amp", 0.1), get_param(params, "width", 1.0),
                                     c, sig);
    }
    fail(errc::metric_not_found, "unknown metric family: " + name);
}

}  // namespace curvgreen
