#include "dbar/cauchy1d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "dbar/error.hpp"
#include "dbar/gauss_legendre.hpp"

namespace dbar {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
const cplx kTwoPiI(0.0, kTwoPi);

struct Panel {
    double a, b;
};

// Recursively split [a, b] until every panel is short compared with its
// distance to the nearest focus.
void grade_panels(const JordanCurve& c, double a, double b, std::span<const cplx> foci, const CauchyConfig& cfg,
                  int depth, std::vector<Panel>& out) {
    double m = 0.5 * (a + b);
    double len = std::abs(c.velocity(m)) * (b - a);
    double d = std::numeric_limits<double>::infinity();
    cplx pm = c.position(m);
    for (cplx f : foci) d = std::min(d, std::abs(pm - f));
    if (len > cfg.panel_ratio * d && depth < cfg.panel_max_depth) {
        grade_panels(c, a, m, foci, cfg, depth + 1, out);
        grade_panels(c, m, b, foci, cfg, depth + 1, out);
    } else {
        out.push_back({a, b});
    }
}

}  // namespace

cplx LinearFunctional::apply(const std::function<cplx(cplx)>& f) const {
    cplx acc = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (weights[i] == cplx(0.0)) continue;
        cplx v = f(nodes[i]);
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw NumericalError("integrand is not finite at a quadrature node");
        acc += weights[i] * v;
    }
    return acc;
}

cplx LinearFunctional::total() const {
    cplx s = 0.0;
    for (cplx w : weights) s += w;
    return s;
}

CauchyOperators::CauchyOperators(PlanarDomain domain, AreaQuadrature aq, BoundaryQuadrature bq, CauchyConfig cfg)
    : domain_(std::move(domain)), aq_(std::move(aq)), bq_(std::move(bq)), cfg_(cfg) {}

CauchyOperators CauchyOperators::make_default(const PlanarDomain& domain) {
    return CauchyOperators(domain, AreaQuadrature::make_default(domain), BoundaryQuadrature(domain));
}

CauchyOperators CauchyOperators::make(const PlanarDomain& domain, int boundary_nodes, int mesh, AreaScheme scheme,
                                      CauchyConfig cfg) {
    return CauchyOperators(domain, AreaQuadrature::from_mesh(domain, mesh, scheme),
                           BoundaryQuadrature(domain, boundary_nodes), cfg);
}

void CauchyOperators::check_interior(cplx z, const char* who) const {
    PointClass c = domain_.classify(z);
    if (c == PointClass::boundary_proximal)
        throw PreconditionError(std::string(who) + ": point is within the boundary tolerance");
    if (c == PointClass::outside) throw PreconditionError(std::string(who) + ": point is outside the domain");
}

LinearFunctional CauchyOperators::S_functional(cplx z, std::span<const cplx> singular_hints) const {
    check_interior(z, "S");
    LinearFunctional L;
    double dist = domain_.boundary_distance(z);
    bool far = dist >= cfg_.far_factor * bq_.max_spacing() && singular_hints.empty();
    if (far) {
        for (const auto& c : bq_.curves())
            for (std::size_t i = 0; i < c.points.size(); ++i) {
                L.nodes.push_back(c.points[i]);
                L.weights.push_back(c.weights[i] / (kTwoPiI * (c.points[i] - z)));
            }
    } else {
        std::vector<cplx> foci{z};
        foci.insert(foci.end(), singular_hints.begin(), singular_hints.end());
        const auto& g = gauss_legendre(cfg_.panel_order);
        for (const auto& curve : domain_.curves()) {
            std::vector<Panel> panels;
            const double h = kTwoPi / cfg_.base_panels;
            for (int p = 0; p < cfg_.base_panels; ++p) grade_panels(curve, p * h, (p + 1) * h, foci, cfg_, 0, panels);
            for (const auto& pn : panels) {
                double half = 0.5 * (pn.b - pn.a);
                for (std::size_t q = 0; q < g.nodes.size(); ++q) {
                    double t = pn.a + half * (g.nodes[q] + 1.0);
                    cplx zeta = curve.position(t);
                    L.nodes.push_back(zeta);
                    L.weights.push_back(g.weights[q] * half * curve.velocity(t) / (kTwoPiI * (zeta - z)));
                }
            }
        }
    }
    // S1 = 1 inside: the centre node carries the constant part exactly
    L.nodes.push_back(z);
    L.weights.push_back(1.0 - L.total());
    return L;
}

cplx CauchyOperators::T_one(cplx z) const {
    return std::conj(z) - S_functional(z).apply([](cplx w) { return std::conj(w); });
}

LinearFunctional CauchyOperators::T_functional(cplx z) const {
    check_interior(z, "T");
    const double dist = domain_.boundary_distance(z);
    const double R = std::min(cfg_.patch_cap * domain_.diameter(), cfg_.patch_margin * dist);
    const double sigma = R / cfg_.patch_sigma_ratio;
    const double inv_s2 = 1.0 / (sigma * sigma);
    const double c = -1.0 / kPi;

    LinearFunctional L;
    L.nodes.reserve(aq_.nodes.size() + static_cast<std::size_t>(cfg_.patch_radial) * cfg_.patch_angular + 1);
    L.weights.reserve(L.nodes.capacity());
    // mesh part: kernel damped by 1 - exp(-r^2/sigma^2), smooth at z
    for (std::size_t i = 0; i < aq_.nodes.size(); ++i) {
        cplx d = aq_.nodes[i] - z;
        double r2 = std::norm(d);
        if (r2 == 0.0) continue;
        double damp = r2 * inv_s2 > 40.0 ? 1.0 : -std::expm1(-r2 * inv_s2);
        L.nodes.push_back(aq_.nodes[i]);
        L.weights.push_back(c * aq_.weights[i] * damp * std::conj(d) / r2);
    }
    // local polar patch: exp(-r^2/sigma^2) f / (zeta - z) dA = chi f e^{-i phi} drho dphi
    const auto& g = gauss_legendre(cfg_.patch_radial);
    const double dphi = kTwoPi / cfg_.patch_angular;
    for (int a = 0; a < cfg_.patch_angular; ++a) {
        double phi = (a + 0.5) * dphi;
        cplx e = std::polar(1.0, phi);
        for (int r = 0; r < cfg_.patch_radial; ++r) {
            double rho = 0.5 * R * (g.nodes[r] + 1.0);
            double chi = std::exp(-rho * rho * inv_s2);
            L.nodes.push_back(z + rho * e);
            L.weights.push_back(c * 0.5 * R * g.weights[r] * dphi * chi * std::conj(e));
        }
    }
    // singularity subtraction: T f = T(f - f(z))(z) + f(z) T1(z)
    cplx t1 = T_one(z);
    L.nodes.push_back(z);
    L.weights.push_back(t1 - L.total());
    return L;
}

LinearFunctional CauchyOperators::plemelj_functional(int curve, double theta) const {
    require(curve >= 0 && curve < static_cast<int>(domain_.curves().size()), "plemelj: curve index out of range");
    const auto& cv = domain_.curves()[curve];
    cplx t = cv.position(theta);
    LinearFunctional L;
    const int n = bq_.nodes_per_curve();
    const double h = kTwoPi / n;
    for (int k = 0; k < static_cast<int>(domain_.curves().size()); ++k) {
        const auto& ck = domain_.curves()[k];
        if (k == curve) {
            // nodes offset by half a step so none sits on t
            for (int i = 0; i < n; ++i) {
                double s = theta + (i + 0.5) * h;
                cplx zeta = ck.position(s);
                L.nodes.push_back(zeta);
                L.weights.push_back(h * ck.velocity(s) / (kTwoPiI * (zeta - t)));
            }
        } else {
            const auto& q = bq_.curves()[k];
            for (int i = 0; i < n; ++i) {
                L.nodes.push_back(q.points[i]);
                L.weights.push_back(q.weights[i] / (kTwoPiI * (q.points[i] - t)));
            }
        }
    }
    // PV \oint dzeta/(zeta - t) = pi i, plus the jump f(t)/2
    L.nodes.push_back(t);
    L.weights.push_back(1.0 - L.total());
    return L;
}

cplx CauchyOperators::T(const ScalarField1D& f, cplx z) const {
    require(static_cast<bool>(f.eval), "T: field has no evaluator");
    return T_functional(z).apply(f.eval);
}

cplx CauchyOperators::S(const ScalarField1D& f, cplx z) const {
    require(static_cast<bool>(f.eval), "S: field has no evaluator");
    return S_functional(z, f.singular_points).apply(f.eval);
}

cplx CauchyOperators::plemelj(const ScalarField1D& f, int curve, double theta) const {
    require(static_cast<bool>(f.eval), "plemelj: field has no evaluator");
    return plemelj_functional(curve, theta).apply(f.eval);
}

cplx transform_T(const PlanarDomain& domain, const ScalarField1D& f, cplx z, const AreaQuadrature& aq,
                 const BoundaryQuadrature& bq) {
    return CauchyOperators(domain, aq, bq).T(f, z);
}

cplx integral_S(const PlanarDomain& domain, const ScalarField1D& f, cplx z, const BoundaryQuadrature& bq) {
    return CauchyOperators(domain, AreaQuadrature{}, bq).S(f, z);
}

BoundaryPoint locate_boundary_point(const PlanarDomain& domain, cplx t, double tol) {
    int best = -1;
    JordanCurve::Projection bp{};
    bp.distance = std::numeric_limits<double>::infinity();
    for (int k = 0; k < static_cast<int>(domain.curves().size()); ++k) {
        auto p = domain.curves()[k].project(t);
        if (p.distance < bp.distance) {
            bp = p;
            best = k;
        }
    }
    if (!(bp.distance <= tol * std::max(1.0, domain.diameter())))
        throw PreconditionError("plemelj: point is not on the boundary");
    return {best, bp.theta};
}

cplx plemelj_boundary_value(const PlanarDomain& domain, const ScalarField1D& f, BoundaryPoint t,
                            const BoundaryQuadrature& bq) {
    return CauchyOperators(domain, AreaQuadrature{}, bq).plemelj(f, t.curve, t.theta);
}

cplx plemelj_boundary_value(const PlanarDomain& domain, const ScalarField1D& f, cplx t, const BoundaryQuadrature& bq) {
    return plemelj_boundary_value(domain, f, locate_boundary_point(domain, t), bq);
}

double cauchy_green_residual(const CauchyOperators& ops, const ScalarField1D& f, std::span<const cplx> points) {
    if (!f.dbar) throw PreconditionError("cauchy_green_residual: field has no dbar evaluator");
    ScalarField1D g;
    g.eval = f.dbar;
    double worst = 0.0;
    for (cplx z : points) {
        cplx r = f.eval(z) - ops.S(f, z) - ops.T(g, z);
        worst = std::max(worst, std::abs(r));
    }
    return worst;
}

double cauchy_green_residual(const PlanarDomain& domain, const ScalarField1D& f, std::span<const cplx> points) {
    return cauchy_green_residual(CauchyOperators::make_default(domain), f, points);
}

cplx fd_dbar(const std::function<cplx(cplx)>& g, cplx z, double h) {
    cplx dx = (g(z + h) - g(z - h)) / (2.0 * h);
    cplx dy = (g(z + cplx(0.0, h)) - g(z - cplx(0.0, h))) / (2.0 * h);
    return 0.5 * (dx + cplx(0.0, 1.0) * dy);
}

cplx fd_dz(const std::function<cplx(cplx)>& g, cplx z, double h) {
    cplx dx = (g(z + h) - g(z - h)) / (2.0 * h);
    cplx dy = (g(z + cplx(0.0, h)) - g(z - cplx(0.0, h))) / (2.0 * h);
    return 0.5 * (dx - cplx(0.0, 1.0) * dy);
}

}  // namespace dbar
