#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "dbar/geometry.hpp"
#include "dbar/quadrature.hpp"

namespace dbar {

struct HolderClaim {
    int k = 0;
    double alpha = 1.0;
};

struct ScalarField1D {
    std::function<cplx(cplx)> eval;
    std::function<cplx(cplx)> dbar;  // optional d/d(conj zeta)
    std::function<cplx(cplx)> dz;    // optional d/dzeta
    std::optional<HolderClaim> holder_claim;
    std::vector<cplx> singular_points;  // boundary points where eval is not smooth
};

// f -> sum_i weights[i] * f(nodes[i])
struct LinearFunctional {
    std::vector<cplx> nodes;
    std::vector<cplx> weights;

    cplx apply(const std::function<cplx(cplx)>& f) const;
    cplx total() const;
    std::size_t size() const { return nodes.size(); }
};

struct CauchyConfig {
    // local polar patch around the target for T
    int patch_radial = 16;
    int patch_angular = 32;
    double patch_cap = 0.25;          // patch radius cap, fraction of the diameter
    double patch_margin = 0.95;       // patch radius at most this fraction of the boundary distance
    double patch_sigma_ratio = 5.0;   // patch radius / Gaussian width
    // graded Gauss panels for S close to the boundary
    int panel_order = 16;
    int base_panels = 16;
    double panel_ratio = 1.0;         // panel length / distance to the nearest focus
    int panel_max_depth = 32;
    double far_factor = 5.0;          // trapezoid when distance >= far_factor * node spacing
};

// The operators T, S and the Plemelj boundary operator on one planar domain.
class CauchyOperators {
public:
    CauchyOperators(PlanarDomain domain, AreaQuadrature aq, BoundaryQuadrature bq, CauchyConfig cfg = {});
    static CauchyOperators make_default(const PlanarDomain& domain);
    static CauchyOperators make(const PlanarDomain& domain, int boundary_nodes, int mesh,
                                AreaScheme scheme = AreaScheme::polar_centered, CauchyConfig cfg = {});

    const PlanarDomain& domain() const { return domain_; }
    const AreaQuadrature& area_quadrature() const { return aq_; }
    const BoundaryQuadrature& boundary_quadrature() const { return bq_; }
    const CauchyConfig& config() const { return cfg_; }

    // Tf(z) = -(1/pi) \int_D f(zeta)/(zeta - z) dA as a functional of f.
    LinearFunctional T_functional(cplx z) const;
    // Sf(z) = (1/2 pi i) \oint f(zeta)/(zeta - z) dzeta as a functional of f.
    LinearFunctional S_functional(cplx z, std::span<const cplx> singular_hints = {}) const;
    // Phi f(t) = PV (1/2 pi i) \oint f/(zeta - t) dzeta + f(t)/2 at t = curve(theta).
    LinearFunctional plemelj_functional(int curve, double theta) const;

    // T applied to the constant 1: conj(z) - S(conj zeta)(z)
    cplx T_one(cplx z) const;

    cplx T(const ScalarField1D& f, cplx z) const;
    cplx S(const ScalarField1D& f, cplx z) const;
    cplx plemelj(const ScalarField1D& f, int curve, double theta) const;

private:
    void check_interior(cplx z, const char* who) const;

    PlanarDomain domain_;
    AreaQuadrature aq_;
    BoundaryQuadrature bq_;
    CauchyConfig cfg_;
};

struct BoundaryPoint {
    int curve = 0;
    double theta = 0.0;
};

cplx transform_T(const PlanarDomain& domain, const ScalarField1D& f, cplx z, const AreaQuadrature& aq,
                 const BoundaryQuadrature& bq);
cplx integral_S(const PlanarDomain& domain, const ScalarField1D& f, cplx z, const BoundaryQuadrature& bq);
cplx plemelj_boundary_value(const PlanarDomain& domain, const ScalarField1D& f, BoundaryPoint t,
                            const BoundaryQuadrature& bq);
// t given as a point; it must lie on a boundary curve
cplx plemelj_boundary_value(const PlanarDomain& domain, const ScalarField1D& f, cplx t, const BoundaryQuadrature& bq);
BoundaryPoint locate_boundary_point(const PlanarDomain& domain, cplx t, double tol = 1e-9);

// max over points of |f(z) - Sf(z) - T(f_zetabar)(z)|
double cauchy_green_residual(const CauchyOperators& ops, const ScalarField1D& f, std::span<const cplx> points);
double cauchy_green_residual(const PlanarDomain& domain, const ScalarField1D& f, std::span<const cplx> points);

// central-difference d/d(conj z) with step h
cplx fd_dbar(const std::function<cplx(cplx)>& g, cplx z, double h);
cplx fd_dz(const std::function<cplx(cplx)>& g, cplx z, double h);

}  // namespace dbar
