#pragma once

#include <functional>
#include <vector>

#include "dbar/geometry.hpp"

namespace dbar {

inline constexpr int kDefaultBoundaryNodes = 512;

// Uniform trapezoidal rule in the curve parameter, one block per curve.
class BoundaryQuadrature {
public:
    struct Curve {
        std::vector<double> theta;
        std::vector<cplx> points;
        std::vector<cplx> weights;  // (2pi/N) * velocity(theta_i)
        double max_spacing = 0.0;   // largest distance between consecutive nodes
    };

    BoundaryQuadrature(const PlanarDomain& domain, int nodes_per_curve = kDefaultBoundaryNodes);

    int nodes_per_curve() const { return n_; }
    const std::vector<Curve>& curves() const { return curves_; }
    double max_spacing() const { return max_spacing_; }

    // sum_i f(zeta_i) w_i over every curve, approximating \oint_{\partial D} f dzeta
    cplx integrate(const std::function<cplx(cplx)>& f) const;
    // (1/2i) \oint conj(zeta) dzeta
    double area() const;

private:
    int n_;
    std::vector<Curve> curves_;
    double max_spacing_ = 0.0;
};

enum class AreaScheme { polar_centered, cartesian_mesh };

struct AreaQuadrature {
    std::vector<cplx> nodes;
    std::vector<double> weights;
    AreaScheme scheme = AreaScheme::polar_centered;
    int n1 = 0;  // radial nodes, or cells per side
    int n2 = 0;  // angular nodes, or cells per side
    double spacing = 0.0;  // largest local node spacing

    double total() const;
    // Local node spacing near z (used to size the singular patch for T).
    double local_spacing(const PlanarDomain& domain, cplx z) const;

    // Gauss-Legendre in the normalized radius times trapezoid in the angle,
    // over the domain's star profile.
    static AreaQuadrature polar(const PlanarDomain& domain, int n_radial, int n_angular);
    // Cell centres of a cells x cells grid over the bounding box kept by contains().
    static AreaQuadrature cartesian(const PlanarDomain& domain, int cells);
    // polar 200 x 256 when a star profile exists, otherwise cartesian 128
    static AreaQuadrature make_default(const PlanarDomain& domain);
    // from a single mesh parameter M: M angular x ceil(25 M / 32) radial, or M/2 cells
    static AreaQuadrature from_mesh(const PlanarDomain& domain, int mesh, AreaScheme scheme);
};

}  // namespace dbar
