#include "dbar/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "dbar/error.hpp"
#include "dbar/gauss_legendre.hpp"

namespace dbar {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

BoundaryQuadrature::BoundaryQuadrature(const PlanarDomain& domain, int nodes_per_curve) : n_(nodes_per_curve) {
    require(nodes_per_curve >= 8, "BoundaryQuadrature: need at least 8 nodes per curve");
    const double h = kTwoPi / n_;
    for (const auto& c : domain.curves()) {
        Curve q;
        q.theta.resize(n_);
        q.points.resize(n_);
        q.weights.resize(n_);
        for (int i = 0; i < n_; ++i) {
            double t = i * h;
            q.theta[i] = t;
            q.points[i] = c.position(t);
            q.weights[i] = h * c.velocity(t);
        }
        for (int i = 0; i < n_; ++i)
            q.max_spacing = std::max(q.max_spacing, std::abs(q.points[(i + 1) % n_] - q.points[i]));
        max_spacing_ = std::max(max_spacing_, q.max_spacing);
        curves_.push_back(std::move(q));
    }
}

cplx BoundaryQuadrature::integrate(const std::function<cplx(cplx)>& f) const {
    cplx acc = 0.0;
    for (const auto& c : curves_)
        for (int i = 0; i < n_; ++i) acc += f(c.points[i]) * c.weights[i];
    return acc;
}

double BoundaryQuadrature::area() const {
    return (integrate([](cplx z) { return std::conj(z); }) / cplx(0.0, 2.0)).real();
}

double AreaQuadrature::total() const {
    double s = 0.0;
    for (double w : weights) s += w;
    return s;
}

double AreaQuadrature::local_spacing(const PlanarDomain& domain, cplx z) const {
    if (scheme == AreaScheme::cartesian_mesh || !domain.star_profile()) return spacing;
    const auto& p = *domain.star_profile();
    double phi = std::arg(z - p.center);
    double width = p.outer(phi) - p.inner(phi);
    double radial = width * std::numbers::pi / (2.0 * n1);
    double angular = std::abs(z - p.center) * kTwoPi / n2;
    return std::max(radial, angular);
}

AreaQuadrature AreaQuadrature::polar(const PlanarDomain& domain, int n_radial, int n_angular) {
    require(n_radial >= 2 && n_angular >= 4, "AreaQuadrature::polar: resolution too small");
    if (!domain.star_profile()) throw PreconditionError("AreaQuadrature::polar: domain has no star profile");
    const auto& p = *domain.star_profile();
    const auto& g = gauss_legendre(n_radial);
    AreaQuadrature q;
    q.scheme = AreaScheme::polar_centered;
    q.n1 = n_radial;
    q.n2 = n_angular;
    const double dphi = kTwoPi / n_angular;
    q.nodes.reserve(static_cast<std::size_t>(n_radial) * n_angular);
    q.weights.reserve(q.nodes.capacity());
    for (int a = 0; a < n_angular; ++a) {
        double phi = (a + 0.5) * dphi;
        double ro = p.outer(phi), ri = p.inner(phi);
        double width = ro - ri;
        cplx dir = std::polar(1.0, phi);
        q.spacing = std::max(q.spacing, std::max(ro * dphi, width * std::numbers::pi / (2.0 * n_radial)));
        for (int r = 0; r < n_radial; ++r) {
            double t = 0.5 * (g.nodes[r] + 1.0);
            double rho = ri + t * width;
            q.nodes.push_back(p.center + rho * dir);
            q.weights.push_back(0.5 * g.weights[r] * dphi * rho * width);
        }
    }
    return q;
}

AreaQuadrature AreaQuadrature::cartesian(const PlanarDomain& domain, int cells) {
    require(cells >= 2, "AreaQuadrature::cartesian: need at least 2 cells per side");
    const auto& b = domain.bounding_box();
    double side = std::max(b.xmax - b.xmin, b.ymax - b.ymin);
    double h = side / cells;
    double a = h * h;
    AreaQuadrature q;
    q.scheme = AreaScheme::cartesian_mesh;
    q.n1 = cells;
    q.n2 = cells;
    q.spacing = h;
    double x0 = 0.5 * (b.xmin + b.xmax) - 0.5 * side, y0 = 0.5 * (b.ymin + b.ymax) - 0.5 * side;
    for (int i = 0; i < cells; ++i)
        for (int j = 0; j < cells; ++j) {
            cplx z(x0 + (i + 0.5) * h, y0 + (j + 0.5) * h);
            if (domain.contains(z)) {
                q.nodes.push_back(z);
                q.weights.push_back(a);
            }
        }
    return q;
}

AreaQuadrature AreaQuadrature::make_default(const PlanarDomain& domain) {
    if (domain.star_profile()) return polar(domain, 200, 256);
    return cartesian(domain, 128);
}

AreaQuadrature AreaQuadrature::from_mesh(const PlanarDomain& domain, int mesh, AreaScheme scheme) {
    require(mesh >= 8, "AreaQuadrature::from_mesh: mesh must be >= 8");
    if (scheme == AreaScheme::polar_centered && domain.star_profile())
        return polar(domain, (25 * mesh + 31) / 32, mesh);
    return cartesian(domain, mesh / 2);
}

}  // namespace dbar
