#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace dbar {

using cplx = std::complex<double>;

enum class Orientation { counterclockwise, clockwise };

enum class PointClass { inside, outside, boundary_proximal };

// Points closer than this to a boundary curve are boundary-proximal.
inline constexpr double kBoundaryTolerance = 1e-6;

// Closed curve theta -> position(theta), theta in [0, 2pi). The parametrization
// itself runs in the stated orientation.
class JordanCurve {
public:
    struct Projection {
        double theta;
        cplx point;
        double distance;
    };

    JordanCurve(std::function<cplx(double)> position, std::function<cplx(double)> velocity,
                Orientation orientation, int smoothness_order = 1, int sample_count = 1024);

    cplx position(double theta) const { return position_(theta); }
    cplx velocity(double theta) const { return velocity_(theta); }
    Orientation orientation() const { return orientation_; }
    int smoothness_order() const { return smoothness_order_; }
    double total_arclength() const { return arclength_; }
    double min_speed() const { return min_speed_; }
    double signed_area() const { return signed_area_; }

    // position at theta_i = 2 pi i / N
    const std::vector<cplx>& samples() const { return samples_; }

    Projection project(cplx z) const;
    // polygonal winding number of the sampled curve about z
    int winding_number(cplx z) const;

private:
    std::function<cplx(double)> position_;
    std::function<cplx(double)> velocity_;
    Orientation orientation_;
    int smoothness_order_;
    double arclength_ = 0.0;
    double min_speed_ = 0.0;
    double signed_area_ = 0.0;
    std::vector<cplx> samples_;
};

struct BoundingBox {
    double xmin, xmax, ymin, ymax;
};

// Star-shaped description used by the polar area quadrature: the domain is
// { center + rho e^{i phi} : inner(phi) < rho < outer(phi) }.
struct StarProfile {
    cplx center;
    std::function<double(double)> outer;
    std::function<double(double)> inner;  // zero when there is no hole
};

class PlanarDomain {
public:
    // curves[0] is the outer boundary (counterclockwise), the rest are holes.
    PlanarDomain(std::vector<JordanCurve> curves, std::optional<StarProfile> profile = std::nullopt,
                 std::string description = "");

    const std::vector<JordanCurve>& curves() const { return curves_; }
    const BoundingBox& bounding_box() const { return bbox_; }
    double diameter() const { return diameter_; }
    const std::optional<StarProfile>& star_profile() const { return profile_; }
    const std::string& description() const { return description_; }

    int winding_number(cplx z) const;
    double boundary_distance(cplx z) const;
    PointClass classify(cplx z, double tol = kBoundaryTolerance) const;
    bool contains(cplx z) const { return classify(z) == PointClass::inside; }

    // area from the boundary formula  (1/2i) \oint conj(zeta) dzeta
    double boundary_area(int nodes_per_curve = 512) const;

private:
    std::vector<JordanCurve> curves_;
    std::optional<StarProfile> profile_;
    std::string description_;
    BoundingBox bbox_{};
    double diameter_ = 0.0;
};

class ProductDomain {
public:
    explicit ProductDomain(std::vector<PlanarDomain> factors);
    const std::vector<PlanarDomain>& factors() const { return factors_; }
    const PlanarDomain& factor(int j) const { return factors_.at(j); }
    int dimension() const { return static_cast<int>(factors_.size()); }

private:
    std::vector<PlanarDomain> factors_;
};

PlanarDomain make_disc(cplx center, double radius);
PlanarDomain make_annulus(cplx center, double r_inner, double r_outer);
PlanarDomain make_ellipse(cplx center, double a, double b);

struct FourierTerm {
    int m;
    cplx c;
};

// r(theta) = 1 + Re sum c_m e^{i m theta}. Rejected unless min r > 0 and the
// chord-arc constant stays below max_chord_arc.
PlanarDomain make_perturbed_circle(const std::vector<FourierTerm>& coeffs, double max_chord_arc = 8.0);

ProductDomain make_polydisc(int n);

// max over sampled pairs of (shorter arc between them) / chord
double chord_arc_constant(const JordanCurve& curve, int sample_count);

// Textual domain descriptions, e.g.
//   disc(0,0,1)  annulus(0,0,0.5,1)  ellipse(0,0,1,0.5)  perturbed(3:0.1:0, 5:0.02:0.01)
//   bidisc  tridisc  disc(0,0,1) x annulus(0,0,0.5,1)
PlanarDomain parse_planar_domain(const std::string& text);
ProductDomain parse_product_domain(const std::string& text);

}  // namespace dbar
