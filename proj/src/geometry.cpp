#include "dbar/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <regex>
#include <sstream>

#include "dbar/error.hpp"
#include "dbar/gauss_legendre.hpp"

namespace dbar {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double cross(cplx a, cplx b) { return a.real() * b.imag() - a.imag() * b.real(); }

bool segments_cross(cplx p1, cplx p2, cplx q1, cplx q2) {
    double d1 = cross(p2 - p1, q1 - p1);
    double d2 = cross(p2 - p1, q2 - p1);
    double d3 = cross(q2 - q1, p1 - q1);
    double d4 = cross(q2 - q1, p2 - q1);
    return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) out.push_back(trim(cur));
    return out;
}

double to_double(const std::string& s) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw PreconditionError("bad number in domain description: '" + s + "'");
    }
    if (pos != s.size()) throw PreconditionError("bad number in domain description: '" + s + "'");
    return v;
}

}  // namespace

JordanCurve::JordanCurve(std::function<cplx(double)> position, std::function<cplx(double)> velocity,
                         Orientation orientation, int smoothness_order, int sample_count)
    : position_(std::move(position)),
      velocity_(std::move(velocity)),
      orientation_(orientation),
      smoothness_order_(smoothness_order) {
    require(sample_count >= 16, "JordanCurve: sample_count must be >= 16");
    require(smoothness_order >= 1, "JordanCurve: smoothness_order must be >= 1");
    const int n = sample_count;
    const double h = kTwoPi / n;
    samples_.resize(n);
    min_speed_ = std::numeric_limits<double>::infinity();
    double max_speed = 0.0;
    for (int i = 0; i < n; ++i) {
        double t = i * h;
        samples_[i] = position_(t);
        double sp = std::abs(velocity_(t));
        if (!std::isfinite(sp) || !std::isfinite(samples_[i].real()) || !std::isfinite(samples_[i].imag()))
            throw GeometryError("JordanCurve: non-finite position or velocity");
        min_speed_ = std::min(min_speed_, sp);
        max_speed = std::max(max_speed, sp);
        arclength_ += sp * h;
    }
    if (!(arclength_ > 0.0)) throw GeometryError("JordanCurve: zero length");
    if (!(min_speed_ > 1e-9 * arclength_)) throw GeometryError("JordanCurve: velocity vanishes (not regular)");

    // closed: the parametrization must return to its start
    double gap_end = std::abs(position_(kTwoPi) - samples_[0]);
    double gap_last = std::abs(position_(kTwoPi - h) - samples_[0]);
    if (gap_end > 1e-9 * arclength_ || gap_last > 2.0 * max_speed * h)
        throw GeometryError("JordanCurve: curve is not closed");

    // simple: no two non-adjacent polygon edges cross, no two samples coincide
    const double tol = 1e-6 * arclength_;
    for (int i = 0; i < n; ++i) {
        cplx p1 = samples_[i], p2 = samples_[(i + 1) % n];
        for (int j = i + 2; j < n; ++j) {
            if (i == 0 && j == n - 1) continue;
            cplx q1 = samples_[j], q2 = samples_[(j + 1) % n];
            if (std::abs(p1 - q1) < tol || segments_cross(p1, p2, q1, q2))
                throw GeometryError("JordanCurve: curve is not simple (self-intersection)");
        }
    }

    for (int i = 0; i < n; ++i) signed_area_ += 0.5 * cross(samples_[i], samples_[(i + 1) % n]);
    bool ccw = signed_area_ > 0.0;
    if (ccw != (orientation_ == Orientation::counterclockwise))
        throw GeometryError("JordanCurve: parametrization does not match declared orientation");
}

JordanCurve::Projection JordanCurve::project(cplx z) const {
    const int n = static_cast<int>(samples_.size());
    int best = 0;
    double bd = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        double d = std::norm(samples_[i] - z);
        if (d < bd) {
            bd = d;
            best = i;
        }
    }
    const double h = kTwoPi / n;
    double a = best * h - h, b = best * h + h;
    auto dist = [&](double t) { return std::abs(position_(t) - z); };
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = dist(c), fd = dist(d);
    for (int it = 0; it < 80 && (b - a) > 1e-15; ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = dist(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = dist(d);
        }
    }
    double t = 0.5 * (a + b);
    t = std::fmod(t, kTwoPi);
    if (t < 0) t += kTwoPi;
    cplx p = position_(t);
    double dt = std::abs(p - z);
    if (std::sqrt(bd) < dt) return {best * h, samples_[best], std::sqrt(bd)};
    return {t, p, dt};
}

int JordanCurve::winding_number(cplx z) const {
    const int n = static_cast<int>(samples_.size());
    int wn = 0;
    for (int i = 0; i < n; ++i) {
        cplx a = samples_[i], b = samples_[(i + 1) % n];
        if (a.imag() <= z.imag()) {
            if (b.imag() > z.imag() && cross(b - a, z - a) > 0) ++wn;
        } else if (b.imag() <= z.imag() && cross(b - a, z - a) < 0) {
            --wn;
        }
    }
    return wn;
}

PlanarDomain::PlanarDomain(std::vector<JordanCurve> curves, std::optional<StarProfile> profile,
                           std::string description)
    : curves_(std::move(curves)), profile_(std::move(profile)), description_(std::move(description)) {
    if (curves_.empty()) throw GeometryError("PlanarDomain: no boundary curves");
    if (curves_[0].orientation() != Orientation::counterclockwise)
        throw GeometryError("PlanarDomain: outer boundary must be counterclockwise");
    for (std::size_t k = 1; k < curves_.size(); ++k) {
        if (curves_[k].orientation() != Orientation::clockwise)
            throw GeometryError("PlanarDomain: holes must be clockwise");
        if (curves_[0].winding_number(curves_[k].samples()[0]) != 1)
            throw GeometryError("PlanarDomain: hole is not inside the outer boundary");
    }
    // pairwise disjoint
    for (std::size_t a = 0; a < curves_.size(); ++a) {
        for (std::size_t b = a + 1; b < curves_.size(); ++b) {
            double md = std::numeric_limits<double>::infinity();
            for (cplx p : curves_[a].samples())
                for (cplx q : curves_[b].samples()) md = std::min(md, std::abs(p - q));
            if (!(md > 1e-6 * curves_[0].total_arclength()))
                throw GeometryError("PlanarDomain: boundary curves intersect");
            if (a > 0 && (curves_[a].winding_number(curves_[b].samples()[0]) != 0 ||
                          curves_[b].winding_number(curves_[a].samples()[0]) != 0))
                throw GeometryError("PlanarDomain: nested holes");
        }
    }
    const auto& outer = curves_[0].samples();
    bbox_ = {outer[0].real(), outer[0].real(), outer[0].imag(), outer[0].imag()};
    for (cplx p : outer) {
        bbox_.xmin = std::min(bbox_.xmin, p.real());
        bbox_.xmax = std::max(bbox_.xmax, p.real());
        bbox_.ymin = std::min(bbox_.ymin, p.imag());
        bbox_.ymax = std::max(bbox_.ymax, p.imag());
    }
    for (std::size_t i = 0; i < outer.size(); ++i)
        for (std::size_t j = i + 1; j < outer.size(); ++j) diameter_ = std::max(diameter_, std::abs(outer[i] - outer[j]));
}

int PlanarDomain::winding_number(cplx z) const {
    int wn = 0;
    for (const auto& c : curves_) wn += c.winding_number(z);
    return wn;
}

double PlanarDomain::boundary_distance(cplx z) const {
    double d = std::numeric_limits<double>::infinity();
    for (const auto& c : curves_) d = std::min(d, c.project(z).distance);
    return d;
}

PointClass PlanarDomain::classify(cplx z, double tol) const {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return PointClass::outside;
    const BoundingBox& b = bbox_;
    double pad = 1e-3 * diameter_;
    if (z.real() < b.xmin - pad || z.real() > b.xmax + pad || z.imag() < b.ymin - pad || z.imag() > b.ymax + pad)
        return PointClass::outside;
    double best = std::numeric_limits<double>::infinity();
    JordanCurve::Projection near{};
    const JordanCurve* nc = nullptr;
    for (const auto& c : curves_) {
        auto p = c.project(z);
        if (p.distance < best) {
            best = p.distance;
            near = p;
            nc = &c;
        }
    }
    if (best < tol) return PointClass::boundary_proximal;
    if (best < 1e-3 * diameter_) {
        // polygon may be off by the sagitta here; use the tangent side instead
        double side = cross(nc->velocity(near.theta), z - near.point);
        return side > 0 ? PointClass::inside : PointClass::outside;
    }
    return winding_number(z) == 1 ? PointClass::inside : PointClass::outside;
}

double PlanarDomain::boundary_area(int nodes_per_curve) const {
    const double h = kTwoPi / nodes_per_curve;
    cplx acc = 0.0;
    for (const auto& c : curves_)
        for (int i = 0; i < nodes_per_curve; ++i) {
            double t = i * h;
            acc += std::conj(c.position(t)) * c.velocity(t) * h;
        }
    return (acc / cplx(0.0, 2.0)).real();
}

ProductDomain::ProductDomain(std::vector<PlanarDomain> factors) : factors_(std::move(factors)) {
    require(!factors_.empty(), "ProductDomain: dimension must be >= 1");
}

PlanarDomain make_disc(cplx center, double radius) {
    if (!(radius > 0.0)) throw PreconditionError("make_disc: radius must be positive");
    JordanCurve c([=](double t) { return center + radius * std::polar(1.0, t); },
                  [=](double t) { return cplx(0.0, radius) * std::polar(1.0, t); }, Orientation::counterclockwise, 8);
    StarProfile prof{center, [=](double) { return radius; }, [](double) { return 0.0; }};
    std::ostringstream os;
    os << "disc(" << center.real() << "," << center.imag() << "," << radius << ")";
    return PlanarDomain({std::move(c)}, prof, os.str());
}

PlanarDomain make_annulus(cplx center, double r_inner, double r_outer) {
    if (!(r_inner > 0.0 && r_inner < r_outer))
        throw PreconditionError("make_annulus: need 0 < r_inner < r_outer");
    JordanCurve outer([=](double t) { return center + r_outer * std::polar(1.0, t); },
                      [=](double t) { return cplx(0.0, r_outer) * std::polar(1.0, t); },
                      Orientation::counterclockwise, 8);
    JordanCurve inner([=](double t) { return center + r_inner * std::polar(1.0, -t); },
                      [=](double t) { return cplx(0.0, -r_inner) * std::polar(1.0, -t); }, Orientation::clockwise,
                      8);
    StarProfile prof{center, [=](double) { return r_outer; }, [=](double) { return r_inner; }};
    std::ostringstream os;
    os << "annulus(" << center.real() << "," << center.imag() << "," << r_inner << "," << r_outer << ")";
    return PlanarDomain({std::move(outer), std::move(inner)}, prof, os.str());
}

PlanarDomain make_ellipse(cplx center, double a, double b) {
    if (!(a > 0.0 && b > 0.0)) throw PreconditionError("make_ellipse: semi-axes must be positive");
    JordanCurve c([=](double t) { return center + cplx(a * std::cos(t), b * std::sin(t)); },
                  [=](double t) { return cplx(-a * std::sin(t), b * std::cos(t)); }, Orientation::counterclockwise,
                  8);
    StarProfile prof{center,
                     [=](double p) {
                         double cs = std::cos(p), sn = std::sin(p);
                         return a * b / std::sqrt(b * b * cs * cs + a * a * sn * sn);
                     },
                     [](double) { return 0.0; }};
    std::ostringstream os;
    os << "ellipse(" << center.real() << "," << center.imag() << "," << a << "," << b << ")";
    return PlanarDomain({std::move(c)}, prof, os.str());
}

PlanarDomain make_perturbed_circle(const std::vector<FourierTerm>& coeffs, double max_chord_arc) {
    auto r = [coeffs](double t) {
        double v = 1.0;
        for (const auto& c : coeffs) v += (c.c * std::polar(1.0, c.m * t)).real();
        return v;
    };
    auto dr = [coeffs](double t) {
        double v = 0.0;
        for (const auto& c : coeffs) v += (cplx(0.0, c.m) * c.c * std::polar(1.0, c.m * t)).real();
        return v;
    };
    double rmin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 4096; ++i) rmin = std::min(rmin, r(kTwoPi * i / 4096));
    if (!(rmin > 0.0)) throw GeometryError("make_perturbed_circle: radius function is not positive");
    JordanCurve c([=](double t) { return r(t) * std::polar(1.0, t); },
                  [=](double t) { return cplx(dr(t), r(t)) * std::polar(1.0, t); }, Orientation::counterclockwise, 8);
    double ca = chord_arc_constant(c, 512);
    if (!(ca <= max_chord_arc))
        throw GeometryError("make_perturbed_circle: chord-arc constant " + std::to_string(ca) + " exceeds " +
                            std::to_string(max_chord_arc) + " (curve nearly pinches)");
    StarProfile prof{0.0, r, [](double) { return 0.0; }};
    std::ostringstream os;
    os << "perturbed(";
    for (std::size_t i = 0; i < coeffs.size(); ++i)
        os << (i ? "," : "") << coeffs[i].m << ":" << coeffs[i].c.real() << ":" << coeffs[i].c.imag();
    os << ")";
    return PlanarDomain({std::move(c)}, prof, os.str());
}

ProductDomain make_polydisc(int n) {
    require(n >= 1, "make_polydisc: n must be >= 1");
    std::vector<PlanarDomain> f;
    for (int i = 0; i < n; ++i) f.push_back(make_disc(0.0, 1.0));
    return ProductDomain(std::move(f));
}

double chord_arc_constant(const JordanCurve& curve, int sample_count) {
    require(sample_count >= 4, "chord_arc_constant: sample_count must be >= 4");
    const int n = sample_count;
    const double h = kTwoPi / n;
    const auto& g = gauss_legendre(8);
    std::vector<cplx> p(n);
    std::vector<double> s(n + 1, 0.0);
    for (int i = 0; i < n; ++i) {
        p[i] = curve.position(i * h);
        double seg = 0.0;
        for (std::size_t q = 0; q < g.nodes.size(); ++q)
            seg += g.weights[q] * std::abs(curve.velocity(i * h + 0.5 * h * (g.nodes[q] + 1.0)));
        s[i + 1] = s[i] + 0.5 * h * seg;
    }
    const double total = s[n];
    double best = 1.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            double chord = std::abs(p[i] - p[j]);
            if (chord < 1e-14 * total) continue;
            double arc = s[j] - s[i];
            best = std::max(best, std::min(arc, total - arc) / chord);
        }
    return best;
}

PlanarDomain parse_planar_domain(const std::string& text) {
    static const std::regex re(R"(^\s*([a-z_]+)\s*\((.*)\)\s*$)");
    std::smatch m;
    std::string t = trim(text);
    if (t == "disc" || t == "unit_disc") return make_disc(0.0, 1.0);
    if (!std::regex_match(t, m, re)) throw PreconditionError("unrecognized domain description: '" + text + "'");
    std::string kind = m[1];
    auto args = split(m[2], ',');
    if (args.size() == 1 && args[0].empty()) args.clear();
    auto nums = [&](std::size_t want) {
        if (args.size() != want)
            throw PreconditionError(kind + ": expected " + std::to_string(want) + " arguments");
        std::vector<double> v;
        for (auto& a : args) v.push_back(to_double(a));
        return v;
    };
    if (kind == "disc") {
        auto v = nums(3);
        return make_disc({v[0], v[1]}, v[2]);
    }
    if (kind == "annulus") {
        auto v = nums(4);
        return make_annulus({v[0], v[1]}, v[2], v[3]);
    }
    if (kind == "ellipse") {
        auto v = nums(4);
        return make_ellipse({v[0], v[1]}, v[2], v[3]);
    }
    if (kind == "perturbed" || kind == "perturbed_circle") {
        std::vector<FourierTerm> terms;
        for (auto& a : args) {
            auto parts = split(a, ':');
            if (parts.size() < 2 || parts.size() > 3)
                throw PreconditionError("perturbed: terms are m:re[:im], got '" + a + "'");
            double mv = to_double(parts[0]);
            if (mv != std::floor(mv)) throw PreconditionError("perturbed: mode must be an integer");
            terms.push_back({static_cast<int>(mv), {to_double(parts[1]), parts.size() == 3 ? to_double(parts[2]) : 0.0}});
        }
        return make_perturbed_circle(terms);
    }
    throw PreconditionError("unknown domain kind '" + kind + "'");
}

ProductDomain parse_product_domain(const std::string& text) {
    std::string t = trim(text);
    if (t == "bidisc") return make_polydisc(2);
    if (t == "tridisc") return make_polydisc(3);
    std::vector<PlanarDomain> f;
    std::size_t start = 0;
    while (true) {
        auto pos = t.find(" x ", start);
        f.push_back(parse_planar_domain(t.substr(start, pos == std::string::npos ? std::string::npos : pos - start)));
        if (pos == std::string::npos) break;
        start = pos + 3;
    }
    return ProductDomain(std::move(f));
}

}  // namespace dbar
