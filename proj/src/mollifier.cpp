#include "dbar/mollifier.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "dbar/error.hpp"
#include "dbar/gauss_legendre.hpp"

namespace dbar {

namespace {

using boost::math::quadrature::gauss_kronrod;
using boost::math::quadrature::tanh_sinh;

double bump(double r2) { return r2 < 1.0 ? std::exp(1.0 / (r2 - 1.0)) : 0.0; }

double unnormalized_mass(int m) {
    // |S^{m-1}| \int_0^1 r^{m-1} exp(1/(r^2-1)) dr
    double sphere = 2.0 * std::pow(std::numbers::pi, 0.5 * m) / std::tgamma(0.5 * m);
    auto g = [m](double r) { return std::pow(r, m - 1) * bump(r * r); };
    double err = 0.0;
    double v = gauss_kronrod<double, 31>::integrate(g, 0.0, 1.0, 20, 1e-12, &err);
    if (!(err <= 1e-8 * v)) throw NumericalError("mollifier normalization did not converge");
    return sphere * v;
}

double normalization(int m) {
    static std::mutex mu;
    static std::map<int, double> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(m);
    if (it != cache.end()) return it->second;
    double c = 1.0 / unnormalized_mass(m);
    cache[m] = c;
    return c;
}

tanh_sinh<double>& ts() {
    thread_local tanh_sinh<double> integrator;
    return integrator;
}

}  // namespace

Mollifier::Mollifier(int dim) : dim_(dim) {
    require(dim >= 1, "Mollifier: dimension must be >= 1");
    c_ = normalization(dim);
}

double Mollifier::rho_r2(double r2) const { return c_ * bump(r2); }

double Mollifier::mollify(const std::function<double(double)>& f, int j, double x, Interval domain,
                          std::span<const double> breaks) const {
    require(dim_ == 1, "mollify: this mollifier is not one-dimensional");
    require(j >= 1, "mollify: j must be >= 1");
    const double h = 1.0 / j;
    if (!(x - h > domain.lo && x + h < domain.hi))
        throw PreconditionError("mollify: point is within 1/j of the domain boundary");
    std::vector<double> cuts{-1.0, 1.0};
    for (double b : breaks) {
        double y = j * (x - b);
        if (y > -1.0 && y < 1.0) cuts.push_back(y);
    }
    std::sort(cuts.begin(), cuts.end());
    auto g = [&](double y) { return rho_r2(y * y) * f(x - y * h); };
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        if (cuts[k + 1] <= cuts[k]) continue;
        acc += ts().integrate(g, cuts[k], cuts[k + 1], 1e-12);
    }
    return acc;
}

cplx Mollifier::mollify(const std::function<cplx(cplx)>& f, int j, cplx x, int n_r, int n_phi) const {
    require(dim_ == 2, "mollify: this mollifier is not two-dimensional");
    require(j >= 1, "mollify: j must be >= 1");
    const auto& g = gauss_legendre(n_r);
    const double dphi = 2.0 * std::numbers::pi / n_phi;
    cplx acc = 0.0;
    for (int a = 0; a < n_phi; ++a) {
        cplx e = std::polar(1.0, (a + 0.5) * dphi);
        for (int k = 0; k < n_r; ++k) {
            double r = 0.5 * (g.nodes[k] + 1.0);
            acc += 0.5 * g.weights[k] * dphi * r * rho_r2(r * r) * f(x - r * e / double(j));
        }
    }
    return acc;
}

double Mollifier::moment(double alpha) const {
    require(dim_ == 1, "moment: this mollifier is not one-dimensional");
    require(alpha >= 0.0, "moment: alpha must be >= 0");
    return ts().integrate([&](double y) { return rho_r2(y * y) * std::pow(y, alpha); }, 0.0, 1.0, 1e-14);
}

std::vector<ConvergencePoint> mollifier_convergence_curve(const LineFunction& f, double alpha, double alpha_prime,
                                                          std::span<const int> j_list, Interval subdomain,
                                                          const CloudOptions& cloud) {
    require(alpha > 0.0 && alpha <= 1.0, "convergence curve: alpha must lie in (0, 1]");
    if (!(alpha_prime > 0.0 && alpha_prime < alpha))
        throw PreconditionError("convergence curve: need 0 < alpha' < alpha");
    require(!j_list.empty(), "convergence curve: empty j list");
    int jmin = *std::min_element(j_list.begin(), j_list.end());
    require(jmin >= 1, "convergence curve: j must be >= 1");
    if (!(subdomain.lo - 1.0 / jmin > f.domain.lo && subdomain.hi + 1.0 / jmin < f.domain.hi))
        throw PreconditionError("convergence curve: subdomain is not compactly inside the domain");
    std::vector<double> foci;
    for (double b : f.breaks)
        if (b >= subdomain.lo && b <= subdomain.hi) foci.push_back(b);
    SampleCloud c = make_line_cloud(subdomain.lo, subdomain.hi, cloud, foci);
    Mollifier m(1);
    std::vector<ConvergencePoint> out;
    for (int j : j_list) {
        std::map<double, double> memo;
        c.evaluate_real_line([&](double x) {
            auto it = memo.find(x);
            if (it != memo.end()) return cplx(it->second);
            double v = m.mollify(f.f, j, x, f.domain, f.breaks) - f.f(x);
            memo.emplace(x, v);
            return cplx(v);
        });
        ConvergencePoint p;
        p.j = j;
        p.sup = sup_norm(c);
        p.seminorm = seminorm(c, alpha_prime).seminorm;
        p.norm = p.sup + p.seminorm;
        out.push_back(p);
    }
    return out;
}

std::vector<GapPoint> mollifier_counterexample_gap(double alpha, std::span<const int> j_list) {
    require(alpha > 0.0 && alpha < 1.0, "counterexample gap: alpha must lie in (0, 1)");
    Mollifier m(1);
    auto f = [alpha](double x) { return x > 0.0 ? std::pow(x, alpha) : 0.0; };
    const double brk[] = {0.0};
    std::vector<GapPoint> out;
    for (int j : j_list) {
        require(j >= 1, "counterexample gap: j must be >= 1");
        GapPoint g;
        g.j = j;
        g.phi_at_zero = m.mollify(f, j, 0.0, {}, brk) - f(0.0);
        double xm = -1.0 / j;
        g.phi_at_minus = m.mollify(f, j, xm, {}, brk) - f(xm);
        g.quotient = (g.phi_at_zero - g.phi_at_minus) / std::pow(1.0 / j, alpha);
        out.push_back(g);
    }
    return out;
}

}  // namespace dbar
