#pragma once

#include <complex>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "dbar/holder.hpp"

namespace dbar {

struct Interval {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
};

// rho(x) = C exp(1/(|x|^2 - 1)) on the open unit ball of R^m, zero outside.
class Mollifier {
public:
    explicit Mollifier(int dim = 1);

    int dim() const { return dim_; }
    double C() const { return c_; }
    double rho_r2(double r2) const;  // as a function of |x|^2
    double rho(double x) const { return rho_r2(x * x); }

    // f_j(x) = \int_{|y| <= 1} rho(y) f(x - y/j) dy on the line. breaks lists the
    // points where f is not smooth; the integral is split there.
    double mollify(const std::function<double(double)>& f, int j, double x, Interval domain = {},
                   std::span<const double> breaks = {}) const;
    // plane version, n_r x n_phi polar Gauss rule on the unit disc
    cplx mollify(const std::function<cplx(cplx)>& f, int j, cplx x, int n_r = 64, int n_phi = 64) const;

    // \int_0^1 rho(y) y^alpha dy (one dimension)
    double moment(double alpha) const;

private:
    int dim_;
    double c_;
};

struct ConvergencePoint {
    int j = 0;
    double sup = 0.0;
    double seminorm = 0.0;
    double norm = 0.0;  // sup + seminorm in C^{alpha'}
};

struct LineFunction {
    std::function<double(double)> f;
    Interval domain;                 // where f is defined
    std::vector<double> breaks;      // non-smooth points
};

// ||f_j - f||_{C^{alpha'}} on the sub-interval, measured on a sample cloud
std::vector<ConvergencePoint> mollifier_convergence_curve(const LineFunction& f, double alpha, double alpha_prime,
                                                          std::span<const int> j_list, Interval subdomain,
                                                          const CloudOptions& cloud = {});

struct GapPoint {
    int j = 0;
    double phi_at_zero = 0.0;       // phi_j(0) = f_j(0) - f(0)
    double phi_at_minus = 0.0;      // phi_j(-1/j)
    double quotient = 0.0;          // (phi_j(0) - phi_j(-1/j)) / (1/j)^alpha
};

// f(x) = max(x, 0)^alpha: the quotient stays at \int_0^1 rho y^alpha for every j
std::vector<GapPoint> mollifier_counterexample_gap(double alpha, std::span<const int> j_list);

}  // namespace dbar
