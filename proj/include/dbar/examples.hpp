#pragma once

#include <string>
#include <vector>

#include "dbar/product.hpp"
#include <json.hpp>

namespace dbar {

enum class BranchKind { power, power_over_log };

// (z1 - 1)^{k + alpha} or (z1 - 1)^{k + 1} / log(z1 - 1), with arg(z1 - 1) taken in (pi/2, 3pi/2)
struct BranchFunction {
    BranchKind kind = BranchKind::power;
    int k = 0;
    double alpha = 0.5;  // power kind only

    static BranchFunction power(int k, double alpha);
    static BranchFunction over_log(int k);

    // arg of w shifted into (pi/2, 3pi/2) when Re w < 0
    static double branch_arg(cplx w);
    static cplx branch_log(cplx w);

    cplx operator()(cplx z1) const;
    std::string variant() const;  // "power" or "log"
};

// f = 0 dzbar1 + b(z1) dzbar2 on the bidisc, with analytic partials (all zero)
ZeroOneForm example_form(const BranchFunction& b);
ZeroOneForm example11_form(int k, double alpha);
ZeroOneForm example12_form(int k);

// w(xi) = \oint_{|z2| = radius} u(xi, z2) dz2
cplx contour_functional(const FieldFn& u, cplx xi, double radius = 0.5, int nodes = 256);
// (pi i / 2) b(xi), the value of w for every solution of example_form(b) at radius 1/2
cplx closed_form_w(cplx xi, const BranchFunction& b);

struct NoGainOptions {
    std::vector<double> xi_grid;  // empty: -0.5, 0 and the ladder 1 - 2^-m, m = 1..8
    int ladder_min = 1;
    int ladder_max = 8;           // xi_m = 1 - 2^-m for the exponent fit
    int log_ladder_max = 19;      // longer ladder for the log variant
    double epsilon = 0.5;         // Hoelder exponent of the divergence check
    double radius = 0.5;
    int contour_nodes = 256;
    ProductConfig solver;
};

struct NoGainReport {
    int k = 0;
    double alpha = 0.0;
    std::string variant;
    std::vector<double> xi_grid;
    std::vector<cplx> w_numeric;
    std::vector<cplx> w_closed;
    double max_rel_err = 0.0;
    double alpha_hat = 0.0;  // fitted exponent of the k-th divided differences of w
    double fit_r2 = 0.0;
    // |Delta D^{k+1} w| / d^epsilon along the ladder; growth means w is not C^{k+1,epsilon}
    std::vector<double> ladder;
    std::vector<double> epsilon_quotient;
    bool divergence_flagged = false;
};

// divided differences of the given order on consecutive nodes; entry m uses x[m..m+order]
std::vector<cplx> divided_differences(std::span<const double> x, std::span<const cplx> w, int order);

NoGainReport no_gain_report(const BranchFunction& b, const NoGainOptions& opt = {});
nlohmann::ordered_json to_json(const NoGainReport& r);

}  // namespace dbar
