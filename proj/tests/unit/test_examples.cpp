#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "dbar/error.hpp"
#include "dbar/examples.hpp"
#include "dbar/holder.hpp"

using namespace dbar;
using std::numbers::pi;

namespace {

// (z - 1)^p for Re(z - 1) < 0 with arg = pi + atan(y/x), independent of the library branch code
cplx ref_power(cplx z, double p) {
    cplx w = z - 1.0;
    if (w == cplx(0.0)) return 0.0;
    double th = pi + std::atan(w.imag() / w.real());
    return std::pow(std::abs(w), p) * std::polar(1.0, p * th);
}

cplx ref_over_log(cplx z, int k) {
    cplx w = z - 1.0;
    if (w == cplx(0.0)) return 0.0;
    double th = pi + std::atan(w.imag() / w.real());
    return std::pow(w, k + 1) / cplx(std::log(std::abs(w)), th);
}

std::shared_ptr<const ProductOperators> bidisc() { return std::make_shared<const ProductOperators>(make_polydisc(2)); }

// seminorm of g along [0, 1] with pairs focused at the branch point
double radial_seminorm(const std::function<cplx(double)>& g, double alpha, int scales) {
    CloudOptions opt;
    opt.scales = scales;
    opt.random_pairs = 2000;
    const double focus[] = {1.0};
    auto c = make_line_cloud(0.0, 1.0, opt, focus);
    c.evaluate_real_line(g);
    return seminorm(c, alpha).seminorm;
}

}  // namespace

TEST_CASE("branch functions") {
    auto b = BranchFunction::power(0, 0.5);
    CHECK(std::abs(b(0.0) - cplx(0.0, 1.0)) < 1e-15);
    auto l = BranchFunction::over_log(0);
    CHECK(std::abs(l(0.0) - cplx(0.0, 1.0 / pi)) < 1e-15);
    for (int i = 0; i < 64; ++i) {
        cplx z = std::polar(0.999 * (i + 1) / 64.0, 0.37 * i);
        double a = BranchFunction::branch_arg(z - 1.0);
        CHECK(a > pi / 2);
        CHECK(a < 3 * pi / 2);
        CHECK(std::abs(BranchFunction::power(1, 0.3)(z) - ref_power(z, 1.3)) < 1e-13);
        CHECK(std::abs(BranchFunction::over_log(1)(z) - ref_over_log(z, 1)) < 1e-13);
    }
    // continuity along a path that avoids 1 and sweeps the closed disc
    for (const auto& f : {BranchFunction::power(0, 0.3), BranchFunction::over_log(0)}) {
        const int n = 20000;
        double worst = 0.0;
        cplx prev = f(std::polar(1.0, 0.05));
        for (int i = 1; i <= n; ++i) {
            cplx z = std::polar(1.0, 0.05 + (2 * pi - 0.1) * i / n);
            cplx v = f(z);
            worst = std::max(worst, std::abs(v - prev));
            prev = v;
        }
        CHECK(worst < 1e-2);
    }
    CHECK_THROWS_AS(BranchFunction::power(0, 1.0), PreconditionError);
    CHECK_THROWS_AS(BranchFunction::power(-1, 0.5), PreconditionError);
    CHECK_THROWS_AS(example11_form(0, 0.0), PreconditionError);
    CHECK_THROWS_AS(example12_form(-1), PreconditionError);
}

TEST_CASE("example forms") {
    auto D = make_polydisc(2);
    auto pts = random_interior_points(D, 10, 4, 0.05);
    for (const auto& form : {example11_form(0, 0.5), example11_form(1, 0.3), example12_form(0)}) {
        CHECK(form.dimension() == 2);
        CHECK(check_closed(D, form, pts, 1e-4) < 1e-6);
        CHECK(partials_fd_mismatch(D, form.components[1]) < 1e-6);
        CHECK(form.components[0].eval(pts[0]) == cplx(0.0));
    }
    auto f = example11_form(0, 0.5);
    PointN z{0.0, cplx(0.3, 0.3)};
    CHECK(std::abs(f.components[1].eval(z) - cplx(0.0, 1.0)) < 1e-15);
    auto g = example12_form(0);
    CHECK(std::abs(g.components[1].eval(z) - cplx(0.0, 1.0 / pi)) < 1e-15);
    double prev = 1.0;
    for (int m = 2; m <= 30; m += 4) {
        double r = std::abs(g.components[1].eval(PointN{1.0 - std::ldexp(1.0, -m), 0.0}));
        CHECK(r < prev);
        prev = r;
    }
    CHECK(prev < 2e-10);
}

TEST_CASE("membership of example 1.1 data") {
    // H^alpha of f2 along the radius is stable under refinement, H^{alpha+0.1} grows like d^-0.1
    for (double alpha : {0.5, 0.3}) {
        auto f = [alpha](double x) { return ref_power(x, alpha); };
        double h8 = radial_seminorm(f, alpha, 8), h16 = radial_seminorm(f, alpha, 16);
        CHECK(h8 > 0.5);
        CHECK(std::abs(h16 / h8 - 1.0) < 0.05);
        double g8 = radial_seminorm(f, alpha + 0.1, 8), g16 = radial_seminorm(f, alpha + 0.1, 16);
        CHECK(g16 / g8 > 0.95 * std::pow(2.0, 0.1 * 8));
        double g10 = radial_seminorm(f, alpha + 0.1, 10);
        CHECK(g10 / g8 > std::pow(2.0, 0.2) * 0.95);
    }
    // k = 1: the z1-derivative 1.3 (z1 - 1)^0.3 is C^0.3 but not C^0.4
    auto d = [](double x) { return 1.3 * ref_power(x, 0.3); };
    double a8 = radial_seminorm(d, 0.3, 8), a16 = radial_seminorm(d, 0.3, 16);
    CHECK(std::abs(a16 / a8 - 1.0) < 0.05);
    CHECK(radial_seminorm(d, 0.4, 16) / radial_seminorm(d, 0.4, 8) > 1.5);
    // example 1.2 surrogate: difference quotients at exponent 1 stay bounded
    auto l = [](double x) { return ref_over_log(x, 0); };
    double l8 = radial_seminorm(l, 1.0, 8), l16 = radial_seminorm(l, 1.0, 16);
    CHECK(l8 < 2.0);
    CHECK(l16 <= l8 * 1.05);
}

TEST_CASE("contour functional") {
    FieldFn hol = [](std::span<const cplx> z) { return std::conj(z[0]) * std::exp(z[1]) * (1.0 + z[1] * z[1]); };
    FieldFn zb2 = [](std::span<const cplx> z) { return std::conj(z[1]); };
    for (cplx xi : {cplx(0.0), cplx(0.3, -0.4), cplx(0.9, 0.0)}) {
        CHECK(std::abs(contour_functional(hol, xi)) < 1e-8);
        CHECK(std::abs(contour_functional(zb2, xi) - cplx(0.0, pi / 2)) < 1e-8);
    }
    CHECK(std::abs(contour_functional(zb2, 0.0, 0.25) - cplx(0.0, 2 * pi * 0.0625)) < 1e-8);
    CHECK_THROWS_AS(contour_functional(zb2, 1.0), PreconditionError);

    auto ops = bidisc();
    auto u = solve(ops, example11_form(0, 0.5));
    CHECK(std::abs(contour_functional(u.as_function(), 0.0) + pi / 2) < 1e-3);
}

TEST_CASE("closed form of w") {
    CHECK(std::abs(closed_form_w(0.0, BranchFunction::power(0, 0.5)) + pi / 2) < 1e-14);
    CHECK(std::abs(closed_form_w(0.0, BranchFunction::over_log(0)) + 0.5) < 1e-14);
    double prev = 1e9;
    for (int m = 1; m <= 20; ++m) {
        double v = std::abs(closed_form_w(1.0 - std::ldexp(1.0, -m), BranchFunction::power(0, 0.3)));
        CHECK(v < prev);
        prev = v;
    }
    CHECK(prev < 0.025);
}

TEST_CASE("w does not depend on the solution") {
    auto ops = bidisc();
    for (const auto& b : {BranchFunction::power(0, 0.5), BranchFunction::power(1, 0.3), BranchFunction::over_log(0)}) {
        auto form = example_form(b);
        auto u1 = solve(ops, form).as_function();
        auto u2 = solve_fp(ops, form).as_function();
        for (double xi : {-0.5, 0.0, 0.5, 0.9, 0.99}) {
            cplx w1 = contour_functional(u1, xi), w2 = contour_functional(u2, xi);
            cplx ref = cplx(0.0, pi / 2) * (b.kind == BranchKind::power ? ref_power(xi, b.k + b.alpha)
                                                                        : ref_over_log(xi, b.k));
            CHECK(std::abs(w1 - w2) < 1e-8);
            CHECK(std::abs(w1 - ref) < 1e-8 * std::max(1.0, std::abs(ref)));
        }
        // adding anything holomorphic in z2 leaves w unchanged
        FieldFn u3 = [&](std::span<const cplx> z) { return u1(z) + std::conj(z[0]) * std::exp(z[1]) + z[1] * z[1]; };
        for (double xi : {0.0, 0.9}) CHECK(std::abs(contour_functional(u3, xi) - contour_functional(u1, xi)) < 1e-8);
    }
}

TEST_CASE("divided differences") {
    std::vector<double> x{0.0, 0.5, 0.75, 0.875, 1.0};
    std::vector<cplx> w;
    for (double t : x) w.push_back(t * t);
    auto d2 = divided_differences(x, w, 2);
    REQUIRE(d2.size() == 3);
    for (cplx v : d2) CHECK(std::abs(v - 1.0) < 1e-12);
    CHECK(divided_differences(x, w, 0).size() == 5);
    CHECK(divided_differences(x, w, 5).empty());
}

TEST_CASE("no-gain reports") {
    auto r = no_gain_report(BranchFunction::power(0, 0.5));
    CHECK(r.xi_grid.size() == 10);
    CHECK(r.max_rel_err < 1e-2);
    CHECK(std::abs(r.alpha_hat - 0.5) < 0.05);
    CHECK(r.fit_r2 > 0.99);
    CHECK(r.divergence_flagged);
    auto j = to_json(r);
    for (const char* key : {"k", "alpha", "variant", "xi_grid", "w_numeric", "w_closed", "max_rel_err", "alpha_hat",
                            "fit_r2"})
        CHECK(j.contains(key));
    CHECK(j["variant"] == "power");
    CHECK(j["w_numeric"].size() == 10);

    auto r13 = no_gain_report(BranchFunction::power(1, 0.3));
    CHECK(std::abs(r13.alpha_hat - 0.3) < 0.05);
    CHECK(r13.max_rel_err < 1e-2);

    auto rl = no_gain_report(BranchFunction::over_log(0));
    CHECK(rl.variant == "log");
    CHECK(rl.max_rel_err < 1e-2);
    CHECK(rl.divergence_flagged);
    CHECK(rl.epsilon_quotient.back() > 4.0 * rl.epsilon_quotient.front());
    // the first difference quotient itself tends to zero like 1/log
    std::vector<double> x;
    std::vector<cplx> w;
    for (int m = 1; m <= 19; ++m) {
        x.push_back(1.0 - std::ldexp(1.0, -m));
        w.push_back(closed_form_w(x.back(), BranchFunction::over_log(0)));
    }
    auto q = divided_differences(x, w, 1);
    CHECK(std::abs(q.back()) < std::abs(q.front()));
}
