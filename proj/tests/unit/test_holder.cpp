#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "dbar/error.hpp"
#include "dbar/holder.hpp"
#include "dbar/mollifier.hpp"

using namespace dbar;

namespace {

CloudOptions small(int scales = 10, std::uint64_t seed = 1) {
    CloudOptions o;
    o.scales = scales;
    o.pairs_per_scale = 60;
    o.random_pairs = 2000;
    o.seed = seed;
    return o;
}

double bump_integral_oracle(int dim) {
    boost::math::quadrature::tanh_sinh<double> ts;
    auto b = [](double r) { return r < 1.0 ? std::exp(1.0 / (r * r - 1.0)) : 0.0; };
    if (dim == 1) return 2.0 * ts.integrate(b, 0.0, 1.0);
    return 2.0 * std::numbers::pi * ts.integrate([&](double r) { return r * b(r); }, 0.0, 1.0);
}

// \int_0^1 rho(y) y^a dy with y = t^4 to smooth the endpoint
double moment_oracle(double a) {
    double c = 1.0 / bump_integral_oracle(1);
    auto g = [&](double t) {
        double y = t * t * t * t;
        return y < 1.0 ? c * std::exp(1.0 / (y * y - 1.0)) * std::pow(t, 4 * a) * 4 * t * t * t : 0.0;
    };
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(g, 0.0, 1.0, 12, 1e-12);
}

}  // namespace

TEST_CASE("seminorm examples") {
    auto c = make_line_cloud(0.0, 1.0, small());
    c.evaluate_real_line([](double x) { return cplx(x); });
    CHECK(seminorm(c, 1.0).seminorm == doctest::Approx(1.0).epsilon(1e-9));
    c.evaluate_real_line([](double) { return cplx(3.0, -1.0); });
    CHECK(seminorm(c, 0.5).seminorm == 0.0);

    double foci[] = {0.0};
    auto s = make_line_cloud(-1.0, 1.0, small(), foci);
    s.evaluate_real_line([](double x) { return cplx(std::sqrt(std::abs(x))); });
    double h = seminorm(s, 0.5).seminorm;
    // dense scan: the supremum is 1, reached by pairs touching 0
    double dense = 0.0;
    for (int i = 0; i <= 400; ++i)
        for (int j = i + 1; j <= 400; ++j) {
            double x = -1 + i / 200.0, y = -1 + j / 200.0;
            dense = std::max(dense, std::abs(std::sqrt(std::abs(x)) - std::sqrt(std::abs(y))) / std::sqrt(y - x));
        }
    CHECK(dense == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(h >= 1.0 - 1e-6);
    CHECK(h <= std::sqrt(2.0));

    SampleCloud empty(1, 1);
    CHECK_THROWS_AS(seminorm(empty, 0.5), PreconditionError);
    CHECK_THROWS_AS(seminorm(s, 0.0), PreconditionError);
    CHECK_THROWS_AS(seminorm(s, 1.5), PreconditionError);
}

TEST_CASE("seminorm properties") {
    auto c = make_line_cloud(-1.0, 1.0, small(8, 5));
    auto f = [](double x) { return cplx(std::sin(5 * x), std::pow(std::abs(x), 0.3)); };
    c.evaluate_real_line(f);
    for (double a : {0.2, 0.5, 1.0}) {
        auto e = seminorm(c, a);
        CHECK(e.seminorm >= 0.0);
        // every pair obeys |f(x) - f(y)| <= H d^alpha
        for (const auto& p : c.pairs())
            CHECK(std::abs(c.values()[p.i] - c.values()[p.j]) <= e.seminorm * std::pow(p.distance, a) * (1 + 1e-12));
        // adding pairs never lowers it
        SampleCloud more = c;
        double x[] = {0.0}, y[] = {1e-6};
        auto i = more.add_point(x, f(0.0));
        auto j = more.add_point(y, f(1e-6));
        more.add_pair(i, j);
        CHECK(seminorm(more, a).seminorm >= e.seminorm);
    }
    for (std::size_t s = 0; s < c.scales().size(); ++s) CHECK_FALSE(c.sparse()[s]);
}

TEST_CASE("per-variable seminorms on the bidisc") {
    ProductRegion reg{2, [](std::span<const cplx> z) { return std::abs(z[0]) < 1 && std::abs(z[1]) < 1; }, 1.0};
    auto opt = small(8, 3);
    auto c = make_product_cloud(reg, opt, true);
    c.evaluate_complex([](std::span<const cplx> z) { return std::conj(z[0]); });
    CHECK(per_variable_seminorm(c, 1, 0.5).seminorm == 0.0);
    CHECK(per_variable_seminorm(c, 0, 1.0).seminorm == doctest::Approx(1.0).epsilon(0.02));
    CHECK_THROWS_AS(per_variable_seminorm(c, 2, 0.5), PreconditionError);

    // H^alpha <= n max_j H_j^alpha
    std::vector<std::function<cplx(std::span<const cplx>)>> fs = {
        [](std::span<const cplx> z) { return std::pow(std::abs(z[0] - 0.3), 0.5) + std::conj(z[1]); },
        [](std::span<const cplx> z) { return z[0] * std::conj(z[1]) * std::conj(z[1]); },
        [](std::span<const cplx> z) { return cplx(std::pow(std::abs(z[1]), 0.5) * std::cos(z[0].real())); }};
    for (const auto& f : fs) {
        c.evaluate_complex(f);
        for (double a : {0.5, 1.0}) {
            double full = seminorm(c, a).seminorm;
            double m = std::max(per_variable_seminorm(c, 0, a).seminorm, per_variable_seminorm(c, 1, a).seminorm);
            CHECK(full <= 2.0 * m * 1.05);
            CHECK(m <= full * (1 + 1e-12));
        }
    }
}

TEST_CASE("exponent fit") {
    double foci[] = {0.0};
    auto c = make_line_cloud(-1.0, 1.0, small(16), foci);
    c.evaluate_real_line([](double x) { return cplx(std::sqrt(std::abs(x))); });
    auto e = exponent_fit(c);
    CHECK(e.alpha == doctest::Approx(0.5).epsilon(0.06));
    CHECK(std::abs(e.alpha - 0.5) <= 0.03);
    CHECK(e.fit_r2 > 0.99);

    auto l = make_line_cloud(0.0, 1.0, small(16));
    l.evaluate_real_line([](double x) { return cplx(x); });
    CHECK(std::abs(exponent_fit(l).alpha - 1.0) <= 0.03);

    // branch point of (xi - 1)^0.3 at the end of the radius
    double end[] = {1.0};
    auto r = make_line_cloud(0.0, 1.0, small(16), end);
    r.evaluate_real_line([](double x) {
        cplx w = cplx(x - 1.0, 0.0);
        double arg = std::arg(w);
        if (arg < 0) arg += 2 * std::numbers::pi;
        return std::polar(std::pow(std::abs(w), 0.3), 0.3 * arg);
    });
    CHECK(std::abs(exponent_fit(r).alpha - 0.3) <= 0.05);

    // flat noise below the floor is ignored, too few scales is an error
    auto few = make_line_cloud(0.0, 1.0, small(3));
    few.evaluate_real_line([](double x) { return cplx(x); });
    CHECK_THROWS_AS(exponent_fit(few), PreconditionError);
    CHECK_THROWS_AS(exponent_fit(l, 1.0), PreconditionError);
}

TEST_CASE("csv round trip") {
    auto c = make_line_cloud(0.0, 1.0, small(4));
    c.evaluate_real_line([](double x) { return cplx(x * x, -x); });
    std::stringstream ss;
    c.write_csv(ss);
    std::string first;
    std::getline(ss, first);
    CHECK(first == "x0,re_f,im_f");
    ss.seekg(0);
    auto back = SampleCloud::read_csv(ss);
    REQUIRE(back.size() == c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
        CHECK(back.point(i)[0] == c.point(i)[0]);
        CHECK(back.values()[i] == c.values()[i]);
    }
    // |(x + y, -1)| < sqrt(5) on [0, 1]
    double lip = seminorm(back, 1.0).seminorm;
    CHECK(lip <= std::sqrt(5.0));
    CHECK(lip > 2.2);
    std::stringstream bad("x0,re_f,im_f\n0.1,zz,0\n");
    CHECK_THROWS_AS(SampleCloud::read_csv(bad), PreconditionError);
}

TEST_CASE("mollifier normalization and exactness") {
    Mollifier m1(1), m2(2);
    CHECK(m1.C() * bump_integral_oracle(1) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(m2.C() * bump_integral_oracle(2) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(m1.rho(1.0) == 0.0);
    CHECK(m1.rho(-1.5) == 0.0);
    CHECK(m1.rho(0.3) > 0.0);

    for (int j : {1, 4, 100}) {
        CHECK(m1.mollify([](double) { return 2.5; }, j, 0.2) == doctest::Approx(2.5).epsilon(1e-6));
        CHECK(std::abs(m1.mollify([](double x) { return x; }, j, 0.37) - 0.37) < 1e-6);
        CHECK(std::abs(m2.mollify([](cplx) { return cplx(2.0, 1.0); }, j, {0.1, 0.2}) - cplx(2.0, 1.0)) < 1e-6);
        CHECK(std::abs(m2.mollify([](cplx z) { return 3.0 * z - std::conj(z); }, j, {0.1, 0.2}) -
                       (3.0 * cplx(0.1, 0.2) - cplx(0.1, -0.2))) < 1e-6);
    }
    CHECK_THROWS_AS(m1.mollify([](double x) { return x; }, 4, 0.9, Interval{-1.0, 1.0}), PreconditionError);
    CHECK_NOTHROW(m1.mollify([](double x) { return x; }, 20, 0.9, Interval{-1.0, 1.0}));
}

TEST_CASE("mollified one-sided power at the origin") {
    Mollifier m(1);
    const double a = 0.5;
    double mom = moment_oracle(a);
    CHECK(m.moment(a) == doctest::Approx(mom).epsilon(1e-9));
    double brk[] = {0.0};
    for (int j : {10, 1000, 100000}) {
        double v = m.mollify([a](double x) { return x > 0 ? std::pow(x, a) : 0.0; }, j, 0.0, {}, brk);
        CHECK(v == doctest::Approx(std::pow(1.0 / j, a) * mom).epsilon(1e-8));
    }
}

TEST_CASE("counterexample gap") {
    int js[] = {8, 16, 32, 64, 128};
    for (double a : {0.1, 0.5, 0.9}) {
        auto g = mollifier_counterexample_gap(a, js);
        double ref = moment_oracle(a);
        for (const auto& p : g) {
            CHECK(std::abs(p.quotient - g[0].quotient) < 1e-4);
            CHECK(std::abs(p.quotient - ref) < 1e-4);
            CHECK(std::abs(p.phi_at_minus) < 1e-8);
        }
    }
    CHECK(moment_oracle(0.9) < moment_oracle(0.1));
    CHECK(mollifier_counterexample_gap(0.9, js)[0].quotient < mollifier_counterexample_gap(0.1, js)[0].quotient);
    CHECK_THROWS_AS(mollifier_counterexample_gap(1.0, js), PreconditionError);
}

TEST_CASE("convergence curves") {
    auto opt = small(20);
    LineFunction p06{[](double x) { return std::pow(std::abs(x), 0.6); }, {-1.0, 1.0}, {0.0}};
    {
        int js[] = {8, 16, 32, 64};
        auto c = mollifier_convergence_curve(p06, 0.6, 0.3, js, {-0.5, 0.5}, opt);
        for (std::size_t k = 1; k < c.size(); ++k) CHECK(c[k].norm < c[k - 1].norm);
        // self-similar profile: each doubling of j scales the error by about 2^{-0.3}
        double rate = std::log(c.back().norm / c.front().norm) / std::log(8.0);
        CHECK(rate == doctest::Approx(-0.3).epsilon(0.15));
    }
    {
        int js[] = {8, 64, 512, 4096, 32768};
        auto c = mollifier_convergence_curve(p06, 0.6, 0.3, js, {-0.5, 0.5}, opt);
        for (std::size_t k = 1; k < c.size(); ++k) CHECK(c[k].norm < c[k - 1].norm);
        CHECK(c.back().norm < c.front().norm / 4);
        CHECK(c.back().norm < 0.1 * c.front().norm);
    }
    {
        LineFunction s{[](double x) { return std::sin(3 * x); }, {-1.0, 1.0}, {}};
        int js[] = {8, 16, 32, 64};
        auto c = mollifier_convergence_curve(s, 1.0, 0.5, js, {-0.5, 0.5}, opt);
        for (std::size_t k = 1; k < c.size(); ++k) {
            CHECK(c[k].norm < c[k - 1].norm);
            // at least first order; the even kernel actually gives second order
            CHECK(c[k].norm * c[k].j <= 1.05 * c[k - 1].norm * c[k - 1].j);
        }
    }
    {
        LineFunction k{[](double) { return 4.0; }, {-1.0, 1.0}, {}};
        int js[] = {8, 16};
        for (const auto& p : mollifier_convergence_curve(k, 1.0, 0.5, js, {-0.5, 0.5}, opt)) CHECK(p.norm < 1e-6);
        CHECK_THROWS_AS(mollifier_convergence_curve(k, 0.5, 0.5, js, {-0.5, 0.5}, opt), PreconditionError);
        int tiny[] = {1};
        CHECK_THROWS_AS(mollifier_convergence_curve(k, 1.0, 0.5, tiny, {-0.5, 0.5}, opt), PreconditionError);
    }
}
