#include "dbar/examples.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dbar/error.hpp"
#include "dbar/holder.hpp"

namespace dbar {

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> default_xi_grid() {
    std::vector<double> g{-0.5, 0.0};
    for (int m = 1; m <= 8; ++m) g.push_back(1.0 - std::ldexp(1.0, -m));
    return g;
}

nlohmann::ordered_json cjson(cplx z) { return nlohmann::ordered_json::array({z.real(), z.imag()}); }

}  // namespace

BranchFunction BranchFunction::power(int k, double alpha) {
    require(k >= 0, "example 1.1: k must be >= 0");
    require(alpha > 0.0 && alpha < 1.0, "example 1.1: alpha must lie in (0, 1)");
    return {BranchKind::power, k, alpha};
}

BranchFunction BranchFunction::over_log(int k) {
    require(k >= 0, "example 1.2: k must be >= 0");
    return {BranchKind::power_over_log, k, 1.0};
}

double BranchFunction::branch_arg(cplx w) {
    double a = std::arg(w);
    if (a < 0.0) a += 2.0 * kPi;
    return a;
}

cplx BranchFunction::branch_log(cplx w) { return {std::log(std::abs(w)), branch_arg(w)}; }

cplx BranchFunction::operator()(cplx z1) const {
    cplx w = z1 - 1.0;
    if (w == cplx(0.0)) return 0.0;
    if (kind == BranchKind::power) return std::exp((k + alpha) * branch_log(w));
    cplx wk = 1.0;
    for (int i = 0; i <= k; ++i) wk *= w;
    return wk / branch_log(w);
}

std::string BranchFunction::variant() const { return kind == BranchKind::power ? "power" : "log"; }

ZeroOneForm example_form(const BranchFunction& b) {
    ZeroOneForm form;
    form.components.push_back(zero_field(2));
    ScalarFieldN f2 = zero_field(2);
    f2.eval = [b](std::span<const cplx> z) { return b(z[0]); };
    f2.depends = 1u;
    SeparableTerm t;
    t.factors = {[b](cplx z1) { return b(z1); }, {}};
    f2.separable = std::vector<SeparableTerm>{t};
    f2.singular_points = {{cplx(1.0)}, {}};
    if (b.kind == BranchKind::power) f2.holder_claim = HolderClaim{b.k, b.alpha};
    else f2.holder_claim = HolderClaim{b.k, 1.0};
    form.components.push_back(std::move(f2));
    return form;
}

ZeroOneForm example11_form(int k, double alpha) { return example_form(BranchFunction::power(k, alpha)); }
ZeroOneForm example12_form(int k) { return example_form(BranchFunction::over_log(k)); }

cplx contour_functional(const FieldFn& u, cplx xi, double radius, int nodes) {
    require(radius > 0.0 && nodes >= 8, "contour_functional: bad radius or node count");
    require(std::abs(xi) < 1.0, "contour_functional: xi must lie in the unit disc");
    const double h = 2.0 * kPi / nodes;
    cplx acc = 0.0;
    cplx z[2] = {xi, 0.0};
    for (int i = 0; i < nodes; ++i) {
        cplx e = std::polar(radius, i * h);
        z[1] = e;
        acc += u(z) * cplx(0.0, 1.0) * e * h;
    }
    return acc;
}

cplx closed_form_w(cplx xi, const BranchFunction& b) {
    require(std::abs(xi) < 1.0, "closed_form_w: xi must lie in the unit disc");
    return cplx(0.0, kPi / 2.0) * b(xi);
}

std::vector<cplx> divided_differences(std::span<const double> x, std::span<const cplx> w, int order) {
    require(x.size() == w.size(), "divided_differences: size mismatch");
    require(order >= 0, "divided_differences: negative order");
    std::vector<cplx> d(w.begin(), w.end());
    for (int r = 1; r <= order; ++r) {
        if (d.size() < 2) return {};
        std::vector<cplx> next(d.size() - 1);
        for (std::size_t m = 0; m + 1 < d.size(); ++m) next[m] = (d[m + 1] - d[m]) / (x[m + r] - x[m]);
        d = std::move(next);
    }
    return d;
}

namespace {

struct LadderIncrements {
    std::vector<double> node;   // left node of each divided difference
    std::vector<double> dist;   // spacing between consecutive entries
    std::vector<double> inc;    // |D_{m+1} - D_m|
};

LadderIncrements increments(std::span<const double> x, std::span<const cplx> w, int order) {
    auto D = divided_differences(x, w, order);
    LadderIncrements r;
    for (std::size_t m = 0; m + 1 < D.size(); ++m) {
        r.node.push_back(x[m]);
        r.dist.push_back(x[m + 1] - x[m]);
        r.inc.push_back(std::abs(D[m + 1] - D[m]));
    }
    return r;
}

HolderEstimate fit_increments(const LadderIncrements& li) {
    SampleCloud c(1, 1);
    for (std::size_t m = 0; m < li.inc.size(); ++m) {
        double a = li.node[m], b = a + li.dist[m];
        std::size_t i = c.add_point(std::span(&a, 1), 0.0);
        std::size_t j = c.add_point(std::span(&b, 1), li.inc[m]);
        c.add_pair(i, j, static_cast<int>(m));
    }
    c.set_scales(li.dist, li.node.empty() ? 1.0 : li.node.back() + li.dist.back() - li.node.front());
    return exponent_fit(c);
}

// increasing over the last four entries and clearly above the minimum
bool grows(const std::vector<double>& q) {
    if (q.size() < 5) return false;
    for (std::size_t m = q.size() - 4; m + 1 < q.size(); ++m)
        if (!(q[m + 1] > q[m])) return false;
    double lo = *std::min_element(q.begin(), q.end());
    return q.back() > 1.1 * lo;
}

}  // namespace

NoGainReport no_gain_report(const BranchFunction& b, const NoGainOptions& opt) {
    require(opt.ladder_min >= 1 && opt.ladder_max > opt.ladder_min, "no_gain_report: bad ladder");
    auto ops = std::make_shared<const ProductOperators>(make_polydisc(2), opt.solver);
    auto form = example_form(b);
    auto u = solve(ops, form);
    auto U = u.as_function();
    auto w_num = [&](double xi) { return contour_functional(U, xi, opt.radius, opt.contour_nodes); };
    const double scale = opt.radius * opt.radius / 0.25;  // w scales with radius^2 for these forms

    NoGainReport r;
    r.k = b.k;
    r.alpha = b.kind == BranchKind::power ? b.alpha : 1.0;
    r.variant = b.variant();
    r.xi_grid = opt.xi_grid.empty() ? default_xi_grid() : opt.xi_grid;
    for (double xi : r.xi_grid) {
        cplx wn = w_num(xi);
        cplx wc = scale * closed_form_w(xi, b);
        r.w_numeric.push_back(wn);
        r.w_closed.push_back(wc);
        r.max_rel_err = std::max(r.max_rel_err, std::abs(wn - wc) / std::abs(wc));
    }

    const bool is_log = b.kind == BranchKind::power_over_log;
    const int top = is_log ? std::max(opt.ladder_max, opt.log_ladder_max) : opt.ladder_max;
    std::vector<double> x;
    std::vector<cplx> w;
    for (int m = opt.ladder_min; m <= top; ++m) {
        x.push_back(1.0 - std::ldexp(1.0, -m));
        w.push_back(w_num(x.back()));
    }
    // exponent of the k-th divided differences over the short ladder
    std::size_t short_n = static_cast<std::size_t>(opt.ladder_max - opt.ladder_min + 1);
    auto li = increments(std::span(x).first(short_n), std::span(w).first(short_n), b.k);
    auto est = fit_increments(li);
    r.alpha_hat = est.raw_slope;
    r.fit_r2 = est.fit_r2;

    // quotient at an exponent just past the claimed class
    int order = is_log ? b.k + 1 : b.k;
    double expo = is_log ? opt.epsilon : b.alpha + 0.1;
    auto lq = increments(x, w, order);
    for (std::size_t m = 0; m < lq.inc.size(); ++m) {
        r.ladder.push_back(lq.node[m]);
        r.epsilon_quotient.push_back(lq.inc[m] / std::pow(lq.dist[m], expo));
    }
    r.divergence_flagged = grows(r.epsilon_quotient);
    return r;
}

nlohmann::ordered_json to_json(const NoGainReport& r) {
    nlohmann::ordered_json j;
    j["k"] = r.k;
    j["alpha"] = r.alpha;
    j["variant"] = r.variant;
    j["xi_grid"] = r.xi_grid;
    auto wn = nlohmann::ordered_json::array();
    auto wc = nlohmann::ordered_json::array();
    for (cplx z : r.w_numeric) wn.push_back(cjson(z));
    for (cplx z : r.w_closed) wc.push_back(cjson(z));
    j["w_numeric"] = wn;
    j["w_closed"] = wc;
    j["max_rel_err"] = r.max_rel_err;
    j["alpha_hat"] = r.alpha_hat;
    j["fit_r2"] = r.fit_r2;
    j["ladder"] = r.ladder;
    j["epsilon_quotient"] = r.epsilon_quotient;
    j["divergence_flagged"] = r.divergence_flagged;
    return j;
}

}  // namespace dbar
