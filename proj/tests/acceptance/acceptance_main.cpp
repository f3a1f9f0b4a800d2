// One PASS/FAIL line per acceptance criterion. Exit status is nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

#include "dbar/boundedness.hpp"
#include "dbar/cli/experiments.hpp"
#include "dbar/polynomial.hpp"

using namespace dbar;
using namespace dbar::cli;

namespace {

struct Outcome {
    bool passed = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) passed = false;
        if (!detail.empty()) detail += "; ";
        detail += what;
    }
};

std::string sci(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", x);
    return buf;
}

std::string fix(double x, int digits = 3) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.*f", digits, x);
    return buf;
}

RunResult run_experiment(const std::string& name, std::map<std::string, std::string> params) {
    ExperimentConfig c;
    c.experiment = name;
    c.params = std::move(params);
    return run(c);
}

double max_of(const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); }

// 1. f = Sf + T(dbar f) for the five-function family on the disc and the annulus
Outcome cauchy_green() {
    Outcome o;
    for (const char* d : {"disc(0,0,1)", "annulus(0,0,0.5,1)"}) {
        auto r = run_experiment("cauchy-green", {{"domain", d}, {"tolerance", "1e-4"}});
        double worst = max_of(r.table.column("max_residual"));
        o.require(r.passed() && r.table.rows().size() == 5, std::string(d) + " max residual " + sci(worst) + " < 1e-4");
    }
    return o;
}

// 2. dbar T f = f at points 0.2 away from the boundary
Outcome dbar_T() {
    Outcome o;
    const cplx c0(0.1, 0.2);
    std::vector<std::pair<const char*, ScalarField1D>> fam;
    fam.push_back({"one", {[](cplx) { return cplx(1.0); }}});
    fam.push_back({"zbar", {[](cplx z) { return std::conj(z); }}});
    fam.push_back({"zbar2", {[](cplx z) { return std::conj(z * z); }}});
    fam.push_back({"abs2", {[](cplx z) { return cplx(std::norm(z)); }}});
    fam.push_back({"bump", {[c0](cplx z) { return cplx(std::exp(-4.0 * std::norm(z - c0))); }}});
    for (const auto& D : {make_disc(0.0, 1.0), make_annulus(0.0, 0.5, 1.0)}) {
        auto ops = CauchyOperators::make_default(D);
        const double h = 1e-4 * D.diameter();
        auto pts = random_interior_points(ProductDomain({D}), 10, 5, 0.2 / D.diameter());
        double worst = 0.0;
        for (const auto& [name, f] : fam)
            for (const auto& p : pts) {
                cplx d = fd_dbar([&](cplx w) { return ops.T(f, w); }, p[0], h);
                worst = std::max(worst, std::abs(d - f.eval(p[0])));
            }
        o.require(worst < 1e-3, D.description() + " max |dbar Tf - f| " + sci(worst) + " < 1e-3");
    }
    return o;
}

// 3. Plemelj boundary values and the interior limit
Outcome plemelj() {
    Outcome o;
    for (const char* d : {"disc(0,0,1)", "annulus(0,0,0.5,1)"}) {
        auto r = run_experiment("plemelj", {{"domain", d}, {"function", "one"}, {"points", "32"}});
        double err = 0.0;
        for (const auto& c : r.checks)
            if (c.name.rfind("plemelj boundary value", 0) == 0) err = c.value;
        o.require(r.passed(), std::string(d) + " |Phi 1 - 1| " + sci(err) + " < 1e-8");
        double ratio = 0.0;
        bool ok = true;
        for (const char* f : {"zbar2", "abs2", "bump"}) {
            auto s = run_experiment("plemelj", {{"domain", d}, {"function", f}});
            ok = ok && s.passed();
            for (const auto& c : s.checks) ratio = std::max(ratio, c.value);
        }
        o.require(ok, std::string(d) + " interior error ratio at delta/2 " + fix(ratio) + " <= 0.6");
    }
    return o;
}

// 4. FD residual of the product solution on the bidisc
Outcome product_solver() {
    Outcome o;
    for (const char* form : {"dzbar2", "dbar:zb1*zb2"}) {
        auto t0 = std::chrono::steady_clock::now();
        auto r = run_experiment("residual", {{"form", form}, {"grid", "4"}, {"tolerance", "1e-3"}});
        double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        double res = r.table.column("max_residual").at(0);
        o.require(r.passed() && r.table.column("points").at(0) == 16 && s < 120.0,
                  std::string(form) + " residual " + sci(res) + " < 1e-3 in " + fix(s, 1) + " s");
    }
    return o;
}

// 5. T* = T on random forms, closed and not
Outcome operator_equality() {
    Outcome o;
    auto r = run_experiment("equality", {{"forms", "5"}, {"tolerance", "1e-3"}});
    auto closed = r.table.column("closedness");
    int open = static_cast<int>(std::count_if(closed.begin(), closed.end(), [](double c) { return c > 1e-6; }));
    o.require(r.passed() && open > 0, "bidisc gap " + sci(max_of(r.table.column("gap"))) + " < 1e-3 over 5 forms (" +
                                          std::to_string(open) + " not closed)");
    auto t = run_experiment("equality", {{"domain", "tridisc"}, {"forms", "1"}, {"tolerance", "3e-3"}});
    o.require(t.passed(), "tridisc gap " + sci(t.table.column("gap").at(0)) + " < 3e-3");
    return o;
}

// 6. S1 S2 f = f - T1 f_1 - T2 f_2 + T1 T2 f_12 on the tridisc
Outcome induction_identity() {
    Outcome o;
    auto ops = std::make_shared<const ProductOperators>(make_polydisc(3));
    auto f = Polynomial::parse("zb1*zb2 + zb2*zb3", 3).to_field();
    const std::vector<SliceOp> SS{{OpKind::S, 0}, {OpKind::S, 1}};
    const std::vector<SliceOp> T0{{OpKind::T, 0}}, T1{{OpKind::T, 1}}, T01{{OpKind::T, 0}, {OpKind::T, 1}};
    double worst = 0.0;
    for (const auto& z : random_interior_points(ops->domain(), 10, 3, 0.05)) {
        cplx lhs = ops->apply(SS, f, z);
        cplx rhs = f.eval(z) - ops->apply(T0, *f.partial(1), z) - ops->apply(T1, *f.partial(2), z) +
                   ops->apply(T01, *f.partial(3), z);
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    o.require(worst < 1e-4, "max gap " + sci(worst) + " < 1e-4 at 10 points");
    return o;
}

// 7. no Hoelder gain for the power data
Outcome no_gain_power() {
    Outcome o;
    for (double alpha : {0.5, 0.3}) {
        auto t0 = std::chrono::steady_clock::now();
        auto r = run_experiment("no-gain", {{"k", "0"}, {"alpha", fix(alpha, 1)}, {"tolerance", "1e-2"},
                                            {"alpha_tolerance", "0.05"}});
        double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        double a = r.table.report["alpha_hat"];
        double rel = r.table.report["max_rel_err"];
        o.require(r.passed() && r.table.rows().size() == 10 && s < 300.0,
                  "alpha " + fix(alpha, 1) + ": rel err " + sci(rel) + " < 1e-2, alpha_hat " + fix(a, 4) + " in " +
                      fix(s, 1) + " s");
    }
    return o;
}

// 8. the log variant: w matches and the (1 + epsilon) quotients diverge
Outcome no_gain_log() {
    Outcome o;
    auto r = run_experiment("no-gain", {{"variant", "log"}, {"k", "0"}, {"tolerance", "1e-2"}});
    double rel = r.table.report["max_rel_err"];
    bool flagged = r.table.report["divergence_flagged"];
    auto q = r.table.report["epsilon_quotient"];
    double growth = q.back().get<double>() / q.front().get<double>();
    o.require(rel < 1e-2, "rel err " + sci(rel) + " < 1e-2");
    o.require(flagged && r.passed(), std::string("divergence ") + (flagged ? "flagged" : "not flagged") +
                                         " (quotient grows x" + fix(growth, 1) + " along the ladder)");
    return o;
}

// 9. mollifier convergence and the non-convergence constant
Outcome mollifier() {
    Outcome o;
    std::vector<std::map<std::string, std::string>> fam = {
        {{"function", "abs"}, {"alpha", "0.6"}},
        {{"function", "abs"}, {"alpha", "0.8"}},
        {{"function", "sin"}, {"alpha", "1"}},
    };
    for (auto p : fam) {
        std::string label = p["function"] + "^" + p["alpha"];
        auto r = run_experiment("mollifier", p);
        auto n = r.table.column("norm");
        o.require(r.passed(), label + " final/initial " + sci(n.back() / n.front()) + " < 0.1");
    }
    auto g = run_experiment("mollifier", {{"mode", "gap"}, {"alpha", "0.5"}});
    std::ostringstream os;
    for (const auto& c : g.checks) os << (os.tellp() ? ", " : "") << c.name << " " << sci(c.value);
    o.require(g.passed(), "gap: " + os.str() + " (moment " + fix(g.table.column("moment").at(0), 6) + ")");
    return o;
}

// 10. slice operator ratios stay bounded when the grid is refined
Outcome boundedness() {
    Outcome o;
    auto D = make_polydisc(2);
    auto fam = boundedness_family(0.5);
    BoundednessOptions base;
    BoundednessOptions fine = base;
    fine.axis_points *= 2;
    fine.rings += 1;
    fine.solver.boundary_nodes *= 2;
    fine.solver.mesh *= 2;
    auto a = boundedness_ratios(D, fam, base);
    auto b = boundedness_ratios(D, fam, fine);
    double ca = 0.0, cb = 0.0, growth = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ca = std::max(ca, a[i].ratio);
        cb = std::max(cb, b[i].ratio);
        if (a[i].ratio > 1e-6) growth = std::max(growth, b[i].ratio / a[i].ratio - 1.0);
    }
    o.require(std::isfinite(ca) && cb <= 1.1 * ca,
              "constant " + fix(ca) + " -> " + fix(cb) + " after doubling (" + std::to_string(a.size()) + " ratios)");
    o.require(growth <= 0.1, "largest single-ratio growth " + fix(100 * growth, 1) + "% <= 10%");
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"Cauchy-Green identity", cauchy_green},
        {"dbar T = id", dbar_T},
        {"Plemelj boundary values", plemelj},
        {"product solver residual", product_solver},
        {"T* = T", operator_equality},
        {"induction identity", induction_identity},
        {"no gain, power data", no_gain_power},
        {"no gain, log data", no_gain_log},
        {"mollifier convergence and gap", mollifier},
        {"bounded slice operators", boundedness},
    };
    int failed = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        const auto& [name, fn] = criteria[k];
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o.passed = false;
            o.detail = std::string("error: ") + e.what();
        }
        double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (k == 0 && s >= 30.0) o.require(false, "runtime " + fix(s, 1) + " s >= 30 s");
        if (!o.passed) ++failed;
        std::printf("%s %2zu %s: %s [%.1f s]\n", o.passed ? "PASS" : "FAIL", k + 1, name, o.detail.c_str(), s);
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
