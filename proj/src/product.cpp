#include "dbar/product.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <optional>

#include "dbar/error.hpp"
#include "dbar/random.hpp"

namespace dbar {

namespace {

void check_ops(std::span<const SliceOp> ops, int n) {
    unsigned seen = 0;
    for (const auto& op : ops) {
        if (op.var < 0 || op.var >= n) throw PreconditionError("slice operator: variable index out of range");
        if ((seen >> op.var) & 1u) throw PreconditionError("slice operator: variable used twice");
        seen |= 1u << op.var;
    }
}

LinearFunctional functional(const CauchyOperators& c, OpKind kind, cplx z, std::span<const cplx> hints) {
    return kind == OpKind::T ? c.T_functional(z) : c.S_functional(z, hints);
}

// value of the operator on the constant 1
cplx op_total(const CauchyOperators& c, OpKind kind, cplx z) {
    if (kind == OpKind::S) {
        c.S_functional(z);  // interior check
        return 1.0;
    }
    return c.T_one(z);
}

}  // namespace

ProductOperators::ProductOperators(ProductDomain domain, ProductConfig cfg) : domain_(std::move(domain)), cfg_(cfg) {
    require(domain_.dimension() >= 1, "ProductOperators: empty product");
    require(cfg_.boundary_nodes >= 8 && cfg_.mesh >= 8, "ProductOperators: resolution too small");
    for (const auto& d : domain_.factors())
        full_.push_back(CauchyOperators::make(d, cfg_.boundary_nodes, cfg_.mesh, AreaScheme::polar_centered, cfg_.cauchy));
}

const CauchyOperators& ProductOperators::nested_factor(int j) const {
    std::call_once(nested_once_, [this] {
        for (const auto& d : domain_.factors())
            nested_.push_back(CauchyOperators::make(d, cfg_.nested_boundary_nodes, cfg_.nested_mesh,
                                                    AreaScheme::polar_centered, cfg_.cauchy));
    });
    return nested_.at(j);
}

cplx ProductOperators::apply(std::span<const SliceOp> ops, const ScalarFieldN& f, std::span<const cplx> z) const {
    const int n = dimension();
    require(static_cast<int>(z.size()) == n, "apply: point has the wrong dimension");
    require(f.arity == n, "apply: field arity differs from the domain dimension");
    require(static_cast<bool>(f.eval), "apply: field has no evaluator");
    check_ops(ops, n);
    if (cfg_.factorize && f.separable) return apply_separable(ops, f, z);
    return apply_nested(ops, f, z);
}

// The nested sum over a tensor product of functionals factorizes exactly for a
// product integrand, so each operator only meets its own factor.
cplx ProductOperators::apply_separable(std::span<const SliceOp> ops, const ScalarFieldN& f,
                                       std::span<const cplx> z) const {
    const int n = dimension();
    std::vector<int> op_of(n, -1);
    for (std::size_t k = 0; k < ops.size(); ++k) op_of[ops[k].var] = static_cast<int>(k);
    std::vector<std::optional<LinearFunctional>> L(ops.size());
    std::vector<std::optional<cplx>> total(ops.size());

    cplx acc = 0.0;
    for (const auto& t : *f.separable) {
        cplx v = t.coeff;
        for (int var = 0; var < n && v != cplx(0.0); ++var) {
            const auto& g = var < static_cast<int>(t.factors.size()) ? t.factors[var] : std::function<cplx(cplx)>{};
            int k = op_of[var];
            if (k < 0) {
                if (g) v *= g(z[var]);
                continue;
            }
            const auto& c = full_[var];
            if (!g) {
                if (!total[k]) total[k] = op_total(c, ops[k].kind, z[var]);
                v *= *total[k];
            } else {
                if (!L[k]) L[k] = functional(c, ops[k].kind, z[var], f.hints(var));
                v *= L[k]->apply(g);
            }
        }
        acc += v;
    }
    // operators whose variable no term touched still check their point
    for (std::size_t k = 0; k < ops.size(); ++k)
        if (!L[k] && !total[k]) full_[ops[k].var].S_functional(z[ops[k].var]);
    return acc;
}

cplx ProductOperators::apply_nested(std::span<const SliceOp> ops, const ScalarFieldN& f,
                                    std::span<const cplx> z) const {
    cplx factor = 1.0;
    std::vector<SliceOp> live;
    std::vector<LinearFunctional> L;
    for (const auto& op : ops) {
        if (!f.depends_on(op.var)) {
            factor *= op_total(full_[op.var], op.kind, z[op.var]);
        } else {
            live.push_back(op);
            L.push_back(functional(nested_factor(op.var), op.kind, z[op.var], f.hints(op.var)));
        }
    }
    PointN p(z.begin(), z.end());
    auto rec = [&](auto&& self, std::size_t k) -> cplx {
        if (k == live.size()) {
            cplx v = f.eval(p);
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                throw NumericalError("integrand is not finite at a quadrature node");
            return v;
        }
        const auto& Lk = L[k];
        const int var = live[k].var;
        cplx saved = p[var];
        cplx acc = 0.0;
        for (std::size_t i = 0; i < Lk.nodes.size(); ++i) {
            if (Lk.weights[i] == cplx(0.0)) continue;
            p[var] = Lk.nodes[i];
            acc += Lk.weights[i] * self(self, k + 1);
        }
        p[var] = saved;
        return acc;
    };
    return factor * rec(rec, 0);
}

cplx slice_T(const ProductOperators& ops, int j, const ScalarFieldN& f, std::span<const cplx> z) {
    const SliceOp op{OpKind::T, j};
    return ops.apply(std::span(&op, 1), f, z);
}

cplx slice_S(const ProductOperators& ops, int j, const ScalarFieldN& f, std::span<const cplx> z) {
    const SliceOp op{OpKind::S, j};
    return ops.apply(std::span(&op, 1), f, z);
}

SolutionField::SolutionField(std::shared_ptr<const ProductOperators> ops, std::vector<Term> terms,
                             Provenance provenance)
    : ops_(std::move(ops)), terms_(std::move(terms)), provenance_(provenance), cache_(std::make_shared<Cache>()) {
    require(ops_ != nullptr, "SolutionField: no operators");
    n_ = ops_->dimension();
}

SolutionField SolutionField::closed_form(int n, FieldFn u) {
    require(n >= 1 && static_cast<bool>(u), "SolutionField: closed form needs an evaluator");
    SolutionField s;
    s.n_ = n;
    s.closed_ = std::move(u);
    s.cache_ = std::make_shared<Cache>();
    return s;
}

std::string SolutionField::describe() const {
    std::string p = provenance_ == Provenance::composed_T ? "composed-T"
                    : provenance_ == Provenance::fp_T_star ? "T-star"
                                                           : "closed-form";
    if (provenance_ == Provenance::closed_form) return p;
    const auto& c = ops_->config();
    return p + " nodes=" + std::to_string(c.boundary_nodes) + " mesh=" + std::to_string(c.mesh) +
           " nested_nodes=" + std::to_string(c.nested_boundary_nodes) +
           " nested_mesh=" + std::to_string(c.nested_mesh);
}

cplx SolutionField::term_value(std::size_t k, std::span<const cplx> z) const {
    require(k < terms_.size(), "SolutionField: term index out of range");
    const auto& t = terms_[k];
    return t.sign * ops_->apply(t.ops, t.field, z);
}

cplx SolutionField::operator()(std::span<const cplx> z) const {
    require(static_cast<int>(z.size()) == n_, "SolutionField: point has the wrong dimension");
    if (closed_) return closed_(z);
    std::string key(z.size() * sizeof(cplx), '\0');
    std::memcpy(key.data(), z.data(), key.size());
    {
        std::lock_guard<std::mutex> lock(cache_->mu);
        auto it = cache_->values.find(key);
        if (it != cache_->values.end()) return it->second;
    }
    cplx acc = 0.0;
    for (std::size_t k = 0; k < terms_.size(); ++k) acc += term_value(k, z);
    std::lock_guard<std::mutex> lock(cache_->mu);
    cache_->values[key] = acc;
    return acc;
}

FieldFn SolutionField::as_function() const {
    return [self = *this](std::span<const cplx> z) { return self(z); };
}

std::size_t SolutionField::cache_size() const {
    std::lock_guard<std::mutex> lock(cache_->mu);
    return cache_->values.size();
}

namespace {

void check_form(const ProductOperators& ops, const ZeroOneForm& form) {
    const int n = ops.dimension();
    if (form.dimension() != n)
        throw PreconditionError("form has " + std::to_string(form.dimension()) + " components on a product of " +
                                std::to_string(n) + " factors");
    if (n > ops.config().max_dimension)
        throw PreconditionError("dimension " + std::to_string(n) + " exceeds the configured maximum " +
                                std::to_string(ops.config().max_dimension));
    for (const auto& f : form.components) {
        require(f.arity == n, "form component has the wrong arity");
        require(static_cast<bool>(f.eval), "form component has no evaluator");
    }
}

}  // namespace

SolutionField solve(std::shared_ptr<const ProductOperators> ops, const ZeroOneForm& form) {
    require(ops != nullptr, "solve: no operators");
    check_form(*ops, form);
    std::vector<SolutionField::Term> terms;
    for (int j = 0; j < form.dimension(); ++j) {
        SolutionField::Term t;
        t.ops.push_back({OpKind::T, j});
        for (int l = j - 1; l >= 0; --l) t.ops.push_back({OpKind::S, l});
        t.field = form.components[j];
        terms.push_back(std::move(t));
    }
    return SolutionField(std::move(ops), std::move(terms), SolutionField::Provenance::composed_T);
}

SolutionField solve_fp(std::shared_ptr<const ProductOperators> ops, const ZeroOneForm& form) {
    require(ops != nullptr, "solve_fp: no operators");
    check_form(*ops, form);
    const int n = form.dimension();
    std::vector<SolutionField::Term> terms;
    for (unsigned I = 1; I < (1u << n); ++I) {
        int top = 31 - std::countl_zero(I);
        unsigned mask = I & ~(1u << top);
        const ScalarFieldN* g = form.components[top].partial(mask);
        if (!g)
            throw PreconditionError("solve_fp: component " + std::to_string(top + 1) +
                                    " lacks the analytic partial for mask " + std::to_string(mask));
        SolutionField::Term t;
        t.sign = (std::popcount(I) % 2 == 1) ? 1.0 : -1.0;
        for (int v = 0; v < n; ++v)
            if ((I >> v) & 1u) t.ops.push_back({OpKind::T, v});
        t.field = *g;
        terms.push_back(std::move(t));
    }
    for (int j = 0; j < n; ++j) {
        double mis = partials_fd_mismatch(ops->domain(), form.components[j]);
        if (mis > 1e-3)
            throw PreconditionError("solve_fp: declared partials of component " + std::to_string(j + 1) +
                                    " disagree with finite differences by " + std::to_string(mis));
    }
    return SolutionField(std::move(ops), std::move(terms), SolutionField::Provenance::fp_T_star);
}

double operator_equality_gap(std::shared_ptr<const ProductOperators> ops, const ZeroOneForm& form,
                             std::span<const PointN> points) {
    auto u = solve(ops, form);
    auto v = solve_fp(ops, form);
    double worst = 0.0;
    for (const auto& z : points) worst = std::max(worst, std::abs(u(z) - v(z)));
    return worst;
}

cplx fd_dbar_n(const FieldFn& f, std::span<const cplx> z, int v, double h) {
    PointN p(z.begin(), z.end());
    auto at = [&](cplx d) {
        p[v] = z[v] + d;
        return f(p);
    };
    cplx dx = (at(h) - at(-h)) / (2.0 * h);
    cplx dy = (at(cplx(0.0, h)) - at(cplx(0.0, -h))) / (2.0 * h);
    return 0.5 * (dx + cplx(0.0, 1.0) * dy);
}

double default_fd_step(const ProductDomain& domain) {
    double d = 0.0;
    for (const auto& f : domain.factors()) d = std::max(d, f.diameter());
    return 1e-4 * d;
}

namespace {

void check_margin(const ProductDomain& domain, std::span<const PointN> points, double need, const char* who) {
    for (const auto& z : points) {
        if (static_cast<int>(z.size()) != domain.dimension())
            throw PreconditionError(std::string(who) + ": point has the wrong dimension");
        for (int v = 0; v < domain.dimension(); ++v) {
            const auto& D = domain.factor(v);
            if (!D.contains(z[v]) || D.boundary_distance(z[v]) <= need)
                throw PreconditionError(std::string(who) + ": point is closer than " + std::to_string(need) +
                                        " to the boundary of factor " + std::to_string(v + 1));
        }
    }
}

}  // namespace

double check_closed(const ProductDomain& domain, const ZeroOneForm& form, std::span<const PointN> points, double h) {
    require(form.dimension() == domain.dimension(), "check_closed: form dimension differs from the domain");
    require(h > 0.0, "check_closed: step must be positive");
    check_margin(domain, points, h, "check_closed");
    const int n = form.dimension();
    auto d = [&](int i, int j, std::span<const cplx> z) {
        // d f_j / d conj(z_i)
        const auto& fj = form.components[j];
        if (const ScalarFieldN* p = fj.partial(1u << i)) return p->eval(z);
        return fd_dbar_n(fj.eval, z, i, h);
    };
    double worst = 0.0;
    for (const auto& z : points)
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) worst = std::max(worst, std::abs(d(i, j, z) - d(j, i, z)));
    return worst;
}

double residual(const ProductDomain& domain, const FieldFn& u, const ZeroOneForm& form,
                std::span<const PointN> points, double h, double margin) {
    require(form.dimension() == domain.dimension(), "residual: form dimension differs from the domain");
    require(h > 0.0, "residual: step must be positive");
    check_margin(domain, points, h + margin, "residual");
    double worst = 0.0;
    for (const auto& z : points)
        for (int j = 0; j < form.dimension(); ++j)
            worst = std::max(worst, std::abs(fd_dbar_n(u, z, j, h) - form.components[j].eval(z)));
    return worst;
}

double residual(const ProductDomain& domain, const SolutionField& u, const ZeroOneForm& form,
                std::span<const PointN> points, double h, double margin) {
    return residual(domain, u.as_function(), form, points, h, margin);
}

double partials_fd_mismatch(const ProductDomain& domain, const ScalarFieldN& f, int count, std::uint64_t seed) {
    if (f.partials.empty()) return 0.0;
    auto pts = random_interior_points(domain, count, seed, 0.05);
    const double h = default_fd_step(domain);
    double worst = 0.0;
    for (const auto& [mask, g] : f.partials) {
        int i = std::countr_zero(mask);
        const ScalarFieldN* lower = f.partial(mask & ~(1u << i));
        if (!lower || !lower->eval || !g->eval) continue;
        for (const auto& z : pts) worst = std::max(worst, std::abs(g->eval(z) - fd_dbar_n(lower->eval, z, i, h)));
    }
    return worst;
}

std::vector<PointN> random_interior_points(const ProductDomain& domain, int count, std::uint64_t seed,
                                           double margin) {
    SplitRng rng(seed);
    const int n = domain.dimension();
    std::vector<PointN> out(count, PointN(n));
    for (int v = 0; v < n; ++v) {
        const auto& D = domain.factor(v);
        const auto& b = D.bounding_box();
        auto g = rng.stream(static_cast<std::uint64_t>(v));
        std::uniform_real_distribution<double> ux(b.xmin, b.xmax), uy(b.ymin, b.ymax);
        const double need = margin * D.diameter();
        for (int k = 0; k < count; ++k) {
            for (int tries = 0;; ++tries) {
                if (tries > 100000) throw PreconditionError("random_interior_points: margin leaves no room");
                cplx c(ux(g), uy(g));
                if (D.contains(c) && D.boundary_distance(c) > need) {
                    out[k][v] = c;
                    break;
                }
            }
        }
    }
    return out;
}

std::vector<PointN> grid_points(std::span<const std::vector<cplx>> per_variable) {
    std::vector<PointN> out{PointN{}};
    for (const auto& axis : per_variable) {
        std::vector<PointN> next;
        for (const auto& p : out)
            for (cplx c : axis) {
                PointN q = p;
                q.push_back(c);
                next.push_back(std::move(q));
            }
        out = std::move(next);
    }
    return out;
}

std::vector<cplx> apply_on_grid(const ProductOperators& ops, SliceOp op, const ScalarFieldN& f,
                                std::span<const std::vector<cplx>> axes) {
    const int n = ops.dimension();
    require(static_cast<int>(axes.size()) == n, "apply_on_grid: one axis per variable");
    require(f.arity == n, "apply_on_grid: field arity differs from the domain dimension");
    const SliceOp one[] = {op};
    check_ops(one, n);
    auto pts = grid_points(axes);
    std::vector<cplx> out(pts.size());
    if (!ops.config().factorize || !f.separable) {
        for (std::size_t i = 0; i < pts.size(); ++i) out[i] = ops.apply(one, f, pts[i]);
        return out;
    }
    const auto& terms = *f.separable;
    const auto& c = ops.factor(op.var);
    const auto& axis = axes[op.var];
    // image[k][t]: the operator applied to the factor of term t at axis point k
    std::vector<std::vector<cplx>> image(axis.size(), std::vector<cplx>(terms.size()));
    for (std::size_t k = 0; k < axis.size(); ++k) {
        std::optional<LinearFunctional> L;
        std::optional<cplx> total;
        for (std::size_t t = 0; t < terms.size(); ++t) {
            const auto& fs = terms[t].factors;
            if (op.var < static_cast<int>(fs.size()) && fs[op.var]) {
                if (!L) L = functional(c, op.kind, axis[k], f.hints(op.var));
                image[k][t] = L->apply(fs[op.var]);
            } else {
                if (!total) total = op_total(c, op.kind, axis[k]);
                image[k][t] = *total;
            }
        }
    }
    // grid_points is row-major with the last variable fastest
    std::size_t stride = 1;
    for (int v = n - 1; v > op.var; --v) stride *= axes[v].size();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const std::size_t k = (i / stride) % axis.size();
        cplx acc = 0.0;
        for (std::size_t t = 0; t < terms.size(); ++t) {
            cplx v = terms[t].coeff * image[k][t];
            const auto& fs = terms[t].factors;
            for (int var = 0; var < n && v != cplx(0.0); ++var)
                if (var != op.var && var < static_cast<int>(fs.size()) && fs[var]) v *= fs[var](pts[i][var]);
            acc += v;
        }
        out[i] = acc;
    }
    return out;
}

}  // namespace dbar
