#include "dbar/field.hpp"

namespace dbar {

const ScalarFieldN* ScalarFieldN::partial(unsigned mask) const {
    if (mask == 0) return this;
    auto it = partials.find(mask);
    return it == partials.end() ? nullptr : it->second.get();
}

std::span<const cplx> ScalarFieldN::hints(int v) const {
    if (v < 0 || v >= static_cast<int>(singular_points.size())) return {};
    return singular_points[v];
}

ScalarFieldN constant_field(int n, cplx c) {
    ScalarFieldN f;
    f.arity = n;
    f.eval = [c](std::span<const cplx>) { return c; };
    f.depends = 0;
    if (c == cplx(0.0)) {
        f.separable.emplace();
    } else {
        SeparableTerm t;
        t.coeff = c;
        t.factors.resize(n);
        f.separable = std::vector<SeparableTerm>{t};
    }
    auto zero = std::make_shared<ScalarFieldN>();
    zero->arity = n;
    zero->eval = [](std::span<const cplx>) { return cplx(0.0); };
    zero->depends = 0;
    zero->separable.emplace();
    for (unsigned m = 1; m < (1u << n); ++m) f.partials[m] = zero;
    return f;
}

ScalarFieldN zero_field(int n) { return constant_field(n, 0.0); }

}  // namespace dbar
