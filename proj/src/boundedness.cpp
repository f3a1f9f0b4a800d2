#include "dbar/boundedness.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "dbar/error.hpp"
#include "dbar/holder.hpp"
#include "dbar/random.hpp"

namespace dbar {

namespace {

using Fn1 = std::function<cplx(cplx)>;

NamedField separable_field(std::string name, std::vector<SeparableTerm> terms) {
    NamedField nf;
    nf.name = std::move(name);
    auto& f = nf.field;
    f.arity = 2;
    f.depends = 0;
    for (const auto& t : terms)
        for (std::size_t v = 0; v < t.factors.size(); ++v)
            if (t.factors[v]) f.depends |= 1u << v;
    f.eval = [terms](std::span<const cplx> z) {
        cplx acc = 0.0;
        for (const auto& t : terms) {
            cplx v = t.coeff;
            for (std::size_t k = 0; k < t.factors.size(); ++k)
                if (t.factors[k]) v *= t.factors[k](z[k]);
            acc += v;
        }
        return acc;
    };
    f.separable = std::move(terms);
    f.singular_points.assign(2, {});
    nf.foci.assign(2, {});
    return nf;
}

Fn1 cusp(cplx c, double alpha) {
    return [c, alpha](cplx z) { return cplx(std::pow(std::abs(z - c), alpha)); };
}

// samples of one factor: dyadic rings around the foci, then seeded uniform points
std::vector<cplx> axis_samples(const PlanarDomain& D, const std::vector<cplx>& foci, const BoundednessOptions& opt,
                               std::uint64_t seed) {
    const double need = opt.margin * D.diameter();
    auto ok = [&](cplx z) { return D.contains(z) && D.boundary_distance(z) > need; };
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    std::vector<cplx> out;
    for (cplx c : foci) {
        if (ok(c)) out.push_back(c);
        for (int s = 1; s <= opt.rings; ++s) {
            cplx z = c + std::polar(opt.ring_radius * std::ldexp(1.0, -s), golden * s);
            if (ok(z)) out.push_back(z);
        }
    }
    auto pts = random_interior_points(ProductDomain({D}), opt.axis_points, seed, opt.margin);
    for (const auto& p : pts) out.push_back(p[0]);
    return out;
}

double norm_on(SampleCloud& cloud, const std::vector<cplx>& values, double alpha) {
    cloud.values() = values;
    return holder_norm(cloud, alpha);
}

}  // namespace

std::vector<NamedField> boundedness_family(double alpha) {
    require(alpha > 0.0 && alpha < 1.0, "boundedness_family: alpha must lie in (0, 1)");
    const Fn1 zb = [](cplx z) { return std::conj(z); };
    const Fn1 zb2 = [](cplx z) { return std::conj(z * z); };
    const Fn1 abs2 = [](cplx z) { return cplx(std::norm(z)); };
    const Fn1 id = [](cplx z) { return z; };
    const cplx c0(0.1, 0.2);
    const Fn1 bump = [c0](cplx z) { return cplx(std::exp(-4.0 * std::norm(z - c0))); };

    std::vector<NamedField> fam;
    fam.push_back(separable_field("zb1*zb2", {{1.0, {zb, zb}}}));
    fam.push_back(separable_field("|z1|^2 + zb2^2", {{1.0, {abs2, {}}}, {1.0, {{}, zb2}}}));
    fam.push_back(separable_field("bump(z1)*z2", {{1.0, {bump, id}}}));

    auto f4 = separable_field("|z1 - 0.3|^a", {{1.0, {cusp(0.3, alpha), {}}}});
    f4.foci[0] = {0.3};
    fam.push_back(std::move(f4));

    auto f5 = separable_field("|z1 + 0.2i|^a + |z2 - 0.1|^a", {{1.0, {cusp({0.0, -0.2}, alpha), {}}},
                                                              {1.0, {{}, cusp(0.1, alpha)}}});
    f5.foci[0] = {cplx(0.0, -0.2)};
    f5.foci[1] = {0.1};
    fam.push_back(std::move(f5));

    auto f6 = separable_field("|z1 - 1|^a*zb2", {{1.0, {cusp(1.0, alpha), zb}}});
    f6.field.singular_points[0] = {1.0};
    f6.foci[0] = {0.85};
    fam.push_back(std::move(f6));

    for (auto& nf : fam) nf.field.holder_claim = HolderClaim{0, alpha};
    return fam;
}

std::vector<BoundednessRow> boundedness_ratios(const ProductDomain& domain, const std::vector<NamedField>& family,
                                               const BoundednessOptions& opt) {
    require(domain.dimension() == 2, "boundedness_ratios: the family lives on a product of two domains");
    require(opt.alpha > 0.0 && opt.alpha < 1.0, "boundedness_ratios: alpha must lie in (0, 1)");
    ProductOperators ops(domain, opt.solver);
    SplitRng rng(opt.seed);

    std::vector<std::vector<cplx>> axes(2);
    for (int v = 0; v < 2; ++v) {
        std::vector<cplx> foci;
        for (const auto& nf : family)
            if (v < static_cast<int>(nf.foci.size())) foci.insert(foci.end(), nf.foci[v].begin(), nf.foci[v].end());
        axes[v] = axis_samples(domain.factor(v), foci, opt, rng.split(v).seed());
    }
    const auto pts = grid_points(axes);
    const std::size_t m0 = axes[0].size(), m1 = axes[1].size();

    SampleCloud cloud(4, 2);
    for (const auto& z : pts) {
        const double x[] = {z[0].real(), z[0].imag(), z[1].real(), z[1].imag()};
        cloud.add_point(x);
    }
    // pairs moving one variable, then seeded pairs moving both
    for (std::size_t a = 0; a < m0; ++a)
        for (std::size_t i = 0; i < m1; ++i)
            for (std::size_t j = i + 1; j < m1; ++j) cloud.add_pair(a * m1 + i, a * m1 + j);
    for (std::size_t b = 0; b < m1; ++b)
        for (std::size_t i = 0; i < m0; ++i)
            for (std::size_t j = i + 1; j < m0; ++j) cloud.add_pair(i * m1 + b, j * m1 + b);
    auto g = rng.stream(0xb0);
    std::uniform_int_distribution<std::size_t> U(0, pts.size() - 1);
    for (int k = 0; k < opt.random_pairs; ++k) {
        std::size_t i = U(g), j = U(g);
        if (i / m1 != j / m1 && i % m1 != j % m1) cloud.add_pair(i, j);
    }

    std::vector<BoundednessRow> rows;
    for (const auto& nf : family) {
        std::vector<cplx> fv(pts.size());
        for (std::size_t i = 0; i < pts.size(); ++i) fv[i] = nf.field.eval(pts[i]);
        const double norm_in = norm_on(cloud, fv, opt.alpha);
        for (OpKind kind : {OpKind::T, OpKind::S})
            for (int v = 0; v < 2; ++v) {
                BoundednessRow r;
                r.field = nf.name;
                r.kind = kind;
                r.var = v;
                r.alpha_in = opt.alpha;
                r.alpha_out = kind == OpKind::T ? opt.alpha : opt.alpha / 2;
                r.norm_in = norm_in;
                r.norm_out = norm_on(cloud, apply_on_grid(ops, {kind, v}, nf.field, axes), r.alpha_out);
                r.ratio = r.norm_out / r.norm_in;
                rows.push_back(r);
            }
    }
    return rows;
}

}  // namespace dbar
