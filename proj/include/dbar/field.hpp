#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "dbar/cauchy1d.hpp"

namespace dbar {

using PointN = std::vector<cplx>;
using FieldFn = std::function<cplx(std::span<const cplx>)>;

// coeff * prod_v factors[v](z_v); an empty factor stands for 1
struct SeparableTerm {
    cplx coeff = 1.0;
    std::vector<std::function<cplx(cplx)>> factors;
};

// A function on a product of n planar domains. Variables are 0-based.
struct ScalarFieldN {
    int arity = 0;
    FieldFn eval;
    // partials[mask] = d^s f / d conj(z_i1) ... d conj(z_is) over the variables in mask
    std::map<unsigned, std::shared_ptr<const ScalarFieldN>> partials;
    unsigned depends = ~0u;  // bit v clear: eval does not depend on z_v
    std::vector<std::vector<cplx>> singular_points;  // per variable, boundary points where f is not smooth
    std::optional<HolderClaim> holder_claim;
    // exact sum of products of one-variable functions, when known
    std::optional<std::vector<SeparableTerm>> separable;

    bool depends_on(int v) const { return (depends >> v) & 1u; }
    // mask 0 is the field itself; null when the partial was not supplied
    const ScalarFieldN* partial(unsigned mask) const;
    std::span<const cplx> hints(int v) const;
};

ScalarFieldN zero_field(int n);
ScalarFieldN constant_field(int n, cplx c);

struct ZeroOneForm {
    std::vector<ScalarFieldN> components;  // f_j d conj(z_j)
    int dimension() const { return static_cast<int>(components.size()); }
};

}  // namespace dbar
