#pragma once

#include <vector>

namespace dbar {

struct GaussRule {
    std::vector<double> nodes;    // on [-1, 1]
    std::vector<double> weights;
};

// n-point Gauss-Legendre rule. Cached; the returned reference stays valid.
const GaussRule& gauss_legendre(int n);

}  // namespace dbar
