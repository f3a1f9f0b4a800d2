#pragma once

#include <string>
#include <vector>

#include "dbar/product.hpp"

namespace dbar {

struct NamedField {
    std::string name;
    ScalarFieldN field;
    std::vector<std::vector<cplx>> foci;  // per variable, interior points that get dyadic sample rings
};

// Six separable fields on the bidisc: two polynomials, a smooth bump, interior
// C^alpha cusps in one and in both variables, and a cusp on the boundary of the first factor.
std::vector<NamedField> boundedness_family(double alpha);

struct BoundednessOptions {
    double alpha = 0.5;
    int axis_points = 24;     // random points per variable, on top of the focus rings
    int rings = 6;            // dyadic radii 2^-1 .. 2^-rings of ring_radius around each focus
    double ring_radius = 0.2;
    double margin = 0.05;     // samples keep margin * diameter from each boundary
    int random_pairs = 20000; // pairs that move both variables
    std::uint64_t seed = 1;
    ProductConfig solver;
};

struct BoundednessRow {
    std::string field;
    OpKind kind = OpKind::T;
    int var = 0;
    double alpha_in = 0.0;   // exponent for the data norm
    double alpha_out = 0.0;  // exponent for the image norm: alpha for T, alpha / 2 for S
    double norm_in = 0.0;
    double norm_out = 0.0;
    double ratio = 0.0;
};

// ||T_j f||_{C^alpha} / ||f||_{C^alpha} and ||S_j f||_{C^{alpha/2}} / ||f||_{C^alpha}
// for every field and variable, with the norms measured on a product grid
std::vector<BoundednessRow> boundedness_ratios(const ProductDomain& domain, const std::vector<NamedField>& family,
                                               const BoundednessOptions& opt);

}  // namespace dbar
