#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "dbar/cauchy1d.hpp"
#include "dbar/field.hpp"
#include "dbar/geometry.hpp"

namespace dbar {

struct ProductConfig {
    // per-factor resolution for slice operators and separable integrands
    int boundary_nodes = kDefaultBoundaryNodes;
    int mesh = 256;  // AreaQuadrature::from_mesh parameter (256 -> polar 200 x 256)
    // reduced resolution for brute-force nested quadrature of non-separable integrands
    int nested_boundary_nodes = 128;
    int nested_mesh = 64;
    int max_dimension = 3;
    // false forces brute-force nesting even when a separable decomposition is known
    bool factorize = true;
    CauchyConfig cauchy;
};

enum class OpKind { T, S };

struct SliceOp {
    OpKind kind;
    int var;
};

// One-variable operators for every factor of a product domain.
class ProductOperators {
public:
    explicit ProductOperators(ProductDomain domain, ProductConfig cfg = {});

    const ProductDomain& domain() const { return domain_; }
    const ProductConfig& config() const { return cfg_; }
    int dimension() const { return domain_.dimension(); }
    const CauchyOperators& factor(int j) const { return full_.at(j); }
    const CauchyOperators& nested_factor(int j) const;

    // ops are listed outermost first; each variable appears at most once
    cplx apply(std::span<const SliceOp> ops, const ScalarFieldN& f, std::span<const cplx> z) const;

private:
    cplx apply_separable(std::span<const SliceOp> ops, const ScalarFieldN& f, std::span<const cplx> z) const;
    cplx apply_nested(std::span<const SliceOp> ops, const ScalarFieldN& f, std::span<const cplx> z) const;

    ProductDomain domain_;
    ProductConfig cfg_;
    std::vector<CauchyOperators> full_;
    mutable std::once_flag nested_once_;
    mutable std::vector<CauchyOperators> nested_;
};

// T_j f(z) and S_j f(z): the one-variable operator in z_j with the other variables frozen
cplx slice_T(const ProductOperators& ops, int j, const ScalarFieldN& f, std::span<const cplx> z);
cplx slice_S(const ProductOperators& ops, int j, const ScalarFieldN& f, std::span<const cplx> z);

class SolutionField {
public:
    enum class Provenance { composed_T, fp_T_star, closed_form };

    struct Term {
        double sign = 1.0;
        std::vector<SliceOp> ops;  // outermost first
        ScalarFieldN field;
    };

    SolutionField(std::shared_ptr<const ProductOperators> ops, std::vector<Term> terms, Provenance provenance);
    static SolutionField closed_form(int n, FieldFn u);

    int arity() const { return n_; }
    Provenance provenance() const { return provenance_; }
    const std::vector<Term>& terms() const { return terms_; }
    std::string describe() const;

    cplx operator()(std::span<const cplx> z) const;
    cplx term_value(std::size_t k, std::span<const cplx> z) const;
    FieldFn as_function() const;
    std::size_t cache_size() const;

private:
    SolutionField() = default;

    struct Cache {
        std::mutex mu;
        std::unordered_map<std::string, cplx> values;
    };

    int n_ = 0;
    std::shared_ptr<const ProductOperators> ops_;
    std::vector<Term> terms_;
    Provenance provenance_ = Provenance::closed_form;
    FieldFn closed_;
    std::shared_ptr<Cache> cache_;
};

// T1 f1 + T2 S1 f2 + ... + Tn S1...S(n-1) fn
SolutionField solve(std::shared_ptr<const ProductOperators> ops, const ZeroOneForm& form);
// sum_s (-1)^(s-1) sum_{i1<...<is} T_i1...T_is (d^(s-1) f_is / d conj(z_i1)...d conj(z_i(s-1)))
SolutionField solve_fp(std::shared_ptr<const ProductOperators> ops, const ZeroOneForm& form);

double operator_equality_gap(std::shared_ptr<const ProductOperators> ops, const ZeroOneForm& form,
                             std::span<const PointN> points);

// max over points and i < j of |dbar_i f_j - dbar_j f_i|; analytic partials when present
double check_closed(const ProductDomain& domain, const ZeroOneForm& form, std::span<const PointN> points, double h);

// max over points and j of |FD dbar_j u - f_j|
inline constexpr double kResidualMargin = 0.2;
double residual(const ProductDomain& domain, const FieldFn& u, const ZeroOneForm& form,
                std::span<const PointN> points, double h, double margin = kResidualMargin);
double residual(const ProductDomain& domain, const SolutionField& u, const ZeroOneForm& form,
                std::span<const PointN> points, double h, double margin = kResidualMargin);

// central-difference d/d(conj z_v)
cplx fd_dbar_n(const FieldFn& f, std::span<const cplx> z, int v, double h);
// h = 1e-4 * max factor diameter
double default_fd_step(const ProductDomain& domain);

// declared partials against finite differences at random interior points
double partials_fd_mismatch(const ProductDomain& domain, const ScalarFieldN& f, int count = 10,
                            std::uint64_t seed = 7);

// uniform points of the product whose coordinates keep margin * diameter from each boundary
std::vector<PointN> random_interior_points(const ProductDomain& domain, int count, std::uint64_t seed,
                                           double margin = 0.05);
// every combination of the per-variable coordinate lists
std::vector<PointN> grid_points(std::span<const std::vector<cplx>> per_variable);

// one slice operator on every point of grid_points(axes), in that order; a separable
// field needs one functional per distinct coordinate of the operator's variable
std::vector<cplx> apply_on_grid(const ProductOperators& ops, SliceOp op, const ScalarFieldN& f,
                                std::span<const std::vector<cplx>> axes);

}  // namespace dbar
