#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace dbar {

using cplx = std::complex<double>;

struct SamplePair {
    std::size_t i = 0;
    std::size_t j = 0;
    double distance = 0.0;
    int scale = -1;  // dyadic scale index, -1 for uniform random pairs
};

// Points in R^dim with complex values and an index of point pairs.
// Complex coordinates are stored as consecutive (re, im) blocks.
class SampleCloud {
public:
    SampleCloud(int dim, int block);

    int dim() const { return dim_; }
    int block() const { return block_; }
    std::size_t size() const { return values_.size(); }
    std::span<const double> point(std::size_t i) const { return {coords_.data() + i * dim_, static_cast<std::size_t>(dim_)}; }
    const std::vector<double>& coords() const { return coords_; }
    const std::vector<cplx>& values() const { return values_; }
    std::vector<cplx>& values() { return values_; }
    const std::vector<SamplePair>& pairs() const { return pairs_; }
    const std::vector<double>& scales() const { return scales_; }
    const std::vector<bool>& sparse() const { return sparse_; }
    double diameter() const { return diameter_; }

    std::size_t add_point(std::span<const double> x, cplx value = 0.0);
    // adds a pair; distance computed from the coordinates, must be > 0
    void add_pair(std::size_t i, std::size_t j, int scale = -1);
    void set_scales(std::vector<double> scales, double diameter);
    // recount pairs per scale; fewer than min_pairs marks a scale sparse
    void refresh_sparse(std::size_t min_pairs = 50);

    void evaluate(const std::function<cplx(std::span<const double>)>& f);
    void evaluate_real_line(const std::function<cplx(double)>& f);
    void evaluate_complex(const std::function<cplx(std::span<const cplx>)>& f);

    // point i as complex coordinates (block must be 2)
    std::vector<cplx> complex_point(std::size_t i) const;

    void write_csv(std::ostream& os) const;
    // pairs are rebuilt: all pairs for small clouds, seeded random pairs otherwise,
    // binned into dyadic scales of the point-set diameter
    static SampleCloud read_csv(std::istream& is, int block = 1, std::uint64_t seed = 0);

private:
    int dim_;
    int block_;
    std::vector<double> coords_;
    std::vector<cplx> values_;
    std::vector<SamplePair> pairs_;
    std::vector<double> scales_;
    std::vector<bool> sparse_;
    double diameter_ = 0.0;
};

struct CloudOptions {
    int scales = 8;               // dyadic scales 2^-1 .. 2^-scales of the diameter
    int pairs_per_scale = 60;
    int random_pairs = 10000;     // uniform random pairs
    std::uint64_t seed = 1;
};

// [a, b]; focus points get extra pairs (f, f + d), (f - d/2, f + d/2), (f - d, f) at every scale
SampleCloud make_line_cloud(double a, double b, const CloudOptions& opt, std::span<const double> foci = {});

// Points of a product of planar regions, each given by a membership test and a box.
// axis_pairs: half the pairs at each scale move a single complex coordinate.
struct ProductRegion {
    int n = 1;
    std::function<bool(std::span<const cplx>)> inside;
    double box = 1.0;  // coordinates sampled in [-box, box]^2 per variable
};
SampleCloud make_product_cloud(const ProductRegion& region, const CloudOptions& opt, bool axis_pairs = true,
                               std::span<const std::vector<cplx>> foci = {});

struct HolderEstimate {
    double alpha = 1.0;
    double seminorm = 0.0;
    std::size_t argmax_i = 0;
    std::size_t argmax_j = 0;
    double fit_r2 = 0.0;       // regression quality, exponent_fit only
    double raw_slope = 0.0;    // unclamped fitted slope, exponent_fit only
    int scales_used = 0;
    std::vector<double> scale_distance;  // per fitted scale
    std::vector<double> scale_max;       // max |f(x) - f(y)| at that scale
};

// sup over pairs of |f(x) - f(y)| / |x - y|^alpha
HolderEstimate seminorm(const SampleCloud& cloud, double alpha);
// the same over pairs whose points differ only in coordinate block j
HolderEstimate per_variable_seminorm(const SampleCloud& cloud, int j, double alpha);
double sup_norm(const SampleCloud& cloud);
// sup + seminorm
double holder_norm(const SampleCloud& cloud, double alpha);

// Slope of log max|f(x) - f(y)| against log d over the populated dyadic scales.
// Scales whose max is below 10 * noise_floor are dropped; at least 4 must remain.
HolderEstimate exponent_fit(const SampleCloud& cloud, double noise_floor = 0.0, int min_scales = 4);

// least squares slope and r^2 of y against x
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};
LineFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace dbar
