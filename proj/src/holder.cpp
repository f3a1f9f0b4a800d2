#include "dbar/holder.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

#include "dbar/error.hpp"
#include "dbar/random.hpp"

namespace dbar {

namespace {

double distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
    return std::sqrt(s);
}

std::string fmt_double(double v) {
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

HolderEstimate sup_quotient(const SampleCloud& cloud, double alpha, const std::function<bool(const SamplePair&)>& keep) {
    require(alpha > 0.0 && alpha <= 1.0, "seminorm: alpha must lie in (0, 1]");
    HolderEstimate e;
    e.alpha = alpha;
    bool any = false;
    const auto& v = cloud.values();
    for (const auto& p : cloud.pairs()) {
        if (!keep(p)) continue;
        any = true;
        double q = std::abs(v[p.i] - v[p.j]) / std::pow(p.distance, alpha);
        if (q > e.seminorm) {
            e.seminorm = q;
            e.argmax_i = p.i;
            e.argmax_j = p.j;
        }
    }
    if (!any) throw PreconditionError("seminorm: empty pair set");
    return e;
}

}  // namespace

SampleCloud::SampleCloud(int dim, int block) : dim_(dim), block_(block) {
    require(dim >= 1, "SampleCloud: dim must be >= 1");
    require(block == 1 || block == 2, "SampleCloud: block must be 1 or 2");
    require(dim % block == 0, "SampleCloud: dim must be a multiple of block");
}

std::size_t SampleCloud::add_point(std::span<const double> x, cplx value) {
    require(static_cast<int>(x.size()) == dim_, "SampleCloud: coordinate count mismatch");
    coords_.insert(coords_.end(), x.begin(), x.end());
    values_.push_back(value);
    return values_.size() - 1;
}

void SampleCloud::add_pair(std::size_t i, std::size_t j, int scale) {
    require(i < size() && j < size(), "SampleCloud: pair index out of range");
    double d = distance(point(i), point(j));
    require(d > 0.0, "SampleCloud: pair distance must be positive");
    pairs_.push_back({i, j, d, scale});
}

void SampleCloud::set_scales(std::vector<double> scales, double diameter) {
    scales_ = std::move(scales);
    diameter_ = diameter;
    refresh_sparse();
}

void SampleCloud::refresh_sparse(std::size_t min_pairs) {
    std::vector<std::size_t> count(scales_.size(), 0);
    for (const auto& p : pairs_)
        if (p.scale >= 0 && p.scale < static_cast<int>(count.size())) ++count[p.scale];
    sparse_.assign(scales_.size(), false);
    for (std::size_t s = 0; s < count.size(); ++s) sparse_[s] = count[s] < min_pairs;
}

void SampleCloud::evaluate(const std::function<cplx(std::span<const double>)>& f) {
    for (std::size_t i = 0; i < size(); ++i) values_[i] = f(point(i));
}

void SampleCloud::evaluate_real_line(const std::function<cplx(double)>& f) {
    require(dim_ == 1, "evaluate_real_line: cloud is not one-dimensional");
    for (std::size_t i = 0; i < size(); ++i) values_[i] = f(coords_[i]);
}

std::vector<cplx> SampleCloud::complex_point(std::size_t i) const {
    require(block_ == 2, "complex_point: cloud coordinates are not complex");
    std::vector<cplx> z(dim_ / 2);
    for (int k = 0; k < dim_ / 2; ++k) z[k] = {coords_[i * dim_ + 2 * k], coords_[i * dim_ + 2 * k + 1]};
    return z;
}

void SampleCloud::evaluate_complex(const std::function<cplx(std::span<const cplx>)>& f) {
    for (std::size_t i = 0; i < size(); ++i) {
        auto z = complex_point(i);
        values_[i] = f(z);
    }
}

void SampleCloud::write_csv(std::ostream& os) const {
    for (int k = 0; k < dim_; ++k) os << "x" << k << ",";
    os << "re_f,im_f\n";
    for (std::size_t i = 0; i < size(); ++i) {
        for (int k = 0; k < dim_; ++k) os << fmt_double(coords_[i * dim_ + k]) << ",";
        os << fmt_double(values_[i].real()) << "," << fmt_double(values_[i].imag()) << "\n";
    }
}

SampleCloud SampleCloud::read_csv(std::istream& is, int block, std::uint64_t seed) {
    std::string line;
    if (!std::getline(is, line)) throw PreconditionError("read_csv: missing header");
    int cols = 1 + static_cast<int>(std::count(line.begin(), line.end(), ','));
    if (cols < 3) throw PreconditionError("read_csv: need at least one coordinate column plus re_f, im_f");
    SampleCloud c(cols - 2, block);
    std::vector<double> row(cols);
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string cell;
        int k = 0;
        while (std::getline(ls, cell, ',')) {
            if (k >= cols) throw PreconditionError("read_csv: too many columns");
            auto r = std::from_chars(cell.data(), cell.data() + cell.size(), row[k]);
            if (r.ec != std::errc()) throw PreconditionError("read_csv: bad number '" + cell + "'");
            ++k;
        }
        if (k != cols) throw PreconditionError("read_csv: too few columns");
        c.add_point(std::span<const double>(row.data(), cols - 2), {row[cols - 2], row[cols - 1]});
    }
    const std::size_t n = c.size();
    double diam = 0.0;
    std::vector<SamplePair> raw;
    auto bin = [&](std::size_t i, std::size_t j) {
        double d = distance(c.point(i), c.point(j));
        if (d > 0.0) raw.push_back({i, j, d, -1});
    };
    if (n <= 2000) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) bin(i, j);
    } else {
        auto g = SplitRng(seed).stream(0);
        std::uniform_int_distribution<std::size_t> U(0, n - 1);
        for (int t = 0; t < 200000; ++t) {
            std::size_t i = U(g), j = U(g);
            if (i != j) bin(i, j);
        }
    }
    for (const auto& p : raw) diam = std::max(diam, p.distance);
    int smax = 0;
    for (auto& p : raw) {
        int s = static_cast<int>(std::lround(std::log2(diam / p.distance)));
        p.scale = std::max(1, s);
        smax = std::max(smax, p.scale);
    }
    std::vector<double> scales;
    for (int s = 1; s <= smax; ++s) scales.push_back(diam * std::ldexp(1.0, -s));
    for (auto& p : raw) {
        p.scale -= 1;
        c.pairs_.push_back(p);
    }
    c.set_scales(std::move(scales), diam);
    return c;
}

SampleCloud make_line_cloud(double a, double b, const CloudOptions& opt, std::span<const double> foci) {
    require(b > a, "make_line_cloud: empty interval");
    require(opt.scales >= 1, "make_line_cloud: need at least one scale");
    SampleCloud c(1, 1);
    const double diam = b - a;
    auto g = SplitRng(opt.seed).stream(0x11ce);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    std::vector<double> scales;
    auto add = [&](double x, double y, int s) {
        if (x < a || y > b || !(y > x)) return;
        std::size_t i = c.add_point(std::span<const double>(&x, 1));
        std::size_t j = c.add_point(std::span<const double>(&y, 1));
        c.add_pair(i, j, s);
    };
    for (int s = 0; s < opt.scales; ++s) {
        double d = diam * std::ldexp(1.0, -(s + 1));
        scales.push_back(d);
        for (int k = 0; k < opt.pairs_per_scale; ++k) {
            double x = a + U(g) * (diam - d);
            add(x, x + d, s);
        }
        for (double f : foci) {
            add(f, f + d, s);
            add(f - 0.5 * d, f + 0.5 * d, s);
            add(f - d, f, s);
        }
    }
    for (int k = 0; k < opt.random_pairs; ++k) {
        double x = a + U(g) * diam, y = a + U(g) * diam;
        if (x > y) std::swap(x, y);
        add(x, y, -1);
    }
    c.set_scales(std::move(scales), diam);
    return c;
}

SampleCloud make_product_cloud(const ProductRegion& region, const CloudOptions& opt, bool axis_pairs,
                               std::span<const std::vector<cplx>> foci) {
    require(region.n >= 1 && static_cast<bool>(region.inside), "make_product_cloud: bad region");
    const int n = region.n;
    SampleCloud c(2 * n, 2);
    const double diam = 2.0 * region.box * std::sqrt(static_cast<double>(n));
    auto g = SplitRng(opt.seed).stream(0x9c0d);
    std::uniform_real_distribution<double> U(-region.box, region.box);
    std::normal_distribution<double> N(0.0, 1.0);
    std::vector<cplx> x(n), y(n);
    std::vector<double> buf(2 * n);

    auto draw_inside = [&](std::vector<cplx>& z) {
        for (int t = 0; t < 100000; ++t) {
            for (int k = 0; k < n; ++k) z[k] = {U(g), U(g)};
            if (region.inside(z)) return true;
        }
        return false;
    };
    // direction: full space (axis < 0) or a single complex coordinate
    auto step = [&](const std::vector<cplx>& from, std::vector<cplx>& to, double d, int axis) {
        std::vector<double> u(2 * n, 0.0);
        double norm = 0.0;
        for (int k = 0; k < 2 * n; ++k) {
            if (axis >= 0 && k / 2 != axis) continue;
            u[k] = N(g);
            norm += u[k] * u[k];
        }
        norm = std::sqrt(norm);
        for (int k = 0; k < n; ++k) to[k] = from[k] + d / norm * cplx(u[2 * k], u[2 * k + 1]);
        return region.inside(to);
    };
    auto push = [&](const std::vector<cplx>& z) {
        for (int k = 0; k < n; ++k) {
            buf[2 * k] = z[k].real();
            buf[2 * k + 1] = z[k].imag();
        }
        return c.add_point(buf);
    };
    auto add_pair = [&](const std::vector<cplx>& p, const std::vector<cplx>& q, int s) {
        std::size_t i = push(p), j = push(q);
        c.add_pair(i, j, s);
    };

    std::vector<double> scales;
    for (int s = 0; s < opt.scales; ++s) {
        double d = diam * std::ldexp(1.0, -(s + 1));
        scales.push_back(d);
        for (int k = 0; k < opt.pairs_per_scale; ++k) {
            int axis = axis_pairs && (k % 2 == 1) ? (k / 2) % n : -1;
            for (int t = 0; t < 200; ++t) {
                if (!draw_inside(x)) throw PreconditionError("make_product_cloud: region looks empty");
                if (step(x, y, d, axis)) {
                    add_pair(x, y, s);
                    break;
                }
            }
        }
        for (const auto& f : foci) {
            require(static_cast<int>(f.size()) == n, "make_product_cloud: focus dimension mismatch");
            for (int t = 0; t < 200; ++t)
                if (step(f, y, d, -1)) {
                    add_pair(f, y, s);
                    break;
                }
        }
    }
    for (int k = 0; k < opt.random_pairs; ++k) {
        if (!draw_inside(x) || !draw_inside(y)) throw PreconditionError("make_product_cloud: region looks empty");
        bool same = true;
        for (int m = 0; m < n; ++m) same = same && x[m] == y[m];
        if (!same) add_pair(x, y, -1);
    }
    c.set_scales(std::move(scales), diam);
    return c;
}

HolderEstimate seminorm(const SampleCloud& cloud, double alpha) {
    return sup_quotient(cloud, alpha, [](const SamplePair&) { return true; });
}

HolderEstimate per_variable_seminorm(const SampleCloud& cloud, int j, double alpha) {
    const int b = cloud.block();
    require(j >= 0 && j < cloud.dim() / b, "per_variable_seminorm: variable index out of range");
    return sup_quotient(cloud, alpha, [&](const SamplePair& p) {
        auto x = cloud.point(p.i), y = cloud.point(p.j);
        for (int k = 0; k < cloud.dim(); ++k)
            if (k / b != j && x[k] != y[k]) return false;
        return true;
    });
}

double sup_norm(const SampleCloud& cloud) {
    double s = 0.0;
    for (cplx v : cloud.values()) s = std::max(s, std::abs(v));
    return s;
}

double holder_norm(const SampleCloud& cloud, double alpha) { return sup_norm(cloud) + seminorm(cloud, alpha).seminorm; }

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    require(x.size() == y.size() && x.size() >= 2, "fit_line: need at least two points");
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    require(sxx > 0.0, "fit_line: degenerate abscissae");
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    return f;
}

HolderEstimate exponent_fit(const SampleCloud& cloud, double noise_floor, int min_scales) {
    const auto& scales = cloud.scales();
    std::vector<double> mx(scales.size(), -1.0);
    const auto& v = cloud.values();
    for (const auto& p : cloud.pairs()) {
        if (p.scale < 0 || p.scale >= static_cast<int>(scales.size())) continue;
        mx[p.scale] = std::max(mx[p.scale], std::abs(v[p.i] - v[p.j]));
    }
    HolderEstimate e;
    std::vector<double> lx, ly;
    for (std::size_t s = 0; s < scales.size(); ++s) {
        if (mx[s] < 0.0 || !(mx[s] > 10.0 * noise_floor) || mx[s] <= 0.0) continue;
        e.scale_distance.push_back(scales[s]);
        e.scale_max.push_back(mx[s]);
        lx.push_back(std::log(scales[s]));
        ly.push_back(std::log(mx[s]));
    }
    e.scales_used = static_cast<int>(lx.size());
    if (e.scales_used < min_scales)
        throw PreconditionError("exponent_fit: only " + std::to_string(e.scales_used) + " usable scales, need " +
                                std::to_string(min_scales));
    auto f = fit_line(lx, ly);
    e.raw_slope = f.slope;
    e.fit_r2 = f.r2;
    e.alpha = std::clamp(f.slope, 1e-6, 1.0);
    auto s = seminorm(cloud, e.alpha);
    e.seminorm = s.seminorm;
    e.argmax_i = s.argmax_i;
    e.argmax_j = s.argmax_j;
    return e;
}

}  // namespace dbar
