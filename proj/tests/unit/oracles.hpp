#pragma once

// Reference values computed without the library's quadratures.

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;

inline void gl_rule(int n, std::vector<double>& x, std::vector<double>& w) {
    // Golub-Welsch would need an eigensolver; plain Newton on P_n is enough here
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
        double t = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 1.0;
        for (int it = 0; it < 200; ++it) {
            double p0 = 1.0, p1 = t;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (t * p1 - p0) / (t * t - 1.0);
            double dt = p1 / dp;
            t -= dt;
            if (std::abs(dt) < 1e-16) break;
        }
        x[i] = t;
        w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
    }
}

// Tf(z) over the disc |zeta - c| < R, written in polar coordinates centred at z:
// -(1/pi) \int_0^{2pi} \int_0^{rho(phi)} f(z + rho e^{i phi}) e^{-i phi} drho dphi.
// No singularity remains, so a plain tensor rule converges quickly.
inline cplx ray_T_disc(const std::function<cplx(cplx)>& f, cplx z, cplx c = 0.0, double R = 1.0, int n_rho = 64,
                       int n_phi = 512) {
    std::vector<double> x, w;
    gl_rule(n_rho, x, w);
    cplx acc = 0.0;
    const double dphi = 2 * std::numbers::pi / n_phi;
    cplx d = z - c;
    for (int a = 0; a < n_phi; ++a) {
        double phi = a * dphi;
        cplx e = std::polar(1.0, phi);
        double b = (std::conj(d) * e).real();
        double len = -b + std::sqrt(b * b - (std::norm(d) - R * R));
        for (int k = 0; k < n_rho; ++k) {
            double rho = 0.5 * len * (x[k] + 1.0);
            acc += 0.5 * len * w[k] * dphi * f(z + rho * e) * std::conj(e);
        }
    }
    return -acc / std::numbers::pi;
}

// -(1/pi) \int_{|zeta - c| < R} f/(zeta - z) dA for z outside that disc (smooth integrand)
inline cplx outside_T_disc(const std::function<cplx(cplx)>& f, cplx z, cplx c, double R, int n_rho = 64,
                           int n_phi = 512) {
    std::vector<double> x, w;
    gl_rule(n_rho, x, w);
    cplx acc = 0.0;
    const double dphi = 2 * std::numbers::pi / n_phi;
    for (int a = 0; a < n_phi; ++a) {
        cplx e = std::polar(1.0, a * dphi);
        for (int k = 0; k < n_rho; ++k) {
            double rho = 0.5 * R * (x[k] + 1.0);
            cplx zeta = c + rho * e;
            acc += 0.5 * R * w[k] * dphi * rho * f(zeta) / (zeta - z);
        }
    }
    return -acc / std::numbers::pi;
}

// T over the annulus r_in < |zeta| < r_out
inline cplx annulus_T(const std::function<cplx(cplx)>& f, cplx z, double r_in, double r_out) {
    return ray_T_disc(f, z, 0.0, r_out) - outside_T_disc(f, z, 0.0, r_in);
}

// (1/2 pi i) \oint_{|zeta - c| = R} f/(zeta - z) dzeta by a dense trapezoid, z far from the circle
inline cplx circle_S(const std::function<cplx(cplx)>& f, cplx z, cplx c, double R, int n = 4096) {
    cplx acc = 0.0;
    for (int i = 0; i < n; ++i) {
        cplx e = std::polar(1.0, 2 * std::numbers::pi * i / n);
        cplx zeta = c + R * e;
        acc += f(zeta) / (zeta - z) * (zeta - c);
    }
    return acc / double(n);
}

}  // namespace oracle
