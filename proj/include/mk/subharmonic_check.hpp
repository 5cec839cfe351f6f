#pragma once

// Numerical checks of (pluri)subharmonicity, the maximum principle and the
// boundary point lemma on sampled functions and composed maps.

#include "mk/chart_forms.hpp"
#include "mk/grids.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

namespace mk {

struct AlmostComplexField {
    int dim;
    std::function<Mat(const Point&)> J;

    Mat operator()(const Point& p) const { return J(p); }

    /// Max deviation of J(p)^2 from -identity over pts.
    double square_defect(const std::vector<Point>& pts) const {
        double worst = 0.0;
        for (const auto& p : pts) {
            const Mat j = J(p);
            worst = std::max(worst, (j * j + Mat::Identity(dim, dim)).cwiseAbs().maxCoeff());
        }
        return worst;
    }

    void validate(const std::vector<Point>& pts, double tol = 1e-10) const {
        if (dim % 2 != 0) throw std::invalid_argument("AlmostComplexField: dimension must be even");
        if (square_defect(pts) > tol) throw std::invalid_argument("AlmostComplexField: J^2 != -1");
    }
};

/// Multiplication by i on C^n = R^{2n} with coordinates (x_1, y_1, ..., x_n, y_n).
inline AlmostComplexField standard_complex_structure(int n) {
    Mat j = Mat::Zero(2 * n, 2 * n);
    for (int k = 0; k < n; ++k) {
        j(2 * k + 1, 2 * k) = 1.0;   // J d/dx = d/dy
        j(2 * k, 2 * k + 1) = -1.0;  // J d/dy = -d/dx
    }
    return {2 * n, [j](const Point&) { return j; }};
}

using ScalarField = std::function<double(const Point&)>;

/// (d^J f)(v) = -df(J v), df by central differences.
inline KForm dJ(ScalarField f, AlmostComplexField J, double h_fd = default_h_fd) {
    if (!(h_fd > 0.0)) throw std::invalid_argument("dJ: h_fd must be positive");
    const int m = J.dim;
    return KForm::from_callable(1, m, [f = std::move(f), J = std::move(J), h_fd](const Point& p, std::span<const Vec> v) {
        const Vec w = J(p) * v[0];
        return -(f(p + h_fd * w) - f(p - h_fd * w)) / (2.0 * h_fd);
    });
}

/// d d^J h as a 2-form.
inline KForm levi_form(ScalarField h, AlmostComplexField J, double h_fd = default_h_fd) {
    return exterior_derivative(dJ(std::move(h), std::move(J), h_fd), h_fd);
}

/// min over pts and dirs of (d d^J h)(v, J v); positive iff h is
/// plurisubharmonic on the samples.
inline double psh_report(const ScalarField& h, const AlmostComplexField& J, const std::vector<Point>& pts,
                         const std::vector<Vec>& dirs, double h_fd = default_h_fd) {
    for (const auto& v : dirs)
        if (std::abs(v.norm() - 1.0) > 1e-12) throw std::invalid_argument("psh_report: directions must be unit vectors");
    const KForm omega = levi_form(h, J, h_fd);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : pts)
        for (const auto& v : dirs) best = std::min(best, omega(p, {v, Vec(J(p) * v)}));
    return best;
}

// ---------------------------------------------------------------------------
// Laplacians

using PlaneFunction = std::function<double(double, double)>;

inline double laplacian_5pt(const PlaneFunction& f, double x, double y, double h) {
    return (f(x + h, y) + f(x - h, y) + f(x, y + h) + f(x, y - h) - 4.0 * f(x, y)) / (h * h);
}

/// f_rr + f_r / r + f_phiphi / r^2 with radial step h and arc-length step h.
inline double laplacian_polar(const PlaneFunction& f, double r, double phi, double h) {
    if (!(r > h)) throw std::invalid_argument("laplacian_polar: radius must exceed the stencil step");
    auto g = [&](double rr, double pp) { return f(rr * std::cos(pp), rr * std::sin(pp)); };
    const double dphi = h / r;
    const double c = g(r, phi);
    const double rp = g(r + h, phi), rm = g(r - h, phi);
    const double pp = g(r, phi + dphi), pm = g(r, phi - dphi);
    const double f_rr = (rp - 2.0 * c + rm) / (h * h);
    const double f_r = (rp - rm) / (2.0 * h);
    const double f_pp = (pp - 2.0 * c + pm) / (dphi * dphi);
    return f_rr + f_r / r + f_pp / (r * r);
}

/// Outward radial derivative at (r, phi), one-sided second order from inside.
inline double radial_derivative_inside(const PlaneFunction& f, double r, double phi, double h) {
    auto g = [&](double rr) { return f(rr * std::cos(phi), rr * std::sin(phi)); };
    return (3.0 * g(r) - 4.0 * g(r - h) + g(r - 2.0 * h)) / (2.0 * h);
}

inline constexpr double laplacian_tol = 1e-6;

struct MaxPrincipleReport {
    bool constant = false;
    bool max_on_boundary = false;
    bool boundary_level_set = false;  // h o u constant on the boundary, strictly smaller inside
    double max_value = 0.0;
    PlanePoint argmax{0.0, 0.0};
    double min_laplacian = std::numeric_limits<double>::infinity();
    bool weakly_subharmonic = true;
    double boundary_derivative = 0.0;  // outward radial derivative at argmax

    /// The dichotomy of the maximum principle: constant, or the maximum sits
    /// on the boundary with a strictly positive outward derivative.
    bool consistent() const {
        return constant || (max_on_boundary && weakly_subharmonic && boundary_derivative > 0.0);
    }
};

/// F is h o u on the closed unit disk. Grid points with r = 1 are boundary
/// points. Laplacians use the 5-point stencil of step h_fd at every interior
/// grid point; the weak-subharmonicity tolerance is laplacian_tol scaled by
/// (1 + local Hessian size).
inline MaxPrincipleReport max_principle_check(const PlaneFunction& F, const PolarGrid& grid, double h_fd = default_h_fd) {
    if (grid.r_max != 1.0) throw std::invalid_argument("max_principle_check: grid must reach the unit circle");
    MaxPrincipleReport rep;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    double blo = lo, bhi = -lo, interior_max = -lo;
    for (const auto& p : grid.points()) {
        const double v = F(p.x, p.y);
        if (!std::isfinite(v)) throw std::domain_error("max_principle_check: non-finite sample");
        const bool boundary = std::abs(p.r() - 1.0) < 1e-12;
        lo = std::min(lo, v);
        if (v > hi) {
            hi = v;
            rep.argmax = p;
        }
        if (boundary) {
            blo = std::min(blo, v);
            bhi = std::max(bhi, v);
        } else {
            interior_max = std::max(interior_max, v);
        }
    }
    rep.max_value = hi;
    const double scale = 1e-10 * (1.0 + std::abs(hi));
    rep.constant = (hi - lo) < scale;
    if (rep.constant) return rep;
    rep.max_on_boundary = std::abs(rep.argmax.r() - 1.0) < 1e-12 && bhi > interior_max;
    rep.boundary_level_set = (bhi - blo) < scale && interior_max < bhi;

    for (const auto& p : grid.interior_points()) {
        const double lap = laplacian_5pt(F, p.x, p.y, h_fd);
        const double c = F(p.x, p.y);
        const double fxx = (F(p.x + h_fd, p.y) - 2.0 * c + F(p.x - h_fd, p.y)) / (h_fd * h_fd);
        const double fyy = (F(p.x, p.y + h_fd) - 2.0 * c + F(p.x, p.y - h_fd)) / (h_fd * h_fd);
        rep.min_laplacian = std::min(rep.min_laplacian, lap);
        if (lap < -laplacian_tol * (1.0 + std::max(std::abs(fxx), std::abs(fyy)))) rep.weakly_subharmonic = false;
    }
    if (rep.max_on_boundary) rep.boundary_derivative = radial_derivative_inside(F, 1.0, rep.argmax.phi(), h_fd);
    return rep;
}

/// Composes h o u for a disk map u and a function h on its target.
template <class U, class H>
MaxPrincipleReport max_principle_check(const U& u, const H& h, const PolarGrid& grid, double h_fd = default_h_fd) {
    return max_principle_check([&](double x, double y) { return h(u(std::complex<double>(x, y))); }, grid, h_fd);
}

/// min over the Cartesian grid of the 5-point Laplacian.
inline double min_laplacian(const PlaneFunction& F, const std::vector<PlanePoint>& pts, double h_fd = default_h_fd) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : pts) best = std::min(best, laplacian_5pt(F, p.x, p.y, h_fd));
    return best;
}

// ---------------------------------------------------------------------------
// The auxiliary function g(r) = r^4 - 9/4 r^2 + 5/4 used to perturb a weakly
// subharmonic function into a strictly subharmonic one on 3/4 < r < 1.

inline double aux_g(double x, double y) {
    const double r2 = x * x + y * y;
    return r2 * r2 - 2.25 * r2 + 1.25;
}
inline double aux_g_laplacian(double r) { return 16.0 * r * r - 9.0; }
inline double aux_g_radial(double r) { return 0.5 * r * r * (8.0 * r * r - 9.0); }  // r d/dr g

struct AuxProfileReport {
    double max_laplacian_error = 0.0;  // |polar Laplacian - (16 r^2 - 9)|
    double min_laplacian = std::numeric_limits<double>::infinity();
    double max_boundary_value = 0.0;  // |g| on r = 1
    double max_radial_rate = -std::numeric_limits<double>::infinity();  // max r d_r g, interior radii
    double max_radial_error = 0.0;    // |r d_r g (differenced) - 1/2 r^2 (8 r^2 - 9)|
};

inline AuxProfileReport aux_profile_check(const PolarGrid& annulus, double h_fd = default_h_fd) {
    AuxProfileReport rep;
    const PlaneFunction g = aux_g;
    for (const auto& p : annulus.interior_points()) {
        const double r = p.r(), phi = p.phi();
        const double lap = laplacian_polar(g, r, phi, h_fd);
        rep.max_laplacian_error = std::max(rep.max_laplacian_error, std::abs(lap - aux_g_laplacian(r)));
        rep.min_laplacian = std::min(rep.min_laplacian, lap);
        auto radial = [&](double rr) { return g(rr * std::cos(phi), rr * std::sin(phi)); };
        const double rate = r * (radial(r + h_fd) - radial(r - h_fd)) / (2.0 * h_fd);
        rep.max_radial_rate = std::max(rep.max_radial_rate, rate);
        rep.max_radial_error = std::max(rep.max_radial_error, std::abs(rate - aux_g_radial(r)));
    }
    for (int j = 0; j < annulus.n_angular; ++j) {
        const double phi = annulus.angle(j);
        rep.max_boundary_value = std::max(rep.max_boundary_value, std::abs(g(std::cos(phi), std::sin(phi))));
    }
    return rep;
}

/// max over pts of |u^*(d^J h) - d^i(h o u)| on the coordinate vectors of
/// the disk, for u: R^2 -> R^{2n} holomorphic with respect to i and J.
inline double dj_pullback_deviation(const SmoothMap& u, const ScalarField& h, const AlmostComplexField& J,
                                    const std::vector<Point>& pts, double h_fd = default_h_fd) {
    const KForm lhs = pullback(u, dJ(h, J, h_fd));
    const KForm rhs = dJ([&u, &h](const Point& p) { return h(u(p)); }, standard_complex_structure(1), h_fd);
    double worst = 0.0;
    for (const auto& p : pts)
        for (int i = 0; i < 2; ++i) worst = std::max(worst, std::abs(lhs.on_basis(p, {i}) - rhs.on_basis(p, {i})));
    return worst;
}

}  // namespace mk
