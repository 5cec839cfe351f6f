#pragma once

// The local model U in C^2 x T^*L around an elliptic singularity, its
// plurisubharmonic function, the totally real submanifold N and the Bishop
// family u_{s,q}(z) = (C_s z, s; q, 0) with C_s = sqrt(1 - s^2).
//
// T^*L is realized as a flat chart R^{2(n-2)} with coordinates (q, p) and
// J_L = i on the whole chart, i.e. q_j + i p_j are complex coordinates.

#include "mk/chart_forms.hpp"
#include "mk/error.hpp"
#include "mk/fredholm_dim.hpp"
#include "mk/grids.hpp"
#include "mk/quadrature.hpp"

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

namespace mk {

using cplx = std::complex<double>;

struct ModelPoint {
    cplx z1;
    cplx z2;
    Vec q;
    Vec p;

    int n() const { return static_cast<int>(q.size()) + 2; }

    /// Complex coordinates (z1, z2, q_1 + i p_1, ...).
    std::vector<cplx> complex_coords() const {
        std::vector<cplx> c{z1, z2};
        for (int j = 0; j < q.size(); ++j) c.emplace_back(q[j], p[j]);
        return c;
    }
};

struct ModelConfig {
    int n = 2;
    double delta = 0.1;

    void validate() const {
        if (n < 2) throw std::invalid_argument("ModelConfig: n must be >= 2");
        if (!(delta > 0.0 && delta < 0.5)) throw std::invalid_argument("ModelConfig: delta must lie in (0, 0.5)");
    }
};

/// Real coordinates (x1, y1, x2, y2, q_1, p_1, ..., q_{n-2}, p_{n-2}) in which
/// the model complex structure is the standard one.
inline Vec to_real_coords(const ModelPoint& m) {
    const auto c = m.complex_coords();
    Vec x(2 * static_cast<Eigen::Index>(c.size()));
    for (std::size_t i = 0; i < c.size(); ++i) {
        x[2 * static_cast<Eigen::Index>(i)] = c[i].real();
        x[2 * static_cast<Eigen::Index>(i) + 1] = c[i].imag();
    }
    return x;
}

inline ModelPoint from_real_coords(const Vec& x) {
    if (x.size() < 4 || x.size() % 2 != 0) throw std::invalid_argument("from_real_coords: need 2n >= 4 coordinates");
    const Eigen::Index extra = x.size() / 2 - 2;
    ModelPoint m{cplx(x[0], x[1]), cplx(x[2], x[3]), Vec(extra), Vec(extra)};
    for (Eigen::Index j = 0; j < extra; ++j) {
        m.q[j] = x[4 + 2 * j];
        m.p[j] = x[5 + 2 * j];
    }
    return m;
}

/// 1/2 (|z1|^2 + |z2|^2) + 1/2 |p|^2.
inline double psh_f(const ModelPoint& m) {
    return 0.5 * (std::norm(m.z1) + std::norm(m.z2)) + 0.5 * m.p.squaredNorm();
}

enum class Membership { inside, outside_height, outside_level };

inline const char* to_string(Membership m) {
    switch (m) {
        case Membership::inside: return "inside";
        case Membership::outside_height: return "outside_height";
        case Membership::outside_level: return "outside_level";
    }
    return "?";
}

/// Closed conditions Re z2 >= 1 - delta and f <= 1/2.
inline Membership model_membership(const ModelPoint& m, const ModelConfig& cfg) {
    cfg.validate();
    if (m.z2.real() < 1.0 - cfg.delta) return Membership::outside_height;
    if (psh_f(m) > 0.5) return Membership::outside_level;
    // f <= 1/2 and Re z2 >= 1 - delta bound the cotangent coordinates.
    if (!(0.5 * m.p.squaredNorm() <= cfg.delta)) throw std::logic_error("model_membership: inside point with unbounded p");
    return Membership::inside;
}

/// Points where both defining inequalities are active (to `tol`). The
/// classification there is ambiguous and is reported separately.
inline bool model_on_corner(const ModelPoint& m, const ModelConfig& cfg, double tol = 1e-12) {
    return std::abs(m.z2.real() - (1.0 - cfg.delta)) <= tol && std::abs(psh_f(m) - 0.5) <= tol;
}

using DiskMap = std::function<ModelPoint(cplx)>;

class BishopDisk {
public:
    BishopDisk(double s, Vec q0) : s_(s), q0_(std::move(q0)) {
        if (!(s >= 0.0 && s < 1.0)) throw std::invalid_argument("BishopDisk: s must lie in [0, 1)");
        cs_ = std::sqrt(1.0 - s * s);
    }
    BishopDisk(double s, int n) : BishopDisk(s, Vec::Zero(n - 2)) {
        if (n < 2) throw std::invalid_argument("BishopDisk: n must be >= 2");
    }

    double s() const { return s_; }
    double c_s() const { return cs_; }
    const Vec& q0() const { return q0_; }
    int n() const { return static_cast<int>(q0_.size()) + 2; }

    ModelPoint operator()(cplx z) const { return {cs_ * z, cplx(s_, 0.0), q0_, Vec::Zero(q0_.size())}; }

    operator DiskMap() const {
        return [d = *this](cplx z) { return d(z); };
    }

private:
    double s_;
    double cs_;
    Vec q0_;
};

inline constexpr double boundary_tol = 1e-10;

/// Samples the boundary circle and checks Im z2 = 0, p = 0 and
/// |z1|^2 + z2^2 = 1 at every sample.
inline bool boundary_in_N(const DiskMap& u, int m_samples) {
    if (m_samples < 8) throw std::invalid_argument("boundary_in_N: need at least 8 samples");
    for (int j = 0; j < m_samples; ++j) {
        const ModelPoint m = u(std::polar(1.0, 2.0 * std::numbers::pi * j / m_samples));
        if (std::abs(m.z2.imag()) > boundary_tol) return false;
        if (m.p.size() > 0 && m.p.cwiseAbs().maxCoeff() > boundary_tol) return false;
        if (std::abs(std::norm(m.z1) + m.z2.real() * m.z2.real() - 1.0) > boundary_tol) return false;
    }
    return true;
}

/// max over grid points of |du/dx + i du/dy| over all complex components.
inline double holomorphy_residual(const DiskMap& u, const std::vector<PlanePoint>& grid, double h_fd = default_h_fd) {
    if (!(h_fd > 0.0)) throw std::invalid_argument("holomorphy_residual: h_fd must be positive");
    double worst = 0.0;
    for (const auto& pt : grid) {
        const cplx z(pt.x, pt.y);
        const auto xp = u(z + h_fd).complex_coords();
        const auto xm = u(z - h_fd).complex_coords();
        const auto yp = u(z + cplx(0.0, h_fd)).complex_coords();
        const auto ym = u(z - cplx(0.0, h_fd)).complex_coords();
        for (std::size_t c = 0; c < xp.size(); ++c) {
            const cplx dx = (xp[c] - xm[c]) / (2.0 * h_fd);
            const cplx dy = (yp[c] - ym[c]) / (2.0 * h_fd);
            worst = std::max(worst, std::abs(dx + cplx(0.0, 1.0) * dy));
        }
    }
    return worst;
}

/// x1 dy1 - y1 dx1 + x2 dy2 - y2 dx2 on C^2 = R^4 (x1, y1, x2, y2); its
/// differential is the symplectic form sum_j 2 dx_j ^ dy_j.
inline KForm model_contact_primitive() {
    PolyForm a(4, 1);
    for (int j = 0; j < 2; ++j) {
        a += PolyForm::monomial(Polynomial::coordinate(4, 2 * j), {2 * j + 1});
        a += PolyForm::monomial(-Polynomial::coordinate(4, 2 * j + 1), {2 * j});
    }
    return KForm::exact(std::move(a));
}

/// The C^2 part of a disk map as a map R^2 -> R^4.
inline SmoothMap c2_part(const DiskMap& u, std::function<Mat(const Point&)> jacobian = {}) {
    SmoothMap m{2, 4,
                [u](const Point& xy) {
                    const ModelPoint mp = u(cplx(xy[0], xy[1]));
                    Point out(4);
                    out << mp.z1.real(), mp.z1.imag(), mp.z2.real(), mp.z2.imag();
                    return out;
                },
                std::move(jacobian)};
    return m;
}

inline SmoothMap c2_part(const BishopDisk& d) {
    const double c = d.c_s();
    return c2_part(DiskMap(d), [c](const Point&) {
        Mat j = Mat::Zero(4, 2);
        j(0, 0) = c;  // d Re z1 / dx
        j(1, 1) = c;  // d Im z1 / dy
        return j;
    });
}

struct DiskEnergy {
    double area;      // integral over the disk of u^* omega
    double boundary;  // integral over the boundary circle of u^* alpha_0

    double value() const { return 0.5 * (area + boundary); }
};

inline constexpr double energy_agreement_tol = 1e-6;

/// Both energy routes: tensor polar rule (Gauss-Legendre in r, trapezoid
/// in phi) for the area integral and the trapezoid rule on the boundary.
inline DiskEnergy disk_energy(const SmoothMap& u2, int quad_n) {
    if (quad_n < 64) throw std::invalid_argument("disk_energy: quad_n must be >= 64");
    const KForm alpha0 = model_contact_primitive();
    const KForm omega = exterior_derivative(alpha0);
    const KForm pulled_omega = pullback(u2, omega);
    const KForm pulled_alpha = pullback(u2, alpha0);
    const QuadratureRule radial = gauss_legendre(quad_n, 0.0, 1.0);
    const QuadratureRule angular = periodic_trapezoid(quad_n);
    const Vec ex = basis_vector(2, 0), ey = basis_vector(2, 1);

    DiskEnergy e{0.0, 0.0};
    for (std::size_t i = 0; i < radial.nodes.size(); ++i) {
        const double r = radial.nodes[i];
        double ring = 0.0;
        for (std::size_t j = 0; j < angular.nodes.size(); ++j) {
            Point p(2);
            p << r * std::cos(angular.nodes[j]), r * std::sin(angular.nodes[j]);
            ring += angular.weights[j] * pulled_omega(p, {ex, ey});
        }
        e.area += radial.weights[i] * r * ring;
    }
    for (std::size_t j = 0; j < angular.nodes.size(); ++j) {
        const double phi = angular.nodes[j];
        Point p(2);
        p << std::cos(phi), std::sin(phi);
        Vec tangent(2);
        tangent << -std::sin(phi), std::cos(phi);
        e.boundary += angular.weights[j] * pulled_alpha(p, {tangent});
    }
    if (std::abs(e.area - e.boundary) > energy_agreement_tol)
        throw NumericalError("disk_energy: area and boundary integrals disagree");
    return e;
}

inline DiskEnergy disk_energy(const BishopDisk& d, int quad_n) { return disk_energy(c2_part(d), quad_n); }

/// Closed form 2 pi (1 - s^2) of the Bishop disk energy.
inline double bishop_energy_closed_form(double s) { return 2.0 * std::numbers::pi * (1.0 - s * s); }

/// alpha_0 restricted to N is r^2 dtheta with r = |z1| <= 1, so max |f| = 1.
inline double bishop_energy_bound() { return energy_bound(1.0); }

/// d/dphi of the page coordinate arg z1 along the boundary of u.
inline double page_angle_rate(const DiskMap& u, double phi, double h_fd = default_h_fd) {
    const cplx a = u(std::polar(1.0, phi + h_fd)).z1;
    const cplx b = u(std::polar(1.0, phi - h_fd)).z1;
    return std::arg(a / b) / (2.0 * h_fd);
}

}  // namespace mk
