#pragma once

// Contact and foliation checks on coordinate charts: positivity of
// alpha ^ (d alpha)^n, Frobenius integrability of beta, the regular-equation
// property at singular points, the codimension-1 deformation model and the
// Reeb field.
//
// Coordinate conventions for the built-in models:
//   contact R^{2n+1}: (x_1, y_1, ..., x_n, y_n, z)
//   elliptic model:   (s, t, x)
//   codim-1 models:   (s, phi, x)

#include "mk/chart_forms.hpp"
#include "mk/error.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace mk {

inline constexpr double default_tol_sing = 1e-8;
inline constexpr double frobenius_rel_tol = 1e-6;

struct ContactChart {
    int n;
    KForm alpha;

    ContactChart(int n_, KForm a) : n(n_), alpha(std::move(a)) {
        if (n < 1) throw std::invalid_argument("ContactChart: n must be >= 1");
        if (alpha.degree() != 1) throw std::invalid_argument("ContactChart: alpha must be a 1-form");
        if (alpha.chart_dim() != 2 * n + 1) throw std::invalid_argument("ContactChart: chart dimension must be 2n+1");
    }
    int chart_dim() const { return 2 * n + 1; }
};

struct FoliationModel {
    int chart_dim;
    KForm beta;
    std::vector<Point> samples;
    double h_fd = default_h_fd;

    FoliationModel(KForm b, std::vector<Point> pts, double h = default_h_fd)
        : chart_dim(b.chart_dim()), beta(std::move(b)), samples(std::move(pts)), h_fd(h) {
        if (beta.degree() != 1) throw std::invalid_argument("FoliationModel: beta must be a 1-form");
        for (const auto& p : samples)
            if (p.size() != chart_dim) throw std::invalid_argument("FoliationModel: sample dimension mismatch");
    }

    KForm dbeta() const { return exterior_derivative(beta, h_fd); }
};

struct SingularReport {
    std::vector<Point> singular_points;
    std::size_t regular_count = 0;
    // +infinity when there are no singular samples.
    double dbeta_min_at_singular = std::numeric_limits<double>::infinity();

    bool passed() const { return dbeta_min_at_singular > 0.0; }
};

/// Euclidean norm of the coefficient vector (beta(e_0), ..., beta(e_{m-1})).
inline double one_form_norm(const KForm& beta, const Point& p) {
    double s = 0.0;
    for (int i = 0; i < beta.chart_dim(); ++i) {
        const double c = beta.on_basis(p, {i});
        s += c * c;
    }
    return std::sqrt(s);
}

/// max_{i<j} |omega(e_i, e_j)|.
inline double two_form_basis_norm(const KForm& omega, const Point& p) {
    double best = 0.0;
    for (int i = 0; i < omega.chart_dim(); ++i)
        for (int j = i + 1; j < omega.chart_dim(); ++j) best = std::max(best, std::abs(omega.on_basis(p, {i, j})));
    return best;
}

/// Minimum over pts of (alpha ^ (d alpha)^n)(e_0, ..., e_2n). Positive iff
/// alpha is a positive contact form at every sample.
inline double contact_residual(const ContactChart& c, const std::vector<Point>& pts, double h_fd = default_h_fd) {
    const KForm dalpha = exterior_derivative(c.alpha, h_fd);
    KForm vol = c.alpha;
    for (int i = 0; i < c.n; ++i) vol = wedge(vol, dalpha);
    std::vector<int> all(static_cast<std::size_t>(c.chart_dim()));
    for (int i = 0; i < c.chart_dim(); ++i) all[static_cast<std::size_t>(i)] = i;

    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : pts) {
        if (p.size() != c.chart_dim()) throw std::invalid_argument("contact_residual: sample dimension mismatch");
        best = std::min(best, vol.on_basis(p, all));
    }
    return best;
}

/// max over samples and basis triples of |beta ^ d beta|.
inline double frobenius_residual(const FoliationModel& f) {
    if (f.chart_dim < 3) return 0.0;
    const KForm three = wedge(f.beta, f.dbeta());
    double worst = 0.0;
    for (const auto& p : f.samples)
        for (int i = 0; i < f.chart_dim; ++i)
            for (int j = i + 1; j < f.chart_dim; ++j)
                for (int k = j + 1; k < f.chart_dim; ++k)
                    worst = std::max(worst, std::abs(three.on_basis(p, {i, j, k})));
    return worst;
}

/// Integrability threshold: frobenius_rel_tol scaled by max |beta| |d beta|
/// over the samples.
inline double frobenius_tolerance(const FoliationModel& f) {
    const KForm db = f.dbeta();
    double scale = 0.0;
    for (const auto& p : f.samples) scale = std::max(scale, one_form_norm(f.beta, p) * two_form_basis_norm(db, p));
    return frobenius_rel_tol * scale;
}

inline bool is_integrable(const FoliationModel& f) { return frobenius_residual(f) <= frobenius_tolerance(f); }

/// Splits the samples into regular and singular (|beta_p| < tol_sing) and
/// reports min |d beta| over the singular ones.
inline SingularReport regular_equation_check(const FoliationModel& f, double tol_sing = default_tol_sing) {
    if (f.samples.empty()) throw std::invalid_argument("regular_equation_check: empty sample set");
    const KForm db = f.dbeta();
    SingularReport r;
    for (const auto& p : f.samples) {
        if (one_form_norm(f.beta, p) < tol_sing) {
            r.singular_points.push_back(p);
            r.dbeta_min_at_singular = std::min(r.dbeta_min_at_singular, two_form_basis_norm(db, p));
        } else {
            ++r.regular_count;
        }
    }
    return r;
}

// ---------------------------------------------------------------------------
// Model catalog

/// dz + sum_j (x_j dy_j - y_j dx_j) on R^{2n+1}.
inline ContactChart standard_contact(int n) {
    const int m = 2 * n + 1;
    PolyForm a = PolyForm::basis(m, {m - 1});
    for (int j = 0; j < n; ++j) {
        const int x = 2 * j, y = 2 * j + 1;
        a += PolyForm::monomial(Polynomial::coordinate(m, x), {y});
        a += PolyForm::monomial(-Polynomial::coordinate(m, y), {x});
    }
    return ContactChart(n, KForm::exact(std::move(a)));
}

/// s dt - t ds, extended trivially to `chart_dim` >= 2 coordinates (s, t, x...).
inline KForm elliptic_form(int chart_dim = 3) {
    PolyForm b = PolyForm::monomial(Polynomial::coordinate(chart_dim, 0), {1});
    b += PolyForm::monomial(-Polynomial::coordinate(chart_dim, 1), {0});
    return KForm::exact(std::move(b));
}

/// s^power dphi on (s, phi, x...): the codimension-1 normal form for power 1.
inline KForm codim1_form(int power = 1, int chart_dim = 3) {
    Polynomial c = Polynomial::constant(chart_dim, 1.0);
    for (int i = 0; i < power; ++i) c = c * Polynomial::coordinate(chart_dim, 0);
    return KForm::exact(PolyForm::monomial(c, {1}));
}

/// Kupka normal form a(s,t) ds + b(s,t) dt on an m-dimensional chart.
inline KForm kupka_form(std::function<double(double, double)> a, std::function<double(double, double)> b, int chart_dim) {
    return KForm::from_callable(1, chart_dim, [a = std::move(a), b = std::move(b)](const Point& p, std::span<const Vec> v) {
        return a(p[0], p[1]) * v[0][0] + b(p[0], p[1]) * v[0][1];
    });
}

/// Largest |d/dx_j beta(e_i)| over samples and transverse directions j >= 2.
/// Zero (up to differencing error) for a form in Kupka normal form.
inline double kupka_transverse_dependence(const KForm& beta, const std::vector<Point>& pts, double h_fd = default_h_fd) {
    double worst = 0.0;
    const int m = beta.chart_dim();
    for (const auto& p : pts)
        for (int j = 2; j < m; ++j) {
            const Vec ej = basis_vector(m, j);
            for (int i = 0; i < m; ++i) {
                const double d = (beta.on_basis(p + h_fd * ej, {i}) - beta.on_basis(p - h_fd * ej, {i})) / (2.0 * h_fd);
                worst = std::max(worst, std::abs(d));
            }
        }
    return worst;
}

/// Odd cutoff profile with value and derivative; the profile is normalized
/// to have derivative 1 at the origin.
struct CutoffProfile {
    std::function<double(double)> f;
    std::function<double(double)> fprime;

    /// s * exp(-s^2 / (eps^2 - s^2)) on |s| < eps, zero outside.
    static CutoffProfile bump(double eps = 0.5) {
        if (!(eps > 0.0)) throw std::invalid_argument("CutoffProfile: eps must be positive");
        auto g = [eps](double s) { return -s * s / (eps * eps - s * s); };
        CutoffProfile p;
        p.f = [eps, g](double s) { return std::abs(s) < eps ? s * std::exp(g(s)) : 0.0; };
        p.fprime = [eps, g](double s) {
            if (std::abs(s) >= eps) return 0.0;
            const double e2 = eps * eps;
            const double denom = e2 - s * s;
            const double gprime = -2.0 * s * e2 / (denom * denom);
            return std::exp(g(s)) * (1.0 + s * gprime);
        };
        return p;
    }
};

/// beta' = delta f'(s) ds + s dphi on the (s, phi, x) chart, f = fprime0 * profile.
inline FoliationModel codim1_deform(double delta, double fprime0 = -1.0, CutoffProfile profile = CutoffProfile::bump(),
                                    std::vector<Point> samples = uniform_grid(3, -1.0, 1.0)) {
    if (!(delta > 0.0)) throw std::invalid_argument("codim1_deform: delta must be positive");
    if (fprime0 == 0.0) throw std::invalid_argument("codim1_deform: f'(0) must be nonzero");
    auto fp = profile.fprime;
    KForm beta = KForm::from_callable(1, 3, [delta, fprime0, fp](const Point& p, std::span<const Vec> v) {
        return delta * fprime0 * fp(p[0]) * v[0][0] + p[0] * v[0][1];
    });
    return FoliationModel(std::move(beta), std::move(samples));
}

/// Minimum |beta_p| over the samples of a model.
inline double min_form_norm(const FoliationModel& f) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : f.samples) best = std::min(best, one_form_norm(f.beta, p));
    return best;
}

struct ClosedLeafReport {
    std::size_t slice_points = 0;
    double max_tangential = 0.0;    // max |beta(d/dphi)|, |beta(d/dx)| on {s=0}
    double min_transverse = std::numeric_limits<double>::infinity();  // min |beta(d/ds)| on {s=0}

    bool is_leaf(double tol = 1e-12) const {
        return slice_points > 0 && max_tangential <= tol && min_transverse > tol;
    }
};

/// Checks that {s = 0} is a leaf: beta kills every direction tangent to the
/// slice and is nonzero on d/ds there.
inline ClosedLeafReport closed_leaf_check(const FoliationModel& f) {
    ClosedLeafReport r;
    for (const auto& p : f.samples) {
        if (p[0] != 0.0) continue;
        ++r.slice_points;
        for (int j = 1; j < f.chart_dim; ++j) r.max_tangential = std::max(r.max_tangential, std::abs(f.beta.on_basis(p, {j})));
        r.min_transverse = std::min(r.min_transverse, std::abs(f.beta.on_basis(p, {0})));
    }
    return r;
}

/// Reeb field: alpha(R) = 1 and d alpha(R, e_j) = 0 for every basis vector.
inline Vec reeb_field(const ContactChart& c, const Point& p, double h_fd = default_h_fd) {
    const int m = c.chart_dim();
    if (p.size() != m) throw std::invalid_argument("reeb_field: point dimension mismatch");
    const KForm dalpha = exterior_derivative(c.alpha, h_fd);
    Mat a(m + 1, m);
    Vec rhs = Vec::Zero(m + 1);
    for (int j = 0; j < m; ++j) a(0, j) = c.alpha.on_basis(p, {j});
    rhs[0] = 1.0;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) a(i + 1, j) = dalpha.on_basis(p, {j, i});

    Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    if (sv[0] == 0.0 || sv[sv.size() - 1] <= 1e-10 * sv[0])
        throw NumericalError("reeb_field: defining system is singular (form is not contact at p)");
    Vec r = svd.solve(rhs);
    if ((a * r - rhs).norm() > 1e-10) throw NumericalError("reeb_field: defining system is inconsistent at p");
    return r;
}

}  // namespace mk
