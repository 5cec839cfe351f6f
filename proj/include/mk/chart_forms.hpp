#pragma once

// Sampled exterior calculus on Euclidean coordinate charts.
//
// A KForm is an evaluation callable (point, k tangent vectors) -> real,
// optionally backed by an exact polynomial coefficient table. Operations on
// exact forms stay exact; anything else falls back to central differences.
//
// Antisymmetry: forms of degree <= 3 are evaluated through an explicit
// signed permutation sum whose positive and negative parts are accumulated
// in sorted order, so swapping two vector arguments flips the sign of the
// result bit for bit. User callables of degree > 3 are rejected; derived
// forms of higher degree (wedges, exact tables) are antisymmetric by
// construction.

#include "mk/polynomial.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <memory>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace mk {

using Point = Vec;
using Mat = Eigen::MatrixXd;

inline constexpr double default_h_fd = 1e-4;
inline constexpr int max_callable_degree = 3;

struct TangentVector {
    Point base;
    Vec components;

    TangentVector(Point b, Vec c) : base(std::move(b)), components(std::move(c)) {
        if (base.size() != components.size())
            throw std::invalid_argument("TangentVector: component length differs from chart dimension");
    }
};

/// Standard basis vector e_i of R^m.
inline Vec basis_vector(int m, int i) {
    Vec e = Vec::Zero(m);
    e[i] = 1.0;
    return e;
}

class KForm {
public:
    using Eval = std::function<double(const Point&, std::span<const Vec>)>;

    /// Wraps a user callable. The callable need not be antisymmetric; it is
    /// antisymmetrized on evaluation.
    static KForm from_callable(int degree, int chart_dim, Eval f) {
        check_shape(degree, chart_dim);
        if (degree > max_callable_degree)
            throw std::invalid_argument("KForm: callable forms of degree > 3 are not supported");
        if (degree > chart_dim) return zero(degree, chart_dim);
        return KForm(degree, chart_dim, antisymmetrize(degree, std::move(f)), nullptr);
    }

    static KForm exact(PolyForm table) {
        const int k = table.degree();
        const int m = table.dim();
        auto shared = std::make_shared<const PolyForm>(std::move(table));
        Eval f = [shared](const Point& p, std::span<const Vec> v) { return (*shared)(p, v); };
        return KForm(k, m, std::move(f), std::move(shared));
    }

    static KForm zero(int degree, int chart_dim) {
        check_shape(degree, chart_dim);
        return exact(PolyForm(chart_dim, degree));
    }

    /// A 0-form, i.e. a function on the chart.
    static KForm function(int chart_dim, std::function<double(const Point&)> f) {
        return from_callable(0, chart_dim,
                             [f = std::move(f)](const Point& p, std::span<const Vec>) { return f(p); });
    }

    int degree() const { return degree_; }
    int chart_dim() const { return dim_; }
    bool is_exact() const { return table_ != nullptr; }
    const PolyForm* table() const { return table_.get(); }

    double operator()(const Point& p, std::span<const Vec> vectors) const {
        if (p.size() != dim_) throw std::invalid_argument("KForm: point dimension mismatch");
        if (static_cast<int>(vectors.size()) != degree_)
            throw std::invalid_argument("KForm: wrong number of vector arguments");
        for (const auto& v : vectors)
            if (v.size() != dim_) throw std::invalid_argument("KForm: vector dimension mismatch");
        return eval_(p, vectors);
    }
    double operator()(const Point& p, std::initializer_list<Vec> vectors) const {
        return (*this)(p, std::span<const Vec>(vectors.begin(), vectors.size()));
    }
    double operator()(const TangentVector& v) const {
        const Vec c[1] = {v.components};
        return (*this)(v.base, std::span<const Vec>(c, 1));
    }

    /// Value on the standard basis vectors e_{idx[0]}, ..., e_{idx[k-1]}.
    double on_basis(const Point& p, std::span<const int> idx) const {
        std::vector<Vec> v;
        v.reserve(idx.size());
        for (int i : idx) v.push_back(basis_vector(dim_, i));
        return (*this)(p, v);
    }
    double on_basis(const Point& p, std::initializer_list<int> idx) const {
        return on_basis(p, std::span<const int>(idx.begin(), idx.size()));
    }

    // Builds a derived form from an evaluation that is already
    // antisymmetric in exact arithmetic.
    static KForm derived(int degree, int chart_dim, Eval f) {
        check_shape(degree, chart_dim);
        if (degree > chart_dim) return zero(degree, chart_dim);
        if (degree <= max_callable_degree) f = antisymmetrize(degree, std::move(f));
        return KForm(degree, chart_dim, std::move(f), nullptr);
    }

private:
    KForm(int k, int m, Eval f, std::shared_ptr<const PolyForm> t)
        : degree_(k), dim_(m), eval_(std::move(f)), table_(std::move(t)) {}

    static void check_shape(int degree, int chart_dim) {
        if (degree < 0 || chart_dim < 1) throw std::invalid_argument("KForm: invalid degree or chart dimension");
    }

    static Eval antisymmetrize(int degree, Eval f) {
        if (degree <= 1) return f;
        double factorial = 1.0;
        for (int i = 2; i <= degree; ++i) factorial *= i;
        return [f = std::move(f), degree, factorial](const Point& p, std::span<const Vec> v) {
            std::vector<int> perm(static_cast<std::size_t>(degree));
            std::iota(perm.begin(), perm.end(), 0);
            std::vector<Vec> args(static_cast<std::size_t>(degree));
            std::vector<double> pos, neg;
            do {
                for (std::size_t i = 0; i < perm.size(); ++i) args[i] = v[static_cast<std::size_t>(perm[i])];
                const double val = f(p, args);
                (detail::permutation_is_even(perm) ? pos : neg).push_back(val);
            } while (std::next_permutation(perm.begin(), perm.end()));
            return (detail::canonical_sum(pos) - detail::canonical_sum(neg)) / factorial;
        };
    }

    int degree_;
    int dim_;
    Eval eval_;
    std::shared_ptr<const PolyForm> table_;
};

/// Smooth map between coordinate charts. Without an explicit Jacobian the
/// derivative is taken by central differences with step h_fd.
struct SmoothMap {
    int dom_dim;
    int cod_dim;
    std::function<Point(const Point&)> eval;
    std::function<Mat(const Point&)> jacobian;
    double h_fd = default_h_fd;

    Point operator()(const Point& p) const {
        if (p.size() != dom_dim) throw std::invalid_argument("SmoothMap: point dimension mismatch");
        Point q = eval(p);
        if (q.size() != cod_dim) throw std::logic_error("SmoothMap: image has wrong dimension");
        return q;
    }

    Mat jacobian_at(const Point& p) const {
        if (jacobian) return jacobian(p);
        return central_jacobian(p);
    }

    Mat central_jacobian(const Point& p) const {
        Mat jac(cod_dim, dom_dim);
        for (int j = 0; j < dom_dim; ++j) {
            Point plus = p, minus = p;
            plus[j] += h_fd;
            minus[j] -= h_fd;
            jac.col(j) = ((*this)(plus) - (*this)(minus)) / (2.0 * h_fd);
        }
        return jac;
    }

    static SmoothMap identity(int m) {
        return SmoothMap{m, m, [](const Point& p) { return p; },
                         [m](const Point&) -> Mat { return Mat::Identity(m, m); }};
    }
};

// ---------------------------------------------------------------------------
// Operations

inline KForm wedge(const KForm& a, const KForm& b) {
    if (a.chart_dim() != b.chart_dim()) throw std::invalid_argument("wedge: chart dimension mismatch");
    if (a.is_exact() && b.is_exact()) return KForm::exact(wedge(*a.table(), *b.table()));

    const int k = a.degree();
    const int l = b.degree();
    const int m = a.chart_dim();
    if (k + l > m) return KForm::zero(k + l, m);

    // (a^b)(v) = sum over (k,l)-shuffles sigma of sign(sigma) a(v_sigma(1..k)) b(v_sigma(k+1..k+l))
    struct Shuffle {
        std::vector<int> first, second;
        double sign;
    };
    std::vector<Shuffle> shuffles;
    std::vector<bool> choose(static_cast<std::size_t>(k + l), false);
    std::fill(choose.begin(), choose.begin() + k, true);
    do {
        Shuffle s;
        std::vector<int> perm;
        for (int i = 0; i < k + l; ++i)
            if (choose[static_cast<std::size_t>(i)]) s.first.push_back(i);
        for (int i = 0; i < k + l; ++i)
            if (!choose[static_cast<std::size_t>(i)]) s.second.push_back(i);
        perm = s.first;
        perm.insert(perm.end(), s.second.begin(), s.second.end());
        s.sign = detail::permutation_is_even(perm) ? 1.0 : -1.0;
        shuffles.push_back(std::move(s));
    } while (std::prev_permutation(choose.begin(), choose.end()));

    return KForm::derived(k + l, m, [a, b, shuffles](const Point& p, std::span<const Vec> v) {
        double sum = 0.0;
        std::vector<Vec> va, vb;
        for (const auto& s : shuffles) {
            va.clear();
            vb.clear();
            for (int i : s.first) va.push_back(v[static_cast<std::size_t>(i)]);
            for (int i : s.second) vb.push_back(v[static_cast<std::size_t>(i)]);
            sum += s.sign * a(p, va) * b(p, vb);
        }
        return sum;
    });
}

/// Exterior derivative. Exact tables are differentiated symbolically;
/// otherwise (da)(p; v_0..v_k) = sum_i (-1)^i D_{v_i} a(.; v_0..^v_i..v_k)(p)
/// with D a central difference of step h_fd along v_i.
inline KForm exterior_derivative(const KForm& a, double h_fd = default_h_fd) {
    if (!(h_fd > 0.0)) throw std::invalid_argument("exterior_derivative: h_fd must be positive");
    const int k = a.degree();
    const int m = a.chart_dim();
    if (a.is_exact()) return KForm::exact(exterior_derivative(*a.table()));
    if (k + 1 > m) return KForm::zero(k + 1, m);

    return KForm::derived(k + 1, m, [a, h_fd, k](const Point& p, std::span<const Vec> v) {
        double sum = 0.0;
        std::vector<Vec> rest(static_cast<std::size_t>(k));
        for (int i = 0; i <= k; ++i) {
            for (int j = 0, r = 0; j <= k; ++j)
                if (j != i) rest[static_cast<std::size_t>(r++)] = v[static_cast<std::size_t>(j)];
            const Vec& dir = v[static_cast<std::size_t>(i)];
            const double fwd = a(p + h_fd * dir, rest);
            const double bwd = a(p - h_fd * dir, rest);
            const double term = (fwd - bwd) / (2.0 * h_fd);
            sum += (i % 2 == 0) ? term : -term;
        }
        return sum;
    });
}

/// Contraction with a vector field X (components of X(p) at p).
inline KForm interior_product(std::function<Vec(const Point&)> field, const KForm& a) {
    if (a.degree() < 1) throw std::invalid_argument("interior_product: degree-0 form");
    const int m = a.chart_dim();
    return KForm::derived(a.degree() - 1, m, [field = std::move(field), a, m](const Point& p, std::span<const Vec> v) {
        std::vector<Vec> args;
        args.reserve(v.size() + 1);
        Vec x = field(p);
        if (x.size() != m) throw std::invalid_argument("interior_product: field dimension mismatch");
        args.push_back(std::move(x));
        args.insert(args.end(), v.begin(), v.end());
        return a(p, args);
    });
}

/// Constant coordinate field, e.g. d/dx_i.
inline std::function<Vec(const Point&)> constant_field(Vec v) {
    return [v = std::move(v)](const Point&) { return v; };
}

inline KForm pullback(const SmoothMap& phi, const KForm& a) {
    if (phi.cod_dim != a.chart_dim()) throw std::invalid_argument("pullback: codomain dimension mismatch");
    return KForm::derived(a.degree(), phi.dom_dim, [phi, a](const Point& p, std::span<const Vec> v) {
        const Point q = phi(p);
        const Mat jac = phi.jacobian_at(p);
        std::vector<Vec> pushed;
        pushed.reserve(v.size());
        for (const auto& x : v) pushed.emplace_back(jac * x);
        return a(q, pushed);
    });
}

// ---------------------------------------------------------------------------
// Built-in forms and sample sets

inline KForm coordinate_differential(int m, int i) { return KForm::exact(PolyForm::basis(m, {i})); }

/// Canonical 1-form sum_i p_i dq_i on a cotangent chart with coordinates
/// (q_1..q_n, p_1..p_n).
inline KForm canonical_one_form(int n) {
    const int m = 2 * n;
    PolyForm lambda(m, 1);
    for (int i = 0; i < n; ++i)
        lambda += PolyForm::monomial(Polynomial::coordinate(m, n + i), {i});
    return KForm::exact(std::move(lambda));
}

/// Uniform tensor grid on [lo, hi]^m with `per_axis` points per axis. Only
/// the first five axes are sampled; further axes are held at the midpoint.
inline std::vector<Point> uniform_grid(int m, double lo, double hi, int per_axis = 21) {
    if (m < 1 || per_axis < 1) throw std::invalid_argument("uniform_grid: invalid shape");
    constexpr int max_axes = 5;
    const int axes = std::min(m, max_axes);
    auto coord = [&](int i) {
        return per_axis == 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * static_cast<double>(i) / (per_axis - 1);
    };
    std::size_t total = 1;
    for (int a = 0; a < axes; ++a) total *= static_cast<std::size_t>(per_axis);
    std::vector<Point> pts;
    pts.reserve(total);
    std::vector<int> idx(static_cast<std::size_t>(axes), 0);
    for (std::size_t n = 0; n < total; ++n) {
        Point p = Point::Constant(m, 0.5 * (lo + hi));
        for (int a = 0; a < axes; ++a) p[a] = coord(idx[static_cast<std::size_t>(a)]);
        pts.push_back(std::move(p));
        for (int a = axes - 1; a >= 0; --a) {
            if (++idx[static_cast<std::size_t>(a)] < per_axis) break;
            idx[static_cast<std::size_t>(a)] = 0;
        }
    }
    return pts;
}

}  // namespace mk
