#pragma once

// Exact coefficient tables for differential forms with polynomial
// coefficients. These let the chart_forms layer bypass finite differencing
// whenever every input of an operation is polynomial.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <numeric>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace mk {

using Vec = Eigen::VectorXd;

/// Sparse multivariate polynomial in m real variables.
class Polynomial {
public:
    using Exponents = std::vector<int>;

    explicit Polynomial(int dim = 0) : dim_(dim) {}

    static Polynomial constant(int dim, double c) {
        Polynomial p(dim);
        if (c != 0.0) p.terms_[Exponents(static_cast<std::size_t>(dim), 0)] = c;
        return p;
    }

    /// The coordinate function x_i.
    static Polynomial coordinate(int dim, int i) {
        if (i < 0 || i >= dim) throw std::out_of_range("Polynomial::coordinate: index out of range");
        Polynomial p(dim);
        Exponents e(static_cast<std::size_t>(dim), 0);
        e[static_cast<std::size_t>(i)] = 1;
        p.terms_[e] = 1.0;
        return p;
    }

    int dim() const { return dim_; }
    bool is_zero() const { return terms_.empty(); }
    const std::map<Exponents, double>& terms() const { return terms_; }

    double operator()(const Vec& x) const {
        if (x.size() != dim_) throw std::invalid_argument("Polynomial: point dimension mismatch");
        double sum = 0.0;
        for (const auto& [e, c] : terms_) {
            double t = c;
            for (int i = 0; i < dim_; ++i)
                for (int k = 0; k < e[static_cast<std::size_t>(i)]; ++k) t *= x[i];
            sum += t;
        }
        return sum;
    }

    Polynomial derivative(int i) const {
        Polynomial out(dim_);
        for (const auto& [e, c] : terms_) {
            const int ei = e[static_cast<std::size_t>(i)];
            if (ei == 0) continue;
            Exponents f = e;
            f[static_cast<std::size_t>(i)] = ei - 1;
            out.add_term(f, c * ei);
        }
        return out;
    }

    Polynomial& operator+=(const Polynomial& o) {
        check_dim(o);
        for (const auto& [e, c] : o.terms_) add_term(e, c);
        return *this;
    }
    Polynomial& operator-=(const Polynomial& o) { return *this += o * -1.0; }

    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator-(const Polynomial& a) { return a * -1.0; }

    friend Polynomial operator*(const Polynomial& a, double s) {
        Polynomial out(a.dim_);
        if (s == 0.0) return out;
        for (const auto& [e, c] : a.terms_) out.terms_[e] = c * s;
        return out;
    }
    friend Polynomial operator*(double s, const Polynomial& a) { return a * s; }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        a.check_dim(b);
        Polynomial out(a.dim_);
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_) {
                Exponents e(ea.size());
                for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
                out.add_term(e, ca * cb);
            }
        return out;
    }

private:
    void add_term(const Exponents& e, double c) {
        auto it = terms_.find(e);
        if (it == terms_.end()) {
            if (c != 0.0) terms_.emplace(e, c);
            return;
        }
        it->second += c;
        if (it->second == 0.0) terms_.erase(it);
    }
    void check_dim(const Polynomial& o) const {
        if (o.dim_ != dim_) throw std::invalid_argument("Polynomial: dimension mismatch");
    }

    int dim_;
    std::map<Exponents, double> terms_;
};

namespace detail {

// Sorts an index list in place; returns the permutation sign, or 0 if an
// index repeats.
inline int sort_with_sign(std::vector<int>& idx) {
    int sign = 1;
    for (std::size_t i = 1; i < idx.size(); ++i)
        for (std::size_t j = i; j > 0 && idx[j - 1] >= idx[j]; --j) {
            if (idx[j - 1] == idx[j]) return 0;
            std::swap(idx[j - 1], idx[j]);
            sign = -sign;
        }
    return sign;
}

inline bool permutation_is_even(const std::vector<int>& perm) {
    std::vector<int> p = perm;
    int swaps = 0;
    for (std::size_t i = 0; i < p.size(); ++i)
        while (p[i] != static_cast<int>(i)) {
            std::swap(p[i], p[static_cast<std::size_t>(p[i])]);
            ++swaps;
        }
    return swaps % 2 == 0;
}

// Sum of a small set of values in a canonical (sorted) order, so the result
// depends only on the multiset of values and not on their order.
inline double canonical_sum(std::vector<double>& v) {
    std::sort(v.begin(), v.end());
    double s = 0.0;
    for (double x : v) s += x;
    return s;
}

// Leibniz determinant of the k x k minor rows(rows) of the column vectors
// `cols`. Positive and negative permutation terms are accumulated in a
// canonical order, which makes the result exactly antisymmetric under a
// swap of two columns.
inline double minor_determinant(std::span<const int> rows, std::span<const Vec> cols) {
    const std::size_t k = rows.size();
    if (k == 0) return 1.0;
    std::vector<int> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<double> pos, neg;
    do {
        double t = 1.0;
        for (std::size_t i = 0; i < k; ++i) t *= cols[static_cast<std::size_t>(perm[i])][rows[i]];
        (permutation_is_even(perm) ? pos : neg).push_back(t);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return canonical_sum(pos) - canonical_sum(neg);
}

}  // namespace detail

/// A k-form sum_I c_I(x) dx_I with polynomial coefficients, I strictly
/// increasing multi-indices.
class PolyForm {
public:
    using Index = std::vector<int>;

    PolyForm(int dim, int degree) : dim_(dim), degree_(degree) {
        if (dim < 0 || degree < 0) throw std::invalid_argument("PolyForm: negative dimension or degree");
    }

    /// c * dx_{i1} ^ ... ^ dx_{ik}; the indices need not be sorted.
    static PolyForm monomial(const Polynomial& c, Index indices) {
        PolyForm f(c.dim(), static_cast<int>(indices.size()));
        for (int i : indices)
            if (i < 0 || i >= c.dim()) throw std::out_of_range("PolyForm: basis index out of range");
        const int sign = detail::sort_with_sign(indices);
        if (sign != 0) f.add(indices, c * static_cast<double>(sign));
        return f;
    }
    static PolyForm basis(int dim, Index indices) {
        return monomial(Polynomial::constant(dim, 1.0), std::move(indices));
    }
    static PolyForm function(const Polynomial& c) { return monomial(c, {}); }

    int dim() const { return dim_; }
    int degree() const { return degree_; }
    const std::map<Index, Polynomial>& terms() const { return terms_; }

    PolyForm& operator+=(const PolyForm& o) {
        if (o.dim_ != dim_ || o.degree_ != degree_)
            throw std::invalid_argument("PolyForm: sum of forms with different dimension or degree");
        for (const auto& [i, c] : o.terms_) add(i, c);
        return *this;
    }
    friend PolyForm operator+(PolyForm a, const PolyForm& b) { return a += b; }
    friend PolyForm operator-(PolyForm a, const PolyForm& b) { return a += b * -1.0; }
    friend PolyForm operator*(const PolyForm& a, double s) {
        PolyForm out(a.dim_, a.degree_);
        for (const auto& [i, c] : a.terms_) out.add(i, c * s);
        return out;
    }
    friend PolyForm operator*(double s, const PolyForm& a) { return a * s; }
    friend PolyForm operator*(const Polynomial& g, const PolyForm& a) {
        PolyForm out(a.dim_, a.degree_);
        for (const auto& [i, c] : a.terms_) out.add(i, g * c);
        return out;
    }

    friend PolyForm wedge(const PolyForm& a, const PolyForm& b) {
        if (a.dim_ != b.dim_) throw std::invalid_argument("PolyForm wedge: chart dimension mismatch");
        PolyForm out(a.dim_, a.degree_ + b.degree_);
        for (const auto& [ia, ca] : a.terms_)
            for (const auto& [ib, cb] : b.terms_) {
                Index idx = ia;
                idx.insert(idx.end(), ib.begin(), ib.end());
                const int sign = detail::sort_with_sign(idx);
                if (sign != 0) out.add(idx, (ca * cb) * static_cast<double>(sign));
            }
        return out;
    }

    friend PolyForm exterior_derivative(const PolyForm& a) {
        PolyForm out(a.dim_, a.degree_ + 1);
        for (const auto& [idx, c] : a.terms_)
            for (int i = 0; i < a.dim_; ++i) {
                Polynomial di = c.derivative(i);
                if (di.is_zero()) continue;
                Index j{i};
                j.insert(j.end(), idx.begin(), idx.end());
                const int sign = detail::sort_with_sign(j);
                if (sign != 0) out.add(j, di * static_cast<double>(sign));
            }
        return out;
    }

    double operator()(const Vec& p, std::span<const Vec> vectors) const {
        if (static_cast<int>(vectors.size()) != degree_)
            throw std::invalid_argument("PolyForm: wrong number of vector arguments");
        double sum = 0.0;
        for (const auto& [idx, c] : terms_) sum += c(p) * detail::minor_determinant(idx, vectors);
        return sum;
    }

private:
    void add(const Index& idx, const Polynomial& c) {
        if (c.is_zero()) return;
        auto it = terms_.find(idx);
        if (it == terms_.end()) {
            terms_.emplace(idx, c);
            return;
        }
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }

    int dim_;
    int degree_;
    std::map<Index, Polynomial> terms_;
};

}  // namespace mk
