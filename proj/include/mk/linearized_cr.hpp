#pragma once

// The linearized Cauchy-Riemann problem at a Bishop disk u_s, discretized on
// truncated holomorphic Fourier modes and collocated on the boundary circle.
//
// Unknowns. Every component of the variation is a holomorphic polynomial
// sum_{k=0}^{K} c_k z^k: component 0 is z1', component 1 is z2', components
// 2..n-1 are q_j' + i p_j'. No component is assumed constant; the boundary
// conditions must eliminate the higher modes on their own.
//
// Stacking (bit-exact): column 2 * ((K + 1) * component + k) + part holds the
// real part (part 0) or imaginary part (part 1) of mode k of that
// component, so N = 2 n (K + 1).
//
// Rows. For each collocation angle phi_j = 2 pi j / m, in this order:
//   coupling : 2 C_s Re(e^{-i phi} z1') + 2 s Re(z2') = 0
//   im_z2    : Im z2' = 0
//   im_w<i>  : Im(q_i' + i p_i') = p_i' = 0,  i = 1..n-2
// Row labels are "<kind>@<j>".

#include "mk/error.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace mk {

using cplx = std::complex<double>;

inline constexpr double default_rank_tol_ratio = 1e-8;
inline constexpr double min_sigma_gap = 1e4;

inline int min_collocation_angles(int K) { return 4 * K + 8; }

struct FourierAnsatz {
    int n = 2;
    int K = 0;
    std::vector<cplx> z1;              // a_0..a_K
    std::vector<cplx> z2;              // b_0..b_K
    std::vector<std::vector<cplx>> w;  // n-2 components, modes 0..K

    FourierAnsatz() = default;
    FourierAnsatz(int n_, int K_)
        : n(n_), K(K_), z1(static_cast<std::size_t>(K_ + 1)), z2(static_cast<std::size_t>(K_ + 1)),
          w(static_cast<std::size_t>(n_ - 2), std::vector<cplx>(static_cast<std::size_t>(K_ + 1))) {}

    static int column(int K, int component, int mode, int part) { return 2 * ((K + 1) * component + mode) + part; }
    int unknowns() const { return 2 * n * (K + 1); }

    std::vector<cplx>& component(int c) { return c == 0 ? z1 : c == 1 ? z2 : w[static_cast<std::size_t>(c - 2)]; }
    const std::vector<cplx>& component(int c) const {
        return c == 0 ? z1 : c == 1 ? z2 : w[static_cast<std::size_t>(c - 2)];
    }

    Eigen::VectorXd stacked() const {
        Eigen::VectorXd x(unknowns());
        for (int c = 0; c < n; ++c)
            for (int k = 0; k <= K; ++k) {
                const cplx v = component(c)[static_cast<std::size_t>(k)];
                x[column(K, c, k, 0)] = v.real();
                x[column(K, c, k, 1)] = v.imag();
            }
        return x;
    }

    static FourierAnsatz from_stacked(const Eigen::VectorXd& x, int n, int K) {
        FourierAnsatz a(n, K);
        if (x.size() != a.unknowns()) throw std::invalid_argument("FourierAnsatz: stacked vector has wrong length");
        for (int c = 0; c < n; ++c)
            for (int k = 0; k <= K; ++k)
                a.component(c)[static_cast<std::size_t>(k)] = cplx(x[column(K, c, k, 0)], x[column(K, c, k, 1)]);
        return a;
    }
};

struct BoundaryConditionSystem {
    int n;
    int K;
    double s;
    int m_boundary;
    Eigen::MatrixXd matrix;
    std::vector<std::string> row_labels;
};

inline BoundaryConditionSystem build_system(double s, int n, int K, int m_boundary) {
    if (!(s >= 0.0 && s < 1.0)) throw std::invalid_argument("build_system: s must lie in [0, 1)");
    if (n < 2) throw std::invalid_argument("build_system: n must be >= 2");
    if (K < 4) throw std::invalid_argument("build_system: K must be >= 4");
    if (m_boundary < min_collocation_angles(K)) throw NumericalError("build_system: undersampled collocation (need m >= 4K+8)");

    const double cs = std::sqrt(1.0 - s * s);
    const int rows_per_angle = n;  // coupling, im_z2, n-2 p-rows
    BoundaryConditionSystem sys{n, K, s, m_boundary, Eigen::MatrixXd::Zero(rows_per_angle * m_boundary, 2 * n * (K + 1)), {}};
    sys.row_labels.reserve(static_cast<std::size_t>(sys.matrix.rows()));

    for (int j = 0; j < m_boundary; ++j) {
        const double phi = 2.0 * std::numbers::pi * j / m_boundary;
        const int base = rows_per_angle * j;
        const std::string at = "@" + std::to_string(j);
        for (int k = 0; k <= K; ++k) {
            // Re(a e^{i(k-1) phi}) = Re a cos - Im a sin
            const double c1 = std::cos((k - 1) * phi), s1 = std::sin((k - 1) * phi);
            sys.matrix(base, FourierAnsatz::column(K, 0, k, 0)) = 2.0 * cs * c1;
            sys.matrix(base, FourierAnsatz::column(K, 0, k, 1)) = -2.0 * cs * s1;
            const double ck = std::cos(k * phi), sk = std::sin(k * phi);
            sys.matrix(base, FourierAnsatz::column(K, 1, k, 0)) = 2.0 * s * ck;
            sys.matrix(base, FourierAnsatz::column(K, 1, k, 1)) = -2.0 * s * sk;
            // Im(b e^{ik phi}) = Re b sin + Im b cos
            for (int c = 1; c < n; ++c) {
                sys.matrix(base + c, FourierAnsatz::column(K, c, k, 0)) = sk;
                sys.matrix(base + c, FourierAnsatz::column(K, c, k, 1)) = ck;
            }
        }
        sys.row_labels.push_back("coupling" + at);
        sys.row_labels.push_back("im_z2" + at);
        for (int c = 2; c < n; ++c) sys.row_labels.push_back("im_w" + std::to_string(c - 1) + at);
    }
    return sys;
}

struct RankDecision {
    int rank = 0;
    double sigma_max = 0.0;
    double sigma_gap = 0.0;  // smallest kept / max(largest dropped, eps * sigma_max)
    Eigen::VectorXd singular_values;
};

inline RankDecision decide_rank(const Eigen::VectorXd& sv, double tol_ratio) {
    RankDecision d;
    d.singular_values = sv;
    d.sigma_max = sv.size() ? sv[0] : 0.0;
    const double thr = tol_ratio * d.sigma_max;
    while (d.rank < sv.size() && sv[d.rank] > thr) ++d.rank;
    if (d.rank == 0) return d;
    // Exact zeros are floored at machine precision so the gap stays finite.
    const double floor = std::numeric_limits<double>::epsilon() * d.sigma_max;
    const double dropped = d.rank < sv.size() ? std::max(sv[d.rank], floor) : floor;
    d.sigma_gap = sv[d.rank - 1] / dropped;
    return d;
}

struct KernelResult {
    int dimension = 0;
    std::vector<FourierAnsatz> basis;  // orthonormal in the stacked coordinates
    double sigma_gap = 0.0;
    bool reliable = false;  // sigma_gap > min_sigma_gap
    Eigen::VectorXd singular_values;
};

/// Null space by singular value decomposition with relative threshold
/// tol_ratio * sigma_max. A rank gap below min_sigma_gap marks the result
/// unreliable instead of silently accepting the rank.
inline KernelResult kernel(const BoundaryConditionSystem& sys, double tol_ratio = default_rank_tol_ratio) {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(sys.matrix, Eigen::ComputeFullV);
    const RankDecision d = decide_rank(svd.singularValues(), tol_ratio);
    KernelResult r;
    r.dimension = static_cast<int>(sys.matrix.cols()) - d.rank;
    r.sigma_gap = d.sigma_gap;
    r.reliable = d.sigma_gap > min_sigma_gap;
    r.singular_values = d.singular_values;
    const Eigen::MatrixXd& v = svd.matrixV();
    for (int c = d.rank; c < v.cols(); ++c) r.basis.push_back(FourierAnsatz::from_stacked(v.col(c), sys.n, sys.K));
    return r;
}

inline double system_residual(const BoundaryConditionSystem& sys, const FourierAnsatz& a) {
    return (sys.matrix * a.stacked()).cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------------------
// Structure of the kernel

struct StructureViolation {
    double high_modes = 0.0;   // |a_k|, k >= 3
    double z2_modes = 0.0;     // |b_k| for k >= 1 and |Im b_0|
    double w_modes = 0.0;      // same for every q + i p component
    double a1_relation = 0.0;  // |a_1 + conj(a_1) + 2 s b_0 / C_s|
    double a0_relation = 0.0;  // |a_0 + conj(a_2)|

    double max() const { return std::max({high_modes, z2_modes, w_modes, a1_relation, a0_relation}); }
};

inline StructureViolation structure_violation(const FourierAnsatz& a, double s) {
    const double cs = std::sqrt(1.0 - s * s);
    StructureViolation v;
    for (int k = 3; k <= a.K; ++k) v.high_modes = std::max(v.high_modes, std::abs(a.z1[static_cast<std::size_t>(k)]));
    auto constant_real = [&](const std::vector<cplx>& c) {
        double worst = std::abs(c[0].imag());
        for (std::size_t k = 1; k < c.size(); ++k) worst = std::max(worst, std::abs(c[k]));
        return worst;
    };
    v.z2_modes = constant_real(a.z2);
    for (const auto& w : a.w) v.w_modes = std::max(v.w_modes, constant_real(w));
    const double sdot = a.z2[0].real();
    v.a1_relation = std::abs(2.0 * a.z1[1].real() + 2.0 * s * sdot / cs);
    v.a0_relation = std::abs(a.z1[0] + std::conj(a.z1[2]));
    return v;
}

struct KernelStructureReport {
    double max_violation = 0.0;
    int free_parameters = 0;  // rank of the kernel projected on the free parameters
    int expected_parameters = 0;
    double tol = 0.0;

    bool passed() const { return max_violation <= tol && free_parameters == expected_parameters; }
};

inline constexpr double structure_tol = 1e-8;

/// Checks every basis element against the coefficient relations and counts
/// the free parameters Re a_0, Im a_0, Im a_1, s', q'_1..q'_{n-2}.
inline KernelStructureReport kernel_structure_check(const KernelResult& r, double s, double tol = structure_tol) {
    KernelStructureReport rep;
    rep.tol = tol;
    if (r.basis.empty()) return rep;
    const int n = r.basis.front().n;
    rep.expected_parameters = n + 2;
    Eigen::MatrixXd params(static_cast<Eigen::Index>(r.basis.size()), n + 2);
    for (std::size_t i = 0; i < r.basis.size(); ++i) {
        const FourierAnsatz& a = r.basis[i];
        rep.max_violation = std::max(rep.max_violation, structure_violation(a, s).max());
        const auto row = static_cast<Eigen::Index>(i);
        params(row, 0) = a.z1[0].real();
        params(row, 1) = a.z1[0].imag();
        params(row, 2) = a.z1[1].imag();
        params(row, 3) = a.z2[0].real();
        for (int j = 0; j < n - 2; ++j) params(row, 4 + j) = a.w[static_cast<std::size_t>(j)][0].real();
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(params);
    rep.free_parameters = decide_rank(svd.singularValues(), default_rank_tol_ratio).rank;
    return rep;
}

// ---------------------------------------------------------------------------
// Scalar Riemann-Hilbert problem: w holomorphic on the disk with
// Re(e^{-i kappa phi} w(e^{i phi})) = 0. The collocated boundary values are
// projected onto the real trigonometric polynomials of degree <= K - kappa,
// which is exactly the space they live in, so the cokernel is the rank
// deficit of that projected system.

struct ScalarRHResult {
    int kernel = 0;
    int cokernel = 0;
    double sigma_gap = 0.0;

    int index() const { return kernel - cokernel; }
};

inline ScalarRHResult rh_scalar_dims(int kappa, int K, int m_boundary = 0, double tol_ratio = default_rank_tol_ratio) {
    if (K < 1) throw std::invalid_argument("rh_scalar: K must be positive");
    if (2 * std::abs(kappa) > K) throw std::invalid_argument("rh_scalar: need |kappa| <= K/2");
    if (m_boundary == 0) m_boundary = min_collocation_angles(K);
    const int degree = K - kappa;  // max |k - kappa| over 0 <= k <= K
    if (m_boundary < min_collocation_angles(K) || m_boundary <= 2 * degree) throw NumericalError("rh_scalar: undersampled collocation");

    Eigen::MatrixXd colloc(m_boundary, 2 * (K + 1));
    Eigen::MatrixXd proj(2 * degree + 1, m_boundary);
    const double m = m_boundary;
    for (int j = 0; j < m_boundary; ++j) {
        const double phi = 2.0 * std::numbers::pi * j / m_boundary;
        for (int k = 0; k <= K; ++k) {
            colloc(j, 2 * k) = std::cos((k - kappa) * phi);
            colloc(j, 2 * k + 1) = -std::sin((k - kappa) * phi);
        }
        proj(0, j) = std::sqrt(1.0 / m);
        for (int d = 1; d <= degree; ++d) {
            proj(2 * d - 1, j) = std::sqrt(2.0 / m) * std::cos(d * phi);
            proj(2 * d, j) = std::sqrt(2.0 / m) * std::sin(d * phi);
        }
    }
    const Eigen::MatrixXd sys = proj * colloc;
    Eigen::BDCSVD<Eigen::MatrixXd> svd(sys);
    const RankDecision d = decide_rank(svd.singularValues(), tol_ratio);
    ScalarRHResult r;
    r.kernel = static_cast<int>(sys.cols()) - d.rank;
    r.cokernel = static_cast<int>(sys.rows()) - d.rank;
    r.sigma_gap = d.sigma_gap;
    return r;
}

inline int rh_scalar_kernel(int kappa, int K) { return rh_scalar_dims(kappa, K).kernel; }
inline int rh_scalar_coker(int kappa, int K) { return rh_scalar_dims(kappa, K).cokernel; }

}  // namespace mk
