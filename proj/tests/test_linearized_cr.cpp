#include "mk/linearized_cr.hpp"

#include <gtest/gtest.h>

#include <numeric>

namespace {

using mk::cplx;

// ---------------------------------------------------------------------------
// Oracle for the scalar problem Re(e^{-i kappa phi} w) = 0, w = sum_k a_k z^k:
// compare Fourier coefficients directly. The coefficient of e^{i j phi},
// j >= 0, of 2 Re(...) is a_{j+kappa} + conj(a_{kappa-j}) (missing indices
// are zero), which gives integer rows in (Re a_k, Im a_k). Rank by exact
// fraction-free elimination over the integers.

int integer_rank(std::vector<std::vector<long long>> a) {
    int rank = 0;
    const std::size_t cols = a.empty() ? 0 : a[0].size();
    for (std::size_t c = 0; c < cols && rank < static_cast<int>(a.size()); ++c) {
        std::size_t piv = static_cast<std::size_t>(rank);
        while (piv < a.size() && a[piv][c] == 0) ++piv;
        if (piv == a.size()) continue;
        std::swap(a[piv], a[static_cast<std::size_t>(rank)]);
        const auto& p = a[static_cast<std::size_t>(rank)];
        for (std::size_t r = static_cast<std::size_t>(rank) + 1; r < a.size(); ++r) {
            const long long f = a[r][c];
            if (f == 0) continue;
            for (std::size_t k = 0; k < cols; ++k) a[r][k] = a[r][k] * p[c] - f * p[k];
            long long g = 0;
            for (long long x : a[r]) g = std::gcd(g, x < 0 ? -x : x);
            if (g > 1)
                for (auto& x : a[r]) x /= g;
        }
        ++rank;
    }
    return rank;
}

struct OracleDims {
    int kernel;
    int cokernel;
};

OracleDims scalar_rh_oracle(int kappa, int K) {
    const int degree = K - kappa;
    std::vector<std::vector<long long>> rows;
    auto col = [](int k, int part) { return static_cast<std::size_t>(2 * k + part); };
    for (int j = 0; j <= degree; ++j) {
        std::vector<long long> re(static_cast<std::size_t>(2 * (K + 1)), 0), im = re;
        const int k1 = j + kappa, k2 = kappa - j;
        if (k1 >= 0 && k1 <= K) {
            re[col(k1, 0)] += 1;
            im[col(k1, 1)] += 1;
        }
        if (k2 >= 0 && k2 <= K) {
            re[col(k2, 0)] += 1;
            im[col(k2, 1)] -= 1;
        }
        rows.push_back(re);
        if (j > 0) rows.push_back(im);  // j = 0 coefficient is real
    }
    const int rank = integer_rank(rows);
    return {2 * (K + 1) - rank, 2 * degree + 1 - rank};
}

TEST(ScalarRH, OracleSelfCheck) {
    EXPECT_EQ(scalar_rh_oracle(0, 8).kernel, 1);
    EXPECT_EQ(scalar_rh_oracle(1, 8).kernel, 3);
    EXPECT_EQ(scalar_rh_oracle(-1, 8).kernel, 0);
    EXPECT_EQ(scalar_rh_oracle(-1, 8).cokernel, 1);
}

TEST(ScalarRH, CollocationMatchesOracle) {
    for (int K : {8, 16, 32})
        for (int kappa = -3; kappa <= 3; ++kappa) {
            const auto o = scalar_rh_oracle(kappa, K);
            const auto r = mk::rh_scalar_dims(kappa, K);
            EXPECT_EQ(r.kernel, o.kernel) << kappa << ' ' << K;
            EXPECT_EQ(r.cokernel, o.cokernel) << kappa << ' ' << K;
            EXPECT_EQ(r.index(), 1 + 2 * kappa);
        }
}

TEST(ScalarRH, NamedExamples) {
    EXPECT_EQ(mk::rh_scalar_kernel(0, 16), 1);
    EXPECT_EQ(mk::rh_scalar_kernel(1, 16), 3);
    EXPECT_EQ(mk::rh_scalar_kernel(-1, 16), 0);
    EXPECT_EQ(mk::rh_scalar_coker(-1, 16), 1);
}

TEST(ScalarRH, Preconditions) {
    EXPECT_THROW(mk::rh_scalar_dims(5, 8), std::invalid_argument);
    EXPECT_THROW(mk::rh_scalar_dims(0, 8, 20), mk::NumericalError);
}

// ---------------------------------------------------------------------------
// Bishop linearization

TEST(Ansatz, StackingLayout) {
    EXPECT_EQ(mk::FourierAnsatz::column(16, 0, 0, 0), 0);
    EXPECT_EQ(mk::FourierAnsatz::column(16, 0, 0, 1), 1);
    EXPECT_EQ(mk::FourierAnsatz::column(16, 1, 0, 0), 34);
    EXPECT_EQ(mk::FourierAnsatz::column(16, 2, 3, 1), 2 * (34 + 3) + 1);
    mk::FourierAnsatz a(3, 4);
    a.w[0][2] = cplx(1.5, -2.5);
    const auto x = a.stacked();
    EXPECT_EQ(x.size(), a.unknowns());
    EXPECT_EQ(x[mk::FourierAnsatz::column(4, 2, 2, 1)], -2.5);
    const auto b = mk::FourierAnsatz::from_stacked(x, 3, 4);
    EXPECT_EQ(b.w[0][2], a.w[0][2]);
}

TEST(System, ShapeAndLabels) {
    const auto sys = mk::build_system(0.5, 3, 8, mk::min_collocation_angles(8));
    EXPECT_EQ(sys.matrix.cols(), 2 * 3 * 9);
    EXPECT_EQ(sys.matrix.rows(), 3 * 40);
    EXPECT_EQ(sys.row_labels[0], "coupling@0");
    EXPECT_EQ(sys.row_labels[1], "im_z2@0");
    EXPECT_EQ(sys.row_labels[2], "im_w1@0");
    EXPECT_EQ(sys.row_labels[3], "coupling@1");
}

TEST(System, Preconditions) {
    EXPECT_THROW(mk::build_system(1.0, 2, 8, 40), std::invalid_argument);
    EXPECT_THROW(mk::build_system(0.5, 1, 8, 40), std::invalid_argument);
    EXPECT_THROW(mk::build_system(0.5, 2, 3, 40), std::invalid_argument);
    EXPECT_THROW(mk::build_system(0.5, 2, 8, 39), mk::NumericalError);
}

// The explicit kernel elements: z1' = a0 + a1 z - conj(a0) z^2 with
// 2 Re a1 = -2 s s'/C_s, z2' = s', w' = q' (real constants).
mk::FourierAnsatz explicit_element(int n, int K, double s, cplx a0, double im_a1, double sdot, const std::vector<double>& qdot) {
    mk::FourierAnsatz a(n, K);
    const double cs = std::sqrt(1 - s * s);
    a.z1[0] = a0;
    a.z1[1] = cplx(-s * sdot / cs, im_a1);
    a.z1[2] = -std::conj(a0);
    a.z2[0] = sdot;
    for (int j = 0; j < n - 2; ++j) a.w[static_cast<std::size_t>(j)][0] = qdot[static_cast<std::size_t>(j)];
    return a;
}

TEST(Kernel, ExplicitElementsSolveTheSystem) {
    const auto sys = mk::build_system(0.9, 4, 16, 72);
    const auto a = explicit_element(4, 16, 0.9, cplx(0.3, -0.7), 1.1, -0.4, {0.2, 0.5});
    EXPECT_LT(mk::system_residual(sys, a), 1e-12);
    EXPECT_LT(mk::structure_violation(a, 0.9).max(), 1e-15);
    auto bad = a;
    bad.z1[3] = 1e-3;
    EXPECT_GT(mk::system_residual(sys, bad), 1e-4);
}

class KernelDimension : public ::testing::TestWithParam<std::tuple<int, double, int>> {};

TEST_P(KernelDimension, IsNPlusTwo) {
    const auto [n, s, K] = GetParam();
    const auto r = mk::kernel(mk::build_system(s, n, K, mk::min_collocation_angles(K)));
    EXPECT_EQ(r.dimension, n + 2);
    EXPECT_TRUE(r.reliable);
    EXPECT_GT(r.sigma_gap, 1e4);
    const auto rep = mk::kernel_structure_check(r, s);
    EXPECT_TRUE(rep.passed()) << rep.max_violation << ' ' << rep.free_parameters;
    for (const auto& b : r.basis) EXPECT_LT(mk::system_residual(mk::build_system(s, n, K, mk::min_collocation_angles(K)), b), 1e-10);
}

INSTANTIATE_TEST_SUITE_P(Grid, KernelDimension,
                         ::testing::Combine(::testing::Values(2, 3, 4), ::testing::Values(0.5, 0.9, 0.95), ::testing::Values(16, 32)));

TEST(Kernel, IndependentOfCollocationDensity) {
    for (int m : {72, 100, 151}) EXPECT_EQ(mk::kernel(mk::build_system(0.5, 3, 16, m)).dimension, 5);
}

TEST(Kernel, AtTheSingularity) {
    // s = 0: the coupling row loses its z2 term but the count is unchanged.
    EXPECT_EQ(mk::kernel(mk::build_system(0.0, 2, 8, 40)).dimension, 4);
}

TEST(Rank, GapDecision) {
    Eigen::VectorXd sv(4);
    sv << 10.0, 1.0, 1e-12, 0.0;
    const auto d = mk::decide_rank(sv, 1e-8);
    EXPECT_EQ(d.rank, 2);
    EXPECT_DOUBLE_EQ(d.sigma_gap, 1e12);
    Eigen::VectorXd blurred(3);
    blurred << 1.0, 1e-7, 1e-9;
    EXPECT_LT(mk::decide_rank(blurred, 1e-8).sigma_gap, 1e4);
}

}  // namespace
