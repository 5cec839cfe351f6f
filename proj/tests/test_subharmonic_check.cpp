#include "mk/bishop_model.hpp"
#include "mk/subharmonic_check.hpp"

#include <gtest/gtest.h>

namespace {

using mk::Point;
using mk::Vec;

std::vector<Vec> unit_dirs(int m) {
    std::vector<Vec> d;
    for (int i = 0; i < m; ++i) d.push_back(mk::basis_vector(m, i));
    d.push_back(Vec::Ones(m).normalized());
    Vec alt(m);
    for (int i = 0; i < m; ++i) alt[i] = i % 2 ? -1.0 : 0.5 * i;
    d.push_back(alt.normalized());
    return d;
}

TEST(ComplexStructure, SquaresToMinusOne) {
    const auto J = mk::standard_complex_structure(3);
    EXPECT_EQ(J.square_defect(mk::uniform_grid(6, -1, 1, 2)), 0.0);
    EXPECT_NO_THROW(J.validate({Point::Zero(6)}));
    const mk::AlmostComplexField bad{2, [](const Point&) { return mk::Mat::Identity(2, 2); }};
    EXPECT_THROW(bad.validate({Point::Zero(2)}), std::invalid_argument);
}

TEST(DJ, HalfNormSquared) {
    // d^J(1/2 |z|^2) = x dy - y dx on C.
    const auto dj = mk::dJ([](const Point& p) { return 0.5 * p.squaredNorm(); }, mk::standard_complex_structure(1));
    const Point p = (Point(2) << 0.7, -0.4).finished();
    EXPECT_NEAR(dj.on_basis(p, {0}), 0.4, 1e-9);
    EXPECT_NEAR(dj.on_basis(p, {1}), 0.7, 1e-9);
}

TEST(Psh, StandardQuadratic) {
    // d d^J (1/2 |z|^2) = 2 sum dx ^ dy, so omega(v, Jv) = 2 |v|^2.
    const auto J = mk::standard_complex_structure(2);
    const double m = mk::psh_report([](const Point& p) { return 0.5 * p.squaredNorm(); }, J, mk::uniform_grid(4, -1, 1, 3), unit_dirs(4));
    EXPECT_NEAR(m, 2.0, 1e-6);
}

TEST(Psh, ModelFunctionIsPlurisubharmonic) {
    const auto J = mk::standard_complex_structure(3);
    const double m = mk::psh_report([](const Point& x) { return mk::psh_f(mk::from_real_coords(x)); }, J,
                                    mk::uniform_grid(6, -0.5, 0.5, 3), unit_dirs(6));
    EXPECT_GT(m, 0.0);
    // The minimum comes from the cotangent plane, where f = 1/2 p^2.
    EXPECT_NEAR(m, 1.0, 1e-6);
}

TEST(Psh, PluriharmonicAndNegative) {
    const auto J = mk::standard_complex_structure(1);
    const auto pts = mk::uniform_grid(2, -1, 1, 5);
    EXPECT_NEAR(mk::psh_report([](const Point& p) { return p[0] * p[0] - p[1] * p[1]; }, J, pts, unit_dirs(2)), 0.0, 1e-6);
    EXPECT_LT(mk::psh_report([](const Point& p) { return -p.squaredNorm(); }, J, pts, unit_dirs(2)), 0.0);
}

TEST(Psh, DirectionsMustBeUnit) {
    EXPECT_THROW(mk::psh_report([](const Point&) { return 0.0; }, mk::standard_complex_structure(1), {Point::Zero(2)}, {Vec::Ones(2)}),
                 std::invalid_argument);
}

TEST(Laplacian, StencilsOnQuadratics) {
    const mk::PlaneFunction f = [](double x, double y) { return 3 * x * x + y * y - x * y; };
    EXPECT_NEAR(mk::laplacian_5pt(f, 0.2, -0.3, 1e-3), 8.0, 1e-6);
    EXPECT_NEAR(mk::laplacian_polar(f, 0.8, 1.0, 1e-3), 8.0, 1e-5);
    EXPECT_THROW(mk::laplacian_polar(f, 1e-4, 0.0, 1e-3), std::invalid_argument);
}

TEST(AuxProfile, ProfileFacts) {
    EXPECT_EQ(mk::aux_g(1.0, 0.0), 0.0);
    EXPECT_DOUBLE_EQ(mk::aux_g_laplacian(0.75), 0.0);
    EXPECT_DOUBLE_EQ(mk::aux_g_radial(1.0), -0.5);
    const auto r = mk::aux_profile_check({0.75, 1.0, 26, 64});
    EXPECT_LT(r.max_laplacian_error, 1e-6);
    EXPECT_LT(r.max_radial_error, 1e-6);
    EXPECT_LT(r.max_boundary_value, 1e-14);
    EXPECT_LT(r.max_radial_rate, 0.0);
    EXPECT_GE(r.min_laplacian, 0.0);
}

TEST(MaxPrinciple, BishopDisks) {
    for (double s : {0.0, 0.3, 0.5, 0.9, 0.95}) {
        const mk::BishopDisk u(s, 3);
        const auto r = mk::max_principle_check(u, mk::psh_f, mk::PolarGrid{}, 1e-3);
        EXPECT_FALSE(r.constant);
        EXPECT_TRUE(r.max_on_boundary);
        EXPECT_TRUE(r.boundary_level_set);
        EXPECT_TRUE(r.weakly_subharmonic);
        EXPECT_NEAR(r.max_value, 0.5, 1e-12);
        // d/dr of 1/2 C_s^2 r^2 at r = 1.
        EXPECT_NEAR(r.boundary_derivative, 1.0 - s * s, 1e-6);
        EXPECT_TRUE(r.consistent());
        const mk::PlaneFunction F = [&u](double x, double y) { return mk::psh_f(u({x, y})); };
        EXPECT_NEAR(mk::min_laplacian(F, mk::cartesian_disk_grid(64), 1e-3), 2.0 * (1.0 - s * s), 1e-6);
    }
}

TEST(MaxPrinciple, ConstantFunction) {
    const auto r = mk::max_principle_check([](double, double) { return 0.25; }, mk::PolarGrid{});
    EXPECT_TRUE(r.constant);
    EXPECT_TRUE(r.consistent());
}

TEST(MaxPrinciple, InteriorMaximumIsInconsistent) {
    const auto r = mk::max_principle_check([](double x, double y) { return -(x * x + y * y); }, mk::PolarGrid{}, 1e-3);
    EXPECT_FALSE(r.max_on_boundary);
    EXPECT_FALSE(r.weakly_subharmonic);
    EXPECT_FALSE(r.consistent());
}

TEST(MaxPrinciple, NonFiniteSampleRejected) {
    EXPECT_THROW(mk::max_principle_check([](double x, double) { return x > 0.5 ? std::nan("") : 0.0; }, mk::PolarGrid{}),
                 std::domain_error);
}

TEST(DJPullback, HolomorphicMapIntertwines) {
    // u(z) = (z, z^2) into C^2, h = 1/2 |w|^2.
    mk::SmoothMap u{2, 4, [](const Point& p) {
                        const std::complex<double> z(p[0], p[1]);
                        const auto z2 = z * z;
                        return Point((Point(4) << z.real(), z.imag(), z2.real(), z2.imag()).finished());
                    },
                    {}};
    const double dev = mk::dj_pullback_deviation(u, [](const Point& x) { return 0.5 * x.squaredNorm(); },
                                                 mk::standard_complex_structure(2), mk::uniform_grid(2, -0.7, 0.7, 5));
    EXPECT_LT(dev, 1e-6);
}

}  // namespace
