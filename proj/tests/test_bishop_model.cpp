#include "mk/bishop_model.hpp"

#include <gtest/gtest.h>

#include <numbers>

namespace {

using mk::BishopDisk;
using mk::cplx;
using mk::ModelPoint;
using mk::Vec;

constexpr double pi = std::numbers::pi;

ModelPoint point(cplx z1, cplx z2, double q = 0.0, double p = 0.0) {
    return {z1, z2, Vec::Constant(1, q), Vec::Constant(1, p)};
}

TEST(Model, Membership) {
    const mk::ModelConfig cfg{3, 0.1};
    EXPECT_EQ(mk::model_membership(point(0.3, 0.95), cfg), mk::Membership::inside);
    EXPECT_EQ(mk::model_membership(point(0.0, 0.85), cfg), mk::Membership::outside_height);
    EXPECT_EQ(mk::model_membership(point(0.5, 0.95), cfg), mk::Membership::outside_level);
    EXPECT_STREQ(mk::to_string(mk::Membership::outside_level), "outside_level");
}

TEST(Model, Corner) {
    const mk::ModelConfig cfg{2, 0.1};
    // Re z2 = 0.9 and |z1|^2 = 1 - 0.81.
    EXPECT_TRUE(mk::model_on_corner({cplx(std::sqrt(0.19), 0.0), 0.9, Vec(0), Vec(0)}, cfg));
    EXPECT_FALSE(mk::model_on_corner({0.0, 0.9, Vec(0), Vec(0)}, cfg));
}

TEST(Model, ConfigValidation) {
    EXPECT_THROW(mk::model_membership(point(0, 1), {1, 0.1}), std::invalid_argument);
    EXPECT_THROW(mk::model_membership(point(0, 1), {2, 0.0}), std::invalid_argument);
}

TEST(Model, RealCoordinatesRoundTrip) {
    const ModelPoint m = point(cplx(0.1, 0.2), cplx(0.3, 0.4), 0.5, 0.6);
    const Vec x = mk::to_real_coords(m);
    ASSERT_EQ(x.size(), 6);
    EXPECT_EQ(x[4], 0.5);
    EXPECT_EQ(x[5], 0.6);
    const ModelPoint back = mk::from_real_coords(x);
    EXPECT_EQ(back.z1, m.z1);
    EXPECT_EQ(back.p[0], 0.6);
    EXPECT_THROW(mk::from_real_coords(Vec::Zero(3)), std::invalid_argument);
}

TEST(Bishop, BoundaryLiesInN) {
    for (double s : {0.0, 0.5, 0.9, 0.999}) EXPECT_TRUE(mk::boundary_in_N(BishopDisk(s, 3), 256)) << s;
}

TEST(Bishop, SampleValues) {
    const BishopDisk u(0.6, 2);
    const ModelPoint m = u(cplx(0.0, 1.0));
    EXPECT_NEAR(std::abs(m.z1 - cplx(0.0, 0.8)), 0.0, 1e-15);
    EXPECT_EQ(m.z2, cplx(0.6, 0.0));
    EXPECT_THROW(BishopDisk(1.0, 2), std::invalid_argument);
    EXPECT_THROW(BishopDisk(-0.1, 2), std::invalid_argument);
}

TEST(Bishop, Holomorphic) {
    EXPECT_LT(mk::holomorphy_residual(BishopDisk(0.9, 4), mk::cartesian_disk_grid(16)), 1e-8);
}

TEST(Bishop, ConjugateTamperDetected) {
    const BishopDisk u(0.5, 2);
    const mk::DiskMap bad = [u](cplx z) { return u(std::conj(z)); };
    // d/dx conj(C z) + i d/dy conj(C z) = 2 C
    EXPECT_NEAR(mk::holomorphy_residual(bad, mk::cartesian_disk_grid(8)), 2.0 * u.c_s(), 1e-8);
}

TEST(Bishop, TamperedBoundaryDetected) {
    const BishopDisk u(0.5, 2);
    const mk::DiskMap bad = [u](cplx z) {
        ModelPoint m = u(z);
        m.z2 += cplx(0.0, 1e-3);
        return m;
    };
    EXPECT_FALSE(mk::boundary_in_N(bad, 64));
}

TEST(Bishop, PageAngleRate) {
    // arg z1 along the boundary advances at unit speed.
    for (double phi : {0.1, 1.0, 3.0}) EXPECT_NEAR(mk::page_angle_rate(BishopDisk(0.3, 2), phi), 1.0, 1e-8);
}

// Oracle: the area of the disk of radius C_s, times the factor 2 in omega.
double area_oracle(double s) { return 2.0 * pi * (1.0 - s * s); }

TEST(Energy, MatchesClosedForm) {
    for (double s : {0.0, 0.5, 0.9, 0.95, 0.999}) {
        const auto e = mk::disk_energy(BishopDisk(s, 2), 64);
        EXPECT_NEAR(e.value(), area_oracle(s), 1e-6) << s;
        EXPECT_NEAR(e.area, e.boundary, 1e-9);
        EXPECT_LE(e.value(), mk::bishop_energy_bound());
        EXPECT_DOUBLE_EQ(mk::bishop_energy_closed_form(s), area_oracle(s));
    }
    EXPECT_NEAR(mk::disk_energy(BishopDisk(0.999, 2), 64).value(), 0.012560, 1e-6);
}

TEST(Energy, DifferencedJacobianAgrees) {
    const BishopDisk u(0.7, 2);
    const auto e = mk::disk_energy(mk::c2_part(mk::DiskMap(u)), 64);
    EXPECT_NEAR(e.value(), area_oracle(0.7), 1e-6);
}

TEST(Energy, QuadratureOrderEnforced) {
    EXPECT_THROW(mk::disk_energy(BishopDisk(0.5, 2), 32), std::invalid_argument);
}

TEST(Energy, InconsistentRoutesRaise) {
    // A map that is not smooth up to the boundary breaks Stokes on the
    // sample grid: radial factor with a kink at r = 1 from (1 - r^2)^(1/2).
    const mk::DiskMap kink = [](cplx z) {
        const double r2 = std::norm(z);
        return ModelPoint{z * (1.0 + std::sqrt(std::max(0.0, 1.0 - r2))), 0.0, Vec(0), Vec(0)};
    };
    EXPECT_THROW(mk::disk_energy(mk::c2_part(kink), 64), mk::NumericalError);
}

}  // namespace
