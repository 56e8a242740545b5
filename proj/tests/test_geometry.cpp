#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"

using namespace qfvm;
using namespace qfvm::testing;
using Catch::Approx;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("reference tet basics") {
    TetGeometry g = tet_geometry(reference_tet());
    CHECK(g.volume == Approx(1.0 / 6.0).epsilon(1e-14));
    // L1 = x on this tet, so its gradient is e_x.
    CHECK((g.grad_L[0] - Vec3(1, 0, 0)).norm() < 1e-14);
    Vec3 sum = g.grad_L[0] + g.grad_L[1] + g.grad_L[2] + g.grad_L[3];
    CHECK(sum.norm() < 1e-14);
}

TEST_CASE("make_tet rejects degenerate input") {
    CHECK_THROWS_AS(make_tet(Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(1, 1, 0)),
                    geometry_error);
}

TEST_CASE("regular tetrahedron closed forms") {
    TetGeometry g = tet_geometry(regular_tet());
    double dih = std::acos(1.0 / 3.0);
    double r = 1.0 / (2.0 * std::sqrt(2.0));
    for (int e = 0; e < 6; ++e) {
        CHECK(g.dihedral[e] == Approx(dih).epsilon(1e-13));
        CHECK(g.r[e] == Approx(r).epsilon(1e-13));
    }
    for (int i = 0; i < 4; ++i) CHECK(g.R[i] == Approx(3.0 * r).epsilon(1e-13));
    CHECK(min_v_angle(g) == Approx(kPi / 3.0).epsilon(1e-13));
}

TEST_CASE("cotangent identities on random tets") {
    TetSampler sampler;
    for (int trial = 0; trial < 100; ++trial) {
        TetGeometry g = tet_geometry(sampler.next());
        Vec3 sum = g.grad_L[0] + g.grad_L[1] + g.grad_L[2] + g.grad_L[3];
        REQUIRE(sum.norm() < 1e-12 * g.grad_L[0].norm());
        for (int e = 0; e < 6; ++e) {
            auto [j, k] = kEdgeVerts[e];
            auto [j2, k2] = kEdgeVerts[kOppositeEdge[e]];
            double lhs = 6.0 * g.volume * g.grad_L[j2].dot(g.grad_L[k2]);
            REQUIRE(lhs == Approx(-g.r[e]).margin(1e-12 * g.h));
        }
        for (int i = 0; i < 4; ++i) {
            double lhs = 6.0 * g.volume * g.grad_L[i].dot(g.grad_L[i]);
            REQUIRE(lhs == Approx(g.R[i]).epsilon(1e-12));
            double sum_r = 0;
            for (int e = 0; e < 6; ++e)
                if (kEdgeVerts[e][0] != i && kEdgeVerts[e][1] != i) sum_r += g.r[e];
            REQUIRE(g.R[i] == Approx(sum_r).epsilon(1e-12));
        }
        for (int i = 0; i < 4; ++i)
            for (int m = 0; m < 3; ++m) {
                REQUIRE(g.plane[i][m] > 0.0);
                REQUIRE(g.plane[i][m] < kPi);
            }
    }
}

TEST_CASE("volume from two face areas and a dihedral") {
    TetSampler sampler(11);
    for (int trial = 0; trial < 50; ++trial) {
        TetGeometry g = tet_geometry(sampler.next());
        // 3|K| = 2 |T_j||T_k| sin(theta_e') / |P_j' P_k'| with e' opposite the
        // edge whose two adjacent faces are T_j, T_k.
        int e = 0;  // edge {P1,P2}; adjacent faces T_3, T_4 (those containing it)
        auto [a, b] = kEdgeVerts[e];
        double len = (g.p[a] - g.p[b]).norm();
        double lhs = 3.0 * g.volume;
        double rhs = 2.0 * g.T_area[2] * g.T_area[3] * std::sin(g.dihedral[e]) / len;
        REQUIRE(lhs == Approx(rhs).epsilon(1e-11));
    }
}

TEST_CASE("v-angle of degenerate square tet collapses") {
    // Four vertices of a unit square, barely lifted: plane angles stay near 45
    // degrees but the V-angle vanishes.
    Tet t = make_tet(Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(1, 1, 1e-6));
    TetGeometry g = tet_geometry(t);
    CHECK(min_v_angle(g) < 0.01 * kDeg);
    double min_plane = kPi;
    for (int i = 0; i < 4; ++i)
        for (int m = 0; m < 3; ++m) min_plane = std::min(min_plane, g.plane[i][m]);
    CHECK(min_plane > 40.0 * kDeg);
}

TEST_CASE("v-angle invariances") {
    TetSampler sampler(5);
    Tet t = sampler.next();
    TetGeometry g = tet_geometry(t);
    // Scale invariance.
    Tet ts = t;
    for (auto& p : ts.p) p *= 10.0;
    CHECK(min_v_angle(tet_geometry(ts)) == Approx(min_v_angle(g)).epsilon(1e-13));
    // Permutation invariance of the three incident plane angles.
    std::array<double, 3> a = g.plane[2];
    double v0 = v_angle_of(a);
    std::swap(a[0], a[2]);
    CHECK(v_angle_of(a) == Approx(v0).epsilon(1e-14));
}

TEST_CASE("structured element v-angle closed form") {
    Tet t = make_tet(Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(1, 1, 0), Vec3(1, 1, 1));
    double expected = std::atan(std::sqrt(2.0) / 2.0) + kPi / 4.0 - std::atan(std::sqrt(2.0));
    CHECK(min_v_angle(tet_geometry(t)) == Approx(expected).epsilon(1e-12));
    CHECK(expected / kDeg == Approx(25.52877936550931).epsilon(1e-12));
}

TEST_CASE("theta5 reconstruction round trip") {
    TetSampler sampler(17);
    for (int trial = 0; trial < 100; ++trial) {
        TetGeometry g = tet_geometry(sampler.next());
        AngleSet as = reconstruct_from_theta5(theta5_of(g));
        for (int i = 0; i < 4; ++i)
            for (int m = 0; m < 3; ++m) REQUIRE(as.plane[i][m] == Approx(g.plane[i][m]).margin(1e-10));
        for (int e = 0; e < 6; ++e) REQUIRE(as.dihedral[e] == Approx(g.dihedral[e]).margin(1e-10));
    }
}

TEST_CASE("regular theta5 reconstructs the regular tet") {
    Theta5 t5;
    t5.a.fill(kPi / 3.0);
    AngleSet as = reconstruct_from_theta5(t5);
    for (int i = 0; i < 4; ++i)
        for (int m = 0; m < 3; ++m) CHECK(as.plane[i][m] == Approx(kPi / 3.0).margin(1e-12));
    for (int e = 0; e < 6; ++e) CHECK(as.dihedral[e] == Approx(std::acos(1.0 / 3.0)).margin(1e-12));
}

TEST_CASE("infeasible theta5 rejected") {
    Theta5 t5;
    t5.a = {100.0 * kDeg, 30.0 * kDeg, 85.0 * kDeg, 40.0 * kDeg, 50.0 * kDeg};
    // First and third angles share a triangle: their sum exceeds pi.
    AngleSet as;
    CHECK_FALSE(try_reconstruct(t5, as));
    CHECK_THROWS_AS(reconstruct_from_theta5(t5), infeasible_theta5);
}

TEST_CASE("edge ratios from theta5 match coordinates") {
    TetSampler sampler(23);
    for (int trial = 0; trial < 100; ++trial) {
        TetGeometry g = tet_geometry(sampler.next());
        std::array<double, 6> ratio = r_over_circumradius(theta5_of(g));
        for (int e = 0; e < 6; ++e)
            REQUIRE(ratio[e] == Approx(g.r[e] / g.circumradius).margin(1e-9));
    }
}

TEST_CASE("edge ratios: symmetry and scale invariance") {
    Theta5 reg;
    reg.a.fill(kPi / 3.0);
    std::array<double, 6> ratio = r_over_circumradius(reg);
    for (int e = 1; e < 6; ++e) CHECK(ratio[e] == Approx(ratio[0]).epsilon(1e-12));

    TetSampler sampler(29);
    Tet t = sampler.next();
    TetGeometry g1 = tet_geometry(t);
    for (auto& p : t.p) p *= 10.0;
    TetGeometry g10 = tet_geometry(t);
    for (int e = 0; e < 6; ++e)
        CHECK(g1.r[e] / g1.circumradius == Approx(g10.r[e] / g10.circumradius).epsilon(1e-12));
}

TEST_CASE("circumradius touches all four vertices") {
    TetSampler sampler(31);
    for (int trial = 0; trial < 20; ++trial) {
        TetGeometry g = tet_geometry(sampler.next());
        // Recompute the circumcenter independently and compare distances.
        Eigen::Matrix3d A;
        Eigen::Vector3d rhs;
        for (int i = 1; i < 4; ++i) {
            A.row(i - 1) = 2.0 * (g.p[i] - g.p[0]).transpose();
            rhs(i - 1) = g.p[i].squaredNorm() - g.p[0].squaredNorm();
        }
        Vec3 center = A.fullPivLu().solve(rhs);
        double R = (g.p[0] - center).norm();
        REQUIRE(g.circumradius == Approx(R).epsilon(1e-9));
    }
}
