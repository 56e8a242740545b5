#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "helpers.hpp"
#include "qfvm/assembly.hpp"

using namespace qfvm;
using namespace qfvm::testing;
using Catch::Approx;

TEST_CASE("quadratic basis Lagrange property") {
    TetGeometry g = tet_geometry(reference_tet());
    DualComplex dc = build_dual(g, preset_scheme("qfvs1"));
    for (int n = 0; n < 10; ++n)
        for (int m = 0; m < 10; ++m) {
            double v = basis_eval(n, barycentric(g, dc.node_pos[m]));
            REQUIRE(v == Approx(n == m ? 1.0 : 0.0).margin(1e-14));
        }
    // Partition of unity and gradient consistency at a random point.
    std::array<double, 4> L{0.1, 0.2, 0.3, 0.4};
    double sum = 0;
    Vec3 gsum = Vec3::Zero();
    for (int n = 0; n < 10; ++n) {
        sum += basis_eval(n, L);
        gsum += basis_grad(g, n, L);
    }
    CHECK(sum == Approx(1.0).epsilon(1e-14));
    CHECK(gsum.norm() < 1e-14);
}

TEST_CASE("basis Laplacians match the nodal weight vector") {
    TetSampler sampler;
    for (int trial = 0; trial < 50; ++trial) {
        TetGeometry g = tet_geometry(sampler.next());
        Vec10 v2 = vector_v2(g.r);
        // 6|K| * Laplacian of each basis function, from the gradient algebra:
        // vertex functions give 4 R_i, midpoint functions give -8 r of the
        // opposite edge (equivalently 4 * (-2 r)).
        for (int i = 0; i < 4; ++i) {
            double lap = 4.0 * g.grad_L[i].dot(g.grad_L[i]) * 6.0 * g.volume;
            REQUIRE(v2(i) == Approx(lap).epsilon(1e-12));
        }
        for (int a = 0; a < 4; ++a)
            for (int b = a + 1; b < 4; ++b) {
                double lap = 8.0 * g.grad_L[a].dot(g.grad_L[b]) * 6.0 * g.volume;
                REQUIRE(v2(midpoint_node(a, b)) == Approx(lap).epsilon(1e-12));
            }
    }
}

TEST_CASE("closed-form element matrix invariants") {
    TetSampler sampler(61);
    SchemeParams p = preset_scheme("qfvs1");
    SchemeConstants c = scheme_constants(p);
    for (int trial = 0; trial < 100; ++trial) {
        TetGeometry g = tet_geometry(sampler.next());
        Mat10 A = element_matrix_A(g, c);
        double scale = A.cwiseAbs().maxCoeff();
        REQUIRE(A(0, 0) == Approx((3.0 * c.t1 - 2.0 * c.t2) * g.R[0]).epsilon(1e-12));
        Mat10 A1 = element_matrix_closed_form(g, p);
        for (int i = 0; i < 10; ++i) {
            REQUIRE(std::abs(A1.row(i).sum()) < 1e-12 * scale);
            REQUIRE(std::abs(A1.col(i).sum()) < 1e-12 * scale);
        }
        REQUIRE((A1 - (A - vector_v1(p) * vector_v2(g.r).transpose())).norm() < 1e-12 * scale);
    }
}

TEST_CASE("quadrature matrix matches closed form for unit diffusion") {
    TetSampler sampler(67);
    SchemeParams p = preset_scheme("qfvs2");
    auto one = [](const Vec3&) { return 1.0; };
    for (int trial = 0; trial < 100; ++trial) {
        TetGeometry g = tet_geometry(sampler.next());
        DualComplex dc = build_dual(g, p);
        Mat10 Aq = element_matrix_quadrature(g, dc, one, 4);
        Mat10 Ac = element_matrix_closed_form(g, p);
        double scale = Ac.cwiseAbs().maxCoeff();
        REQUIRE((Aq - Ac).cwiseAbs().maxCoeff() <= 1e-10 * scale);
    }
}

TEST_CASE("quadrature matrix: linearity and conservation") {
    TetSampler sampler(71);
    TetGeometry g = tet_geometry(sampler.next());
    SchemeParams p = preset_scheme("qfvs1");
    DualComplex dc = build_dual(g, p);
    Mat10 A1 = element_matrix_quadrature(g, dc, [](const Vec3&) { return 1.0; }, 4);
    Mat10 A7 = element_matrix_quadrature(g, dc, [](const Vec3&) { return 7.0; }, 4);
    CHECK((A7 - 7.0 * A1).norm() < 1e-13 * A7.norm());
    // Internal faces cancel pairwise: columns sum to zero even for variable
    // diffusion.
    Mat10 Av = element_matrix_quadrature(
        g, dc, [](const Vec3& x) { return 1.0 + x[0] * x[0] + x[1]; }, 4);
    for (int n = 0; n < 10; ++n) REQUIRE(std::abs(Av.col(n).sum()) < 1e-12 * Av.norm());
    CHECK_THROWS(element_matrix_quadrature(g, dc, [](const Vec3&) { return -1.0; }, 4));
}

TEST_CASE("element matrix transforms with the element") {
    TetSampler sampler(73);
    Tet t = sampler.next();
    SchemeParams p = preset_scheme("qfvs1");
    Mat10 A = element_matrix_closed_form(tet_geometry(t), p);
    // Rigid motion.
    Eigen::AngleAxisd rot(0.8, Vec3(1, 2, 2).normalized());
    Tet tr = t;
    for (auto& q : tr.p) q = rot * q + Vec3(3, -1, 2);
    CHECK((element_matrix_closed_form(tet_geometry(tr), p) - A).norm() < 1e-12 * A.norm());
    // Uniform scaling: entries are linear in lengths.
    Tet ts = t;
    for (auto& q : ts.p) q *= 4.0;
    CHECK((element_matrix_closed_form(tet_geometry(ts), p) - 4.0 * A).norm() < 1e-12 * A.norm());
}

TEST_CASE("right-hand side over dual cells") {
    TetSampler sampler(79);
    SchemeParams p = preset_scheme("qfvs1");
    TetGeometry g = tet_geometry(sampler.next());
    DualComplex dc = build_dual(g, p);
    Vec10 ones = rhs_element(dc, [](const Vec3&) { return 1.0; }, 4);
    for (int m = 0; m < 10; ++m) REQUIRE(ones(m) == Approx(dc.cells[m].volume).epsilon(1e-12));

    auto lin = [](const Vec3& x) { return 2.0 * x[0] - x[1] + 0.5 * x[2] + 3.0; };
    Vec10 bl = rhs_element(dc, lin, 4);
    Vec3 centroid = 0.25 * (g.p[0] + g.p[1] + g.p[2] + g.p[3]);
    REQUIRE(bl.sum() == Approx(g.volume * lin(centroid)).epsilon(1e-13));

    TetGeometry gref = tet_geometry(reference_tet());
    DualComplex dref = build_dual(gref, p);
    Vec10 bq = rhs_element(dref, [](const Vec3& x) { return x[0] * x[0]; }, 4);
    REQUIRE(bq.sum() == Approx(1.0 / 60.0).epsilon(1e-12));
}

TEST_CASE("global assembly") {
    Mesh mesh = generate_structured(2);
    SchemeParams p = preset_scheme("qfvs1");
    auto one = [](const Vec3&) { return 1.0; };
    AssemblyOptions opts;
    opts.kappa_is_constant = true;
    GlobalSystem sys = assemble(mesh, p, one, one, opts);
    REQUIRE(sys.A.n == mesh.n_nodes());
    double scale = 0;
    for (double v : sys.A.vals) scale = std::max(scale, std::abs(v));
    for (int row = 0; row < sys.A.n; ++row) {
        double s = 0;
        for (int k = sys.A.row_offsets[row]; k < sys.A.row_offsets[row + 1]; ++k)
            s += sys.A.vals[k];
        if (sys.dirichlet[row]) {
            REQUIRE(s == 1.0);  // identity row
            REQUIRE(sys.b[row] == 0.0);
        } else {
            REQUIRE(std::abs(s) < 1e-11 * scale);
        }
    }
}

TEST_CASE("one-dof solve matches hand computation") {
    Mesh mesh = generate_structured(1);
    SchemeParams p = preset_scheme("qfvs1");
    auto one = [](const Vec3&) { return 1.0; };
    auto f = [](const Vec3& x) { return 1.0 + x[0]; };
    AssemblyOptions opts;
    opts.kappa_is_constant = true;
    GlobalSystem sys = assemble(mesh, p, one, f, opts);
    int idof = -1;
    for (int i = 0; i < sys.A.n; ++i)
        if (!sys.dirichlet[i]) {
            REQUIRE(idof == -1);
            idof = i;
        }
    REQUIRE(idof >= 0);
    double diag = 0;
    for (int k = sys.A.row_offsets[idof]; k < sys.A.row_offsets[idof + 1]; ++k)
        if (sys.A.cols[k] == idof) diag = sys.A.vals[k];
    SolveReport rep;
    std::vector<double> x = solve(sys.A, sys.b, SolveMethod::bicgstab, 1e-12, rep);
    REQUIRE(x[idof] == Approx(sys.b[idof] / diag).epsilon(1e-10));
}

TEST_CASE("interpolant of the exact solution is nearly discrete-harmonic") {
    // Residual of the exact-solution interpolant shrinks under refinement.
    SchemeParams p = preset_scheme("qfvs1");
    auto u = [](const Vec3& x) {
        return std::sin(M_PI * x[0]) * std::sin(M_PI * x[1]) * std::sin(M_PI * x[2]);
    };
    auto f = [u](const Vec3& x) { return 3.0 * M_PI * M_PI * u(x); };
    auto one = [](const Vec3&) { return 1.0; };
    AssemblyOptions opts;
    opts.kappa_is_constant = true;
    double prev = 0;
    for (int n : {2, 4}) {
        Mesh mesh = generate_structured(n);
        GlobalSystem sys = assemble(mesh, p, one, f, opts);
        double res = 0;
        std::vector<double> ui(mesh.n_nodes());
        for (int i = 0; i < mesh.n_nodes(); ++i) ui[i] = u(mesh.node_position(i));
        std::vector<double> Au = sys.A.multiply(ui);
        for (int i = 0; i < sys.A.n; ++i)
            if (!sys.dirichlet[i]) res += (Au[i] - sys.b[i]) * (Au[i] - sys.b[i]);
        res = std::sqrt(res);
        if (prev > 0) REQUIRE(res < 0.5 * prev);
        prev = res;
    }
}
