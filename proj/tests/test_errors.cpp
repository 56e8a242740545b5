#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <sstream>

#include "helpers.hpp"
#include "qfvm/errors.hpp"

using namespace qfvm;
using qfvm::testing::kDeg;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Central-difference divergence of kappa * grad u.
double fd_neg_div_flux(const ManufacturedCase& mc, const Vec3& x, double eps) {
    double acc = 0.0;
    for (int d = 0; d < 3; ++d) {
        Vec3 xp = x, xm = x;
        xp[d] += eps;
        xm[d] -= eps;
        acc += mc.kappa(xp) * mc.grad_u(xp)[d] - mc.kappa(xm) * mc.grad_u(xm)[d];
    }
    return -acc / (2.0 * eps);
}

std::vector<double> interpolate(const Mesh& mesh, const ManufacturedCase& mc) {
    std::vector<double> uh(mesh.n_nodes());
    for (int i = 0; i < mesh.n_nodes(); ++i) uh[i] = mc.u(mesh.node_position(i));
    return uh;
}

}  // namespace

TEST_CASE("manufactured cases are self-consistent") {
    std::mt19937_64 rng(411);
    std::uniform_real_distribution<double> U(0.15, 0.85);
    for (const char* name : {"paper-sine", "poisson-sine"}) {
        ManufacturedCase mc = manufactured_case(name);
        for (int trial = 0; trial < 25; ++trial) {
            Vec3 x(U(rng), U(rng), U(rng));
            // grad_u matches a finite difference of u
            for (int d = 0; d < 3; ++d) {
                Vec3 xp = x, xm = x;
                xp[d] += 1e-6;
                xm[d] -= 1e-6;
                CHECK(mc.grad_u(x)[d] == Catch::Approx((mc.u(xp) - mc.u(xm)) / 2e-6).margin(1e-6));
            }
            // f = -div(kappa grad u)
            CHECK(mc.f(x) == Catch::Approx(fd_neg_div_flux(mc, x, 1e-5)).epsilon(1e-6).margin(1e-6));
        }
    }

    // homogeneous Dirichlet data on the cube faces
    ManufacturedCase mc = manufactured_case("paper-sine");
    CHECK(mc.u(Vec3(0.0, 0.3, 0.7)) == Catch::Approx(0.0).margin(1e-15));
    CHECK(mc.u(Vec3(0.4, 1.0, 0.2)) == Catch::Approx(0.0).margin(1e-15));
    CHECK(mc.u(Vec3(0.9, 0.1, 0.0)) == Catch::Approx(0.0).margin(1e-15));

    CHECK(manufactured_case("poisson-sine").kappa_is_constant);
    CHECK_FALSE(mc.kappa_is_constant);
    CHECK_THROWS_AS(manufactured_case("nope"), std::invalid_argument);
}

TEST_CASE("error norms of the zero vector are the norms of u") {
    Mesh mesh = generate_structured(4);
    ManufacturedCase mc = manufactured_case("poisson-sine");
    std::vector<double> zero(mesh.n_nodes(), 0.0);
    auto norms = error_norms(mesh, zero, mc);
    // ||u||_L2 = (1/2)^{3/2}, |u|_H1 = pi sqrt(3/8) for the triple sine on the cube
    CHECK(norms[1] == Catch::Approx(std::sqrt(1.0 / 8.0)).epsilon(1e-4));
    CHECK(norms[0] == Catch::Approx(kPi * std::sqrt(3.0 / 8.0)).epsilon(1e-4));

    std::vector<double> wrong(mesh.n_nodes() + 1, 0.0);
    CHECK_THROWS_AS(error_norms(mesh, wrong, mc), std::invalid_argument);
}

TEST_CASE("interpolant error decreases at the expected rates") {
    ManufacturedCase mc = manufactured_case("paper-sine");
    Mesh coarse = generate_structured(2);
    Mesh fine = generate_structured(4);
    auto ec = error_norms(coarse, interpolate(coarse, mc), mc);
    auto ef = error_norms(fine, interpolate(fine, mc), mc);
    // quadratic interpolation: H1 order 2, L2 order 3
    CHECK(ef[0] < 0.35 * ec[0]);
    CHECK(ef[1] < 0.20 * ec[1]);
}

TEST_CASE("convergence run on a small level pair") {
    ManufacturedCase mc = manufactured_case("poisson-sine");
    SchemeParams p = preset_scheme("qfvs1");
    ConvergenceReport rep = run_convergence(p, mc, {3, 6});
    REQUIRE(rep.rows.size() == 2);
    CHECK(rep.rows[0].n == 3);
    CHECK(rep.rows[1].n == 6);
    CHECK(rep.rows[0].h == Catch::Approx(std::sqrt(3.0) / 3.0));
    CHECK(rep.rows[1].h == Catch::Approx(std::sqrt(3.0) / 6.0));
    CHECK(rep.rows[0].h1_order == 0.0);
    CHECK(rep.rows[1].h1_order > 1.6);
    CHECK(rep.rows[1].l2_order > 2.5);
    CHECK(rep.rows[1].iterations > 0);
    CHECK(rep.rows[1].h1 < rep.rows[0].h1);
    CHECK(rep.rows[1].l2 < rep.rows[0].l2);
}

TEST_CASE("csv formatting") {
    ConvergenceReport rep;
    ConvergenceRow r;
    r.n = 5;
    r.h = std::sqrt(3.0) / 5.0;
    r.h1 = 1.1623e-1;
    r.l2 = 2.7862e-3;
    rep.rows.push_back(r);
    r.n = 15;
    r.h1 = 1.3124e-2;
    r.h1_order = 1.9853;
    r.l2 = 9.7085e-5;
    r.l2_order = 3.0555;
    rep.rows.push_back(r);

    std::string csv = convergence_csv(rep);
    CHECK(csv.find("n,h,h1,h1_order,l2,l2_order") == 0);
    CHECK(csv.find('\r') == std::string::npos);
    CHECK(csv.find("e-01") != std::string::npos);
    int newlines = 0;
    for (char c : csv) newlines += (c == '\n');
    CHECK(newlines == 3);
    // first-row orders are empty fields, not zeros
    std::istringstream in(csv);
    std::string header, row1;
    std::getline(in, header);
    std::getline(in, row1);
    CHECK(row1.find(",,") != std::string::npos);
}
