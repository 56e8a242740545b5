#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "qfvm/quadrature.hpp"

using namespace qfvm;
using namespace qfvm::testing;
using Catch::Approx;

namespace {

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

// Exact simplex moments: integral over a triangle of L1^a L2^b L3^c equals
// 2|T| a! b! c! / (a+b+c+2)!, and the tet analogue has (a+b+c+d+3)!.
double tri_moment(int a, int b, int c) {
    return 2.0 * factorial(a) * factorial(b) * factorial(c) / factorial(a + b + c + 2);
}
double tet_moment(int a, int b, int c, int d) {
    return 6.0 * factorial(a) * factorial(b) * factorial(c) * factorial(d) /
           factorial(a + b + c + d + 3);
}

}  // namespace

TEST_CASE("gauss rules on the unit interval") {
    for (int n = 1; n <= 6; ++n) {
        Rule1D r = gauss_legendre(n);
        for (int k = 0; k <= 2 * n - 1; ++k) {
            double s = 0;
            for (size_t i = 0; i < r.x.size(); ++i) s += r.w[i] * std::pow(r.x[i], k);
            REQUIRE(s == Approx(1.0 / (k + 1)).epsilon(1e-13));
        }
    }
}

TEST_CASE("triangle rule moment exactness") {
    for (int degree = 1; degree <= 7; ++degree) {
        TriRule rule = triangle_rule(degree);
        double wsum = 0;
        for (double w : rule.w) wsum += w;
        REQUIRE(wsum == Approx(1.0).epsilon(1e-13));
        for (int a = 0; a <= degree; ++a)
            for (int b = 0; a + b <= degree; ++b) {
                int c = degree - a - b;
                double s = 0;
                for (size_t q = 0; q < rule.pts.size(); ++q) {
                    const auto& L = rule.pts[q];
                    s += rule.w[q] * std::pow(L[0], a) * std::pow(L[1], b) * std::pow(L[2], c);
                }
                // Weights are normalized to the unit-area triangle.
                REQUIRE(s == Approx(tri_moment(a, b, c)).epsilon(1e-12).margin(1e-14));
            }
    }
}

TEST_CASE("tet rule moment exactness") {
    for (int degree = 1; degree <= 8; ++degree) {
        TetRule rule = tet_rule(degree);
        double wsum = 0;
        for (double w : rule.w) wsum += w;
        REQUIRE(wsum == Approx(1.0).epsilon(1e-13));
        for (int a = 0; a <= degree; ++a)
            for (int b = 0; a + b <= degree; ++b)
                for (int c = 0; a + b + c <= degree; ++c) {
                    int d = degree - a - b - c;
                    double s = 0;
                    for (size_t q = 0; q < rule.pts.size(); ++q) {
                        const auto& L = rule.pts[q];
                        s += rule.w[q] * std::pow(L[0], a) * std::pow(L[1], b) *
                             std::pow(L[2], c) * std::pow(L[3], d);
                    }
                    REQUIRE(s == Approx(tet_moment(a, b, c, d)).epsilon(1e-12).margin(1e-14));
                }
    }
}

TEST_CASE("degree-5 tet rule is the 15-point one") {
    CHECK(tet_rule(5).pts.size() == 15);
}

TEST_CASE("physical-space integrators") {
    Vec3 a(0, 0, 0), b(2, 0, 0), c(0, 3, 0);
    CHECK(triangle_area(a, b, c) == Approx(3.0));
    double s = integrate_triangle(triangle_rule(2), a, b, c,
                                  [](const Vec3& x) { return x[0] + 2.0 * x[1]; });
    // Integral of x over this triangle is 2, of y is 3.
    CHECK(s == Approx(2.0 + 2.0 * 3.0).epsilon(1e-13));

    std::array<Vec3, 4> v{Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 1)};
    double t = integrate_tet(tet_rule(3), v, [](const Vec3& x) { return x[0] * x[0]; });
    CHECK(t == Approx(1.0 / 60.0).epsilon(1e-13));
}
