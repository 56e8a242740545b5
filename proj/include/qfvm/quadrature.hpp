#pragma once

#include <array>
#include <functional>
#include <vector>

#include "qfvm/geometry.hpp"

namespace qfvm {

struct Rule1D {
    std::vector<double> x, w;
};

// Gauss-Legendre on [0,1], weight 1.
Rule1D gauss_legendre(int n);
// Gauss-Jacobi on [0,1], weight (1-x)^alpha.
Rule1D gauss_jacobi(int n, int alpha);

// Barycentric rules on the reference simplices; weights sum to 1, so the
// integral over a physical simplex is measure * sum(w_q * f(x_q)).
struct TriRule {
    std::vector<std::array<double, 3>> pts;
    std::vector<double> w;
};
struct TetRule {
    std::vector<std::array<double, 4>> pts;
    std::vector<double> w;
};

TriRule triangle_rule(int degree);
TetRule tet_rule(int degree);

double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c);

double integrate_triangle(const TriRule& rule, const Vec3& a, const Vec3& b, const Vec3& c,
                          const std::function<double(const Vec3&)>& f);

double integrate_tet(const TetRule& rule, const std::array<Vec3, 4>& v,
                     const std::function<double(const Vec3&)>& f);

}  // namespace qfvm
