#include "qfvm/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace qfvm {

namespace {

// Golub-Welsch for the Jacobi weight (1-x)^a (1+x)^b on [-1,1].
Rule1D jacobi_on_minus1_1(int n, double a, double b) {
    if (n < 1) throw std::invalid_argument("quadrature order must be >= 1");
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int k = 0; k < n; ++k) {
        double denom = (2 * k + a + b) * (2 * k + a + b + 2);
        J(k, k) = (k == 0) ? (b - a) / (a + b + 2) : (b * b - a * a) / denom;
        if (k >= 1) {
            double s = 2 * k + a + b;
            double num = 4.0 * k * (k + a) * (k + b) * (k + a + b);
            double den = s * s * (s + 1) * (s - 1);
            double off = std::sqrt(num / den);
            J(k, k - 1) = J(k - 1, k) = off;
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    double mu0 = std::pow(2.0, a + b + 1) * std::tgamma(a + 1) * std::tgamma(b + 1) /
                 std::tgamma(a + b + 2);
    Rule1D r;
    r.x.resize(n);
    r.w.resize(n);
    for (int i = 0; i < n; ++i) {
        r.x[i] = es.eigenvalues()(i);
        double v = es.eigenvectors()(0, i);
        r.w[i] = mu0 * v * v;
    }
    return r;
}

Rule1D to_unit_interval(Rule1D r, int alpha) {
    // Map [-1,1] -> [0,1]; with weight (1-x)^alpha this divides weights by 2^(alpha+1).
    double scale = std::pow(0.5, alpha + 1);
    for (auto& x : r.x) x = 0.5 * (x + 1.0);
    for (auto& w : r.w) w *= scale;
    return r;
}

int points_for_degree(int degree) {
    if (degree < 1 || degree > 20) throw std::invalid_argument("unsupported quadrature degree");
    return degree / 2 + 1;
}

}  // namespace

Rule1D gauss_legendre(int n) { return to_unit_interval(jacobi_on_minus1_1(n, 0, 0), 0); }

Rule1D gauss_jacobi(int n, int alpha) {
    return to_unit_interval(jacobi_on_minus1_1(n, alpha, 0), alpha);
}

TriRule triangle_rule(int degree) {
    int n = points_for_degree(degree);
    Rule1D gu = gauss_jacobi(n, 1);  // weight (1-u): collapsed direction
    Rule1D gt = gauss_legendre(n);
    TriRule rule;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double u = gu.x[i];
            double v = gt.x[j] * (1.0 - u);
            rule.pts.push_back({1.0 - u - v, u, v});
            rule.w.push_back(2.0 * gu.w[i] * gt.w[j]);  // normalize: reference area 1/2
        }
    return rule;
}

TetRule tet_rule(int degree) {
    if (degree == 5) {
        // Symmetric 15-point rule (Keast), exact to degree 5. Much cheaper than
        // the 27-point conical product of the same degree.
        TetRule rule;
        auto add = [&rule](const std::array<double, 4>& p, double w) {
            rule.pts.push_back(p);
            rule.w.push_back(6.0 * w);
        };
        add({0.25, 0.25, 0.25, 0.25}, 0.0302836780970891);
        const double a1 = 1.0 / 3.0, w1 = 0.00602678571428571;
        const double a2 = 1.0 / 11.0, b2 = 8.0 / 11.0, w2 = 0.0116452490860290;
        for (int i = 0; i < 4; ++i) {
            std::array<double, 4> p1{a1, a1, a1, a1}, p2{a2, a2, a2, a2};
            p1[i] = 0.0;
            p2[i] = b2;
            add(p1, w1);
            add(p2, w2);
        }
        const double a3 = 0.0665501535736643, b3 = 0.433449846426336;
        const double w3 = 0.0109491415613865;
        constexpr int pair[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
        for (const auto& pr : pair) {
            std::array<double, 4> p{b3, b3, b3, b3};
            p[pr[0]] = a3;
            p[pr[1]] = a3;
            add(p, w3);
        }
        return rule;
    }
    int n = points_for_degree(degree);
    Rule1D gu = gauss_jacobi(n, 2);
    Rule1D gv = gauss_jacobi(n, 1);
    Rule1D gw = gauss_legendre(n);
    TetRule rule;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                double u = gu.x[i];
                double v = gv.x[j] * (1.0 - u);
                double w = gw.x[k] * (1.0 - u - v);
                rule.pts.push_back({1.0 - u - v - w, u, v, w});
                rule.w.push_back(6.0 * gu.w[i] * gv.w[j] * gw.w[k]);
            }
    return rule;
}

double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c) {
    return 0.5 * (b - a).cross(c - a).norm();
}

double integrate_triangle(const TriRule& rule, const Vec3& a, const Vec3& b, const Vec3& c,
                          const std::function<double(const Vec3&)>& f) {
    double area = triangle_area(a, b, c);
    double s = 0;
    for (size_t q = 0; q < rule.w.size(); ++q) {
        const auto& L = rule.pts[q];
        s += rule.w[q] * f(L[0] * a + L[1] * b + L[2] * c);
    }
    return area * s;
}

double integrate_tet(const TetRule& rule, const std::array<Vec3, 4>& v,
                     const std::function<double(const Vec3&)>& f) {
    double vol = std::abs((v[1] - v[0]).cross(v[2] - v[0]).dot(v[3] - v[0])) / 6.0;
    double s = 0;
    for (size_t q = 0; q < rule.w.size(); ++q) {
        const auto& L = rule.pts[q];
        s += rule.w[q] * f(L[0] * v[0] + L[1] * v[1] + L[2] * v[2] + L[3] * v[3]);
    }
    return vol * s;
}

}  // namespace qfvm
