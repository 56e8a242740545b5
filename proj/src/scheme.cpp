#include "qfvm/scheme.hpp"

#include <cmath>

namespace qfvm {

SchemeParams make_params(double alpha, double beta, double gamma, double lambda) {
    if (!(alpha > 0 && alpha < 0.5)) throw std::domain_error("alpha must be in (0, 1/2)");
    if (!(beta > 0 && beta < 2.0 / 3.0)) throw std::domain_error("beta must be in (0, 2/3)");
    if (!(gamma > 0 && gamma < 0.75)) throw std::domain_error("gamma must be in (0, 3/4)");
    if (lambda == 0.0) throw std::domain_error("lambda must be nonzero");
    return SchemeParams{alpha, beta, gamma, lambda};
}

std::array<double, 4> t_integrals(double alpha, double beta) {
    if (!(alpha > 0 && alpha < 0.5 && beta > 0 && beta < 2.0 / 3.0))
        throw std::domain_error("t_integrals: parameters out of range");
    const double ab = alpha * beta;
    return {
        ab / 2.0 * (1.0 - (alpha + beta) / 3.0),
        ab * (alpha + beta) / 12.0,
        2.0 / 27.0 - ab / 4.0 * (1.0 - beta / 6.0),
        1.0 / 54.0 - alpha * beta * beta / 12.0,
    };
}

SchemeConstants scheme_constants(const SchemeParams& p) {
    auto t = t_integrals(p.alpha, p.beta);
    SchemeConstants c;
    c.t1 = t[0];
    c.t2 = t[1];
    c.t3 = t[2];
    c.t4 = t[3];
    c.s0 = 1.0 / 240.0 + (4.0 * p.alpha * p.beta * p.gamma - 1.0) * p.lambda / 144.0;
    c.s1 = c.t1 + 2.0 * c.t2 + 2.0 * c.t3 + c.t4;
    c.s2 = c.t3 * p.lambda;
    c.s3 = c.t4 * p.lambda;
    c.s_star = -c.t1 + 2.0 * c.t2 + c.t4;
    return c;
}

std::array<double, 2> orthogonality_residuals(double alpha, double beta, double gamma) {
    double surf = alpha * beta * (-0.5 + alpha / 3.0 + beta / 4.0) + 1.0 / 54.0;
    double vol = alpha * beta * gamma * (-1.0 + alpha / 2.0 + 3.0 * beta / 8.0 + gamma / 3.0) +
                 1.0 / 480.0;
    return {surf, vol};
}

std::array<double, 2> solve_orthogonal(double alpha) {
    const double lo = 0.5 - std::sqrt(6.0) / 6.0;
    if (!(alpha > lo && alpha < 0.5))
        throw std::domain_error("solve_orthogonal: alpha outside (1/2 - sqrt(6)/6, 1/2)");
    const double m = 1.0 - 2.0 * alpha / 3.0;
    const double beta = m - std::sqrt(m * m - 2.0 / (27.0 * alpha));
    const double q = 3.0 / 8.0 + 1.0 / (24.0 * alpha * beta);
    const double gamma = q - std::sqrt(q * q - 1.0 / (160.0 * alpha * beta));
    return {beta, gamma};
}

std::array<double, 2> lambda_range(double alpha, double beta) {
    auto t = t_integrals(alpha, beta);
    const double t3 = t[2], t4 = t[3];
    const double den = 6.0 * (2.0 * t3 + t4) * (2.0 * t3 + t4);
    const double mid = 2.0 * t3 + 5.0 * t4;
    const double rad = 2.0 * std::sqrt(2.0 * t4 * (2.0 * t3 + 3.0 * t4));
    return {(mid - rad) / den, (mid + rad) / den};
}

Mat10 mapping_matrix_S(double lambda) {
    if (lambda == 0.0) throw std::domain_error("mapping_matrix_S: lambda must be nonzero");
    Mat10 S = Mat10::Zero();
    const double c = (1.0 - lambda) / 2.0;
    for (int i = 0; i < 4; ++i) S(i, i) = 1.0;
    for (int i = 4; i < 10; ++i) S(i, i) = lambda;
    // Vertex row i gets c in the columns of the three midpoints on edges at i.
    // Local midpoint order: P5=M23, P6=M13, P7=M12, P8=M14, P9=M24, P10=M34.
    static constexpr int mid_edge[6][2] = {{1, 2}, {0, 2}, {0, 1}, {0, 3}, {1, 3}, {2, 3}};
    for (int m = 0; m < 6; ++m) {
        S(mid_edge[m][0], 4 + m) = c;
        S(mid_edge[m][1], 4 + m) = c;
    }
    return S;
}

SchemeParams preset_scheme(const std::string& name) {
    double alpha;
    if (name == "qfvs1")
        alpha = 0.1;
    else if (name == "qfvs2" || name == "qfvs4")
        alpha = 0.5 - std::sqrt(3.0) / 6.0;
    else if (name == "qfvs3")
        alpha = 0.4;
    else
        throw std::invalid_argument("unknown scheme preset: " + name);
    auto bg = solve_orthogonal(alpha);
    double gamma = (name == "qfvs4") ? 0.25 : bg[1];
    return make_params(alpha, bg[0], gamma, default_lambda(alpha, bg[0]));
}

}  // namespace qfvm
