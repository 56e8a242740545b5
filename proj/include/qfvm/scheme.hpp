#pragma once

#include <Eigen/Dense>
#include <array>
#include <stdexcept>
#include <string>

namespace qfvm {

using Mat10 = Eigen::Matrix<double, 10, 10>;

struct SchemeParams {
    double alpha, beta, gamma, lambda;
};

struct SchemeConstants {
    double t1, t2, t3, t4;
    double s0, s1, s2, s3, s_star;
};

// Dual-point placement ranges: alpha in (0,1/2), beta in (0,2/3), gamma in (0,3/4),
// lambda != 0. Throws std::domain_error otherwise.
SchemeParams make_params(double alpha, double beta, double gamma, double lambda);

std::array<double, 4> t_integrals(double alpha, double beta);
SchemeConstants scheme_constants(const SchemeParams& p);

// (surface residual, volume residual); both zero iff fully orthogonal.
std::array<double, 2> orthogonality_residuals(double alpha, double beta, double gamma);

// Unique (beta, gamma) with both residuals zero; alpha in (1/2 - sqrt(6)/6, 1/2).
std::array<double, 2> solve_orthogonal(double alpha);

// Admissible lambda interval (lo, hi) for positive definiteness on a regular tet.
std::array<double, 2> lambda_range(double alpha, double beta);

inline double default_lambda(double alpha, double beta) { return 1.0 / (1.0 - 3.0 * alpha * beta); }

Mat10 mapping_matrix_S(double lambda);

// Presets: qfvs1..qfvs3 satisfy both orthogonal conditions; qfvs4 surface only.
SchemeParams preset_scheme(const std::string& name);

}  // namespace qfvm
