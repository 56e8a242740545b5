#pragma once

#include "qfvm/assembly.hpp"

namespace qfvm {

using Mat9 = Eigen::Matrix<double, 9, 9>;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using Vec9 = Eigen::Matrix<double, 9, 1>;

// Difference stencil G (9x10), its Moore-Penrose companions T (10x9) and the
// Gram matrix W (9x9) of the difference basis. Exact rational entries.
struct StabilityKit {
    Eigen::Matrix<double, 9, 10> G;
    Eigen::Matrix<double, 10, 9> T;
    Mat9 W;
};
const StabilityKit& stability_kit();

// h_K * |G u|^2: the element seminorm driving the coercivity analysis.
double discrete_norm(const TetGeometry& g, const Vec10& u);

struct ElementStability {
    Mat10 A;         // surface flux matrix
    Mat10 A1;        // A - v1 v2^T
    Mat10 A_lambda;  // S * A1
    Mat9 B;          // T^T A_lambda T
    Mat9 B_bar;      // symmetric part of B
    Eigen::Matrix3d M;
    Mat6 N;               // lower-right block after the C2 congruence
    double min_eig_Bbar;  // of (1/h) B_bar
    double block_coupling;  // max |entry| of the off-diagonal blocks after C2
    bool stable;
};

ElementStability element_stability(const TetGeometry& g, const SchemeParams& p);

// Congruence transforms used by the positive-definiteness reduction.
Mat9 matrix_C1();
Mat9 matrix_C2(const SchemeConstants& c);

// Leading principal minors 1..9 of C1 (1/h) B_bar C1^T.
std::array<double, 9> reduced_minors(const TetGeometry& g, const SchemeParams& p);

// N assembled from scale-free edge ratios; requires the surface orthogonality
// constant s* to vanish so that the reduction to N is exact.
Mat6 n_tilde(const std::array<double, 6>& r_ratio, const SchemeParams& p);
Mat6 n_tilde(const Theta5& t5, const SchemeParams& p);

// Fast sweep evaluator: N is linear in the six edge weights, so it is a sum
// of six precomputed basis matrices.
class NTildeEvaluator {
  public:
    explicit NTildeEvaluator(const SchemeParams& p);
    Mat6 from_r(const std::array<double, 6>& r) const;
    double det_from_r(const std::array<double, 6>& r) const;

  private:
    std::array<Mat6, 6> basis_;
};

// Membership in the constraint set Q_v: positive coordinates, the three
// planarity sums strict, feasible reconstruction, all four V-angles >= v.
bool q_v_membership(const Theta5& t5, double v_rad);

struct VstarOptions {
    std::vector<int> primes = {3, 5, 7, 11, 13, 17};
    double precision_deg = 0.1;
    int threads = 0;  // 0 = hardware concurrency
};

// Bisection + prime-grid sweep for the minimal admissible V-angle (degrees).
double vstar_search(const SchemeParams& p, const VstarOptions& opts = {});

}  // namespace qfvm
