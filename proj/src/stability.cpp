#include "qfvm/stability.hpp"

#include <atomic>
#include <cmath>
#include <thread>

namespace qfvm {

namespace {

constexpr double kPi = 3.14159265358979323846;

StabilityKit build_kit() {
    StabilityKit kit;
    // clang-format off
    const int g[9][10] = {
        {-1, 0, 0, -3, 0, 0, 0,  4,  0,  0},
        { 0,-1, 0, -3, 0, 0, 0,  0,  4,  0},
        { 0, 0,-1, -3, 0, 0, 0,  0,  0,  4},
        { 2, 0, 0,  2, 0, 0, 0, -4,  0,  0},
        { 0, 2, 0,  2, 0, 0, 0,  0, -4,  0},
        { 0, 0, 2,  2, 0, 0, 0,  0,  0, -4},
        { 0, 0, 0,  4, 4, 0, 0,  0, -4, -4},
        { 0, 0, 0,  4, 0, 4, 0, -4,  0, -4},
        { 0, 0, 0,  4, 0, 0, 4, -4, -4,  0},
    };
    const int t[10][9] = {
        { 30,-10,-10, 33, -7, -7, -1, -1, -1},
        {-10, 30,-10, -7, 33, -7, -1, -1, -1},
        {-10,-10, 30, -7, -7, 33, -1, -1, -1},
        {-10,-10,-10, -7, -7, -7, -1, -1, -1},
        {-10, 10, 10, -7,  3,  3,  9, -1, -1},
        { 10,-10, 10,  3, -7,  3, -1,  9, -1},
        { 10, 10,-10,  3,  3, -7, -1, -1,  9},
        { 10,-10,-10,  3, -7, -7, -1, -1, -1},
        {-10, 10,-10, -7,  3, -7, -1, -1, -1},
        {-10,-10, 10, -7, -7,  3, -1, -1, -1},
    };
    const int w[9][9] = {
        {20,  0,  0, 10,  0,  0,  0,  5,  5},
        { 0, 20,  0,  0, 10,  0,  5,  0,  5},
        { 0,  0, 20,  0,  0, 10,  5,  5,  0},
        {10,  0,  0,  8,  0,  0,  0,  2,  2},
        { 0, 10,  0,  0,  8,  0,  2,  0,  2},
        { 0,  0, 10,  0,  0,  8,  2,  2,  0},
        { 0,  5,  5,  0,  2,  2,  4,  1,  1},
        { 5,  0,  5,  2,  0,  2,  1,  4,  1},
        { 5,  5,  0,  2,  2,  0,  1,  1,  4},
    };
    // clang-format on
    for (int i = 0; i < 9; ++i)
        for (int j = 0; j < 10; ++j) kit.G(i, j) = g[i][j];
    for (int i = 0; i < 10; ++i)
        for (int j = 0; j < 9; ++j) kit.T(i, j) = t[i][j] / 40.0;
    for (int i = 0; i < 9; ++i)
        for (int j = 0; j < 9; ++j) kit.W(i, j) = w[i][j] / 120.0;
    return kit;
}

Mat9 reduced_congruence(const TetGeometry& g, const SchemeParams& p, const Mat9& C2) {
    const StabilityKit& kit = stability_kit();
    Mat10 A1 = element_matrix_closed_form(g, p);
    Mat10 Al = mapping_matrix_S(p.lambda) * A1;
    Mat9 B = kit.T.transpose() * Al * kit.T;
    Mat9 Bbar = 0.5 * (B + B.transpose());
    return C2 * Bbar * C2.transpose();
}

Mat6 n_from_r_impl(const std::array<double, 6>& r, const SchemeParams& p,
                   const SchemeConstants& c, const Mat10& S, const Mat9& C2,
                   const StabilityKit& kit) {
    Mat10 A1 = element_matrix_A(r, c) - vector_v1(p) * vector_v2(r).transpose();
    Mat10 Al = S * A1;
    Mat9 B = kit.T.transpose() * Al * kit.T;
    Mat9 Bbar = 0.5 * (B + B.transpose());
    Mat9 cong = C2 * Bbar * C2.transpose();
    return cong.block<6, 6>(3, 3);
}

}  // namespace

const StabilityKit& stability_kit() {
    static const StabilityKit kit = build_kit();
    return kit;
}

double discrete_norm(const TetGeometry& g, const Vec10& u) {
    return g.h * (stability_kit().G * u).squaredNorm();
}

Mat9 matrix_C1() {
    Mat9 c = Mat9::Zero();
    c.block<3, 3>(0, 0).setIdentity();
    const int lower[6][6] = {
        {1, 0, 0, 0, 0, 0},  {-1, 1, 0, 0, 0, 0}, {0, -1, 1, 0, 0, 0},
        {0, 0, 1, 1, 0, 0},  {0, -2, 2, -1, 1, 0}, {0, 2, 0, 0, -1, 1},
    };
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) c(3 + i, 3 + j) = lower[i][j];
    return c;
}

Mat9 matrix_C2(const SchemeConstants& c) {
    const double eta1 = (2.0 * c.s2 + c.s3) / (4.0 * c.s1) - 0.75;
    const double eta2 = -(2.0 * c.s2 + c.s3) / (8.0 * c.s1) - 0.125;
    Mat9 m = Mat9::Identity();
    m.block<3, 3>(3, 0) = eta1 * Eigen::Matrix3d::Identity();
    Eigen::Matrix3d ones_off = Eigen::Matrix3d::Ones() - Eigen::Matrix3d::Identity();
    m.block<3, 3>(6, 0) = eta2 * ones_off;
    return m;
}

ElementStability element_stability(const TetGeometry& g, const SchemeParams& p) {
    ElementStability es;
    const StabilityKit& kit = stability_kit();
    SchemeConstants c = scheme_constants(p);
    es.A = element_matrix_A(g.r, c);
    es.A1 = es.A - vector_v1(p) * vector_v2(g.r).transpose();
    es.A_lambda = mapping_matrix_S(p.lambda) * es.A1;
    es.B = kit.T.transpose() * es.A_lambda * kit.T;
    es.B_bar = 0.5 * (es.B + es.B.transpose());
    es.M << g.R[0], -g.r[5], -g.r[4],  //
        -g.r[5], g.R[1], -g.r[2],      //
        -g.r[4], -g.r[2], g.R[2];
    Mat9 cong = matrix_C2(c) * es.B_bar * matrix_C2(c).transpose() / g.h;
    es.N = g.h * cong.block<6, 6>(3, 3);
    es.block_coupling = cong.block<3, 6>(0, 3).cwiseAbs().maxCoeff();
    Eigen::SelfAdjointEigenSolver<Mat9> eig(es.B_bar / g.h);
    es.min_eig_Bbar = eig.eigenvalues().minCoeff();
    es.stable = es.min_eig_Bbar > 0.0;
    return es;
}

std::array<double, 9> reduced_minors(const TetGeometry& g, const SchemeParams& p) {
    Mat9 C1 = matrix_C1();
    const StabilityKit& kit = stability_kit();
    Mat10 A1 = element_matrix_closed_form(g, p);
    Mat10 Al = mapping_matrix_S(p.lambda) * A1;
    Mat9 B = kit.T.transpose() * Al * kit.T;
    Mat9 Bbar = 0.5 * (B + B.transpose()) / g.h;
    Mat9 D = C1.transpose() * Bbar * C1;
    std::array<double, 9> minors;
    for (int k = 1; k <= 9; ++k) minors[k - 1] = D.topLeftCorner(k, k).determinant();
    return minors;
}

Mat6 n_tilde(const std::array<double, 6>& r_ratio, const SchemeParams& p) {
    SchemeConstants c = scheme_constants(p);
    if (std::abs(c.s_star) > 1e-10)
        throw std::domain_error("reduction to the 6x6 block requires the surface condition");
    return n_from_r_impl(r_ratio, p, c, mapping_matrix_S(p.lambda), matrix_C2(c),
                         stability_kit());
}

Mat6 n_tilde(const Theta5& t5, const SchemeParams& p) {
    return n_tilde(r_over_circumradius(t5), p);
}

NTildeEvaluator::NTildeEvaluator(const SchemeParams& p) {
    SchemeConstants c = scheme_constants(p);
    if (std::abs(c.s_star) > 1e-10)
        throw std::domain_error("reduction to the 6x6 block requires the surface condition");
    Mat10 S = mapping_matrix_S(p.lambda);
    Mat9 C2 = matrix_C2(c);
    const StabilityKit& kit = stability_kit();
    for (int k = 0; k < 6; ++k) {
        std::array<double, 6> e{};
        e[k] = 1.0;
        basis_[k] = n_from_r_impl(e, p, c, S, C2, kit);
    }
}

Mat6 NTildeEvaluator::from_r(const std::array<double, 6>& r) const {
    Mat6 n = r[0] * basis_[0];
    for (int k = 1; k < 6; ++k) n += r[k] * basis_[k];
    return n;
}

double NTildeEvaluator::det_from_r(const std::array<double, 6>& r) const {
    return from_r(r).determinant();
}

bool q_v_membership(const Theta5& t5, double v_rad) {
    for (double a : t5.a)
        if (!(a >= v_rad)) return false;
    if (!(t5.a[0] + t5.a[2] < kPi)) return false;
    if (!(t5.a[1] + t5.a[3] < kPi)) return false;
    if (!(t5.a[2] + t5.a[3] + t5.a[4] < 2.0 * kPi)) return false;
    AngleSet as;
    if (!try_reconstruct(t5, as)) return false;
    // Reconstructed V-angles carry roundoff; keep points on the boundary
    // theta_{P_i} = v (they are the binding cases of the sweep).
    for (int i = 0; i < 4; ++i)
        if (v_angle_of(as.plane[i]) < v_rad - 1e-12) return false;
    return true;
}

namespace {

// True when det N > 0 at every grid point of P_v^(n) that lies in Q_v.
bool sweep_ok(const NTildeEvaluator& ev, double v_deg, const std::vector<int>& primes,
              int threads) {
    if (threads <= 0) threads = std::max(1u, std::thread::hardware_concurrency());
    const double v = v_deg * kPi / 180.0;
    for (int N : primes) {
        const double step = (kPi - 3.0 * v) / N;
        const int n1 = N + 1;
        const long total_outer = long(n1) * n1;
        std::atomic<long> next{0};
        std::atomic<bool> failed{false};
        auto worker = [&]() {
            std::array<double, 5> th;
            std::array<double, 6> r;
            AngleSet as;
            for (;;) {
                long outer = next.fetch_add(1);
                if (outer >= total_outer || failed.load(std::memory_order_relaxed)) return;
                th[0] = v + step * double(outer / n1);
                th[1] = v + step * double(outer % n1);
                for (int i2 = 0; i2 <= N; ++i2) {
                    th[2] = v + step * i2;
                    if (th[0] + th[2] >= kPi) break;
                    for (int i3 = 0; i3 <= N; ++i3) {
                        th[3] = v + step * i3;
                        if (th[1] + th[3] >= kPi) break;
                        for (int i4 = 0; i4 <= N; ++i4) {
                            th[4] = v + step * i4;
                            if (th[2] + th[3] + th[4] >= 2.0 * kPi) break;
                            Theta5 t5{th};
                            if (!try_reconstruct(t5, as)) continue;
                            bool big_enough = true;
                            for (int i = 0; i < 4; ++i)
                                if (v_angle_of(as.plane[i]) < v - 1e-12) {
                                    big_enough = false;
                                    break;
                                }
                            if (!big_enough) continue;
                            if (!try_r_over_circumradius(as, r)) continue;
                            if (!(ev.det_from_r(r) > 0)) {
                                failed.store(true, std::memory_order_relaxed);
                                return;
                            }
                        }
                    }
                    if (failed.load(std::memory_order_relaxed)) return;
                }
            }
        };
        std::vector<std::thread> pool;
        int nthreads = int(std::min<long>(threads, total_outer));
        pool.reserve(nthreads);
        for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
        if (failed.load()) return false;
    }
    return true;
}

}  // namespace

double vstar_search(const SchemeParams& p, const VstarOptions& opts) {
    auto range = lambda_range(p.alpha, p.beta);
    if (!(p.lambda > range[0] && p.lambda < range[1]))
        throw std::domain_error("lambda outside the admissible interval");
    if (!(opts.precision_deg > 0)) throw std::domain_error("precision must be positive");
    NTildeEvaluator ev(p);
    double lo = 0.0, hi = 60.0;
    while (hi - lo > opts.precision_deg) {
        double mid = 0.5 * (lo + hi);
        if (sweep_ok(ev, mid, opts.primes, opts.threads))
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

}  // namespace qfvm
