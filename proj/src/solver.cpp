#include "qfvm/solver.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <numeric>

namespace qfvm {

std::vector<double> SparseMatrix::multiply(const std::vector<double>& x) const {
    std::vector<double> y(n, 0.0);
    for (int i = 0; i < n; ++i) {
        double s = 0;
        for (int k = row_offsets[i]; k < row_offsets[i + 1]; ++k) s += vals[k] * x[cols[k]];
        y[i] = s;
    }
    return y;
}

SparseMatrix csr_from_triplets(int n, const std::vector<int>& rows, const std::vector<int>& cols,
                               const std::vector<double>& vals) {
    std::vector<size_t> order(rows.size());
    std::iota(order.begin(), order.end(), size_t(0));
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        return rows[a] != rows[b] ? rows[a] < rows[b] : cols[a] < cols[b];
    });
    SparseMatrix A;
    A.n = n;
    A.row_offsets.assign(n + 1, 0);
    int last_row = -1, last_col = -1;
    for (size_t idx : order) {
        const int i = rows[idx], j = cols[idx];
        if (i == last_row && j == last_col) {
            A.vals.back() += vals[idx];
        } else {
            A.cols.push_back(j);
            A.vals.push_back(vals[idx]);
            A.row_offsets[i + 1] += 1;
            last_row = i;
            last_col = j;
        }
    }
    for (int i = 0; i < n; ++i) A.row_offsets[i + 1] += A.row_offsets[i];
    return A;
}

namespace {

double norm2(const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double recomputed_residual(const SparseMatrix& A, const std::vector<double>& b,
                           const std::vector<double>& x) {
    auto Ax = A.multiply(x);
    double num = 0;
    for (size_t i = 0; i < b.size(); ++i) {
        double d = b[i] - Ax[i];
        num += d * d;
    }
    double nb = norm2(b);
    return nb > 0 ? std::sqrt(num) / nb : std::sqrt(num);
}

std::vector<double> bicgstab(const SparseMatrix& A, const std::vector<double>& b, double rtol,
                             int& iterations) {
    const int n = A.n;
    std::vector<double> diag(n, 1.0);
    for (int i = 0; i < n; ++i)
        for (int k = A.row_offsets[i]; k < A.row_offsets[i + 1]; ++k)
            if (A.cols[k] == i && A.vals[k] != 0.0) diag[i] = A.vals[k];
    auto precond = [&](std::vector<double> v) {
        for (int i = 0; i < n; ++i) v[i] /= diag[i];
        return v;
    };

    std::vector<double> x(n, 0.0);
    std::vector<double> r = b;
    double bnorm = norm2(b);
    if (bnorm == 0) {
        iterations = 0;
        return x;
    }
    const int max_iters = 10 * n;
    bool restarted = false;
    std::vector<double> r0 = r, p = r;
    double rho = dot(r0, r);
    iterations = 0;
    while (iterations < max_iters) {
        if (norm2(r) / bnorm <= rtol) return x;
        ++iterations;
        auto ph = precond(p);
        auto v = A.multiply(ph);
        double alpha = rho / dot(r0, v);
        std::vector<double> s(n);
        for (int i = 0; i < n; ++i) s[i] = r[i] - alpha * v[i];
        if (norm2(s) / bnorm <= rtol) {
            for (int i = 0; i < n; ++i) x[i] += alpha * ph[i];
            return x;
        }
        auto sh = precond(s);
        auto t = A.multiply(sh);
        double tt = dot(t, t);
        double omega = tt > 0 ? dot(t, s) / tt : 0.0;
        for (int i = 0; i < n; ++i) {
            x[i] += alpha * ph[i] + omega * sh[i];
            r[i] = s[i] - omega * t[i];
        }
        double rho_next = dot(r0, r);
        if (std::abs(rho_next) < 1e-300 || omega == 0.0) {
            if (restarted)
                throw solver_error("bicgstab breakdown", x, recomputed_residual(A, b, x));
            restarted = true;  // one restart with a fresh shadow residual
            r0 = r;
            p = r;
            rho = dot(r0, r);
            continue;
        }
        double beta = (rho_next / rho) * (alpha / omega);
        for (int i = 0; i < n; ++i) p[i] = r[i] + beta * (p[i] - omega * v[i]);
        rho = rho_next;
    }
    throw solver_error("bicgstab did not converge within 10n iterations", x,
                       recomputed_residual(A, b, x));
}

}  // namespace

std::vector<double> solve(const SparseMatrix& A, const std::vector<double>& b, SolveMethod method,
                          double rtol, SolveReport& report) {
    if (A.n != int(b.size())) throw std::invalid_argument("dimension mismatch");
    if (!(rtol > 0 && rtol < 1)) throw std::invalid_argument("rtol must be in (0,1)");
    auto t0 = std::chrono::steady_clock::now();
    std::vector<double> x;
    if (method == SolveMethod::lu) {
        if (A.n > 5000) throw std::invalid_argument("dense LU fallback limited to n <= 5000");
        Eigen::MatrixXd D = Eigen::MatrixXd::Zero(A.n, A.n);
        for (int i = 0; i < A.n; ++i)
            for (int k = A.row_offsets[i]; k < A.row_offsets[i + 1]; ++k)
                D(i, A.cols[k]) = A.vals[k];
        Eigen::VectorXd rhs = Eigen::Map<const Eigen::VectorXd>(b.data(), A.n);
        Eigen::VectorXd sol = D.partialPivLu().solve(rhs);
        x.assign(sol.data(), sol.data() + A.n);
        report.iterations = 1;
        report.method = "lu";
    } else {
        x = bicgstab(A, b, rtol, report.iterations);
        report.method = "bicgstab";
    }
    report.relative_residual = recomputed_residual(A, b, x);
    report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (method == SolveMethod::bicgstab && report.relative_residual > rtol)
        throw solver_error("recomputed residual exceeds tolerance", x, report.relative_residual);
    return x;
}

}  // namespace qfvm
