#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace qfvm {

struct solver_error : std::runtime_error {
    std::vector<double> best_iterate;
    double residual;
    solver_error(const std::string& msg, std::vector<double> x, double res)
        : std::runtime_error(msg), best_iterate(std::move(x)), residual(res) {}
};

// Compressed row storage; column indices sorted and unique within each row.
struct SparseMatrix {
    int n = 0;
    std::vector<int> row_offsets;
    std::vector<int> cols;
    std::vector<double> vals;

    std::vector<double> multiply(const std::vector<double>& x) const;
};

// Builds CSR from (i, j, value) triplets, accumulating duplicates.
SparseMatrix csr_from_triplets(int n, const std::vector<int>& rows, const std::vector<int>& cols,
                               const std::vector<double>& vals);

struct SolveReport {
    int iterations = 0;
    double relative_residual = 0;  // recomputed from scratch
    std::string method;
    double seconds = 0;
};

enum class SolveMethod { bicgstab, lu };

// Jacobi-preconditioned BiCGStab, or a dense LU fallback for n <= 5000.
std::vector<double> solve(const SparseMatrix& A, const std::vector<double>& b, SolveMethod method,
                          double rtol, SolveReport& report);

}  // namespace qfvm
