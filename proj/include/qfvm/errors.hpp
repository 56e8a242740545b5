#pragma once

#include <optional>

#include "qfvm/assembly.hpp"

namespace qfvm {

struct ManufacturedCase {
    std::string name;
    ScalarField u;
    ScalarField kappa;
    ScalarField f;
    std::function<Vec3(const Vec3&)> grad_u;
    bool kappa_is_constant = false;
};

// Registered cases: "paper-sine" (variable kappa) and "poisson-sine" (kappa = 1),
// both with a triple-sine exact solution on the unit cube.
ManufacturedCase manufactured_case(const std::string& name);

// (H1 seminorm error, L2 error) of the coefficient vector uh against the case.
std::array<double, 2> error_norms(const Mesh& mesh, const std::vector<double>& uh,
                                  const ManufacturedCase& mc, int degree = 5);

struct ConvergenceRow {
    int n = 0;
    double h = 0;
    double h1 = 0, h1_order = 0;
    double l2 = 0, l2_order = 0;
    int iterations = 0;
    double seconds = 0;
};

struct ConvergenceReport {
    std::vector<ConvergenceRow> rows;
};

struct MeshFamily {
    bool perturbed = false;
    double rate_numerator = 0;  // per-level rate = rate_numerator / n
    uint64_t seed = 0;
};

ConvergenceReport run_convergence(const SchemeParams& params, const ManufacturedCase& mc,
                                  const std::vector<int>& levels, const MeshFamily& family = {},
                                  double rtol = 1e-12, int quad_degree = 5);

// CSV with header n,h,h1,h1_order,l2,l2_order; 6 significant digits, scientific.
std::string convergence_csv(const ConvergenceReport& report);

}  // namespace qfvm
