#pragma once

#include <functional>

#include "qfvm/dual.hpp"
#include "qfvm/mesh.hpp"
#include "qfvm/quadrature.hpp"
#include "qfvm/scheme.hpp"
#include "qfvm/solver.hpp"

namespace qfvm {

using Vec10 = Eigen::Matrix<double, 10, 1>;
using ScalarField = std::function<double(const Vec3&)>;

// Quadratic Lagrange basis on the 10 local nodes, in barycentric coordinates.
double basis_eval(int node, const std::array<double, 4>& L);
Vec3 basis_grad(const TetGeometry& g, int node, const std::array<double, 4>& L);
std::array<double, 4> barycentric(const TetGeometry& g, const Vec3& x);

// Surface part of the flux matrix: entry (m,n) integrates grad(phi_n) . n over
// the portion of the element boundary inside dual cell m. Entries are linear
// combinations of the cotangent weights r_jk, R_i.
Mat10 element_matrix_A(const std::array<double, 6>& r, const SchemeConstants& c);
Mat10 element_matrix_A(const TetGeometry& g, const SchemeConstants& c);

Vec10 vector_v1(const SchemeParams& p);
Vec10 vector_v2(const std::array<double, 6>& r);

// Full flux matrix for unit diffusion: A - v1 v2^T.
Mat10 element_matrix_closed_form(const TetGeometry& g, const SchemeParams& p);

// Flux matrix by quadrature over the internal dual interfaces; supports
// variable diffusion kappa (must stay positive at quadrature points).
Mat10 element_matrix_quadrature(const TetGeometry& g, const DualComplex& dc,
                                const ScalarField& kappa, int degree);

// Per-cell volume integrals of the forcing term.
Vec10 rhs_element(const DualComplex& dc, const ScalarField& f, int degree);

struct GlobalSystem {
    SparseMatrix A;
    std::vector<double> b;
    std::vector<char> dirichlet;
};

struct AssemblyOptions {
    int surface_degree = 4;
    int volume_degree = 4;
    bool kappa_is_constant = false;
};

GlobalSystem assemble(const Mesh& mesh, const SchemeParams& params, const ScalarField& kappa,
                      const ScalarField& f, const AssemblyOptions& opts = {});

// Coordinate-format (i j value) dump for external debugging.
void dump_system(const GlobalSystem& sys, const std::string& path);

}  // namespace qfvm
