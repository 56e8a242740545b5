#pragma once

#include <Eigen/Dense>
#include <array>
#include <stdexcept>

namespace qfvm {

using Vec3 = Eigen::Vector3d;

struct geometry_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Theta5 that no tetrahedron can realize.
struct infeasible_theta5 : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Local edge order (12,13,14,23,24,34), zero-based endpoints.
inline constexpr std::array<std::array<int, 2>, 6> kEdgeVerts{
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

// Edge spanned by the two vertices not on edge e.
inline constexpr std::array<int, 6> kOppositeEdge{5, 4, 3, 2, 1, 0};

inline int edge_index(int a, int b) {
    static constexpr int tbl[4][4] = {{-1, 0, 1, 2}, {0, -1, 3, 4}, {1, 3, -1, 5}, {2, 4, 5, -1}};
    return tbl[a][b];
}

// Endpoints of the two rays defining plane angle m (0..2) at vertex i.
inline constexpr std::array<std::array<std::array<int, 2>, 3>, 4> kPlaneRays{{
    {{{1, 3}, {1, 2}, {2, 3}}},
    {{{0, 3}, {0, 2}, {2, 3}}},
    {{{0, 3}, {0, 1}, {1, 3}}},
    {{{0, 1}, {0, 2}, {1, 2}}},
}};

struct Tet {
    std::array<Vec3, 4> p;
};

// Throws geometry_error if the vertices are (nearly) coplanar or negatively oriented.
Tet make_tet(const Vec3& p1, const Vec3& p2, const Vec3& p3, const Vec3& p4);

struct TetGeometry {
    std::array<Vec3, 4> p;
    double volume = 0;
    std::array<Vec3, 4> grad_L{};
    std::array<double, 4> T_area{};
    std::array<double, 6> r{};   // |PjPk| cot(dihedral at jk)
    std::array<double, 4> R{};   // R_i = sum of r_jk with i not in {j,k}
    std::array<std::array<double, 3>, 4> plane{};  // plane[i][m]
    std::array<double, 6> dihedral{};
    double h = 0;             // longest edge
    double rho = 0;           // inscribed-sphere diameter
    double circumradius = 0;
};

TetGeometry tet_geometry(const Tet& tet);

struct Theta5 {
    // (theta_{1,P1}, theta_{2,P1}, theta_{1,P2}, theta_{2,P2}, theta_{3,P2}), radians
    std::array<double, 5> a{};
};

struct AngleSet {
    std::array<std::array<double, 3>, 4> plane{};
    std::array<double, 6> dihedral{};
};

double v_angle(const TetGeometry& g, int vertex);
double min_v_angle(const TetGeometry& g);
double v_angle_of(const std::array<double, 3>& plane_angles);

Theta5 theta5_of(const TetGeometry& g);

bool try_reconstruct(const Theta5& t5, AngleSet& out) noexcept;
AngleSet reconstruct_from_theta5(const Theta5& t5);

bool try_r_over_circumradius(const Theta5& t5, std::array<double, 6>& out) noexcept;
bool try_r_over_circumradius(const AngleSet& as, std::array<double, 6>& out) noexcept;
std::array<double, 6> r_over_circumradius(const Theta5& t5);

}  // namespace qfvm
