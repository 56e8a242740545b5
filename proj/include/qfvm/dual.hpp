#pragma once

#include <string>
#include <vector>

#include "qfvm/geometry.hpp"
#include "qfvm/scheme.hpp"

namespace qfvm {

struct star_shape_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Local node ids 0..9: vertices P1..P4, then midpoints M23, M13, M12, M14, M24, M34.
inline int midpoint_node(int a, int b) {
    static constexpr int tbl[4][4] = {{-1, 6, 5, 7}, {6, -1, 4, 8}, {5, 4, -1, 9}, {7, 8, 9, -1}};
    return tbl[a][b];
}

// Ten-cell polyhedral partition of one tetrahedron.
struct DualComplex {
    // Dual points in canonical order: P_i, edge points A[i][j], face points
    // B[i][l] (point of vertex i on face l), face barycenters F[l], interior
    // points Qg[i], centroid Qc.
    std::vector<Vec3> pts;
    int P[4], A[4][4], B[4][4], F[4], Qg[4], Qc;
    std::array<Vec3, 10> node_pos;

    struct Face {
        std::array<int, 4> corners;  // cyclic
        int left, right;             // local node ids
    };
    std::vector<Face> internal_faces;  // 24: 12 vertex-midpoint + 12 midpoint-midpoint

    struct Patch {
        std::vector<int> corners;  // cyclic; 4 (vertex quad) or 5 (midpoint pentagon)
        int owner;                 // local node id
        int host;                  // face index of K it lies on
    };
    std::vector<Patch> boundary_patches;  // 24

    struct Cell {
        std::vector<std::array<int, 3>> tris;           // full boundary, outward
        std::vector<std::array<int, 3>> internal_tris;  // internal interfaces only, outward
        double volume = 0;
    };
    std::array<Cell, 10> cells;

    // Triangulation of each internal face in its stored corner orientation.
    std::vector<std::array<std::array<int, 3>, 2>> face_tris;
};

DualComplex build_dual(const TetGeometry& g, const SchemeParams& p);

// The 6 polygonal regions tiling face `host` (3 vertex quads + 3 pentagons).
std::vector<DualComplex::Patch> face_partition_2d(const DualComplex& dc, int host);

// Debug dump: OBJ-style listing of points and polygons.
std::string dual_to_obj(const DualComplex& dc);

}  // namespace qfvm
