#include "qfvm/dual.hpp"

#include <sstream>

namespace qfvm {

namespace {

std::array<std::array<int, 3>, 2> triangulate_quad(const std::array<int, 4>& c) {
    // Diagonal from the corner with the smallest canonical id, so both sides of
    // a shared face produce bit-identical triangles.
    int m = 0;
    for (int i = 1; i < 4; ++i)
        if (c[i] < c[m]) m = i;
    auto at = [&](int k) { return c[(m + k) % 4]; };
    return {{{at(0), at(1), at(2)}, {at(0), at(2), at(3)}}};
}

std::vector<std::array<int, 3>> triangulate_polygon(const std::vector<int>& c) {
    int m = 0;
    for (size_t i = 1; i < c.size(); ++i)
        if (c[i] < c[m]) m = int(i);
    std::vector<std::array<int, 3>> tris;
    int n = int(c.size());
    for (int k = 1; k + 1 < n; ++k)
        tris.push_back({c[m], c[(m + k) % n], c[(m + k + 1) % n]});
    return tris;
}

}  // namespace

DualComplex build_dual(const TetGeometry& g, const SchemeParams& p) {
    DualComplex dc;
    const auto& pt = g.p;
    auto add = [&](const Vec3& x) {
        dc.pts.push_back(x);
        return int(dc.pts.size()) - 1;
    };

    for (int i = 0; i < 4; ++i) dc.P[i] = add(pt[i]);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            if (j != i) dc.A[i][j] = add(pt[i] + p.alpha * (pt[j] - pt[i]));
    for (int i = 0; i < 4; ++i)
        for (int l = 0; l < 4; ++l)
            if (l != i) {
                Vec3 m = Vec3::Zero();  // midpoint of the edge of face l opposite to i
                for (int v = 0; v < 4; ++v)
                    if (v != i && v != l) m += pt[v];
                m *= 0.5;
                dc.B[i][l] = add(pt[i] + p.beta * (m - pt[i]));
            }
    std::array<Vec3, 4> Fpos;
    for (int l = 0; l < 4; ++l) {
        Fpos[l] = Vec3::Zero();
        for (int v = 0; v < 4; ++v)
            if (v != l) Fpos[l] += pt[v];
        Fpos[l] /= 3.0;
        dc.F[l] = add(Fpos[l]);
    }
    for (int i = 0; i < 4; ++i) dc.Qg[i] = add(pt[i] + p.gamma * (Fpos[i] - pt[i]));
    dc.Qc = add(0.25 * (pt[0] + pt[1] + pt[2] + pt[3]));

    for (int i = 0; i < 4; ++i) dc.node_pos[i] = pt[i];
    for (int e = 0; e < 6; ++e) {
        auto [a, b] = kEdgeVerts[e];
        dc.node_pos[midpoint_node(a, b)] = 0.5 * (pt[a] + pt[b]);
    }

    // Vertex-midpoint interfaces: one per (vertex i, incident edge {i,j}).
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            if (j == i) continue;
            int f1 = -1, f2 = -1;
            for (int v = 0; v < 4; ++v)
                if (v != i && v != j) (f1 < 0 ? f1 : f2) = v;
            dc.internal_faces.push_back(
                {{dc.A[i][j], dc.B[i][f1], dc.Qg[i], dc.B[i][f2]}, i, midpoint_node(i, j)});
        }
    // Midpoint-midpoint interfaces: one per (face l, vertex i on it).
    for (int l = 0; l < 4; ++l)
        for (int i = 0; i < 4; ++i) {
            if (i == l) continue;
            int j = -1, k = -1;
            for (int v = 0; v < 4; ++v)
                if (v != i && v != l) (j < 0 ? j : k) = v;
            dc.internal_faces.push_back({{dc.B[i][l], dc.F[l], dc.Qc, dc.Qg[i]},
                                         midpoint_node(i, j), midpoint_node(i, k)});
        }

    for (const auto& f : dc.internal_faces) dc.face_tris.push_back(triangulate_quad(f.corners));

    // Boundary vertex quads.
    for (int i = 0; i < 4; ++i)
        for (int l = 0; l < 4; ++l) {
            if (l == i) continue;
            int j = -1, k = -1;
            for (int v = 0; v < 4; ++v)
                if (v != i && v != l) (j < 0 ? j : k) = v;
            dc.boundary_patches.push_back(
                {{dc.P[i], dc.A[i][j], dc.B[i][l], dc.A[i][k]}, i, l});
        }
    // Boundary midpoint pentagons: edge {j,k} on each of its two host faces.
    for (int e = 0; e < 6; ++e) {
        auto [j, k] = kEdgeVerts[e];
        for (int l = 0; l < 4; ++l) {
            if (l == j || l == k) continue;
            dc.boundary_patches.push_back(
                {{dc.A[j][k], dc.A[k][j], dc.B[k][l], dc.F[l], dc.B[j][l]},
                 midpoint_node(j, k), l});
        }
    }

    // Assemble cells: orient every triangle outward from the cell's node.
    auto add_tris = [&](DualComplex::Cell& cell, int node,
                        const std::vector<std::array<int, 3>>& tris, bool internal) {
        const Vec3 n = dc.node_pos[node];
        for (auto t : tris) {
            double vol = (dc.pts[t[0]] - n).cross(dc.pts[t[1]] - n).dot(dc.pts[t[2]] - n) / 6.0;
            if (vol < 0) {
                std::swap(t[1], t[2]);
                vol = -vol;
            }
            if (!(vol > 1e-15 * g.h * g.h * g.h))
                throw star_shape_error("dual cell " + std::to_string(node) +
                                       " is not star-shaped with respect to its node");
            cell.volume += vol;
            cell.tris.push_back(t);
            if (internal) cell.internal_tris.push_back(t);
        }
    };
    for (size_t fi = 0; fi < dc.internal_faces.size(); ++fi) {
        const auto& f = dc.internal_faces[fi];
        std::vector<std::array<int, 3>> tris(dc.face_tris[fi].begin(), dc.face_tris[fi].end());
        add_tris(dc.cells[f.left], f.left, tris, true);
        add_tris(dc.cells[f.right], f.right, tris, true);
    }
    // Boundary patches lie on faces of K that pass through the owning node, so
    // coning from the node degenerates; orient them by the host face's outward
    // normal instead. They contribute no volume to the cone sum.
    for (const auto& patch : dc.boundary_patches) {
        const Vec3 outward = -g.grad_L[patch.host];
        for (auto t : triangulate_polygon(patch.corners)) {
            Vec3 n = (dc.pts[t[1]] - dc.pts[t[0]]).cross(dc.pts[t[2]] - dc.pts[t[0]]);
            if (n.dot(outward) < 0) std::swap(t[1], t[2]);
            dc.cells[patch.owner].tris.push_back(t);
        }
    }

    return dc;
}

std::vector<DualComplex::Patch> face_partition_2d(const DualComplex& dc, int host) {
    std::vector<DualComplex::Patch> out;
    for (const auto& patch : dc.boundary_patches)
        if (patch.host == host) out.push_back(patch);
    return out;
}

std::string dual_to_obj(const DualComplex& dc) {
    std::ostringstream os;
    for (const auto& x : dc.pts) os << "v " << x.x() << " " << x.y() << " " << x.z() << "\n";
    for (const auto& f : dc.internal_faces) {
        os << "f";
        for (int c : f.corners) os << " " << c + 1;
        os << "\n";
    }
    for (const auto& patch : dc.boundary_patches) {
        os << "f";
        for (int c : patch.corners) os << " " << c + 1;
        os << "\n";
    }
    return os.str();
}

}  // namespace qfvm
