#include "qfvm/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace qfvm {

namespace {

double signed_volume(const std::array<Vec3, 4>& p) {
    return (p[1] - p[0]).cross(p[2] - p[0]).dot(p[3] - p[0]) / 6.0;
}

double angle_between(const Vec3& u, const Vec3& v) {
    return std::atan2(u.cross(v).norm(), u.dot(v));
}

// Guarded arccos: arguments are clamped only within 1e-12 of +-1.
bool safe_acos(double x, double& out) noexcept {
    if (x > 1.0) {
        if (x > 1.0 + 1e-12) return false;
        x = 1.0;
    } else if (x < -1.0) {
        if (x < -1.0 - 1e-12) return false;
        x = -1.0;
    }
    out = std::acos(x);
    return true;
}

// Dihedral angle along edge VA of the trihedral corner at V, from the three
// face angles: a opposite the edge, b and c adjacent (spherical law of cosines).
bool corner_dihedral(double a, double b, double c, double& out) noexcept {
    const double sb = std::sin(b), sc = std::sin(c);
    if (sb <= 0 || sc <= 0) return false;
    return safe_acos((std::cos(a) - std::cos(b) * std::cos(c)) / (sb * sc), out);
}

}  // namespace

Tet make_tet(const Vec3& p1, const Vec3& p2, const Vec3& p3, const Vec3& p4) {
    Tet t{{p1, p2, p3, p4}};
    double h = 0;
    for (const auto& e : kEdgeVerts) h = std::max(h, (t.p[e[0]] - t.p[e[1]]).norm());
    const double vol = signed_volume(t.p);
    if (!(vol > 1e-14 * h * h * h))
        throw geometry_error("degenerate or negatively oriented tetrahedron");
    return t;
}

TetGeometry tet_geometry(const Tet& tet) {
    TetGeometry g;
    g.p = tet.p;
    g.volume = signed_volume(tet.p);
    if (!(g.volume > 0)) throw geometry_error("non-positive volume");

    Eigen::Matrix4d M;
    for (int i = 0; i < 4; ++i) M.row(i) << tet.p[i].x(), tet.p[i].y(), tet.p[i].z(), 1.0;
    Eigen::Matrix4d Minv = M.inverse();
    for (int i = 0; i < 4; ++i) g.grad_L[i] = Minv.block<3, 1>(0, i);

    for (int i = 0; i < 4; ++i) {
        int a = (i + 1) % 4, b = (i + 2) % 4, c = (i + 3) % 4;
        g.T_area[i] = 0.5 * (tet.p[b] - tet.p[a]).cross(tet.p[c] - tet.p[a]).norm();
    }

    g.h = 0;
    for (const auto& e : kEdgeVerts) g.h = std::max(g.h, (tet.p[e[0]] - tet.p[e[1]]).norm());
    double area_sum = g.T_area[0] + g.T_area[1] + g.T_area[2] + g.T_area[3];
    g.rho = 6.0 * g.volume / area_sum;

    for (int e = 0; e < 6; ++e) {
        int j = kEdgeVerts[e][0], k = kEdgeVerts[e][1];
        int r1 = -1, r2 = -1;
        for (int v = 0; v < 4; ++v)
            if (v != j && v != k) (r1 < 0 ? r1 : r2) = v;
        const Vec3 ev = tet.p[k] - tet.p[j];
        const Vec3 n1 = (tet.p[r1] - tet.p[j]).cross(ev);
        const Vec3 n2 = (tet.p[r2] - tet.p[j]).cross(ev);
        g.dihedral[e] = angle_between(n1, n2);
        g.r[e] = ev.norm() / std::tan(g.dihedral[e]);
    }
    for (int i = 0; i < 4; ++i) {
        g.R[i] = 0;
        for (int e = 0; e < 6; ++e)
            if (kEdgeVerts[e][0] != i && kEdgeVerts[e][1] != i) g.R[i] += g.r[e];
    }

    for (int i = 0; i < 4; ++i)
        for (int m = 0; m < 3; ++m) {
            const auto& ray = kPlaneRays[i][m];
            g.plane[i][m] = angle_between(tet.p[ray[0]] - tet.p[i], tet.p[ray[1]] - tet.p[i]);
        }

    Eigen::Matrix3d A;
    Eigen::Vector3d b;
    for (int i = 1; i < 4; ++i) {
        A.row(i - 1) = 2.0 * (tet.p[i] - tet.p[0]).transpose();
        b(i - 1) = tet.p[i].squaredNorm() - tet.p[0].squaredNorm();
    }
    Vec3 center = A.partialPivLu().solve(b);
    g.circumradius = (center - tet.p[0]).norm();

    return g;
}

double v_angle_of(const std::array<double, 3>& t) {
    return t[0] + t[1] + t[2] - 2.0 * std::max({t[0], t[1], t[2]});
}

double v_angle(const TetGeometry& g, int vertex) { return v_angle_of(g.plane[vertex]); }

double min_v_angle(const TetGeometry& g) {
    double m = v_angle(g, 0);
    for (int i = 1; i < 4; ++i) m = std::min(m, v_angle(g, i));
    return m;
}

Theta5 theta5_of(const TetGeometry& g) {
    return Theta5{{g.plane[0][0], g.plane[0][1], g.plane[1][0], g.plane[1][1], g.plane[1][2]}};
}

bool try_reconstruct(const Theta5& t5, AngleSet& out) noexcept {
    constexpr double pi = 3.14159265358979323846;
    const double t1P1 = t5.a[0], t2P1 = t5.a[1], t1P2 = t5.a[2], t2P2 = t5.a[3], t3P2 = t5.a[4];
    for (double a : t5.a)
        if (!(a > 0 && a < pi)) return false;

    auto& pl = out.plane;
    auto& dh = out.dihedral;
    pl[0][0] = t1P1;
    pl[0][1] = t2P1;
    pl[1][0] = t1P2;
    pl[1][1] = t2P2;
    pl[1][2] = t3P2;

    // Triangle angle sums on faces P1P2P4 and P1P2P3.
    pl[3][0] = pi - t1P1 - t1P2;
    pl[2][1] = pi - t2P1 - t2P2;
    if (pl[3][0] <= 0 || pl[2][1] <= 0) return false;

    // Dihedrals along P1P2 and P2P4 from the corner at P2.
    if (!corner_dihedral(t3P2, t1P2, t2P2, dh[0])) return false;
    if (!corner_dihedral(t2P2, t1P2, t3P2, dh[4])) return false;

    // theta_{3,P1} from the corner at P1 and the dihedral along P1P2.
    if (!safe_acos(std::cos(dh[0]) * std::sin(t1P1) * std::sin(t2P1) + std::cos(t1P1) * std::cos(t2P1),
                   pl[0][2]))
        return false;

    // Dihedral along P1P4 from the corner at P1.
    if (!corner_dihedral(pl[0][1], pl[0][0], pl[0][2], dh[2])) return false;

    // theta_{3,P4} from theta_{1,P4} and the dihedrals along P1P4, P2P4.
    {
        const double num = std::cos(pl[3][0]) * std::sin(dh[2]) * std::cos(dh[4]) +
                           std::cos(dh[2]) * std::sin(dh[4]);
        const double den =
            std::sqrt(num * num + std::sin(pl[3][0]) * std::sin(pl[3][0]) * std::sin(dh[2]) * std::sin(dh[2]));
        if (!(den > 0)) return false;
        if (!safe_acos(num / den, pl[3][2])) return false;
    }

    // theta_{2,P4} from the corner at P4 and the dihedral along P2P4.
    if (!safe_acos(std::cos(pl[3][2]) * std::cos(pl[3][0]) +
                       std::sin(pl[3][2]) * std::sin(pl[3][0]) * std::cos(dh[4]),
                   pl[3][1]))
        return false;

    // Remaining plane angles by triangle angle sums.
    pl[2][0] = pi - pl[0][2] - pl[3][1];
    pl[2][2] = pi - pl[1][2] - pl[3][2];
    if (pl[2][0] <= 0 || pl[2][2] <= 0) return false;

    // Remaining dihedrals from fully known corners.
    if (!corner_dihedral(pl[0][0], pl[0][1], pl[0][2], dh[1])) return false;
    if (!corner_dihedral(pl[1][0], pl[1][1], pl[1][2], dh[3])) return false;
    if (!corner_dihedral(pl[3][0], pl[3][1], pl[3][2], dh[5])) return false;

    for (int i = 0; i < 4; ++i)
        for (int m = 0; m < 3; ++m)
            if (!(pl[i][m] > 0 && pl[i][m] < pi)) return false;
    for (double d : dh)
        if (!(d > 0 && d < pi)) return false;
    return true;
}

AngleSet reconstruct_from_theta5(const Theta5& t5) {
    AngleSet out;
    if (!try_reconstruct(t5, out)) throw infeasible_theta5("Theta5 is not realizable");
    return out;
}

namespace {

// For each edge, the two plane angles subtending it from the opposite vertices,
// as (vertex, slot) pairs into AngleSet::plane.
constexpr std::array<std::array<std::array<int, 2>, 2>, 6> kSubtend{{
    {{{2, 1}, {3, 0}}},  // edge 12
    {{{1, 1}, {3, 1}}},  // edge 13
    {{{1, 0}, {2, 0}}},  // edge 14
    {{{0, 1}, {3, 2}}},  // edge 23
    {{{0, 0}, {2, 2}}},  // edge 24
    {{{0, 2}, {1, 2}}},  // edge 34
}};

}  // namespace

bool try_r_over_circumradius(const Theta5& t5, std::array<double, 6>& out) noexcept {
    AngleSet as;
    if (!try_reconstruct(t5, as)) return false;
    return try_r_over_circumradius(as, out);
}

bool try_r_over_circumradius(const AngleSet& as, std::array<double, 6>& out) noexcept {
    for (int e = 0; e < 6; ++e) {
        const double th = as.dihedral[e];
        const double a = as.plane[kSubtend[e][0][0]][kSubtend[e][0][1]];
        const double b = as.plane[kSubtend[e][1][0]][kSubtend[e][1][1]];
        const double ca = 1.0 / std::tan(a), cb = 1.0 / std::tan(b);
        const double s = std::sin(th);
        const double den = std::sqrt(s * s + ca * ca + cb * cb - 2.0 * ca * cb * std::cos(th));
        if (!(den > 0)) return false;
        // |PjPk| / R_K times cot(theta_jk)
        out[e] = (2.0 * s / den) * (std::cos(th) / s);
    }
    return true;
}

std::array<double, 6> r_over_circumradius(const Theta5& t5) {
    std::array<double, 6> out;
    if (!try_r_over_circumradius(t5, out)) throw infeasible_theta5("Theta5 is not realizable");
    return out;
}

}  // namespace qfvm
