#include "qfvm/assembly.hpp"

#include <fstream>

namespace qfvm {

namespace {

constexpr int kMidPair[6][2] = {{1, 2}, {0, 2}, {0, 1}, {0, 3}, {1, 3}, {2, 3}};

// 6|K| grad(L_a).grad(L_b) in terms of the cotangent weights.
double dot6k(const std::array<double, 6>& r, const std::array<double, 4>& R, int a, int b) {
    if (a == b) return R[a];
    return -r[kOppositeEdge[edge_index(a, b)]];
}

std::array<double, 4> vertex_sums(const std::array<double, 6>& r) {
    std::array<double, 4> R{};
    for (int i = 0; i < 4; ++i) {
        double s = 0.0;
        for (int e = 0; e < 6; ++e)
            if (kEdgeVerts[e][0] != i && kEdgeVerts[e][1] != i) s += r[e];
        R[i] = s;
    }
    return R;
}

struct GradTerm {
    int i1, i2;
    double c;
};

// grad(phi_n) written as sum of c * L_{i1} grad(L_{i2}), using sum(L)=1 to
// homogenize the vertex functions.
void gradient_terms(int n, GradTerm out[8], int& count) {
    count = 0;
    if (n < 4) {
        out[count++] = {n, n, 4.0};
        for (int i1 = 0; i1 < 4; ++i1) out[count++] = {i1, n, -1.0};
    } else {
        int a = kMidPair[n - 4][0], b = kMidPair[n - 4][1];
        out[count++] = {a, b, 4.0};
        out[count++] = {b, a, 4.0};
    }
}

}  // namespace

double basis_eval(int node, const std::array<double, 4>& L) {
    if (node < 4) return L[node] * (2.0 * L[node] - 1.0);
    int a = kMidPair[node - 4][0], b = kMidPair[node - 4][1];
    return 4.0 * L[a] * L[b];
}

Vec3 basis_grad(const TetGeometry& g, int node, const std::array<double, 4>& L) {
    if (node < 4) return (4.0 * L[node] - 1.0) * g.grad_L[node];
    int a = kMidPair[node - 4][0], b = kMidPair[node - 4][1];
    return 4.0 * (L[a] * g.grad_L[b] + L[b] * g.grad_L[a]);
}

std::array<double, 4> barycentric(const TetGeometry& g, const Vec3& x) {
    std::array<double, 4> L;
    Vec3 d = x - g.p[0];
    for (int i = 0; i < 4; ++i) L[i] = (i == 0 ? 1.0 : 0.0) + g.grad_L[i].dot(d);
    L[0] = 1.0 - L[1] - L[2] - L[3];
    return L;
}

Mat10 element_matrix_A(const std::array<double, 6>& r, const SchemeConstants& c) {
    const std::array<double, 4> R = vertex_sums(r);
    Mat10 A = Mat10::Zero();
    GradTerm terms[8];
    int nt = 0;
    for (int n = 0; n < 10; ++n) {
        gradient_terms(n, terms, nt);
        for (int m = 0; m < 10; ++m) {
            double s = 0.0;
            if (m < 4) {
                for (int t = 0; t < nt; ++t) {
                    const GradTerm& g = terms[t];
                    if (g.i1 == m)
                        s += g.c * c.t1 * dot6k(r, R, m, g.i2);
                    else
                        s += g.c * c.t2 * (dot6k(r, R, m, g.i2) + dot6k(r, R, g.i1, g.i2));
                }
            } else {
                int j = kMidPair[m - 4][0], k = kMidPair[m - 4][1];
                for (int t = 0; t < nt; ++t) {
                    const GradTerm& g = terms[t];
                    double base = dot6k(r, R, j, g.i2) + dot6k(r, R, k, g.i2);
                    if (g.i1 == j || g.i1 == k)
                        s += g.c * c.t3 * base;
                    else
                        s += g.c * c.t4 * (base + dot6k(r, R, g.i1, g.i2));
                }
            }
            A(m, n) = s;
        }
    }
    return A;
}

Mat10 element_matrix_A(const TetGeometry& g, const SchemeConstants& c) {
    return element_matrix_A(g.r, c);
}

Vec10 vector_v1(const SchemeParams& p) {
    Vec10 v;
    double abg = p.alpha * p.beta * p.gamma;
    for (int i = 0; i < 4; ++i) v(i) = abg / 6.0;
    for (int i = 4; i < 10; ++i) v(i) = (1.0 - 4.0 * abg) / 36.0;
    return v;
}

Vec10 vector_v2(const std::array<double, 6>& r) {
    const std::array<double, 4> R = vertex_sums(r);
    Vec10 v;
    for (int i = 0; i < 4; ++i) v(i) = 4.0 * R[i];
    for (int m = 4; m < 10; ++m) {
        int e = edge_index(kMidPair[m - 4][0], kMidPair[m - 4][1]);
        v(m) = -8.0 * r[kOppositeEdge[e]];
    }
    return v;
}

Mat10 element_matrix_closed_form(const TetGeometry& g, const SchemeParams& p) {
    SchemeConstants c = scheme_constants(p);
    return element_matrix_A(g.r, c) - vector_v1(p) * vector_v2(g.r).transpose();
}

Mat10 element_matrix_quadrature(const TetGeometry& g, const DualComplex& dc,
                                const ScalarField& kappa, int degree) {
    const TriRule rule = triangle_rule(degree);
    Mat10 A = Mat10::Zero();
    for (int m = 0; m < 10; ++m) {
        for (const auto& tri : dc.cells[m].internal_tris) {
            const Vec3& pa = dc.pts[tri[0]];
            const Vec3& pb = dc.pts[tri[1]];
            const Vec3& pc = dc.pts[tri[2]];
            Vec3 an = 0.5 * (pb - pa).cross(pc - pa);  // outward area vector
            for (std::size_t q = 0; q < rule.pts.size(); ++q) {
                const auto& l = rule.pts[q];
                Vec3 x = l[0] * pa + l[1] * pb + l[2] * pc;
                std::array<double, 4> L = barycentric(g, x);
                double k = kappa(x);
                if (!(k > 0.0))
                    throw std::domain_error("diffusion coefficient must be positive");
                double kw = k * rule.w[q];
                for (int n = 0; n < 10; ++n) A(m, n) -= kw * basis_grad(g, n, L).dot(an);
            }
        }
    }
    return A;
}

Vec10 rhs_element(const DualComplex& dc, const ScalarField& f, int degree) {
    const TetRule rule = tet_rule(degree);
    Vec10 b = Vec10::Zero();
    for (int m = 0; m < 10; ++m) {
        const Vec3& apex = dc.node_pos[m];
        for (const auto& tri : dc.cells[m].tris) {
            const Vec3& pa = dc.pts[tri[0]];
            const Vec3& pb = dc.pts[tri[1]];
            const Vec3& pc = dc.pts[tri[2]];
            double vol = (pa - apex).cross(pb - apex).dot(pc - apex) / 6.0;
            double s = 0.0;
            for (std::size_t q = 0; q < rule.pts.size(); ++q) {
                const auto& l = rule.pts[q];
                Vec3 x = l[0] * apex + l[1] * pa + l[2] * pb + l[3] * pc;
                s += rule.w[q] * f(x);
            }
            b(m) += vol * s;
        }
    }
    return b;
}

GlobalSystem assemble(const Mesh& mesh, const SchemeParams& params, const ScalarField& kappa,
                      const ScalarField& f, const AssemblyOptions& opts) {
    const std::size_t n = mesh.node_boundary.size();
    std::vector<int> rows, cols;
    std::vector<double> vals;
    GlobalSystem sys;
    sys.b.assign(n, 0.0);
    sys.dirichlet = mesh.node_boundary;

    SchemeConstants consts = scheme_constants(params);
    for (std::size_t k = 0; k < mesh.tets.size(); ++k) {
        const auto& t = mesh.tets[k];
        Tet tet = make_tet(mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]],
                           mesh.vertices[t[3]]);
        TetGeometry g = tet_geometry(tet);
        DualComplex dc = build_dual(g, params);
        Mat10 Ak;
        if (opts.kappa_is_constant) {
            Vec3 centroid = 0.25 * (g.p[0] + g.p[1] + g.p[2] + g.p[3]);
            Ak = kappa(centroid) *
                 (element_matrix_A(g.r, consts) - vector_v1(params) * vector_v2(g.r).transpose());
        } else {
            Ak = element_matrix_quadrature(g, dc, kappa, opts.surface_degree);
        }
        Vec10 bk = rhs_element(dc, f, opts.volume_degree);
        std::array<int, 10> nodes = mesh.element_nodes(static_cast<int>(k));
        for (int m = 0; m < 10; ++m) {
            int gm = nodes[m];
            if (mesh.node_boundary[gm]) continue;
            sys.b[gm] += bk(m);
            for (int nn = 0; nn < 10; ++nn) {
                rows.push_back(gm);
                cols.push_back(nodes[nn]);
                vals.push_back(Ak(m, nn));
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (sys.dirichlet[i]) {
            rows.push_back(static_cast<int>(i));
            cols.push_back(static_cast<int>(i));
            vals.push_back(1.0);
            sys.b[i] = 0.0;
        }
    }
    sys.A = csr_from_triplets(static_cast<int>(n), rows, cols, vals);
    return sys;
}

void dump_system(const GlobalSystem& sys, const std::string& path) {
    std::ofstream out(path);
    out.precision(17);
    out << sys.A.n << " " << sys.A.n << " " << sys.A.vals.size() << "\n";
    for (int i = 0; i < sys.A.n; ++i)
        for (int p = sys.A.row_offsets[i]; p < sys.A.row_offsets[i + 1]; ++p)
            out << i + 1 << " " << sys.A.cols[p] + 1 << " " << sys.A.vals[p] << "\n";
    out << "rhs\n";
    for (double v : sys.b) out << v << "\n";
}

}  // namespace qfvm
