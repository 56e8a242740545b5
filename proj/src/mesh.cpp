#include "qfvm/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

namespace qfvm {

namespace {

double tet_signed_volume(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
    return (b - a).cross(c - a).dot(d - a) / 6.0;
}

}  // namespace

int Mesh::edge_node(int a, int b) const {
    if (a > b) std::swap(a, b);
    int64_t key = int64_t(a) * n_vertices() + b;
    auto it = std::lower_bound(edge_keys_.begin(), edge_keys_.end(), key);
    if (it == edge_keys_.end() || *it != key) throw std::out_of_range("no such edge");
    return n_vertices() + edge_ids_[it - edge_keys_.begin()];
}

Vec3 Mesh::node_position(int node) const {
    if (node < n_vertices()) return vertices[node];
    const auto& e = edges[node - n_vertices()];
    return 0.5 * (vertices[e[0]] + vertices[e[1]]);
}

std::array<int, 10> Mesh::element_nodes(int k) const {
    const auto& t = tets[k];
    // Local order P1..P4, M23, M13, M12, M14, M24, M34.
    return {t[0],
            t[1],
            t[2],
            t[3],
            edge_node(t[1], t[2]),
            edge_node(t[0], t[2]),
            edge_node(t[0], t[1]),
            edge_node(t[0], t[3]),
            edge_node(t[1], t[3]),
            edge_node(t[2], t[3])};
}

void Mesh::finalize() {
    const int nv = n_vertices();

    {
        std::vector<std::pair<Vec3, int>> sorted;  // duplicate-coordinate check
        sorted.reserve(nv);
        for (int i = 0; i < nv; ++i) sorted.emplace_back(vertices[i], i);
        std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
            return std::lexicographical_compare(a.first.data(), a.first.data() + 3,
                                                b.first.data(), b.first.data() + 3);
        });
        for (int i = 0; i + 1 < nv; ++i)
            if (sorted[i].first == sorted[i + 1].first)
                throw parse_error("vertices " + std::to_string(sorted[i].second) + " and " +
                                  std::to_string(sorted[i + 1].second) + " coincide");
    }

    h = 0;
    std::vector<int64_t> keys;
    keys.reserve(tets.size() * 6);
    for (size_t k = 0; k < tets.size(); ++k) {
        const auto& t = tets[k];
        for (int i : t)
            if (i < 0 || i >= nv) throw parse_error("vertex index out of range in element " +
                                                    std::to_string(k));
        double hk = 0;
        for (const auto& e : kEdgeVerts) {
            int a = t[e[0]], b = t[e[1]];
            hk = std::max(hk, (vertices[a] - vertices[b]).norm());
            if (a > b) std::swap(a, b);
            keys.push_back(int64_t(a) * nv + b);
        }
        if (!(tet_signed_volume(vertices[t[0]], vertices[t[1]], vertices[t[2]], vertices[t[3]]) >
              1e-14 * hk * hk * hk))
            throw geometry_error("element " + std::to_string(k) +
                                 " has non-positive or degenerate volume");
        h = std::max(h, hk);
    }
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    edge_keys_ = std::move(keys);
    edge_ids_.resize(edge_keys_.size());
    edges.resize(edge_keys_.size());
    for (size_t i = 0; i < edge_keys_.size(); ++i) {
        edge_ids_[i] = int(i);
        edges[i] = {int(edge_keys_[i] / nv), int(edge_keys_[i] % nv)};
    }

    // Face incidence: conformity and topological boundary detection.
    std::map<std::array<int, 3>, std::pair<int, int>> faces;  // sorted triple -> (count, parity)
    for (size_t k = 0; k < tets.size(); ++k) {
        const auto& t = tets[k];
        for (int i = 0; i < 4; ++i) {
            std::array<int, 3> f;
            int m = 0;
            for (int v = 0; v < 4; ++v)
                if (v != i) f[m++] = t[v];
            // Parity of the oriented face as seen from outside the element.
            int parity = (i % 2 == 0) ? 1 : 0;
            std::array<int, 3> s = f;
            std::sort(s.begin(), s.end());
            if (f != s) {
                // count inversions of f relative to sorted order
                int inv = 0;
                for (int a = 0; a < 3; ++a)
                    for (int b = a + 1; b < 3; ++b)
                        if (f[a] > f[b]) ++inv;
                parity ^= (inv & 1);
            }
            auto [it, inserted] = faces.try_emplace(s, std::make_pair(0, parity));
            if (!inserted) {
                if (it->second.first >= 2)
                    throw parse_error("face shared by more than two elements");
                if (it->second.second == parity)
                    throw parse_error("elements disagree on the orientation of a shared face");
            }
            it->second.first += 1;
        }
    }

    node_boundary.assign(n_nodes(), 0);
    for (const auto& [f, info] : faces) {
        if (info.first != 1) continue;
        for (int v : f) node_boundary[v] = 1;
        node_boundary[edge_node(f[0], f[1])] = 1;
        node_boundary[edge_node(f[0], f[2])] = 1;
        node_boundary[edge_node(f[1], f[2])] = 1;
    }
}

Mesh generate_structured(int n) {
    if (n < 1) throw std::invalid_argument("structured mesh requires n >= 1");
    Mesh mesh;
    const int s = n + 1;
    auto vid = [&](int i, int j, int k) { return i + s * (j + s * k); };
    mesh.vertices.reserve(s * s * s);
    for (int k = 0; k < s; ++k)
        for (int j = 0; j < s; ++j)
            for (int i = 0; i < s; ++i)
                mesh.vertices.push_back(Vec3(double(i) / n, double(j) / n, double(k) / n));

    // Kuhn subdivision: six tets per cube along its main diagonal, one per
    // permutation of the axis steps.
    static constexpr int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                        {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    static constexpr int parity[6] = {0, 1, 1, 0, 0, 1};
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i)
                for (int p = 0; p < 6; ++p) {
                    int c[3] = {i, j, k};
                    std::array<int, 4> t;
                    t[0] = vid(c[0], c[1], c[2]);
                    for (int step = 0; step < 3; ++step) {
                        c[perms[p][step]] += 1;
                        t[step + 1] = vid(c[0], c[1], c[2]);
                    }
                    if (parity[p]) std::swap(t[1], t[2]);
                    mesh.tets.push_back(t);
                }
    mesh.finalize();
    return mesh;
}

Mesh perturb(const Mesh& mesh, double rate, uint64_t seed) {
    if (rate < 0) throw std::invalid_argument("perturbation rate must be >= 0");
    Mesh out = mesh;
    std::mt19937_64 rng(seed);
    auto uniform = [&]() { return double(rng() >> 11) * 0x1.0p-53; };
    auto on_wall = [](double x) { return x == 0.0 || x == 1.0; };
    for (size_t v = 0; v < out.vertices.size(); ++v) {
        Vec3& x = out.vertices[v];
        for (int c = 0; c < 3; ++c) {
            double d = (2.0 * uniform() - 1.0) * rate;  // always drawn, for reproducibility
            if (!on_wall(x[c])) x[c] += d;
        }
    }
    out.finalize();
    return out;
}

QualityReport audit(const Mesh& mesh) {
    QualityReport rep;
    rep.min_v_angle_deg = 1e300;
    rep.v_angles_deg.reserve(mesh.tets.size());
    constexpr double rad2deg = 180.0 / 3.14159265358979323846;
    for (size_t k = 0; k < mesh.tets.size(); ++k) {
        const auto& t = mesh.tets[k];
        auto g = tet_geometry(Tet{{mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]],
                                   mesh.vertices[t[3]]}});
        double v = min_v_angle(g) * rad2deg;
        rep.v_angles_deg.push_back(v);
        if (v < rep.min_v_angle_deg) {
            rep.min_v_angle_deg = v;
            rep.worst_element = int(k);
        }
        rep.max_aspect = std::max(rep.max_aspect, g.h / g.rho);
    }
    return rep;
}

std::vector<int> audit_failures(const QualityReport& report, double threshold_deg) {
    std::vector<int> bad;
    for (size_t k = 0; k < report.v_angles_deg.size(); ++k)
        if (report.v_angles_deg[k] < threshold_deg) bad.push_back(int(k));
    return bad;
}

namespace {

std::string next_data_line(std::istream& in, int& lineno) {
    std::string line;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r\n") != std::string::npos) return line;
    }
    throw parse_error("unexpected end of file at line " + std::to_string(lineno));
}

}  // namespace

Mesh read_mesh(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open " + path);
    int lineno = 0;
    std::string header = next_data_line(in, lineno);
    if (header.find("qfvm-mesh 1") != 0)
        throw parse_error("line " + std::to_string(lineno) + ": bad header, expected 'qfvm-mesh 1'");
    std::istringstream counts(next_data_line(in, lineno));
    int nv = 0, nt = 0;
    if (!(counts >> nv >> nt) || nv <= 0 || nt <= 0)
        throw parse_error("line " + std::to_string(lineno) + ": bad counts");
    Mesh mesh;
    mesh.vertices.resize(nv);
    for (int i = 0; i < nv; ++i) {
        std::istringstream ls(next_data_line(in, lineno));
        if (!(ls >> mesh.vertices[i].x() >> mesh.vertices[i].y() >> mesh.vertices[i].z()))
            throw parse_error("line " + std::to_string(lineno) + ": bad vertex");
    }
    mesh.tets.resize(nt);
    for (int k = 0; k < nt; ++k) {
        std::istringstream ls(next_data_line(in, lineno));
        for (int j = 0; j < 4; ++j) {
            int idx;
            if (!(ls >> idx) || idx < 1 || idx > nv)
                throw parse_error("line " + std::to_string(lineno) +
                                  ": element index out of range (indices are 1-based)");
            mesh.tets[k][j] = idx - 1;
        }
    }
    mesh.finalize();
    return mesh;
}

void write_mesh(const Mesh& mesh, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw parse_error("cannot open " + path + " for writing");
    out.precision(17);
    out << "qfvm-mesh 1\n" << mesh.n_vertices() << " " << mesh.tets.size() << "\n";
    for (const auto& v : mesh.vertices) out << v.x() << " " << v.y() << " " << v.z() << "\n";
    for (const auto& t : mesh.tets)
        out << t[0] + 1 << " " << t[1] + 1 << " " << t[2] + 1 << " " << t[3] + 1 << "\n";
}

Mesh read_gmsh(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open " + path);
    Mesh mesh;
    std::string line;
    int lineno = 0;
    std::map<int, int> id_map;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.rfind("$Nodes", 0) == 0) {
            int n = std::stoi(next_data_line(in, lineno));
            for (int i = 0; i < n; ++i) {
                std::istringstream ls(next_data_line(in, lineno));
                int id;
                Vec3 x;
                if (!(ls >> id >> x.x() >> x.y() >> x.z()))
                    throw parse_error("line " + std::to_string(lineno) + ": bad node");
                id_map[id] = int(mesh.vertices.size());
                mesh.vertices.push_back(x);
            }
        } else if (line.rfind("$Elements", 0) == 0) {
            int n = std::stoi(next_data_line(in, lineno));
            for (int i = 0; i < n; ++i) {
                std::istringstream ls(next_data_line(in, lineno));
                int id, type, ntags;
                if (!(ls >> id >> type >> ntags))
                    throw parse_error("line " + std::to_string(lineno) + ": bad element");
                if (type != 4)
                    throw parse_error("line " + std::to_string(lineno) +
                                      ": only 4-node tetrahedra (type 4) are supported");
                int tag;
                for (int t = 0; t < ntags; ++t) ls >> tag;
                std::array<int, 4> tet;
                for (int j = 0; j < 4; ++j) {
                    int nid;
                    if (!(ls >> nid) || !id_map.count(nid))
                        throw parse_error("line " + std::to_string(lineno) + ": bad node reference");
                    tet[j] = id_map[nid];
                }
                mesh.tets.push_back(tet);
            }
        }
    }
    if (mesh.vertices.empty() || mesh.tets.empty())
        throw parse_error("no $Nodes/$Elements sections found in " + path);
    mesh.finalize();
    return mesh;
}

}  // namespace qfvm
