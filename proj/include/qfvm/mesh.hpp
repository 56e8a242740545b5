#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qfvm/geometry.hpp"

namespace qfvm {

struct parse_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Conforming tetrahedral mesh with quadratic-element node numbering:
// vertex nodes first, then one node per (deduplicated, sorted) edge.
class Mesh {
  public:
    std::vector<Vec3> vertices;
    std::vector<std::array<int, 4>> tets;  // positively oriented

    // Derived connectivity (built by finalize()).
    std::vector<std::array<int, 2>> edges;  // sorted pairs, lexicographically ordered
    std::vector<char> node_boundary;        // per node, 1 if on the domain boundary
    double h = 0;                           // max element longest edge

    int n_vertices() const { return int(vertices.size()); }
    int n_edges() const { return int(edges.size()); }
    int n_nodes() const { return n_vertices() + n_edges(); }

    int edge_node(int a, int b) const;  // global node id of the midpoint of edge {a,b}
    Vec3 node_position(int node) const;

    // Global node ids of the 10 local nodes of element k, in local order.
    std::array<int, 10> element_nodes(int k) const;

    // Rebuilds edges, boundary flags, h; validates orientation and conformity.
    void finalize();

  private:
    std::vector<int64_t> edge_keys_;  // sorted keys for edge lookup
    std::vector<int> edge_ids_;
};

struct QualityReport {
    double min_v_angle_deg = 0;
    double max_aspect = 0;  // max over elements of h_K / rho_K
    int worst_element = -1;
    std::vector<double> v_angles_deg;  // per element
};

Mesh generate_structured(int n);
Mesh perturb(const Mesh& mesh, double rate, uint64_t seed);
QualityReport audit(const Mesh& mesh);

// Elements with V-angle below the threshold (degrees).
std::vector<int> audit_failures(const QualityReport& report, double threshold_deg);

Mesh read_mesh(const std::string& path);
void write_mesh(const Mesh& mesh, const std::string& path);
Mesh read_gmsh(const std::string& path);

}  // namespace qfvm
