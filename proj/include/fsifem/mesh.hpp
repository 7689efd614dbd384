#pragma once

#include "fsifem/fe.hpp"
#include "fsifem/geometry.hpp"

#include <array>
#include <string>
#include <vector>

namespace fsifem {

// Structured triangulation of a strip geometry.  Nodes form a tensor grid of
// nx+1 columns and sum(ny)+1 rows (row-major: id = row*(nx+1)+col); every grid
// cell is split along its lower-left -> upper-right diagonal into two CCW
// triangles.  All interface levels are grid rows by construction.
struct Mesh {
    GeometrySpec geom;
    int nx = 0;
    std::vector<int> ny;                 // cell rows per strip

    std::vector<double> node_x, node_y;
    struct Tri {
        std::array<int, 3> v;            // CCW
        int strip;
    };
    std::vector<Tri> tris;

    // Unique undirected edges (lo, hi) and the per-triangle edge ids in local
    // order (v0v1, v1v2, v2v0); midpoints carry the P2 degrees of freedom.
    std::vector<std::array<int, 2>> edges;
    std::vector<std::array<int, 3>> tri_edges;

    struct BoundaryEdge {
        int a, b;                        // node ids
        Side side;
        int strip;
        int edge_id;
    };
    std::vector<BoundaryEdge> boundary_edges;

    struct InterfaceEdge {
        int a, b;                        // node ids, a.x < b.x
        int tag;                         // interface index, bottom to top
        double normal_y;                 // +-1; unit normal (0, normal_y) points fluid -> solid
        int strip_fluid, strip_solid;
        int edge_id;
    };
    std::vector<InterfaceEdge> interface_edges;

    // With periodic sides: node/edge pairs (master at x0, slave at x1).
    std::vector<std::array<int, 2>> periodic_nodes;
    std::vector<std::array<int, 2>> periodic_edges;

    int n_nodes() const { return static_cast<int>(node_x.size()); }
    int n_tris() const { return static_cast<int>(tris.size()); }
    int n_rows() const;                  // total cell rows
    int node_id(int row, int col) const { return row * (nx + 1) + col; }
    double dx() const { return geom.width() / nx; }
    double h() const;                    // max edge length
    AffineMap tri_map(int t) const;
    double tri_area(int t) const;

    // Interface node ids ordered by x; the periodic slave endpoint is excluded.
    std::vector<int> interface_nodes(int tag) const;

    // Triangle containing (x, y); points outside the domain are an error.
    int locate(double x, double y) const;

    // strip row offsets: strip s spans cell rows [strip_row0[s], strip_row0[s+1])
    std::vector<int> strip_row0;
};

Mesh build_structured_mesh(const GeometrySpec& geom, int nx, const std::vector<int>& ny);

// Resolution helper: nx = max(1, round(width/h)), per-strip ny matching square
// cells as closely as possible.
void resolution_for(const GeometrySpec& geom, double h, int& nx, std::vector<int>& ny);
Mesh build_structured_mesh(const GeometrySpec& geom, double target_h);

// Returns a list of defects (empty when the mesh is consistent): orientation,
// degenerate triangles, interface alignment, periodic pairing.
std::vector<std::string> validate_mesh(const Mesh& m);

} // namespace fsifem
