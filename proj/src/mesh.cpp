#include "fsifem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace fsifem {

void GeometrySpec::validate() const {
    if (roles.empty()) throw std::invalid_argument("geometry: no strips");
    if (y_levels.size() != roles.size() + 1)
        throw std::invalid_argument("geometry: y_levels must have n_strips+1 entries");
    if (!(x1 > x0)) throw std::invalid_argument("geometry: x1 <= x0");
    for (size_t i = 0; i + 1 < y_levels.size(); ++i)
        if (!(y_levels[i + 1] > y_levels[i]))
            throw std::invalid_argument("geometry: y_levels must be strictly ascending");
    for (size_t i = 0; i + 1 < roles.size(); ++i)
        if (roles[i] == roles[i + 1])
            throw std::invalid_argument("geometry: adjacent strips must alternate roles");
    const bool pl = bc[static_cast<int>(Side::Left)] == BcType::PeriodicX;
    const bool pr = bc[static_cast<int>(Side::Right)] == BcType::PeriodicX;
    if (pl != pr)
        throw std::invalid_argument("geometry: periodic_x must be set on both vertical sides");
    if (bc[static_cast<int>(Side::Top)] == BcType::PeriodicX ||
        bc[static_cast<int>(Side::Bottom)] == BcType::PeriodicX)
        throw std::invalid_argument("geometry: horizontal sides cannot be periodic");
}

GeometrySpec channel_geometry(double length, bool periodic) {
    GeometrySpec g;
    g.x0 = 0.0;
    g.x1 = length;
    g.y_levels = {0.0, 0.25, 0.75, 1.0};
    g.roles = {StripRole::Solid, StripRole::Fluid, StripRole::Solid};
    const BcType vert = periodic ? BcType::PeriodicX : BcType::NeumannTraction;
    g.bc = {vert, BcType::NeumannTraction, vert, BcType::NeumannTraction};
    g.validate();
    return g;
}

GeometrySpec traction_channel_geometry() {
    GeometrySpec g;
    g.y_levels = {0.0, 0.15, 0.85, 1.0};
    g.roles = {StripRole::Solid, StripRole::Fluid, StripRole::Solid};
    g.bc = {BcType::NeumannTraction, BcType::NeumannTraction,
            BcType::NeumannTraction, BcType::NeumannTraction};
    g.validate();
    return g;
}

GeometrySpec heat_wave_geometry() {
    GeometrySpec g;
    g.y_levels = {0.0, 0.75, 1.0};
    g.roles = {StripRole::Fluid, StripRole::Solid};
    g.bc = {BcType::DirichletZero, BcType::DirichletZero,
            BcType::DirichletZero, BcType::DirichletZero};
    g.validate();
    return g;
}

int Mesh::n_rows() const {
    int r = 0;
    for (int n : ny) r += n;
    return r;
}

double Mesh::h() const {
    double hmax = 0.0;
    const double w = dx();
    for (size_t s = 0; s < ny.size(); ++s) {
        const double dy = (geom.y_levels[s + 1] - geom.y_levels[s]) / ny[s];
        // sqrt form keeps h exactly halved under uniform refinement
        hmax = std::max(hmax, std::sqrt(w * w + dy * dy));
    }
    return hmax;
}

AffineMap Mesh::tri_map(int t) const {
    const auto& v = tris[t].v;
    const double a[2] = {node_x[v[0]], node_y[v[0]]};
    const double b[2] = {node_x[v[1]], node_y[v[1]]};
    const double c[2] = {node_x[v[2]], node_y[v[2]]};
    return affine_map(a, b, c);
}

double Mesh::tri_area(int t) const {
    return 0.5 * tri_map(t).det;
}

std::vector<int> Mesh::interface_nodes(int tag) const {
    const int row = strip_row0[tag + 1];
    std::vector<int> out;
    const int last = geom.periodic_x() ? nx - 1 : nx;
    for (int c = 0; c <= last; ++c) out.push_back(node_id(row, c));
    return out;
}

int Mesh::locate(double x, double y) const {
    const double eps = 1e-12 * std::max(1.0, geom.width());
    if (x < geom.x0 - eps || x > geom.x1 + eps || y < geom.y_levels.front() - eps ||
        y > geom.y_levels.back() + eps)
        throw std::invalid_argument("locate: point outside domain");
    int col = static_cast<int>(std::floor((x - geom.x0) / dx()));
    col = std::clamp(col, 0, nx - 1);
    int strip = 0;
    while (strip + 1 < geom.n_strips() && y >= geom.y_levels[strip + 1]) ++strip;
    const double dy = (geom.y_levels[strip + 1] - geom.y_levels[strip]) / ny[strip];
    int r = static_cast<int>(std::floor((y - geom.y_levels[strip]) / dy));
    r = std::clamp(r, 0, ny[strip] - 1);
    const int row = strip_row0[strip] + r;
    // local cell coordinates; diagonal runs from (0,0) to (1,1)
    const double xl = (x - (geom.x0 + col * dx())) / dx();
    const double yl = (y - (geom.y_levels[strip] + r * dy)) / dy;
    const int t = 2 * (row * nx + col) + (yl <= xl ? 0 : 1);
    return t;
}

Mesh build_structured_mesh(const GeometrySpec& geom, int nx, const std::vector<int>& ny) {
    geom.validate();
    if (nx < 1) throw std::invalid_argument("mesh: nx must be positive");
    if (static_cast<int>(ny.size()) != geom.n_strips())
        throw std::invalid_argument("mesh: ny needs one entry per strip");
    for (int n : ny)
        if (n < 1) throw std::invalid_argument("mesh: ny entries must be positive");

    Mesh m;
    m.geom = geom;
    m.nx = nx;
    m.ny = ny;
    m.strip_row0.assign(geom.n_strips() + 1, 0);
    for (int s = 0; s < geom.n_strips(); ++s) m.strip_row0[s + 1] = m.strip_row0[s] + ny[s];
    const int nrows = m.strip_row0.back();

    // nodes, row-major bottom to top
    for (int s = 0, row = 0; s < geom.n_strips(); ++s) {
        const double yb = geom.y_levels[s];
        const double dy = (geom.y_levels[s + 1] - yb) / ny[s];
        for (int r = 0; r < ny[s]; ++r, ++row) {
            const double y = yb + r * dy;
            for (int c = 0; c <= nx; ++c) {
                m.node_x.push_back(geom.x0 + c * geom.width() / nx);
                m.node_y.push_back(y);
            }
        }
    }
    for (int c = 0; c <= nx; ++c) {
        m.node_x.push_back(geom.x0 + c * geom.width() / nx);
        m.node_y.push_back(geom.y_levels.back());
    }

    // triangles: cell (row, col) with corners a(bl), b(br), c(tr), d(tl)
    for (int s = 0, row = 0; s < geom.n_strips(); ++s)
        for (int r = 0; r < ny[s]; ++r, ++row)
            for (int c = 0; c < nx; ++c) {
                const int a = m.node_id(row, c), b = m.node_id(row, c + 1);
                const int cc = m.node_id(row + 1, c + 1), d = m.node_id(row + 1, c);
                m.tris.push_back({{a, b, cc}, s});
                m.tris.push_back({{a, cc, d}, s});
            }

    // unique edge table in first-seen order
    std::map<std::array<int, 2>, int> edge_ids;
    m.tri_edges.resize(m.tris.size());
    for (size_t t = 0; t < m.tris.size(); ++t) {
        const auto& v = m.tris[t].v;
        for (int e = 0; e < 3; ++e) {
            std::array<int, 2> key{v[e], v[(e + 1) % 3]};
            if (key[0] > key[1]) std::swap(key[0], key[1]);
            auto it = edge_ids.find(key);
            int id;
            if (it == edge_ids.end()) {
                id = static_cast<int>(m.edges.size());
                m.edges.push_back(key);
                edge_ids.emplace(key, id);
            } else {
                id = it->second;
            }
            m.tri_edges[t][e] = id;
        }
    }

    auto edge_of = [&edge_ids](int a, int b) {
        std::array<int, 2> key{std::min(a, b), std::max(a, b)};
        return edge_ids.at(key);
    };

    // boundary edges
    const bool periodic = geom.periodic_x();
    for (int c = 0; c < nx; ++c) {
        m.boundary_edges.push_back({m.node_id(0, c), m.node_id(0, c + 1), Side::Bottom, 0,
                                    edge_of(m.node_id(0, c), m.node_id(0, c + 1))});
        m.boundary_edges.push_back({m.node_id(nrows, c), m.node_id(nrows, c + 1), Side::Top,
                                    geom.n_strips() - 1,
                                    edge_of(m.node_id(nrows, c), m.node_id(nrows, c + 1))});
    }
    if (!periodic) {
        for (int s = 0, row = 0; s < geom.n_strips(); ++s)
            for (int r = 0; r < ny[s]; ++r, ++row) {
                m.boundary_edges.push_back({m.node_id(row, 0), m.node_id(row + 1, 0), Side::Left, s,
                                            edge_of(m.node_id(row, 0), m.node_id(row + 1, 0))});
                m.boundary_edges.push_back({m.node_id(row, nx), m.node_id(row + 1, nx), Side::Right, s,
                                            edge_of(m.node_id(row, nx), m.node_id(row + 1, nx))});
            }
    }

    // interface edges, fluid -> solid orientation
    for (int tag = 0; tag < geom.n_interfaces(); ++tag) {
        const int row = m.strip_row0[tag + 1];
        const bool fluid_below = geom.roles[tag] == StripRole::Fluid;
        for (int c = 0; c < nx; ++c) {
            Mesh::InterfaceEdge e;
            e.a = m.node_id(row, c);
            e.b = m.node_id(row, c + 1);
            e.tag = tag;
            e.normal_y = fluid_below ? 1.0 : -1.0;
            e.strip_fluid = fluid_below ? tag : tag + 1;
            e.strip_solid = fluid_below ? tag + 1 : tag;
            e.edge_id = edge_of(e.a, e.b);
            m.interface_edges.push_back(e);
        }
    }

    if (periodic) {
        for (int row = 0; row <= nrows; ++row)
            m.periodic_nodes.push_back({m.node_id(row, 0), m.node_id(row, nx)});
        for (int row = 0; row < nrows; ++row)
            m.periodic_edges.push_back({edge_of(m.node_id(row, 0), m.node_id(row + 1, 0)),
                                        edge_of(m.node_id(row, nx), m.node_id(row + 1, nx))});
    }
    return m;
}

void resolution_for(const GeometrySpec& geom, double h, int& nx, std::vector<int>& ny) {
    if (!(h > 0)) throw std::invalid_argument("resolution_for: h must be positive");
    nx = std::max(1, static_cast<int>(std::lround(geom.width() / h)));
    ny.clear();
    for (int s = 0; s < geom.n_strips(); ++s) {
        const double height = geom.y_levels[s + 1] - geom.y_levels[s];
        ny.push_back(std::max(1, static_cast<int>(std::lround(height * nx / geom.width()))));
    }
}

Mesh build_structured_mesh(const GeometrySpec& geom, double target_h) {
    int nx;
    std::vector<int> ny;
    resolution_for(geom, target_h, nx, ny);
    return build_structured_mesh(geom, nx, ny);
}

std::vector<std::string> validate_mesh(const Mesh& m) {
    std::vector<std::string> defects;
    for (int t = 0; t < m.n_tris(); ++t) {
        const double a2 = m.tri_map(t).det;
        if (!(a2 > 0))
            defects.push_back("triangle " + std::to_string(t) + " is not CCW or degenerate");
    }
    for (const auto& e : m.interface_edges) {
        const double y = m.geom.interface_y(e.tag);
        if (m.node_y[e.a] != y || m.node_y[e.b] != y)
            defects.push_back("interface edge off its level (tag " + std::to_string(e.tag) + ")");
        if (m.geom.roles[e.strip_fluid] != StripRole::Fluid ||
            m.geom.roles[e.strip_solid] != StripRole::Solid)
            defects.push_back("interface edge with wrong strip roles (tag " +
                              std::to_string(e.tag) + ")");
    }
    for (const auto& p : m.periodic_nodes) {
        if (m.node_y[p[0]] != m.node_y[p[1]] || m.node_x[p[0]] != m.geom.x0 ||
            m.node_x[p[1]] != m.geom.x1)
            defects.push_back("periodic node pair mismatched");
    }
    // every boundary edge must belong to exactly one triangle
    std::vector<int> edge_count(m.edges.size(), 0);
    for (const auto& te : m.tri_edges)
        for (int e = 0; e < 3; ++e) ++edge_count[te[e]];
    for (const auto& be : m.boundary_edges)
        if (edge_count[be.edge_id] != 1)
            defects.push_back("boundary edge shared by " + std::to_string(edge_count[be.edge_id]) +
                              " triangles");
    for (const auto& ie : m.interface_edges)
        if (edge_count[ie.edge_id] != 2)
            defects.push_back("interface edge not shared by two triangles");
    return defects;
}

} // namespace fsifem
