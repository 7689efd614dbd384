#include "fsifem/dofs.hpp"

#include <algorithm>
#include <stdexcept>

namespace fsifem {

namespace {

// Side and interface membership is decided structurally from the grid row and
// column of a node, never from floating-point coordinates.
struct NodeGrid {
    int cols;                     // nx + 1
    int top_row;
    int row(int n) const { return n / cols; }
    int col(int n) const { return n % cols; }
};

unsigned node_side_mask(const Mesh& m, const NodeGrid& g, int n) {
    unsigned mask = 0;
    if (g.col(n) == 0) mask |= 1u << static_cast<int>(Side::Left);
    if (g.col(n) == m.nx) mask |= 1u << static_cast<int>(Side::Right);
    if (g.row(n) == 0) mask |= 1u << static_cast<int>(Side::Bottom);
    if (g.row(n) == g.top_row) mask |= 1u << static_cast<int>(Side::Top);
    return mask;
}

int node_interface_tag(const Mesh& m, const NodeGrid& g, int n) {
    const int row = g.row(n);
    for (int tag = 0; tag < m.geom.n_interfaces(); ++tag)
        if (row == m.strip_row0[tag + 1]) return tag;
    return -1;
}

bool dirichlet_from_mask(const GeometrySpec& geom, unsigned mask) {
    for (int s = 0; s < 4; ++s)
        if ((mask & (1u << s)) && geom.bc[s] == BcType::DirichletZero) return true;
    return false;
}

FieldLayout build_field(const Mesh& m, FieldId id, ElementType elem, StripRole region,
                        int ncomp) {
    FieldLayout f;
    f.active = true;
    f.id = id;
    f.elem = elem;
    f.region = region;
    f.ncomp = ncomp;
    f.node_dof.assign(m.n_nodes(), -1);
    if (elem == ElementType::P2) f.edge_dof.assign(m.edges.size(), -1);
    if (elem == ElementType::P1B) f.tri_dof.assign(m.n_tris(), -1);
    f.tri_active.assign(m.n_tris(), 0);

    // mark entities touched by the field's region; remember a resident strip
    std::vector<int> node_strip(m.n_nodes(), -1);
    std::vector<int> edge_strip(m.edges.size(), -1);
    for (int t = 0; t < m.n_tris(); ++t) {
        if (m.geom.roles[m.tris[t].strip] != region) continue;
        f.tri_active[t] = 1;
        for (int i = 0; i < 3; ++i) {
            const int n = m.tris[t].v[i];
            if (node_strip[n] < 0) node_strip[n] = m.tris[t].strip;
        }
        if (elem == ElementType::P2)
            for (int e = 0; e < 3; ++e) {
                const int eid = m.tri_edges[t][e];
                if (edge_strip[eid] < 0) edge_strip[eid] = m.tris[t].strip;
            }
    }

    const NodeGrid grid{m.nx + 1, m.n_rows()};
    for (int n = 0; n < m.n_nodes(); ++n) {
        if (node_strip[n] < 0) continue;
        f.node_dof[n] = f.n_scalar();
        ScalarDof d;
        d.kind = ScalarDof::Node;
        d.entity = n;
        d.x = m.node_x[n];
        d.y = m.node_y[n];
        d.strip = node_strip[n];
        d.interface_tag = node_interface_tag(m, grid, n);
        d.side_mask = node_side_mask(m, grid, n);
        d.dirichlet = dirichlet_from_mask(m.geom, d.side_mask);
        f.dofs.push_back(d);
    }
    if (elem == ElementType::P2)
        for (size_t e = 0; e < m.edges.size(); ++e) {
            if (edge_strip[e] < 0) continue;
            const int a = m.edges[e][0], b = m.edges[e][1];
            f.edge_dof[e] = f.n_scalar();
            ScalarDof d;
            d.kind = ScalarDof::EdgeMid;
            d.entity = static_cast<int>(e);
            d.x = 0.5 * (m.node_x[a] + m.node_x[b]);
            d.y = 0.5 * (m.node_y[a] + m.node_y[b]);
            d.strip = edge_strip[e];
            const int ta = node_interface_tag(m, grid, a);
            d.interface_tag = (ta >= 0 && ta == node_interface_tag(m, grid, b)) ? ta : -1;
            d.side_mask = node_side_mask(m, grid, a) & node_side_mask(m, grid, b);
            d.dirichlet = dirichlet_from_mask(m.geom, d.side_mask);
            f.dofs.push_back(d);
        }
    if (elem == ElementType::P1B)
        for (int t = 0; t < m.n_tris(); ++t) {
            if (!f.tri_active[t]) continue;
            f.tri_dof[t] = f.n_scalar();
            ScalarDof d;
            d.kind = ScalarDof::Bubble;
            d.entity = t;
            const auto& v = m.tris[t].v;
            d.x = (m.node_x[v[0]] + m.node_x[v[1]] + m.node_x[v[2]]) / 3.0;
            d.y = (m.node_y[v[0]] + m.node_y[v[1]] + m.node_y[v[2]]) / 3.0;
            d.strip = m.tris[t].strip;
            f.dofs.push_back(d);
        }

    f.periodic_master.assign(f.n_scalar(), -1);
    for (const auto& p : m.periodic_nodes) {
        const int master = f.node_dof[p[0]], slave = f.node_dof[p[1]];
        if (slave < 0) continue;
        if (master < 0) throw std::logic_error("dofs: periodic slave without master");
        f.periodic_master[slave] = master;
    }
    if (elem == ElementType::P2)
        for (const auto& p : m.periodic_edges) {
            const int master = f.edge_dof[p[0]], slave = f.edge_dof[p[1]];
            if (slave < 0) continue;
            if (master < 0) throw std::logic_error("dofs: periodic slave edge without master");
            f.periodic_master[slave] = master;
        }
    return f;
}

int matching_u_sdof(const DofLayout& layout, const ScalarDof& d) {
    const FieldLayout& u = layout.field(FieldId::U);
    const int s = d.kind == ScalarDof::Node ? u.node_dof[d.entity] : u.edge_dof[d.entity];
    if (s < 0) throw std::logic_error("dofs: interface dof without a fluid-side partner");
    return s;
}

} // namespace

DofLayout build_layout(const Mesh& mesh, ProblemKind kind, ElementType velocity_elem) {
    if (mesh.geom.n_interfaces() < 1)
        throw std::invalid_argument("dofs: geometry has no coupling interface");
    if (kind == ProblemKind::StokesWave && velocity_elem == ElementType::P1)
        throw std::invalid_argument("dofs: Stokes velocity element must be P1B (mini) or P2");
    if (kind == ProblemKind::HeatWave && velocity_elem == ElementType::P1B)
        throw std::invalid_argument("dofs: heat-wave element must be P1 or P2");

    DofLayout layout;
    layout.mesh = &mesh;
    layout.kind = kind;
    layout.velocity_elem = velocity_elem;
    layout.ncomp = kind == ProblemKind::StokesWave ? 2 : 1;

    layout.fields[0] = build_field(mesh, FieldId::Eta, velocity_elem, StripRole::Solid, layout.ncomp);
    layout.fields[1] = build_field(mesh, FieldId::W, velocity_elem, StripRole::Solid, layout.ncomp);
    layout.fields[2] = build_field(mesh, FieldId::U, velocity_elem, StripRole::Fluid, layout.ncomp);
    if (kind == ProblemKind::StokesWave)
        layout.fields[3] = build_field(mesh, FieldId::Prs, ElementType::P1, StripRole::Fluid, 1);

    // interface trace pairs: every free structure dof on an interface and the
    // fluid dof sharing its entity, ordered by (tag, x)
    const FieldLayout& eta = layout.fields[0];
    for (int s = 0; s < eta.n_scalar(); ++s) {
        const ScalarDof& d = eta.dofs[s];
        if (d.interface_tag < 0 || d.dirichlet || eta.periodic_master[s] >= 0) continue;
        layout.trace.push_back({s, matching_u_sdof(layout, d), d.interface_tag, d.x});
    }
    std::sort(layout.trace.begin(), layout.trace.end(), [](const TraceDof& a, const TraceDof& b) {
        return a.tag != b.tag ? a.tag < b.tag : a.x < b.x;
    });
    return layout;
}

int local_scalar_dofs(const FieldLayout& f, const Mesh& m, int tri, int out[6]) {
    const auto& v = m.tris[tri].v;
    int n = 0;
    for (int i = 0; i < 3; ++i) out[n++] = f.node_dof[v[i]];
    if (f.elem == ElementType::P1B) {
        out[n++] = f.tri_dof[tri];
    } else if (f.elem == ElementType::P2) {
        for (int e = 0; e < 3; ++e) out[n++] = f.edge_dof[m.tri_edges[tri][e]];
    }
    for (int i = 0; i < n; ++i)
        if (out[i] < 0) throw std::logic_error("dofs: triangle outside the field's region");
    return n;
}

namespace {

// How interface dofs of the structure fields are treated in one map.
enum class TraceMode { Keep, MergeIntoU, Slot };

struct MapSpec {
    bool include[4] = {false, false, false, false};
    TraceMode eta_mode = TraceMode::Keep;
    TraceMode w_mode = TraceMode::Keep;
};

TraceMode mode_of(const MapSpec& spec, FieldId f) {
    if (f == FieldId::Eta) return spec.eta_mode;
    if (f == FieldId::W) return spec.w_mode;
    return TraceMode::Keep;
}

int resolve_periodic(const FieldLayout& f, int s) {
    while (f.periodic_master[s] >= 0) s = f.periodic_master[s];
    return s;
}

EquationMap build_map(const DofLayout& layout, const MapSpec& spec) {
    EquationMap map;
    map.n_slots = 0;

    // trace slot index per structure scalar dof
    std::vector<int> slot_of;
    const bool has_slots = spec.eta_mode == TraceMode::Slot || spec.w_mode == TraceMode::Slot;
    if (has_slots) {
        slot_of.assign(layout.field(FieldId::Eta).n_scalar(), -1);
        for (size_t ti = 0; ti < layout.trace.size(); ++ti)
            slot_of[layout.trace[ti].eta_sdof] = static_cast<int>(ti);
        map.n_slots = layout.n_trace_values();
    }

    // canonical unknowns in field order; a dof owns an unknown when it is not
    // eliminated by periodicity, interface merging, prescription, or a
    // homogeneous Dirichlet side
    for (int fi = 0; fi < 4; ++fi) {
        if (!spec.include[fi] || !layout.fields[fi].active) continue;
        const FieldLayout& f = layout.fields[fi];
        map.code[fi].assign(f.n_dofs(), EquationMap::kFixedZero);
        for (int s = 0; s < f.n_scalar(); ++s) {
            if (f.periodic_master[s] >= 0) continue;
            if (f.dofs[s].dirichlet) continue;
            if (mode_of(spec, f.id) != TraceMode::Keep && f.dofs[s].interface_tag >= 0) continue;
            for (int c = 0; c < f.ncomp; ++c) {
                map.code[fi][s * f.ncomp + c] = map.n_unknowns++;
                map.unknown_info.push_back({fi, s, c});
            }
        }
    }

    // resolve every dof to its final code
    for (int fi = 0; fi < 4; ++fi) {
        if (map.code[fi].empty()) continue;
        const FieldLayout& f = layout.fields[fi];
        for (int s0 = 0; s0 < f.n_scalar(); ++s0) {
            int s = resolve_periodic(f, s0);
            const TraceMode mode = mode_of(spec, f.id);
            if (mode != TraceMode::Keep && f.dofs[s].interface_tag >= 0) {
                if (f.dofs[s].dirichlet) continue;  // stays fixed zero
                if (mode == TraceMode::Slot) {
                    const int ti = slot_of[s];
                    if (ti < 0) throw std::logic_error("dofs: interface dof missing from trace");
                    for (int c = 0; c < f.ncomp; ++c)
                        map.code[fi][s0 * f.ncomp + c] = -2 - (ti * f.ncomp + c);
                    continue;
                }
                // merge into the fluid dof sharing the entity
                const FieldLayout& u = layout.field(FieldId::U);
                const int us = resolve_periodic(u, matching_u_sdof(layout, f.dofs[s]));
                if (u.dofs[us].dirichlet) continue;
                for (int c = 0; c < f.ncomp; ++c)
                    map.code[fi][s0 * f.ncomp + c] = map.code[2][us * u.ncomp + c];
                continue;
            }
            if (f.dofs[s].dirichlet) continue;
            for (int c = 0; c < f.ncomp; ++c)
                map.code[fi][s0 * f.ncomp + c] = map.code[fi][s * f.ncomp + c];
        }
    }
    return map;
}

} // namespace

EquationMap build_cn_map(const DofLayout& layout) {
    MapSpec spec;
    spec.include[1] = spec.include[2] = true;
    spec.include[3] = layout.has_pressure();
    spec.w_mode = TraceMode::MergeIntoU;
    return build_map(layout, spec);
}

EquationMap build_eta_poisson_map(const DofLayout& layout) {
    MapSpec spec;
    spec.include[0] = true;
    spec.eta_mode = TraceMode::Slot;
    return build_map(layout, spec);
}

void build_ritz_maps(const DofLayout& layout, EquationMap& rows, EquationMap& cols) {
    MapSpec spec;
    spec.include[0] = spec.include[2] = true;
    spec.include[3] = layout.has_pressure();
    spec.eta_mode = TraceMode::MergeIntoU;
    rows = build_map(layout, spec);
    spec.eta_mode = TraceMode::Slot;
    cols = build_map(layout, spec);
    if (rows.n_unknowns != cols.n_unknowns)
        throw std::logic_error("dofs: projection row/column maps disagree");
}

double FEField::eval(int tri, double xr, double yr, int comp) const {
    int ld[6];
    const int n = local_scalar_dofs(f(), *layout->mesh, tri, ld);
    double N[6];
    shape_values(f().elem, xr, yr, N);
    double v = 0.0;
    for (int i = 0; i < n; ++i) v += coeff[ld[i] * f().ncomp + comp] * N[i];
    return v;
}

void FEField::eval_all(int tri, double xr, double yr, double* vals) const {
    int ld[6];
    const int n = local_scalar_dofs(f(), *layout->mesh, tri, ld);
    double N[6];
    shape_values(f().elem, xr, yr, N);
    const int nc = f().ncomp;
    for (int c = 0; c < nc; ++c) vals[c] = 0.0;
    for (int i = 0; i < n; ++i)
        for (int c = 0; c < nc; ++c) vals[c] += coeff[ld[i] * nc + c] * N[i];
}

void FEField::eval_grad(int tri, double xr, double yr, const AffineMap& map,
                        double grad[][2]) const {
    int ld[6];
    const int n = local_scalar_dofs(f(), *layout->mesh, tri, ld);
    double gref[6][2];
    shape_grads(f().elem, xr, yr, gref);
    const int nc = f().ncomp;
    for (int c = 0; c < nc; ++c) grad[c][0] = grad[c][1] = 0.0;
    for (int i = 0; i < n; ++i) {
        double g[2];
        map.grad_to_physical(gref[i], g);
        for (int c = 0; c < nc; ++c) {
            grad[c][0] += coeff[ld[i] * nc + c] * g[0];
            grad[c][1] += coeff[ld[i] * nc + c] * g[1];
        }
    }
}

FEField zero_field(const DofLayout& layout, FieldId f) {
    FEField out;
    out.layout = &layout;
    out.fid = f;
    out.coeff = Vector::Zero(layout.field(f).n_dofs());
    return out;
}

FEField interpolate(const DofLayout& layout, FieldId f, const PointFn& value) {
    FEField out = zero_field(layout, f);
    const FieldLayout& fl = layout.field(f);
    for (int s = 0; s < fl.n_scalar(); ++s) {
        const ScalarDof& d = fl.dofs[s];
        if (d.kind == ScalarDof::Bubble) continue;
        for (int c = 0; c < fl.ncomp; ++c)
            out.coeff[s * fl.ncomp + c] = value(d.x, d.y, d.strip, c);
    }
    // make periodic pairs agree exactly even when the function only matches
    // them up to roundoff at x0 vs x1
    for (int s = 0; s < fl.n_scalar(); ++s)
        if (fl.periodic_master[s] >= 0)
            for (int c = 0; c < fl.ncomp; ++c)
                out.coeff[s * fl.ncomp + c] = out.coeff[fl.periodic_master[s] * fl.ncomp + c];
    return out;
}

void scatter_field(const DofLayout& layout, const EquationMap& map, const Vector& z,
                   const Vector* slot_values, FieldId f, FEField& out) {
    const int fi = static_cast<int>(f);
    if (map.code[fi].empty()) throw std::logic_error("scatter_field: field not in this map");
    const FieldLayout& fl = layout.field(f);
    out.layout = &layout;
    out.fid = f;
    out.coeff = Vector::Zero(fl.n_dofs());
    for (int k = 0; k < fl.n_dofs(); ++k) {
        const int code = map.code[fi][k];
        if (code >= 0) {
            out.coeff[k] = z[code];
        } else if (EquationMap::is_slot(code)) {
            if (!slot_values) throw std::logic_error("scatter_field: slot values required");
            out.coeff[k] = (*slot_values)[EquationMap::slot_index(code)];
        }
    }
}

Vector gather(const DofLayout& layout, const EquationMap& map,
              const std::array<const FEField*, 4>& fields) {
    Vector z(map.n_unknowns);
    for (int i = 0; i < map.n_unknowns; ++i) {
        const auto& info = map.unknown_info[i];
        const FEField* fld = fields[info[0]];
        if (!fld) throw std::logic_error("gather: missing field");
        z[i] = fld->coeff[info[1] * layout.fields[info[0]].ncomp + info[2]];
    }
    return z;
}

Vector trace_values(const DofLayout& layout, const FEField& field) {
    const int nc = layout.ncomp;
    Vector v(layout.n_trace_values());
    for (size_t ti = 0; ti < layout.trace.size(); ++ti) {
        const int s = field.fid == FieldId::U ? layout.trace[ti].u_sdof : layout.trace[ti].eta_sdof;
        for (int c = 0; c < nc; ++c) v[static_cast<int>(ti) * nc + c] = field.coeff[s * nc + c];
    }
    return v;
}

} // namespace fsifem
