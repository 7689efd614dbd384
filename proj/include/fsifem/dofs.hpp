#pragma once

#include "fsifem/linalg.hpp"
#include "fsifem/mesh.hpp"

#include <array>
#include <functional>
#include <vector>

namespace fsifem {

// Four fields at most: structure displacement (eta), structure velocity (w),
// fluid velocity (u), pressure.  The scalar heat-wave problem uses the same
// layout with one component and no pressure; "fluid" then means the heat
// region and "solid" the wave region.
enum class FieldId { Eta = 0, W = 1, U = 2, Prs = 3 };
enum class ProblemKind { StokesWave, HeatWave };

struct ScalarDof {
    enum Kind { Node, EdgeMid, Bubble } kind;
    int entity;                 // node/edge/triangle id
    double x, y;
    int strip;                  // resident strip (for evaluating per-strip data)
    int interface_tag = -1;     // >= 0 when the dof sits on an interface level
    unsigned side_mask = 0;     // bit i set when on outer side i
    bool dirichlet = false;     // on a DirichletZero side
};

struct FieldLayout {
    bool active = false;
    FieldId id{};
    ElementType elem{};
    StripRole region{};
    int ncomp = 0;

    std::vector<int> node_dof, edge_dof, tri_dof;   // entity -> scalar dof, -1 if absent
    std::vector<ScalarDof> dofs;
    std::vector<int> periodic_master;               // scalar dof -> master, -1 if none
    std::vector<char> tri_active;                   // triangle in this field's region

    int n_scalar() const { return static_cast<int>(dofs.size()); }
    int n_dofs() const { return n_scalar() * ncomp; }
};

// Matching interface dofs of the structure and fluid velocity spaces (same
// node/edge entity seen from both sides), ordered by (tag, x).  Periodic
// slaves and Dirichlet-pinned dofs are excluded; this is the state vector
// layout of the interface trace ODE.
struct TraceDof {
    int eta_sdof, u_sdof;
    int tag;
    double x;
};

struct DofLayout {
    const Mesh* mesh = nullptr;
    ProblemKind kind{};
    ElementType velocity_elem{};
    int ncomp = 1;
    std::array<FieldLayout, 4> fields;
    std::vector<TraceDof> trace;

    bool has_pressure() const { return fields[3].active; }
    const FieldLayout& field(FieldId f) const { return fields[static_cast<int>(f)]; }
    int n_trace_values() const { return static_cast<int>(trace.size()) * ncomp; }
};

DofLayout build_layout(const Mesh& mesh, ProblemKind kind, ElementType velocity_elem);

// scalar dofs of a field on one triangle, in local shape order; returns count
int local_scalar_dofs(const FieldLayout& f, const Mesh& m, int tri, int out[6]);

// Reduced equation numbering for one linear system.  Every (field, scalar
// dof, component) resolves to an unknown index, to the fixed value zero
// (Dirichlet elimination), or to a prescribed slot (interface trace values in
// the projection systems).  Interface aliasing and periodic identification
// are applied before classification, so merged rows/columns share indices.
struct EquationMap {
    static constexpr int kFixedZero = -1;
    std::array<std::vector<int>, 4> code;           // >=0 unknown, -1 fixed zero, <=-2 slot -2-c
    int n_unknowns = 0;
    int n_slots = 0;
    std::vector<std::array<int, 3>> unknown_info;   // unknown -> canonical (field, sdof, comp)

    bool includes(FieldId f) const { return !code[static_cast<int>(f)].empty(); }
    int at(FieldId f, int sdof, int comp, int ncomp) const {
        return code[static_cast<int>(f)][sdof * ncomp + comp];
    }
    static bool is_slot(int c) { return c <= -2; }
    static int slot_index(int c) { return -2 - c; }
};

// Crank-Nicolson step system: unknowns (w, u, p), w aliased to u on interfaces.
EquationMap build_cn_map(const DofLayout& layout);

// Poisson projection of the initial displacement: eta alone, interface trace
// prescribed (slots), natural elsewhere except DirichletZero sides.
EquationMap build_eta_poisson_map(const DofLayout& layout);

// Stationary projection system: unknowns (eta interior, u, p).  Trial-side
// interface values of eta are prescribed slots; test-side interface rows merge
// into the fluid rows.  Both maps share one unknown enumeration.
void build_ritz_maps(const DofLayout& layout, EquationMap& rows, EquationMap& cols);

struct FEField {
    const DofLayout* layout = nullptr;
    FieldId fid{};
    Vector coeff;

    const FieldLayout& f() const { return layout->field(fid); }
    double eval(int tri, double xr, double yr, int comp) const;
    void eval_all(int tri, double xr, double yr, double* vals) const;
    // grad[c][d] = d(component c)/d(x_d)
    void eval_grad(int tri, double xr, double yr, const AffineMap& map, double grad[][2]) const;
};

FEField zero_field(const DofLayout& layout, FieldId f);

// Nodal interpolation: vertex/midpoint values from the callback, bubble
// amplitudes zero.  value(x, y, strip, comp).
using PointFn = std::function<double(double, double, int, int)>;
FEField interpolate(const DofLayout& layout, FieldId f, const PointFn& value);

// Solution transfer between a reduced vector and per-field coefficients.
void scatter_field(const DofLayout& layout, const EquationMap& map, const Vector& z,
                   const Vector* slot_values, FieldId f, FEField& out);
Vector gather(const DofLayout& layout, const EquationMap& map,
              const std::array<const FEField*, 4>& fields);

// Interface trace values of a structure-side or fluid-side field, in trace
// slot order (trace dof major, component minor).
Vector trace_values(const DofLayout& layout, const FEField& field);

} // namespace fsifem
