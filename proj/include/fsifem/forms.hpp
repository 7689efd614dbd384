#pragma once

#include "fsifem/dofs.hpp"

#include <functional>

namespace fsifem {

// Bilinear building blocks of the coupled system.  Vector shape functions are
// phi_i e_c (scalar basis times unit vector); dof order is scalar-major,
// component-minor, matching FieldLayout.
//   Mass        : (phi_j e_ct, phi_i e_cs)
//   GradGrad    : (grad phi_j e_ct, grad phi_i e_cs)
//   SymGrad     : (D(phi_j e_ct), D(phi_i e_cs)), D(v) = (grad v + grad v^T)/2
//   DivPressure : (psi_j, div(phi_i e_cs))     velocity rows, pressure columns
//   PressureDiv : (div(phi_j e_ct), psi_i)     pressure rows, velocity columns
enum class BilinearKind { Mass, GradGrad, SymGrad, DivPressure, PressureDiv };

// Dense element matrix on one triangle, exact up to the quadrature degree.
Eigen::MatrixXd local_element_matrix(const Mesh& m, int tri, ElementType row_elem,
                                     ElementType col_elem, BilinearKind kind, int ncomp,
                                     int quad_degree);

// Global assembly.  Row/column codes come from the equation maps; merged and
// periodic dofs accumulate, fixed-zero columns drop, and prescribed columns go
// into `slots` (row = equation, col = slot index) when a map defines slots.
void assemble_bilinear(const DofLayout& layout, FieldId row_f, FieldId col_f, BilinearKind kind,
                       const EquationMap& rows, const EquationMap& cols, double scale,
                       int quad_degree, std::vector<Triplet>& A, std::vector<Triplet>* slots);

// rhs[row] += scale * a(arg, test), with `arg` a finite element field given by
// its full coefficient vector.  Uses the same element matrices as
// assemble_bilinear, so matrix-vector identities hold to roundoff.
void apply_bilinear(const DofLayout& layout, FieldId row_f, BilinearKind kind,
                    const EquationMap& rows, const FEField& arg, double scale, int quad_degree,
                    Vector& rhs);

// Analytic field on one region: value(x, y, strip, vals) fills ncomp values,
// grad fills grad[c][d] = d(component c)/d(x_d).
struct ExactField {
    int ncomp = 1;
    std::function<void(double, double, int, double*)> value;
    std::function<void(double, double, int, double (*)[2])> grad;
};

// rhs[row] += scale * a(exact, test) for the same bilinear kinds; used by the
// projection systems where the argument is known analytically.
void add_exact_bilinear_load(const DofLayout& layout, FieldId row_f, BilinearKind kind,
                             const EquationMap& rows, const ExactField& arg, double scale,
                             int quad_degree, Vector& rhs);

// rhs[row(i,c)] += scale * (f, phi_i e_c) over the field's region.
using VolumeFn = std::function<double(double, double, int, int)>;  // x, y, strip, comp
void add_volume_load(const DofLayout& layout, FieldId f, const EquationMap& rows,
                     const VolumeFn& fn, double scale, int quad_degree, Vector& rhs);

// rhs += scale * (g, phi_i e_c) over outer NeumannTraction sides bordering the
// field's region.  The callback sees which side and strip it is on.
using BoundaryFn = std::function<double(Side, int, double, double, int)>;  // side, strip, x, y, comp
void add_boundary_load(const DofLayout& layout, FieldId f, const EquationMap& rows,
                       const BoundaryFn& fn, double scale, int gauss_points, Vector& rhs);

// rhs += scale * (j, phi_i e_c) over the coupling interfaces, with test
// functions taken from the field's side of each interface.
using InterfaceFn = std::function<double(int, double, int)>;  // tag, x, comp
void add_interface_load(const DofLayout& layout, FieldId f, const EquationMap& rows,
                        const InterfaceFn& fn, double scale, int gauss_points, Vector& rhs);

// L2 and H1-seminorm errors over the field's region.
struct ErrorNorms {
    double l2 = 0.0;
    double h1 = 0.0;
};
ErrorNorms error_vs_exact(const FEField& fh, const ExactField& exact, int quad_degree);
ErrorNorms diff_norms(const FEField& a, const FEField& b, int quad_degree);

double l2_sq(const FEField& f, int quad_degree);       // integral of |f|^2
double h1semi_sq(const FEField& f, int quad_degree);   // integral of |grad f|^2
double symgrad_sq(const FEField& f, int quad_degree);  // integral of D(f):D(f)
double divergence_l2(const FEField& f, int quad_degree);

} // namespace fsifem
