#include "fsifem/forms.hpp"

#include <cmath>
#include <stdexcept>

namespace fsifem {

namespace {

// rows x cols component counts of each kind, given the vector dimension
void kind_comps(BilinearKind kind, int ncomp, int& ncr, int& ncc) {
    switch (kind) {
        case BilinearKind::Mass:
        case BilinearKind::GradGrad:
        case BilinearKind::SymGrad:
            ncr = ncc = ncomp;
            break;
        case BilinearKind::DivPressure:
            ncr = ncomp;
            ncc = 1;
            break;
        case BilinearKind::PressureDiv:
            ncr = 1;
            ncc = ncomp;
            break;
    }
}

struct EdgeInc {
    int tri[2] = {-1, -1};
    int le[2] = {-1, -1};
    int n = 0;
};

std::vector<EdgeInc> edge_incidence(const Mesh& m) {
    std::vector<EdgeInc> inc(m.edges.size());
    for (int t = 0; t < m.n_tris(); ++t)
        for (int e = 0; e < 3; ++e) {
            EdgeInc& x = inc[m.tri_edges[t][e]];
            if (x.n < 2) {
                x.tri[x.n] = t;
                x.le[x.n] = e;
            }
            ++x.n;
        }
    return inc;
}

// local edge e runs from local vertex e to e+1 on the reference cell
void edge_ref_point(int le, double s, double& xr, double& yr) {
    static const double V[3][2] = {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
    const int a = le, b = (le + 1) % 3;
    xr = V[a][0] + s * (V[b][0] - V[a][0]);
    yr = V[a][1] + s * (V[b][1] - V[a][1]);
}

int pick_active_tri(const FieldLayout& f, const EdgeInc& inc, int& le) {
    for (int k = 0; k < std::min(inc.n, 2); ++k)
        if (f.tri_active[inc.tri[k]]) {
            le = inc.le[k];
            return inc.tri[k];
        }
    throw std::logic_error("forms: edge has no adjacent triangle in the field's region");
}

} // namespace

Eigen::MatrixXd local_element_matrix(const Mesh& m, int tri, ElementType row_elem,
                                     ElementType col_elem, BilinearKind kind, int ncomp,
                                     int quad_degree) {
    int ncr, ncc;
    kind_comps(kind, ncomp, ncr, ncc);
    const int nr = n_shape(row_elem), nc = n_shape(col_elem);
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(nr * ncr, nc * ncc);

    const AffineMap map = m.tri_map(tri);
    const QuadratureRule& rule = triangle_rule(quad_degree);
    double Nr[6], Nc[6], gr_ref[6][2], gc_ref[6][2], gr[6][2], gc[6][2];

    for (int q = 0; q < rule.size(); ++q) {
        const double xr = rule.pts[q][0], yr = rule.pts[q][1];
        const double w = rule.w[q] * std::abs(map.det);
        shape_values(row_elem, xr, yr, Nr);
        shape_values(col_elem, xr, yr, Nc);
        shape_grads(row_elem, xr, yr, gr_ref);
        shape_grads(col_elem, xr, yr, gc_ref);
        for (int i = 0; i < nr; ++i) map.grad_to_physical(gr_ref[i], gr[i]);
        for (int j = 0; j < nc; ++j) map.grad_to_physical(gc_ref[j], gc[j]);

        switch (kind) {
            case BilinearKind::Mass:
                for (int i = 0; i < nr; ++i)
                    for (int j = 0; j < nc; ++j) {
                        const double v = w * Nr[i] * Nc[j];
                        for (int c = 0; c < ncr; ++c) M(i * ncr + c, j * ncc + c) += v;
                    }
                break;
            case BilinearKind::GradGrad:
                for (int i = 0; i < nr; ++i)
                    for (int j = 0; j < nc; ++j) {
                        const double v = w * (gr[i][0] * gc[j][0] + gr[i][1] * gc[j][1]);
                        for (int c = 0; c < ncr; ++c) M(i * ncr + c, j * ncc + c) += v;
                    }
                break;
            case BilinearKind::SymGrad:
                // D(phi_j e_b) : D(phi_i e_a) = (grad_i . grad_j) delta_ab / 2
                //                             + (d_a phi_j)(d_b phi_i) / 2
                for (int i = 0; i < nr; ++i)
                    for (int j = 0; j < nc; ++j) {
                        const double dot = gr[i][0] * gc[j][0] + gr[i][1] * gc[j][1];
                        for (int a = 0; a < ncr; ++a)
                            for (int b = 0; b < ncc; ++b)
                                M(i * ncr + a, j * ncc + b) +=
                                    w * 0.5 * ((a == b ? dot : 0.0) + gc[j][a] * gr[i][b]);
                    }
                break;
            case BilinearKind::DivPressure:
                // (psi_j, div(phi_i e_a)) = psi_j d_a phi_i
                for (int i = 0; i < nr; ++i)
                    for (int j = 0; j < nc; ++j)
                        for (int a = 0; a < ncr; ++a) M(i * ncr + a, j) += w * Nc[j] * gr[i][a];
                break;
            case BilinearKind::PressureDiv:
                // (div(phi_j e_b), psi_i) = (d_b phi_j) psi_i
                for (int i = 0; i < nr; ++i)
                    for (int j = 0; j < nc; ++j)
                        for (int b = 0; b < ncc; ++b) M(i, j * ncc + b) += w * Nr[i] * gc[j][b];
                break;
        }
    }
    return M;
}

void assemble_bilinear(const DofLayout& layout, FieldId row_f, FieldId col_f, BilinearKind kind,
                       const EquationMap& rows, const EquationMap& cols, double scale,
                       int quad_degree, std::vector<Triplet>& A, std::vector<Triplet>* slots) {
    const Mesh& m = *layout.mesh;
    const FieldLayout& fr = layout.field(row_f);
    const FieldLayout& fc = layout.field(col_f);
    int ncr, ncc;
    kind_comps(kind, layout.ncomp, ncr, ncc);
    if (ncr != fr.ncomp || ncc != fc.ncomp)
        throw std::logic_error("assemble_bilinear: kind does not fit the field pair");
    const int rfi = static_cast<int>(row_f), cfi = static_cast<int>(col_f);
    if (rows.code[rfi].empty() || cols.code[cfi].empty())
        throw std::logic_error("assemble_bilinear: field missing from map");

    int ldr[6], ldc[6];
    for (int t = 0; t < m.n_tris(); ++t) {
        if (!fr.tri_active[t] || !fc.tri_active[t]) continue;
        const Eigen::MatrixXd M =
            local_element_matrix(m, t, fr.elem, fc.elem, kind, layout.ncomp, quad_degree);
        const int nr = local_scalar_dofs(fr, m, t, ldr);
        const int nc = local_scalar_dofs(fc, m, t, ldc);
        for (int i = 0; i < nr; ++i)
            for (int a = 0; a < ncr; ++a) {
                const int row = rows.code[rfi][ldr[i] * ncr + a];
                if (row < 0) continue;
                for (int j = 0; j < nc; ++j)
                    for (int b = 0; b < ncc; ++b) {
                        const int col = cols.code[cfi][ldc[j] * ncc + b];
                        const double v = scale * M(i * ncr + a, j * ncc + b);
                        if (col >= 0) {
                            A.emplace_back(row, col, v);
                        } else if (EquationMap::is_slot(col)) {
                            if (!slots)
                                throw std::logic_error(
                                    "assemble_bilinear: prescribed column without a slot sink");
                            slots->emplace_back(row, EquationMap::slot_index(col), v);
                        }
                    }
            }
    }
}

void apply_bilinear(const DofLayout& layout, FieldId row_f, BilinearKind kind,
                    const EquationMap& rows, const FEField& arg, double scale, int quad_degree,
                    Vector& rhs) {
    const Mesh& m = *layout.mesh;
    const FieldLayout& fr = layout.field(row_f);
    const FieldLayout& fc = arg.f();
    int ncr, ncc;
    kind_comps(kind, layout.ncomp, ncr, ncc);
    if (ncr != fr.ncomp || ncc != fc.ncomp)
        throw std::logic_error("apply_bilinear: kind does not fit the field pair");
    const int rfi = static_cast<int>(row_f);

    int ldr[6], ldc[6];
    for (int t = 0; t < m.n_tris(); ++t) {
        if (!fr.tri_active[t] || !fc.tri_active[t]) continue;
        const Eigen::MatrixXd M =
            local_element_matrix(m, t, fr.elem, fc.elem, kind, layout.ncomp, quad_degree);
        const int nr = local_scalar_dofs(fr, m, t, ldr);
        const int nc = local_scalar_dofs(fc, m, t, ldc);
        Eigen::VectorXd x(nc * ncc);
        for (int j = 0; j < nc; ++j)
            for (int b = 0; b < ncc; ++b) x[j * ncc + b] = arg.coeff[ldc[j] * ncc + b];
        const Eigen::VectorXd y = M * x;
        for (int i = 0; i < nr; ++i)
            for (int a = 0; a < ncr; ++a) {
                const int row = rows.code[rfi][ldr[i] * ncr + a];
                if (row >= 0) rhs[row] += scale * y[i * ncr + a];
            }
    }
}

void add_exact_bilinear_load(const DofLayout& layout, FieldId row_f, BilinearKind kind,
                             const EquationMap& rows, const ExactField& arg, double scale,
                             int quad_degree, Vector& rhs) {
    const Mesh& m = *layout.mesh;
    const FieldLayout& fr = layout.field(row_f);
    const int rfi = static_cast<int>(row_f);
    const QuadratureRule& rule = triangle_rule(quad_degree);

    int ld[6];
    double N[6], gref[6][2], g[6][2];
    double vals[2], agrad[2][2];
    for (int t = 0; t < m.n_tris(); ++t) {
        if (!fr.tri_active[t]) continue;
        const AffineMap map = m.tri_map(t);
        const int nr = local_scalar_dofs(fr, m, t, ld);
        const int strip = m.tris[t].strip;
        for (int q = 0; q < rule.size(); ++q) {
            const double xr = rule.pts[q][0], yr = rule.pts[q][1];
            const double w = scale * rule.w[q] * std::abs(map.det);
            double x, y;
            map.to_physical(xr, yr, x, y);
            shape_values(fr.elem, xr, yr, N);
            shape_grads(fr.elem, xr, yr, gref);
            for (int i = 0; i < nr; ++i) map.grad_to_physical(gref[i], g[i]);

            switch (kind) {
                case BilinearKind::Mass:
                    arg.value(x, y, strip, vals);
                    for (int i = 0; i < nr; ++i)
                        for (int c = 0; c < fr.ncomp; ++c) {
                            const int row = rows.code[rfi][ld[i] * fr.ncomp + c];
                            if (row >= 0) rhs[row] += w * vals[c] * N[i];
                        }
                    break;
                case BilinearKind::GradGrad:
                    arg.grad(x, y, strip, agrad);
                    for (int i = 0; i < nr; ++i)
                        for (int c = 0; c < fr.ncomp; ++c) {
                            const int row = rows.code[rfi][ld[i] * fr.ncomp + c];
                            if (row >= 0)
                                rhs[row] += w * (agrad[c][0] * g[i][0] + agrad[c][1] * g[i][1]);
                        }
                    break;
                case BilinearKind::SymGrad: {
                    // D(arg) : D(phi_i e_c) = (D(arg) grad phi_i)_c
                    arg.grad(x, y, strip, agrad);
                    const double D00 = agrad[0][0];
                    const double D01 = 0.5 * (agrad[0][1] + agrad[1][0]);
                    const double D11 = agrad[1][1];
                    for (int i = 0; i < nr; ++i) {
                        const double r0 = D00 * g[i][0] + D01 * g[i][1];
                        const double r1 = D01 * g[i][0] + D11 * g[i][1];
                        const int row0 = rows.code[rfi][ld[i] * fr.ncomp + 0];
                        const int row1 = rows.code[rfi][ld[i] * fr.ncomp + 1];
                        if (row0 >= 0) rhs[row0] += w * r0;
                        if (row1 >= 0) rhs[row1] += w * r1;
                    }
                    break;
                }
                case BilinearKind::DivPressure:
                    // (p, div(phi_i e_c)) with a scalar argument
                    arg.value(x, y, strip, vals);
                    for (int i = 0; i < nr; ++i)
                        for (int c = 0; c < fr.ncomp; ++c) {
                            const int row = rows.code[rfi][ld[i] * fr.ncomp + c];
                            if (row >= 0) rhs[row] += w * vals[0] * g[i][c];
                        }
                    break;
                case BilinearKind::PressureDiv:
                    // (div arg, psi_i) on pressure rows
                    arg.grad(x, y, strip, agrad);
                    for (int i = 0; i < nr; ++i) {
                        const int row = rows.code[rfi][ld[i]];
                        if (row >= 0) rhs[row] += w * (agrad[0][0] + agrad[1][1]) * N[i];
                    }
                    break;
            }
        }
    }
}

void add_volume_load(const DofLayout& layout, FieldId f, const EquationMap& rows,
                     const VolumeFn& fn, double scale, int quad_degree, Vector& rhs) {
    ExactField arg;
    arg.ncomp = layout.field(f).ncomp;
    arg.value = [&fn, nc = arg.ncomp](double x, double y, int strip, double* vals) {
        for (int c = 0; c < nc; ++c) vals[c] = fn(x, y, strip, c);
    };
    add_exact_bilinear_load(layout, f, BilinearKind::Mass, rows, arg, scale, quad_degree, rhs);
}

namespace {

// shared 1d edge quadrature loop; fn(x, y, comp) -> load density
template <class Fn>
void edge_load(const DofLayout& layout, const FieldLayout& fr, const EquationMap& rows, int tri,
               int le, const Fn& fn, double scale, int gauss_points, Vector& rhs) {
    const Mesh& m = *layout.mesh;
    const int rfi = static_cast<int>(fr.id);
    const GaussRule1D& g1 = gauss_rule_1d(gauss_points);
    const AffineMap map = m.tri_map(tri);
    const int a = m.tris[tri].v[le], b = m.tris[tri].v[(le + 1) % 3];
    const double len = std::hypot(m.node_x[b] - m.node_x[a], m.node_y[b] - m.node_y[a]);

    int ld[6];
    double N[6];
    const int nr = local_scalar_dofs(fr, m, tri, ld);
    for (int q = 0; q < g1.size(); ++q) {
        double xr, yr;
        edge_ref_point(le, g1.x[q], xr, yr);
        double x, y;
        map.to_physical(xr, yr, x, y);
        shape_values(fr.elem, xr, yr, N);
        const double w = scale * g1.w[q] * len;
        for (int i = 0; i < nr; ++i)
            for (int c = 0; c < fr.ncomp; ++c) {
                const int row = rows.code[rfi][ld[i] * fr.ncomp + c];
                if (row >= 0) rhs[row] += w * fn(x, y, c) * N[i];
            }
    }
}

} // namespace

void add_boundary_load(const DofLayout& layout, FieldId f, const EquationMap& rows,
                       const BoundaryFn& fn, double scale, int gauss_points, Vector& rhs) {
    const Mesh& m = *layout.mesh;
    const FieldLayout& fr = layout.field(f);
    const auto inc = edge_incidence(m);
    for (const auto& be : m.boundary_edges) {
        if (m.geom.side_bc(be.side) != BcType::NeumannTraction) continue;
        if (m.geom.roles[be.strip] != fr.region) continue;
        int le;
        const int tri = pick_active_tri(fr, inc[be.edge_id], le);
        edge_load(layout, fr, rows, tri, le,
                  [&](double x, double y, int c) { return fn(be.side, be.strip, x, y, c); }, scale,
                  gauss_points, rhs);
    }
}

void add_interface_load(const DofLayout& layout, FieldId f, const EquationMap& rows,
                        const InterfaceFn& fn, double scale, int gauss_points, Vector& rhs) {
    const Mesh& m = *layout.mesh;
    const FieldLayout& fr = layout.field(f);
    const auto inc = edge_incidence(m);
    for (const auto& ie : m.interface_edges) {
        int le;
        const int tri = pick_active_tri(fr, inc[ie.edge_id], le);
        edge_load(layout, fr, rows, tri, le,
                  [&](double x, double, int c) { return fn(ie.tag, x, c); }, scale, gauss_points,
                  rhs);
    }
}

namespace {

template <class PerPoint>
void region_quadrature(const FEField& f, int quad_degree, const PerPoint& acc) {
    const Mesh& m = *f.layout->mesh;
    const FieldLayout& fl = f.f();
    const QuadratureRule& rule = triangle_rule(quad_degree);
    for (int t = 0; t < m.n_tris(); ++t) {
        if (!fl.tri_active[t]) continue;
        const AffineMap map = m.tri_map(t);
        for (int q = 0; q < rule.size(); ++q) {
            const double w = rule.w[q] * std::abs(map.det);
            acc(t, rule.pts[q][0], rule.pts[q][1], map, w);
        }
    }
}

} // namespace

ErrorNorms error_vs_exact(const FEField& fh, const ExactField& exact, int quad_degree) {
    const Mesh& m = *fh.layout->mesh;
    const int nc = fh.f().ncomp;
    double l2 = 0.0, h1 = 0.0;
    region_quadrature(fh, quad_degree,
                      [&](int t, double xr, double yr, const AffineMap& map, double w) {
                          double x, y;
                          map.to_physical(xr, yr, x, y);
                          const int strip = m.tris[t].strip;
                          double vh[2], ve[2], gh[2][2], ge[2][2];
                          fh.eval_all(t, xr, yr, vh);
                          exact.value(x, y, strip, ve);
                          fh.eval_grad(t, xr, yr, map, gh);
                          exact.grad(x, y, strip, ge);
                          for (int c = 0; c < nc; ++c) {
                              const double e = vh[c] - ve[c];
                              l2 += w * e * e;
                              for (int d = 0; d < 2; ++d) {
                                  const double eg = gh[c][d] - ge[c][d];
                                  h1 += w * eg * eg;
                              }
                          }
                      });
    return {std::sqrt(l2), std::sqrt(h1)};
}

ErrorNorms diff_norms(const FEField& a, const FEField& b, int quad_degree) {
    if (a.coeff.size() != b.coeff.size() || a.f().elem != b.f().elem)
        throw std::invalid_argument("diff_norms: fields live in different spaces");
    FEField d = a;
    d.coeff -= b.coeff;
    return {std::sqrt(l2_sq(d, quad_degree)), std::sqrt(h1semi_sq(d, quad_degree))};
}

double l2_sq(const FEField& f, int quad_degree) {
    const int nc = f.f().ncomp;
    double acc = 0.0;
    region_quadrature(f, quad_degree, [&](int t, double xr, double yr, const AffineMap&, double w) {
        double v[2];
        f.eval_all(t, xr, yr, v);
        for (int c = 0; c < nc; ++c) acc += w * v[c] * v[c];
    });
    return acc;
}

double h1semi_sq(const FEField& f, int quad_degree) {
    const int nc = f.f().ncomp;
    double acc = 0.0;
    region_quadrature(f, quad_degree,
                      [&](int t, double xr, double yr, const AffineMap& map, double w) {
                          double g[2][2];
                          f.eval_grad(t, xr, yr, map, g);
                          for (int c = 0; c < nc; ++c)
                              acc += w * (g[c][0] * g[c][0] + g[c][1] * g[c][1]);
                      });
    return acc;
}

double symgrad_sq(const FEField& f, int quad_degree) {
    if (f.f().ncomp != 2) throw std::invalid_argument("symgrad_sq: vector field required");
    double acc = 0.0;
    region_quadrature(f, quad_degree,
                      [&](int t, double xr, double yr, const AffineMap& map, double w) {
                          double g[2][2];
                          f.eval_grad(t, xr, yr, map, g);
                          const double d01 = 0.5 * (g[0][1] + g[1][0]);
                          acc += w * (g[0][0] * g[0][0] + 2.0 * d01 * d01 + g[1][1] * g[1][1]);
                      });
    return acc;
}

double divergence_l2(const FEField& f, int quad_degree) {
    if (f.f().ncomp != 2) throw std::invalid_argument("divergence_l2: vector field required");
    double acc = 0.0;
    region_quadrature(f, quad_degree,
                      [&](int t, double xr, double yr, const AffineMap& map, double w) {
                          double g[2][2];
                          f.eval_grad(t, xr, yr, map, g);
                          const double d = g[0][0] + g[1][1];
                          acc += w * d * d;
                      });
    return std::sqrt(acc);
}

} // namespace fsifem
