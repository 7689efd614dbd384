#pragma once

#include <array>
#include <vector>

namespace fsifem {

// Reference triangle: vertices (0,0), (1,0), (0,1); barycentric coordinates
// l1 = 1-x-y, l2 = x, l3 = y.  Local shape ordering:
//   P1  : vertex hats (l1, l2, l3)
//   P1B : P1 plus the cubic bubble 27*l1*l2*l3 (zero trace on all edges)
//   P2  : vertex functions li*(2li-1), then edge midpoints 4*l1*l2 (edge v0v1),
//         4*l2*l3 (edge v1v2), 4*l3*l1 (edge v2v0)
enum class ElementType { P1, P1B, P2 };

int n_shape(ElementType e);
int poly_order(ElementType e);          // approximation order k (P1B counts as 1)

void shape_values(ElementType e, double x, double y, double* N);
void shape_grads(ElementType e, double x, double y, double grad[][2]);  // d/dx, d/dy on the reference cell

// Symmetric quadrature on the reference triangle; weights are positive and sum
// to the reference area 1/2.  Returns the smallest stored rule whose exactness
// degree is >= `degree` (stored degrees: 1, 2, 4, 5, 6, 8, 10).
struct QuadratureRule {
    int degree = 0;
    std::vector<std::array<double, 2>> pts;   // reference (x, y)
    std::vector<double> w;
    int size() const { return static_cast<int>(w.size()); }
};
const QuadratureRule& triangle_rule(int degree);

// Gauss-Legendre on [0,1], exact for polynomials of degree 2n-1.
struct GaussRule1D {
    std::vector<double> x, w;
    int size() const { return static_cast<int>(w.size()); }
};
const GaussRule1D& gauss_rule_1d(int npoints);

// Affine map from the reference triangle onto a physical triangle.  Physical
// quadrature weights are reference weights scaled by |det J|; gradients map as
// grad_phys = J^{-T} grad_ref.
struct AffineMap {
    double x0, y0;          // image of the reference origin
    double J[2][2];
    double det;             // signed; positive for CCW vertex order
    double invJT[2][2];

    void to_physical(double xr, double yr, double& x, double& y) const {
        x = x0 + J[0][0] * xr + J[0][1] * yr;
        y = y0 + J[1][0] * xr + J[1][1] * yr;
    }
    void grad_to_physical(const double gref[2], double gphys[2]) const {
        gphys[0] = invJT[0][0] * gref[0] + invJT[0][1] * gref[1];
        gphys[1] = invJT[1][0] * gref[0] + invJT[1][1] * gref[1];
    }
};
AffineMap affine_map(const double* xa, const double* xb, const double* xc);

} // namespace fsifem
