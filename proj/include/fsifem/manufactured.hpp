#pragma once

#include "fsifem/dofs.hpp"
#include "fsifem/forms.hpp"

#include <functional>
#include <string>
#include <vector>

namespace fsifem {

// Time-dependent analytic field, defined piecewise per strip (the structure
// displacement differs between solid strips in the channel case).
struct TimeField {
    std::function<void(double, double, int, double, double*)> value;        // x, y, strip, t
    std::function<void(double, double, int, double, double (*)[2])> grad;   // grad[c][d]
};

// One benchmark problem: geometry, exact fields when available, and every
// source needed to make the discrete scheme consistent with them.
struct CaseDef {
    std::string name;
    ProblemKind kind{};
    GeometrySpec geom;
    double T = 0.25;
    bool has_exact = false;

    TimeField u, p, eta, w;  // p is scalar (component 0); w = time derivative of eta

    std::function<double(double, double, int, double, int)> f_fluid;   // x, y, strip, t, comp
    std::function<double(double, double, int, double, int)> f_solid;
    std::function<double(double, double, int, double)> g_mass;         // continuity source
    std::function<double(Side, int, double, double, double, int)> g_boundary;  // side, strip, x, y, t, comp
    std::function<double(int, double, double, int)> j_interface;       // tag, x, t, comp

    int ncomp() const { return kind == ProblemKind::StokesWave ? 2 : 1; }
};

// Periodic channel with a gamma-scaled oscillatory exact solution.  The
// chosen velocity is not divergence-free and the chosen displacement does not
// satisfy the homogeneous wave equation, so a continuity source and a solid
// body force are attached; the interface jump is identically zero.
CaseDef channel_periodic_case(double gamma, double length);

// Unit square, traction inflow at x=0, no exact solution.  The overload
// accepts a solid|fluid|solid geometry with moved interface levels; the
// inflow profile vanishes at whatever the levels are.
CaseDef traction_case();
CaseDef traction_case(GeometrySpec geom);

// Scalar heat-wave system with homogeneous Dirichlet data.
CaseDef heat_wave_case();

// Reproduction data contained in every FE space: constant velocity, zero
// pressure, displacement affine in space growing linearly in time.
CaseDef compatible_case();

// Snapshot adapters binding a TimeField at a fixed time.
ExactField exact_at(const TimeField& f, int ncomp, double t);
PointFn point_value(const TimeField& f, int ncomp, double t);

// Strong-form residual oracle: differentiates the exact-field evaluators by
// 4th-order central differences (step 1e-4) and checks the PDE residuals,
// interface conditions, boundary data, and the analytic gradients themselves
// at randomly sampled points.  PASS iff the largest residual is <= 1e-6.
struct VerifyReport {
    struct Line {
        std::string check;
        double max_residual;
    };
    std::vector<Line> lines;
    double max_residual = 0.0;
    int n_checks = 0;
    bool pass = false;
};
VerifyReport verify_sources(const CaseDef& c, int n_samples, unsigned seed);

} // namespace fsifem
