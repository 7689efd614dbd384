// Monolithic Crank-Nicolson time stepper for the coupled fluid/structure
// system.  The structure displacement is eliminated via the trapezoidal update
// eta^{n+1} = eta^n + (tau/2)(w^{n+1} + w^n), leaving (w, u, p) as unknowns
// with the kinematic coupling w = u built into the equation map.  The step
// matrix is time-independent and factorized once.

#include "fsifem/stepper.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace fsifem {

namespace {

BilinearKind viscous_kind(ProblemKind k) {
    return k == ProblemKind::StokesWave ? BilinearKind::SymGrad : BilinearKind::GradGrad;
}

} // namespace

FEField project_initial_displacement(const DofLayout& layout, const CaseDef& c, double t) {
    if (!c.has_exact)
        throw std::invalid_argument("project_initial_displacement: case '" + c.name +
                                    "' has no exact fields");
    const int nc = layout.ncomp;
    FEField ih = interpolate(layout, FieldId::Eta, point_value(c.eta, nc, t));
    Vector slots = trace_values(layout, ih);

    EquationMap map = build_eta_poisson_map(layout);
    std::vector<Triplet> at, ct;
    assemble_bilinear(layout, FieldId::Eta, FieldId::Eta, BilinearKind::GradGrad, map, map, 1.0,
                      kAssemblyDegree, at, &ct);
    SparseMatrix A = finalize(map.n_unknowns, map.n_unknowns, at);
    SparseMatrix C = finalize(map.n_unknowns, map.n_slots, ct);
    DirectSolver solver;
    solver.factorize(A, "initial displacement projection");

    // (grad eta_h, grad xi) = (grad eta, grad xi) with the interface trace of
    // eta_h pinned to the trace of the nodal interpolant.
    Vector rhs = Vector::Zero(map.n_unknowns);
    add_exact_bilinear_load(layout, FieldId::Eta, BilinearKind::GradGrad, map,
                            exact_at(c.eta, nc, t), 1.0, kAssemblyDegree, rhs);
    rhs -= C * slots;

    Vector z = solver.solve(rhs);
    FEField out = zero_field(layout, FieldId::Eta);
    scatter_field(layout, map, z, &slots, FieldId::Eta, out);
    return out;
}

CnStepper::CnStepper(const DofLayout& layout, const CaseDef& c, double tau)
    : layout_(&layout), case_(&c), tau_(tau), map_(build_cn_map(layout)) {
    if (tau == 0.0) throw std::invalid_argument("CnStepper: tau must be nonzero");
    if (layout.kind != c.kind)
        throw std::invalid_argument("CnStepper: layout and case disagree on the problem kind");

    std::vector<Triplet> at;
    assemble_bilinear(layout, FieldId::W, FieldId::W, BilinearKind::Mass, map_, map_, 1.0 / tau_,
                      kAssemblyDegree, at, nullptr);
    assemble_bilinear(layout, FieldId::W, FieldId::W, BilinearKind::GradGrad, map_, map_,
                      tau_ / 4.0, kAssemblyDegree, at, nullptr);
    assemble_bilinear(layout, FieldId::U, FieldId::U, BilinearKind::Mass, map_, map_, 1.0 / tau_,
                      kAssemblyDegree, at, nullptr);
    assemble_bilinear(layout, FieldId::U, FieldId::U, viscous_kind(layout.kind), map_, map_, 0.5,
                      kAssemblyDegree, at, nullptr);
    if (layout.has_pressure()) {
        // continuity rows pre-negated so the saddle point matrix is symmetric
        assemble_bilinear(layout, FieldId::U, FieldId::Prs, BilinearKind::DivPressure, map_, map_,
                          -1.0, kAssemblyDegree, at, nullptr);
        assemble_bilinear(layout, FieldId::Prs, FieldId::U, BilinearKind::PressureDiv, map_, map_,
                          -1.0, kAssemblyDegree, at, nullptr);
    }
    SparseMatrix A = finalize(map_.n_unknowns, map_.n_unknowns, at);
    solver_.factorize(A, "Crank-Nicolson step system");
}

StepperState CnStepper::initial_state(bool interpolate_eta) const {
    const DofLayout& L = *layout_;
    StepperState s;
    if (case_->has_exact) {
        const int nc = L.ncomp;
        s.eta = interpolate_eta
                    ? interpolate(L, FieldId::Eta, point_value(case_->eta, nc, 0.0))
                    : project_initial_displacement(L, *case_, 0.0);
        s.w = interpolate(L, FieldId::W, point_value(case_->w, nc, 0.0));
        s.u = interpolate(L, FieldId::U, point_value(case_->u, nc, 0.0));
    } else {
        s.eta = zero_field(L, FieldId::Eta);
        s.w = zero_field(L, FieldId::W);
        s.u = zero_field(L, FieldId::U);
    }
    s.p = zero_field(L, FieldId::Prs);
    s.energy = energy_of(s.eta, s.w, s.u);
    return s;
}

void CnStepper::advance(StepperState& s) const {
    const DofLayout& L = *layout_;
    const CaseDef& c = *case_;
    const double t_mid = s.t + 0.5 * tau_;

    Vector rhs = Vector::Zero(map_.n_unknowns);

    // structure rows: (1/tau) M w^n - (tau/4) K w^n - K eta^n
    apply_bilinear(L, FieldId::W, BilinearKind::Mass, map_, s.w, 1.0 / tau_, kAssemblyDegree, rhs);
    apply_bilinear(L, FieldId::W, BilinearKind::GradGrad, map_, s.w, -tau_ / 4.0, kAssemblyDegree,
                   rhs);
    apply_bilinear(L, FieldId::W, BilinearKind::GradGrad, map_, s.eta, -1.0, kAssemblyDegree, rhs);

    // fluid rows: (1/tau) M u^n - (1/2) a(u^n, .)
    apply_bilinear(L, FieldId::U, BilinearKind::Mass, map_, s.u, 1.0 / tau_, kAssemblyDegree, rhs);
    apply_bilinear(L, FieldId::U, viscous_kind(L.kind), map_, s.u, -0.5, kAssemblyDegree, rhs);

    // continuity rows: -(div(u^{n+1}+u^n)/2, q) = -(g_c(t_mid), q)
    if (L.has_pressure())
        apply_bilinear(L, FieldId::Prs, BilinearKind::PressureDiv, map_, s.u, 1.0, kAssemblyDegree,
                       rhs);

    // sources at the midpoint time
    if (c.f_fluid)
        add_volume_load(
            L, FieldId::U, map_,
            [&](double x, double y, int strip, int comp) { return c.f_fluid(x, y, strip, t_mid, comp); },
            1.0, kAssemblyDegree, rhs);
    if (c.f_solid)
        add_volume_load(
            L, FieldId::W, map_,
            [&](double x, double y, int strip, int comp) { return c.f_solid(x, y, strip, t_mid, comp); },
            1.0, kAssemblyDegree, rhs);
    if (L.has_pressure() && c.g_mass)
        add_volume_load(
            L, FieldId::Prs, map_,
            [&](double x, double y, int strip, int) { return c.g_mass(x, y, strip, t_mid); }, -2.0,
            kAssemblyDegree, rhs);
    if (c.g_boundary) {
        auto bnd = [&](Side side, int strip, double x, double y, int comp) {
            return c.g_boundary(side, strip, x, y, t_mid, comp);
        };
        add_boundary_load(L, FieldId::U, map_, bnd, 1.0, kEdgePoints, rhs);
        add_boundary_load(L, FieldId::W, map_, bnd, 1.0, kEdgePoints, rhs);
    }
    if (c.j_interface)
        add_interface_load(
            L, FieldId::W, map_,
            [&](int tag, double x, int comp) { return c.j_interface(tag, x, t_mid, comp); }, 1.0,
            kEdgePoints, rhs);

    Vector z = solver_.solve(rhs);
    last_residual_ = solver_.residual(z, rhs);

    FEField w_new = zero_field(L, FieldId::W);
    FEField u_new = zero_field(L, FieldId::U);
    scatter_field(L, map_, z, nullptr, FieldId::W, w_new);
    scatter_field(L, map_, z, nullptr, FieldId::U, u_new);
    if (L.has_pressure()) scatter_field(L, map_, z, nullptr, FieldId::Prs, s.p);

    s.eta.coeff += (tau_ / 2.0) * (w_new.coeff + s.w.coeff);
    s.w = std::move(w_new);
    s.u = std::move(u_new);
    s.step += 1;
    s.t = s.t0 + s.step * tau_;  // product, not accumulation: t stays exact
    s.energy = energy_of(s.eta, s.w, s.u);
}

double CnStepper::energy_of(const FEField& eta, const FEField& w, const FEField& u) const {
    // kinetic + elastic + fluid kinetic, at the assembly quadrature degree so
    // the discrete energy identity holds to solver roundoff
    return 0.5 * (l2_sq(w, kAssemblyDegree) + h1semi_sq(eta, kAssemblyDegree) +
                  l2_sq(u, kAssemblyDegree));
}

RunResult run_case(const DofLayout& layout, const CaseDef& c, double tau, int n_steps,
                   bool interpolate_eta) {
    if (n_steps < 0) throw std::invalid_argument("run_case: negative step count");
    CnStepper stepper(layout, c, tau);
    RunResult res;
    res.state = stepper.initial_state(interpolate_eta);
    res.records.reserve(static_cast<size_t>(n_steps) + 1);

    auto record = [&](const StepperState& s, double residual) {
        StepRecord r{};
        r.step = s.step;
        r.t = s.t;
        const double nan = std::numeric_limits<double>::quiet_NaN();
        r.err_u_l2 = r.err_u_h1 = r.err_eta_l2 = r.err_eta_h1 = r.err_w_l2 = nan;
        if (c.has_exact) {
            const int nc = layout.ncomp;
            ErrorNorms eu = error_vs_exact(s.u, exact_at(c.u, nc, s.t), kErrorDegree);
            ErrorNorms ee = error_vs_exact(s.eta, exact_at(c.eta, nc, s.t), kErrorDegree);
            ErrorNorms ew = error_vs_exact(s.w, exact_at(c.w, nc, s.t), kErrorDegree);
            r.err_u_l2 = eu.l2;
            r.err_u_h1 = eu.h1;
            r.err_eta_l2 = ee.l2;
            r.err_eta_h1 = ee.h1;
            r.err_w_l2 = ew.l2;
        }
        r.energy = s.energy;
        r.solver_residual = residual;
        res.records.push_back(r);
    };

    record(res.state, 0.0);
    for (int n = 0; n < n_steps; ++n) {
        stepper.advance(res.state);
        record(res.state, stepper.last_solve_residual());
    }
    return res;
}

} // namespace fsifem
