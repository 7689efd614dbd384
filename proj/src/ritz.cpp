// Dynamic Ritz projection: a stationary coupled projection of the exact
// fields for a prescribed interface displacement trace, plus the Runge-Kutta
// integration of the trace ODE d/dt eta_Gamma = trace(u_h).

#include "fsifem/ritz.hpp"

#include <cmath>
#include <stdexcept>

namespace fsifem {

RitzProjector::RitzProjector(const DofLayout& layout, const CaseDef& c)
    : layout_(&layout), case_(&c) {
    if (layout.kind != ProblemKind::StokesWave)
        throw std::invalid_argument("RitzProjector: defined for the Stokes/wave system only");
    if (!c.has_exact)
        throw std::invalid_argument("RitzProjector: case '" + c.name + "' has no exact fields");
    if (layout.kind != c.kind)
        throw std::invalid_argument("RitzProjector: layout and case disagree on the problem kind");

    build_ritz_maps(layout, rows_, cols_);

    std::vector<Triplet> at, ct;
    assemble_bilinear(layout, FieldId::Eta, FieldId::Eta, BilinearKind::GradGrad, rows_, cols_,
                      1.0, kAssemblyDegree, at, &ct);
    assemble_bilinear(layout, FieldId::U, FieldId::U, BilinearKind::Mass, rows_, cols_, 1.0,
                      kAssemblyDegree, at, &ct);
    assemble_bilinear(layout, FieldId::U, FieldId::U, BilinearKind::SymGrad, rows_, cols_, 1.0,
                      kAssemblyDegree, at, &ct);
    assemble_bilinear(layout, FieldId::U, FieldId::Prs, BilinearKind::DivPressure, rows_, cols_,
                      -1.0, kAssemblyDegree, at, &ct);
    assemble_bilinear(layout, FieldId::Prs, FieldId::U, BilinearKind::PressureDiv, rows_, cols_,
                      -1.0, kAssemblyDegree, at, &ct);

    SparseMatrix A = finalize(rows_.n_unknowns, cols_.n_unknowns, at);
    C_ = finalize(rows_.n_unknowns, cols_.n_slots, ct);
    solver_.factorize(A, "Ritz projection system");
}

RitzSolution RitzProjector::solve(const Vector& eta_gamma, double t) const {
    const DofLayout& L = *layout_;
    const CaseDef& c = *case_;
    if (eta_gamma.size() != L.n_trace_values())
        throw std::invalid_argument("RitzProjector::solve: trace vector has wrong size");
    const int nc = L.ncomp;

    // same forms applied to the exact fields at time t
    Vector rhs = Vector::Zero(rows_.n_unknowns);
    add_exact_bilinear_load(L, FieldId::Eta, BilinearKind::GradGrad, rows_,
                            exact_at(c.eta, nc, t), 1.0, kAssemblyDegree, rhs);
    add_exact_bilinear_load(L, FieldId::U, BilinearKind::Mass, rows_, exact_at(c.u, nc, t), 1.0,
                            kAssemblyDegree, rhs);
    add_exact_bilinear_load(L, FieldId::U, BilinearKind::SymGrad, rows_, exact_at(c.u, nc, t),
                            1.0, kAssemblyDegree, rhs);
    add_exact_bilinear_load(L, FieldId::U, BilinearKind::DivPressure, rows_, exact_at(c.p, 1, t),
                            -1.0, kAssemblyDegree, rhs);
    add_exact_bilinear_load(L, FieldId::Prs, BilinearKind::PressureDiv, rows_,
                            exact_at(c.u, nc, t), -1.0, kAssemblyDegree, rhs);
    rhs -= C_ * eta_gamma;

    Vector z = solver_.solve(rhs);
    RitzSolution sol{zero_field(L, FieldId::Eta), zero_field(L, FieldId::U),
                     zero_field(L, FieldId::Prs)};
    scatter_field(L, cols_, z, &eta_gamma, FieldId::Eta, sol.eta);
    scatter_field(L, cols_, z, nullptr, FieldId::U, sol.u);
    scatter_field(L, cols_, z, nullptr, FieldId::Prs, sol.p);
    return sol;
}

Vector RitzProjector::trace_u(const RitzSolution& sol) const {
    return trace_values(*layout_, sol.u);
}

Vector RitzProjector::initial_trace() const {
    FEField ih = interpolate(*layout_, FieldId::Eta,
                             point_value(case_->eta, layout_->ncomp, 0.0));
    return trace_values(*layout_, ih);
}

RitzProjector::Series RitzProjector::evolve(double T, double tau_r, int n_outputs) const {
    if (n_outputs < 1) throw std::invalid_argument("RitzProjector::evolve: n_outputs < 1");
    if (tau_r <= 0.0) throw std::invalid_argument("RitzProjector::evolve: tau_r must be positive");
    const double out_dt = T / n_outputs;
    const double ratio = out_dt / tau_r;
    const long spo = std::lround(ratio);
    if (spo < 1 || std::abs(ratio - static_cast<double>(spo)) > 1e-9 * ratio)
        throw std::invalid_argument(
            "RitzProjector::evolve: output interval is not a whole number of steps");

    auto F = [&](double t, const Vector& y) { return trace_u(solve(y, t)); };

    Series series;
    series.times.reserve(n_outputs + 1);
    series.snapshots.reserve(n_outputs + 1);

    Vector y = initial_trace();
    long step = 0;
    for (int k = 0; k <= n_outputs; ++k) {
        const double t_out = static_cast<double>(step) * tau_r;
        series.times.push_back(t_out);
        series.snapshots.push_back(solve(y, t_out));
        if (k == n_outputs) break;
        for (long i = 0; i < spo; ++i) {
            const double t = static_cast<double>(step) * tau_r;
            Vector k1 = F(t, y);
            Vector k2 = F(t + 0.5 * tau_r, y + (0.5 * tau_r) * k1);
            Vector k3 = F(t + 0.5 * tau_r, y + (0.5 * tau_r) * k2);
            Vector k4 = F(t + tau_r, y + tau_r * k3);
            y += (tau_r / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            ++step;
        }
    }
    return series;
}

} // namespace fsifem
