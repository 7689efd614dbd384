#pragma once

#include "fsifem/forms.hpp"
#include "fsifem/manufactured.hpp"

namespace fsifem {

// Quadrature degrees shared across the solver: assembly and the energy
// functional must use the same rule for the discrete energy identity to hold
// to roundoff; error norms get a higher-order rule for the smooth exact
// fields; 1D edge rules are degree 7.
inline constexpr int kAssemblyDegree = 6;
inline constexpr int kErrorDegree = 8;
inline constexpr int kEdgePoints = 4;

struct StepperState {
    int step = 0;
    double t0 = 0.0;       // start time; t = t0 + step * tau, kept exact
    double t = 0.0;
    FEField eta, w, u, p;  // p holds the pressure of the latest half-step
    double energy = 0.0;
};

// Ritz projection of the initial displacement: one Poisson solve per
// component with the interface trace fixed to the trace of I_h eta(t).
FEField project_initial_displacement(const DofLayout& layout, const CaseDef& c, double t);

// Monolithic Crank-Nicolson stepper with the displacement eliminated through
// eta^{n+1} = eta^n + (tau/2)(w^{n+1} + w^n); unknowns per step are
// (w^{n+1}, u^{n+1}, p^{n+1/2}) with w = u on the interface by aliasing.
// The system matrix is time-independent and factorized once.
class CnStepper {
public:
    CnStepper(const DofLayout& layout, const CaseDef& c, double tau);

    // Initial data: eta from the displacement projection (or plain
    // interpolation on request), w and u interpolated, pressure zero.
    StepperState initial_state(bool interpolate_eta = false) const;

    void advance(StepperState& s) const;

    double energy_of(const FEField& eta, const FEField& w, const FEField& u) const;
    double last_solve_residual() const { return last_residual_; }
    const EquationMap& map() const { return map_; }
    const DirectSolver& system() const { return solver_; }
    double tau() const { return tau_; }

private:
    const DofLayout* layout_;
    const CaseDef* case_;
    double tau_;
    EquationMap map_;
    DirectSolver solver_;
    mutable double last_residual_ = 0.0;
};

// Per-step record of a whole run; error columns are NaN when the case has no
// exact solution.
struct StepRecord {
    int step;
    double t;
    double err_u_l2, err_u_h1, err_eta_l2, err_eta_h1, err_w_l2;
    double energy;
    double solver_residual;
};

struct RunResult {
    std::vector<StepRecord> records;  // indices 0..n_steps
    StepperState state;               // final state
};

RunResult run_case(const DofLayout& layout, const CaseDef& c, double tau, int n_steps,
                   bool interpolate_eta = false);

} // namespace fsifem
