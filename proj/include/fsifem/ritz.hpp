#pragma once

#include "fsifem/stepper.hpp"

namespace fsifem {

struct RitzSolution {
    FEField eta, u, p;
};

// Dynamic Ritz projection of the coupled Stokes/wave solution.  For a given
// interface displacement trace, a stationary saddle point solve projects the
// exact fields; the trace itself obeys the ODE d/dt eta_Gamma = trace(u_h),
// integrated with the classical Runge-Kutta scheme.  The matrix does not
// depend on time and is factorized once.
class RitzProjector {
public:
    RitzProjector(const DofLayout& layout, const CaseDef& c);

    // Stationary projection at time t with the interface displacement trace
    // prescribed (trace dof major, component minor).
    RitzSolution solve(const Vector& eta_gamma, double t) const;

    // interface trace of the projected fluid velocity, in the same ordering
    Vector trace_u(const RitzSolution& sol) const;

    // trace of the interpolated initial displacement, the ODE's initial value
    Vector initial_trace() const;

    struct Series {
        std::vector<double> times;
        std::vector<RitzSolution> snapshots;
    };

    // Integrate the trace ODE to time T with step tau_r, storing snapshots at
    // the n_outputs + 1 uniformly spaced output times (t = 0 included).
    // T / (n_outputs * tau_r) must be a whole number of steps per output.
    Series evolve(double T, double tau_r, int n_outputs) const;

    const EquationMap& row_map() const { return rows_; }
    const EquationMap& col_map() const { return cols_; }

private:
    const DofLayout* layout_;
    const CaseDef* case_;
    EquationMap rows_, cols_;
    SparseMatrix C_;  // prescribed-trace columns
    DirectSolver solver_;
};

} // namespace fsifem
