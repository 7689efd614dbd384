#pragma once

#include "fsifem/ritz.hpp"

#include <map>
#include <string>
#include <utility>

namespace fsifem {

// Least-squares convergence order from (h, error) samples, with the pairwise
// rates kept for diagnosis.  A nonpositive error is not an order-of-accuracy
// failure but a quantity that has hit roundoff, reported as such.
struct RateFit {
    std::vector<double> adjacent;
    double slope = 0.0;
    bool converged_to_zero = false;
};
RateFit fit_rate(const std::vector<std::pair<double, double>>& pairs);

// User-facing element names; the pair (problem kind, velocity element)
// determines the whole discretization.
struct ElementChoice {
    std::string name;       // mini | p2p1 | p1 | p2
    ProblemKind kind{};
    ElementType velocity{};
};
ElementChoice element_by_name(const std::string& name);
int velocity_order(const ElementChoice& e);

extern const char* const kErrorColumns[5];  // err_u_L2 ... err_w_L2
extern const char* const kRitzColumns[4];   // sup_err_u_L2 ... sup_err_eta_H1

struct SweepRow {
    double h = 0.0, tau = 0.0;
    double err[5] = {0, 0, 0, 0, 0};  // kErrorColumns order
};

struct ConvergenceReport {
    std::string case_name, element_name;
    std::vector<SweepRow> rows;
    std::map<std::string, double> rates;                  // column -> LS slope
    std::map<std::string, std::vector<double>> adjacent;  // column -> pairwise
    std::vector<std::string> converged_columns;            // errors at roundoff
    std::map<std::string, bool> gates;                    // gated columns only
    bool pass = true;
};

// Spatial sweep: meshes are integer refinements of the base mesh built for
// h_list[0], so each halving of h exactly halves every cell.  Errors are the
// max over time-grid points of the error against the exact solution.
ConvergenceReport convergence_space(const CaseDef& c, const ElementChoice& elem,
                                    const std::vector<double>& h_list, double tau, double T,
                                    double tol, int jobs = 1);

// Temporal sweep on one fixed mesh.  The exact-solution error stalls at the
// spatial floor long before the smallest tau, so errors are measured against
// a same-mesh reference run with tau_ref = tau_min/10, compared at time T.
ConvergenceReport convergence_time(const CaseDef& c, const ElementChoice& elem, double h,
                                   const std::vector<double>& tau_list, double T, double tol,
                                   int jobs = 1);

// Self-convergence without an exact solution: every run is compared at time T
// against the run on a fine reference mesh, with the coarse field evaluated at
// the reference quadrature points.
ConvergenceReport self_convergence(const CaseDef& c, const ElementChoice& elem,
                                   const std::vector<double>& h_list, double h_ref, double tau,
                                   double T, double tol, int jobs = 1);

struct RitzRow {
    double h = 0.0;
    double sup[4] = {0, 0, 0, 0};  // kRitzColumns order
};

struct RitzReport {
    std::string case_name, element_name;
    std::vector<RitzRow> rows;
    std::map<std::string, double> rates;
    std::map<std::string, std::vector<double>> adjacent;
    std::vector<std::string> converged_columns;
    std::map<std::string, bool> gates;
    bool pass = true;
};

// Projection error sweep: sup over the output times of the projection errors,
// with the trace ODE step tied to the mesh via
// tau_r = (T/32) / ceil((T/32) / (h/4)).
RitzReport ritz_sweep(const CaseDef& c, const ElementChoice& elem,
                      const std::vector<double>& h_list, double T, double tol, int jobs = 1);

// L2/H1 norms of (coarse - fine) integrated on the fine field's mesh; the
// meshes must be nested structured refinements of the same geometry.
ErrorNorms cross_norms(const FEField& coarse, const FEField& fine, int quad_degree);

// Whole refinement ladder for a list of target mesh sizes; every entry is an
// integer refinement of the first.
std::vector<Mesh> refinement_ladder(const GeometrySpec& geom, const std::vector<double>& h_list);

// Step count for reaching T with steps of roughly tau; the actual step is
// T/n so the final time is hit exactly.
int steps_for(double T, double tau);

} // namespace fsifem
