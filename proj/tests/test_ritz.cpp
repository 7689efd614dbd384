// Dynamic projection properties: exact reproduction of compatible data, the
// decoupled displacement block, linearity in the prescribed trace, mesh
// convergence of the stationary projection, and evolve() step accounting.

#include "fsifem/ritz.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

using namespace fsifem;

namespace {

// Stokes case whose exact solution is identically zero; isolates the linear
// dependence of the projection on the prescribed trace.
CaseDef zero_case() {
    CaseDef c;
    c.name = "zero";
    c.kind = ProblemKind::StokesWave;
    c.geom = channel_geometry(1.0, false);
    c.has_exact = true;
    auto zval = [](double, double, int, double, double* v) { v[0] = v[1] = 0.0; };
    auto zgrad = [](double, double, int, double, double (*g)[2]) {
        g[0][0] = g[0][1] = g[1][0] = g[1][1] = 0.0;
    };
    for (TimeField* f : {&c.u, &c.eta, &c.w}) {
        f->value = zval;
        f->grad = zgrad;
    }
    c.p.value = [](double, double, int, double, double* v) { v[0] = 0.0; };
    c.p.grad = [](double, double, int, double, double (*g)[2]) { g[0][0] = g[0][1] = 0.0; };
    return c;
}

} // namespace

TEST_CASE("projection reproduces compatible data exactly") {
    const CaseDef c = compatible_case();
    const Mesh m = build_structured_mesh(c.geom, 8, {2, 4, 2});
    const DofLayout layout = build_layout(m, c.kind, ElementType::P1B);
    const RitzProjector rp(layout, c);

    const double t = 0.3;
    const FEField eta_i = interpolate(layout, FieldId::Eta, point_value(c.eta, 2, t));
    const FEField u_i = interpolate(layout, FieldId::U, point_value(c.u, 2, t));
    const RitzSolution sol = rp.solve(trace_values(layout, eta_i), t);

    CHECK((sol.eta.coeff - eta_i.coeff).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK((sol.u.coeff - u_i.coeff).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK(sol.p.coeff.cwiseAbs().maxCoeff() <= 1e-9);

    // the projected fluid trace is the constant exact velocity
    const Vector tu = rp.trace_u(sol);
    for (int i = 0; i < tu.size(); i += 2) {
        CHECK(tu(i) == doctest::Approx(0.2).epsilon(1e-9));
        CHECK(tu(i + 1) == doctest::Approx(-0.1).epsilon(1e-9));
    }
}

TEST_CASE("displacement block agrees with the standalone poisson projection") {
    const CaseDef c = channel_periodic_case(0.01, 1.0);
    const Mesh m = build_structured_mesh(c.geom, 8, {2, 4, 2});
    const DofLayout layout = build_layout(m, c.kind, ElementType::P1B);
    const RitzProjector rp(layout, c);

    const double t = 0.2;
    const FEField eta_i = interpolate(layout, FieldId::Eta, point_value(c.eta, 2, t));
    const RitzSolution sol = rp.solve(trace_values(layout, eta_i), t);
    const FEField eta_p = project_initial_displacement(layout, c, t);
    CHECK((sol.eta.coeff - eta_p.coeff).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("projection is linear in the prescribed trace") {
    const CaseDef c = zero_case();
    const Mesh m = build_structured_mesh(c.geom, 4, {1, 2, 1});
    const DofLayout layout = build_layout(m, c.kind, ElementType::P1B);
    const RitzProjector rp(layout, c);

    const int n = layout.n_trace_values();
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    Vector g1(n), g2(n);
    for (int i = 0; i < n; ++i) {
        g1(i) = uni(rng);
        g2(i) = uni(rng);
    }

    const RitzSolution s0 = rp.solve(Vector::Zero(n), 0.1);
    CHECK(s0.eta.coeff.cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(s0.u.coeff.cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(s0.p.coeff.cwiseAbs().maxCoeff() <= 1e-12);

    const RitzSolution a = rp.solve(g1, 0.1);
    const RitzSolution b = rp.solve(g2, 0.1);
    const RitzSolution ab = rp.solve(g1 + g2, 0.1);
    CHECK((ab.eta.coeff - a.eta.coeff - b.eta.coeff).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK((ab.u.coeff - a.u.coeff - b.u.coeff).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK((ab.p.coeff - a.p.coeff - b.p.coeff).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("evolve tracks compatible data through the trace ODE") {
    const CaseDef c = compatible_case();
    const Mesh m = build_structured_mesh(c.geom, 8, {2, 4, 2});
    const DofLayout layout = build_layout(m, c.kind, ElementType::P1B);
    const RitzProjector rp(layout, c);

    const RitzProjector::Series series = rp.evolve(0.2, 0.05, 4);
    REQUIRE(series.times.size() == 5);
    REQUIRE(series.snapshots.size() == 5);
    for (size_t k = 0; k < series.times.size(); ++k) {
        const double t = 0.05 * k;
        CHECK(series.times[k] == doctest::Approx(t).scale(1.0).epsilon(1e-14));
        const FEField eta_i = interpolate(layout, FieldId::Eta, point_value(c.eta, 2, t));
        const FEField u_i = interpolate(layout, FieldId::U, point_value(c.u, 2, t));
        CHECK((series.snapshots[k].eta.coeff - eta_i.coeff).cwiseAbs().maxCoeff() <= 1e-9);
        CHECK((series.snapshots[k].u.coeff - u_i.coeff).cwiseAbs().maxCoeff() <= 1e-9);
    }

    // initial trace is the trace of the interpolated initial displacement
    const FEField eta0 = interpolate(layout, FieldId::Eta, point_value(c.eta, 2, 0.0));
    const Vector t0 = rp.initial_trace();
    const Vector t0_ref = trace_values(layout, eta0);
    CHECK((t0 - t0_ref).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("evolve validates its step accounting") {
    const CaseDef c = compatible_case();
    const Mesh m = build_structured_mesh(c.geom, 4, {1, 2, 1});
    const DofLayout layout = build_layout(m, c.kind, ElementType::P1B);
    const RitzProjector rp(layout, c);

    CHECK_THROWS_AS(rp.evolve(0.2, 0.03, 4), std::invalid_argument);   // 0.05 / 0.03 not whole
    CHECK_THROWS_AS(rp.evolve(0.2, 0.05, 0), std::invalid_argument);
    CHECK_THROWS_AS(rp.evolve(0.2, -0.05, 4), std::invalid_argument);
    CHECK_NOTHROW(rp.evolve(0.2, 0.025, 4));                           // two steps per output
}

TEST_CASE("stationary projection converges under refinement") {
    const CaseDef c = channel_periodic_case(0.01, 1.0);
    const double t = 0.2;
    double el2[2], eh1[2];
    const int nxs[2] = {8, 16};
    for (int i = 0; i < 2; ++i) {
        const Mesh m = build_structured_mesh(c.geom, nxs[i], {nxs[i] / 4, nxs[i] / 2, nxs[i] / 4});
        const DofLayout layout = build_layout(m, c.kind, ElementType::P1B);
        const RitzProjector rp(layout, c);
        const FEField eta_i = interpolate(layout, FieldId::Eta, point_value(c.eta, 2, t));
        const RitzSolution sol = rp.solve(trace_values(layout, eta_i), t);
        const ErrorNorms e = error_vs_exact(sol.u, exact_at(c.u, 2, t), kErrorDegree);
        el2[i] = e.l2;
        eh1[i] = e.h1;
    }
    CHECK(std::log2(eh1[0] / eh1[1]) == doctest::Approx(1.0).epsilon(0.4));
    CHECK(std::log2(el2[0] / el2[1]) == doctest::Approx(2.0).epsilon(0.25));
}

TEST_CASE("projector rejects unsupported problems") {
    const CaseDef hw = heat_wave_case();
    const Mesh mh = build_structured_mesh(hw.geom, 4, {3, 1});
    const DofLayout lh = build_layout(mh, ProblemKind::HeatWave, ElementType::P1);
    CHECK_THROWS_AS(RitzProjector(lh, hw), std::invalid_argument);

    const CaseDef tr = traction_case();
    const Mesh mt = build_structured_mesh(tr.geom, 4, {1, 2, 1});
    const DofLayout lt = build_layout(mt, ProblemKind::StokesWave, ElementType::P1B);
    CHECK_THROWS_AS(RitzProjector(lt, tr), std::invalid_argument);  // no exact data
}
