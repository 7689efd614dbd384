// Degree-of-freedom layouts, equation maps, interpolation, and interface traces.

#include "fsifem/dofs.hpp"

#include "fsifem/manufactured.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

using namespace fsifem;

namespace {

Mesh small_channel() { return build_structured_mesh(channel_geometry(1.0, true), 4, {1, 2, 1}); }

// Evaluate a field at a physical point strictly inside its region.
double eval_at(const FEField& f, double x, double y, int comp) {
    const Mesh& m = *f.layout->mesh;
    const int tri = m.locate(x, y);
    REQUIRE(f.f().tri_active[tri]);
    const AffineMap map = m.tri_map(tri);
    const double dx = x - map.x0, dy = y - map.y0;
    const double xr = (map.J[1][1] * dx - map.J[0][1] * dy) / map.det;
    const double yr = (-map.J[1][0] * dx + map.J[0][0] * dy) / map.det;
    return f.eval(tri, xr, yr, comp);
}

// Unknowns a CN map must enumerate: free scalar dofs of w, u, p with the
// structure's interface dofs aliased to their fluid partners.
int audit_cn_unknowns(const DofLayout& layout) {
    int count = 0;
    for (FieldId fid : {FieldId::W, FieldId::U, FieldId::Prs}) {
        const FieldLayout& f = layout.field(fid);
        if (!f.active) continue;
        for (int s = 0; s < f.n_scalar(); ++s) {
            if (f.periodic_master[s] >= 0 || f.dofs[s].dirichlet) continue;
            if (fid == FieldId::W && f.dofs[s].interface_tag >= 0) continue;
            count += f.ncomp;
        }
    }
    return count;
}

} // namespace

TEST_CASE("layout counts on the small periodic channel") {
    const Mesh m = small_channel();

    SUBCASE("mini") {
        const DofLayout layout = build_layout(m, ProblemKind::StokesWave, ElementType::P1B);
        // 20 solid nodes + 16 solid bubbles; 15 fluid nodes + 16 fluid bubbles
        CHECK(layout.field(FieldId::Eta).n_scalar() == 36);
        CHECK(layout.field(FieldId::W).n_scalar() == 36);
        CHECK(layout.field(FieldId::U).n_scalar() == 31);
        CHECK(layout.field(FieldId::Prs).n_scalar() == 15);
        CHECK(layout.field(FieldId::U).ncomp == 2);
        CHECK(layout.field(FieldId::Prs).ncomp == 1);
        // one trace pair per non-slave interface node
        CHECK(layout.trace.size() == 8);
        CHECK(layout.n_trace_values() == 16);
    }
    SUBCASE("taylor-hood") {
        const DofLayout layout = build_layout(m, ProblemKind::StokesWave, ElementType::P2);
        CHECK(layout.field(FieldId::Eta).n_scalar() == 20 + 34);  // nodes + solid edges
        CHECK(layout.field(FieldId::U).n_scalar() == 15 + 30);
        CHECK(layout.field(FieldId::Prs).n_scalar() == 15);
        // interface midpoints join the trace
        CHECK(layout.trace.size() == 16);
    }
    SUBCASE("element compatibility is enforced") {
        CHECK_THROWS_AS(build_layout(m, ProblemKind::StokesWave, ElementType::P1),
                        std::invalid_argument);
        CHECK_THROWS_AS(build_layout(m, ProblemKind::HeatWave, ElementType::P1B),
                        std::invalid_argument);
    }
}

TEST_CASE("trace pairs are sorted and geometrically matched") {
    const Mesh m = small_channel();
    const DofLayout layout = build_layout(m, ProblemKind::StokesWave, ElementType::P1B);
    const FieldLayout& eta = layout.field(FieldId::Eta);
    const FieldLayout& u = layout.field(FieldId::U);

    for (size_t i = 1; i < layout.trace.size(); ++i) {
        const TraceDof &a = layout.trace[i - 1], &b = layout.trace[i];
        CHECK((a.tag < b.tag || (a.tag == b.tag && a.x < b.x)));
    }
    for (const TraceDof& t : layout.trace) {
        CHECK(eta.dofs[t.eta_sdof].x == u.dofs[t.u_sdof].x);
        CHECK(eta.dofs[t.eta_sdof].y == u.dofs[t.u_sdof].y);
        CHECK(eta.dofs[t.eta_sdof].interface_tag == t.tag);
        CHECK(eta.periodic_master[t.eta_sdof] == -1);
    }
    // tag 0 covers the masters of the bottom interface
    for (int i = 0; i < 4; ++i) {
        CHECK(layout.trace[i].tag == 0);
        CHECK(layout.trace[i].x == doctest::Approx(0.25 * i));
    }
}

TEST_CASE("cn map aliases the structure trace into the fluid unknowns") {
    const Mesh m = small_channel();
    const DofLayout layout = build_layout(m, ProblemKind::StokesWave, ElementType::P1B);
    const EquationMap map = build_cn_map(layout);

    CHECK(map.n_unknowns == audit_cn_unknowns(layout));
    CHECK(map.n_unknowns == 116);
    CHECK(map.n_slots == 0);
    CHECK(static_cast<int>(map.unknown_info.size()) == map.n_unknowns);
    CHECK(!map.includes(FieldId::Eta));

    // W and Eta share scalar numbering, so trace pairs index W directly
    for (const TraceDof& t : layout.trace)
        for (int c = 0; c < 2; ++c) {
            const int w_code = map.at(FieldId::W, t.eta_sdof, c, 2);
            const int u_code = map.at(FieldId::U, t.u_sdof, c, 2);
            CHECK(w_code >= 0);
            CHECK(w_code == u_code);
        }

    // periodic slaves resolve to their master's unknown
    const FieldLayout& u = layout.field(FieldId::U);
    int n_slaves = 0;
    for (int s = 0; s < u.n_scalar(); ++s) {
        if (u.periodic_master[s] < 0) continue;
        ++n_slaves;
        for (int c = 0; c < 2; ++c)
            CHECK(map.at(FieldId::U, s, c, 2) == map.at(FieldId::U, u.periodic_master[s], c, 2));
    }
    CHECK(n_slaves == 3);

    // aliased unknowns report the fluid field as canonical owner
    for (const TraceDof& t : layout.trace) {
        const int k = map.at(FieldId::U, t.u_sdof, 0, 2);
        CHECK(map.unknown_info[k][0] == static_cast<int>(FieldId::U));
    }
}

TEST_CASE("eta poisson map prescribes the interface trace as slots") {
    const Mesh m = small_channel();
    const DofLayout layout = build_layout(m, ProblemKind::StokesWave, ElementType::P1B);
    const EquationMap map = build_eta_poisson_map(layout);

    CHECK(map.includes(FieldId::Eta));
    CHECK(!map.includes(FieldId::U));
    CHECK(map.n_slots == layout.n_trace_values());
    CHECK(map.n_unknowns == (36 - 4 - 8) * 2);

    // slots follow trace order, component minor
    for (size_t i = 0; i < layout.trace.size(); ++i)
        for (int c = 0; c < 2; ++c) {
            const int code = map.at(FieldId::Eta, layout.trace[i].eta_sdof, c, 2);
            CHECK(EquationMap::is_slot(code));
            CHECK(EquationMap::slot_index(code) == static_cast<int>(i) * 2 + c);
        }
}

TEST_CASE("ritz row and column maps share one unknown enumeration") {
    const Mesh m = small_channel();
    const DofLayout layout = build_layout(m, ProblemKind::StokesWave, ElementType::P1B);
    EquationMap rows, cols;
    build_ritz_maps(layout, rows, cols);

    CHECK(rows.n_unknowns == cols.n_unknowns);
    CHECK(cols.n_slots == layout.n_trace_values());
    CHECK(rows.n_slots == 0);

    const FieldLayout& eta = layout.field(FieldId::Eta);
    for (int s = 0; s < eta.n_scalar(); ++s)
        for (int c = 0; c < 2; ++c) {
            const int r = rows.at(FieldId::Eta, s, c, 2);
            const int cc = cols.at(FieldId::Eta, s, c, 2);
            if (eta.dofs[s].interface_tag >= 0 && eta.periodic_master[s] < 0) {
                CHECK(EquationMap::is_slot(cc));  // trial side prescribed
                CHECK(r >= 0);                    // test side merged into U
            } else if (eta.periodic_master[s] < 0) {
                CHECK(r == cc);                   // interior eta shared
            }
        }
    for (FieldId fid : {FieldId::U, FieldId::Prs}) {
        const FieldLayout& f = layout.field(fid);
        for (int s = 0; s < f.n_scalar(); ++s)
            for (int c = 0; c < f.ncomp; ++c)
                CHECK(rows.at(fid, s, c, f.ncomp) == cols.at(fid, s, c, f.ncomp));
    }
    // merged test rows coincide with the fluid partner's row
    for (const TraceDof& t : layout.trace)
        for (int c = 0; c < 2; ++c)
            CHECK(rows.at(FieldId::Eta, t.eta_sdof, c, 2) == rows.at(FieldId::U, t.u_sdof, c, 2));
}

TEST_CASE("interpolation reproduces polynomials up to the element order") {
    const Mesh m = small_channel();
    std::mt19937 rng(5);
    // the channel is periodic and the polynomials are not: stay off the last
    // cell column, whose seam dofs copy the x=0 values
    std::uniform_real_distribution<double> ux(0.01, 0.74);

    SUBCASE("mini and p1 parts reproduce linears") {
        const DofLayout layout = build_layout(m, ProblemKind::StokesWave, ElementType::P1B);
        auto lin = [](double x, double y, int, int c) {
            return c == 0 ? 1.0 + 2.0 * x - y : -3.0 + 0.5 * x + 4.0 * y;
        };
        const FEField u = interpolate(layout, FieldId::U, lin);
        const FEField p = interpolate(layout, FieldId::Prs, lin);
        std::uniform_real_distribution<double> uy(0.26, 0.74);
        for (int i = 0; i < 20; ++i) {
            const double x = ux(rng), y = uy(rng);
            CHECK(std::abs(eval_at(u, x, y, 0) - lin(x, y, 0, 0)) <= 1e-13);
            CHECK(std::abs(eval_at(u, x, y, 1) - lin(x, y, 0, 1)) <= 1e-13);
            CHECK(std::abs(eval_at(p, x, y, 0) - lin(x, y, 0, 0)) <= 1e-13);
        }
    }
    SUBCASE("p2 reproduces quadratics") {
        const DofLayout layout = build_layout(m, ProblemKind::StokesWave, ElementType::P2);
        auto quad = [](double x, double y, int, int) {
            return 1.0 + 2.0 * x - 3.0 * y + x * x - x * y + 2.0 * y * y;
        };
        const FEField eta = interpolate(layout, FieldId::Eta, quad);
        std::uniform_real_distribution<double> uy(0.01, 0.24);
        for (int i = 0; i < 20; ++i) {
            const double x = ux(rng), y = uy(rng);
            CHECK(std::abs(eval_at(eta, x, y, 0) - quad(x, y, 0, 0)) <= 1e-13);
        }
    }
}

TEST_CASE("interpolation error decays at second order in L2") {
    const GeometrySpec geom = heat_wave_geometry();
    auto smooth = [](double x, double y, int, int) {
        return std::sin(2.0 * std::numbers::pi * x) * y * (1.0 - y);
    };
    ExactField exact;
    exact.ncomp = 1;
    exact.value = [&](double x, double y, int, double* v) { v[0] = smooth(x, y, 0, 0); };
    exact.grad = [](double x, double y, int, double (*g)[2]) {
        const double pi2 = 2.0 * std::numbers::pi;
        g[0][0] = pi2 * std::cos(pi2 * x) * y * (1.0 - y);
        g[0][1] = std::sin(pi2 * x) * (1.0 - 2.0 * y);
    };
    double err[2];
    const double hs[2] = {0.1, 0.05};
    for (int i = 0; i < 2; ++i) {
        const Mesh m = build_structured_mesh(geom, hs[i]);
        const DofLayout layout = build_layout(m, ProblemKind::HeatWave, ElementType::P1);
        const FEField fh = interpolate(layout, FieldId::U, smooth);
        err[i] = error_vs_exact(fh, exact, 8).l2;
    }
    const double rate = std::log2(err[0] / err[1]);
    CHECK(rate == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("interpolated fields honor the periodic identification") {
    const Mesh m = small_channel();
    const DofLayout layout = build_layout(m, ProblemKind::StokesWave, ElementType::P1B);
    // deliberately not x-periodic: slave values must copy the master side
    auto g = [](double x, double y, int, int c) { return std::sin(x) + y + c; };
    const FEField u = interpolate(layout, FieldId::U, g);

    const FieldLayout& f = layout.field(FieldId::U);
    for (int s = 0; s < f.n_scalar(); ++s) {
        const int master = f.periodic_master[s];
        if (master < 0) continue;
        for (int c = 0; c < 2; ++c) CHECK(u.coeff(s * 2 + c) == u.coeff(master * 2 + c));
    }
    for (double y : {0.3, 0.45, 0.6})
        for (int c = 0; c < 2; ++c)
            CHECK(std::abs(eval_at(u, 1.0, y, c) - eval_at(u, 0.0, y, c)) <= 1e-13);
}

TEST_CASE("scattered cn solutions share the interface trace bitwise") {
    const Mesh m = small_channel();
    const DofLayout layout = build_layout(m, ProblemKind::StokesWave, ElementType::P1B);
    const EquationMap map = build_cn_map(layout);

    std::mt19937 rng(11);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    Vector z(map.n_unknowns);
    for (int i = 0; i < z.size(); ++i) z(i) = uni(rng);

    FEField w = zero_field(layout, FieldId::W);
    FEField u = zero_field(layout, FieldId::U);
    scatter_field(layout, map, z, nullptr, FieldId::W, w);
    scatter_field(layout, map, z, nullptr, FieldId::U, u);

    const Vector tw = trace_values(layout, w);
    const Vector tu = trace_values(layout, u);
    REQUIRE(tw.size() == layout.n_trace_values());
    for (int i = 0; i < tw.size(); ++i) CHECK(tw(i) == tu(i));

    // gather inverts scatter on the free unknowns
    FEField p = zero_field(layout, FieldId::Prs);
    scatter_field(layout, map, z, nullptr, FieldId::Prs, p);
    FEField eta = zero_field(layout, FieldId::Eta);
    const Vector z2 = gather(layout, map, {&eta, &w, &u, &p});
    CHECK((z2 - z).norm() == 0.0);
}

TEST_CASE("channel trace values at t = 0 match the exact displacement") {
    const CaseDef c = channel_periodic_case(0.01, 1.0);
    const Mesh m = build_structured_mesh(c.geom, 8, {2, 4, 2});
    const DofLayout layout = build_layout(m, ProblemKind::StokesWave, ElementType::P1B);
    const FEField eta0 = interpolate(layout, FieldId::Eta, point_value(c.eta, 2, 0.0));
    const Vector tv = trace_values(layout, eta0);

    bool found = false;
    for (size_t i = 0; i < layout.trace.size(); ++i) {
        if (layout.trace[i].tag != 1 || std::abs(layout.trace[i].x - 0.25) > 1e-12) continue;
        found = true;
        CHECK(std::abs(tv(2 * i + 0) - 0.0) <= 1e-15);
        CHECK(tv(2 * i + 1) == doctest::Approx(0.01).epsilon(1e-12));
    }
    CHECK(found);
}
