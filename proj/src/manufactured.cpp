#include "fsifem/manufactured.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace fsifem {

namespace {

constexpr double kPi = std::numbers::pi;

double sgn_top(int strip) { return strip == 2 ? 1.0 : -1.0; }

} // namespace

CaseDef channel_periodic_case(double gamma, double length) {
    if (!(gamma > 0)) throw std::invalid_argument("channel_periodic_case: gamma must be positive");
    if (!(length >= 1.0) || std::abs(length - std::round(length)) > 1e-12)
        throw std::invalid_argument(
            "channel_periodic_case: length must be a positive integer (the solution has x-period 1)");

    CaseDef c;
    c.name = "channel_periodic";
    c.kind = ProblemKind::StokesWave;
    c.geom = channel_geometry(length, true);
    c.has_exact = true;

    const double g = gamma;
    // q(y) = -2y^2 + 2y - 3/8 vanishes at the interfaces y = 1/4, 3/4
    auto q = [](double y) { return -2.0 * y * y + 2.0 * y - 0.375; };
    auto qp = [](double y) { return -4.0 * y + 2.0; };

    c.u.value = [=](double x, double y, int, double t, double* v) {
        const double a = g * std::exp(t);
        v[0] = a * 2.0 * kPi * std::cos(2.0 * kPi * x) * q(y);
        v[1] = a * std::sin(2.0 * kPi * x) * (4.0 * y - 2.0);
    };
    c.u.grad = [=](double x, double y, int, double t, double (*gr)[2]) {
        const double a = g * std::exp(t);
        const double s = std::sin(2.0 * kPi * x), co = std::cos(2.0 * kPi * x);
        gr[0][0] = -a * 4.0 * kPi * kPi * s * q(y);
        gr[0][1] = a * 2.0 * kPi * co * qp(y);
        gr[1][0] = a * 2.0 * kPi * co * (4.0 * y - 2.0);
        gr[1][1] = a * 4.0 * s;
    };
    c.p.value = [=](double x, double, int, double t, double* v) {
        v[0] = 4.0 * g * std::exp(t) * std::sin(2.0 * kPi * x);
    };
    c.p.grad = [=](double x, double, int, double t, double (*gr)[2]) {
        gr[0][0] = 8.0 * kPi * g * std::exp(t) * std::cos(2.0 * kPi * x);
        gr[0][1] = 0.0;
    };
    // displacement +-(0, sin 2 pi x), positive in the top strip
    c.eta.value = [=](double x, double, int strip, double t, double* v) {
        v[0] = 0.0;
        v[1] = sgn_top(strip) * g * std::exp(t) * std::sin(2.0 * kPi * x);
    };
    c.eta.grad = [=](double x, double, int strip, double t, double (*gr)[2]) {
        gr[0][0] = gr[0][1] = gr[1][1] = 0.0;
        gr[1][0] = sgn_top(strip) * g * std::exp(t) * 2.0 * kPi * std::cos(2.0 * kPi * x);
    };
    c.w = c.eta;  // all fields carry the common factor e^t

    c.f_fluid = [=](double x, double y, int, double t, int comp) {
        const double a = g * std::exp(t);
        if (comp == 0)
            return a * 2.0 * kPi * std::cos(2.0 * kPi * x) *
                   ((1.0 + 4.0 * kPi * kPi) * q(y) + 4.0);
        return a * std::sin(2.0 * kPi * x) * (4.0 * y - 2.0);
    };
    c.f_solid = [=](double x, double, int strip, double t, int comp) {
        if (comp == 0) return 0.0;
        return (1.0 + 4.0 * kPi * kPi) * sgn_top(strip) * g * std::exp(t) *
               std::sin(2.0 * kPi * x);
    };
    c.g_mass = [=](double x, double y, int, double t) {
        return g * std::exp(t) * std::sin(2.0 * kPi * x) * (4.0 - 4.0 * kPi * kPi * q(y));
    };
    // outer flux (top/bottom, solid): eta is y-independent, so d_n eta = 0;
    // interface jump (D(u) - pI)n - d_n eta vanishes identically
    return c;
}

CaseDef traction_case(GeometrySpec geom) {
    geom.validate();
    if (geom.n_strips() != 3 || geom.roles[1] != StripRole::Fluid)
        throw std::invalid_argument("traction_case: expected a solid|fluid|solid channel");
    CaseDef c;
    c.name = "channel_traction";
    c.kind = ProblemKind::StokesWave;
    c.geom = geom;
    c.has_exact = false;
    const double y1 = geom.y_levels[1], y2 = geom.y_levels[2];
    c.g_boundary = [y1, y2](Side side, int strip, double, double y, double t, int comp) {
        if (side != Side::Left || strip != 1 || comp != 0) return 0.0;
        // traction = s(y,t) n with n = (-1, 0) on the inflow side; the profile
        // vanishes at the interfaces
        const double amp = 1.0 - std::cos(kPi * t / 2.0);
        const double s = -0.25 * amp * amp * 1.0e4 * (y - y1) * (y2 - y);
        return -s;
    };
    return c;
}

CaseDef traction_case() { return traction_case(traction_channel_geometry()); }

CaseDef heat_wave_case() {
    CaseDef c;
    c.name = "heat_wave";
    c.kind = ProblemKind::HeatWave;
    c.geom = heat_wave_geometry();
    c.has_exact = true;

    auto phi = [](double x, double y, double t) {
        return std::exp(t) * std::sin(2.0 * kPi * x) * y * (1.0 - y);
    };
    TimeField f;
    f.value = [=](double x, double y, int, double t, double* v) { v[0] = phi(x, y, t); };
    f.grad = [=](double x, double y, int, double t, double (*gr)[2]) {
        gr[0][0] = std::exp(t) * 2.0 * kPi * std::cos(2.0 * kPi * x) * y * (1.0 - y);
        gr[0][1] = std::exp(t) * std::sin(2.0 * kPi * x) * (1.0 - 2.0 * y);
    };
    c.u = f;
    c.eta = f;
    c.w = f;

    // d_t phi - Lap phi = d_tt phi - Lap phi = e^t sin(2 pi x) [(1+4 pi^2) y(1-y) + 2]
    auto source = [](double x, double y, int, double t, int) {
        return std::exp(t) * std::sin(2.0 * kPi * x) *
               ((1.0 + 4.0 * kPi * kPi) * y * (1.0 - y) + 2.0);
    };
    c.f_fluid = source;
    c.f_solid = source;
    return c;
}

CaseDef compatible_case() {
    CaseDef c;
    c.name = "compatible";
    c.kind = ProblemKind::StokesWave;
    c.geom = channel_geometry(1.0, false);
    c.has_exact = true;

    // u = const, p = 0, eta = eta0 + t u with eta0 affine per component
    const double uc[2] = {0.2, -0.1};
    const double a0[2] = {0.05, -0.02};
    const double bx[2] = {0.12, 0.07};
    const double dy[2] = {-0.04, 0.09};

    c.u.value = [=](double, double, int, double, double* v) {
        v[0] = uc[0];
        v[1] = uc[1];
    };
    c.u.grad = [](double, double, int, double, double (*gr)[2]) {
        gr[0][0] = gr[0][1] = gr[1][0] = gr[1][1] = 0.0;
    };
    c.p.value = [](double, double, int, double, double* v) { v[0] = 0.0; };
    c.p.grad = [](double, double, int, double, double (*gr)[2]) { gr[0][0] = gr[0][1] = 0.0; };
    c.eta.value = [=](double x, double y, int, double t, double* v) {
        for (int k = 0; k < 2; ++k) v[k] = a0[k] + bx[k] * x + dy[k] * y + t * uc[k];
    };
    c.eta.grad = [=](double, double, int, double, double (*gr)[2]) {
        for (int k = 0; k < 2; ++k) {
            gr[k][0] = bx[k];
            gr[k][1] = dy[k];
        }
    };
    c.w.value = c.u.value;
    c.w.grad = c.u.grad;

    const GeometrySpec geom = c.geom;
    // the exact solid flux d_n eta0 on the outer boundary and its negative as
    // the interface jump (the fluid traction vanishes identically)
    c.g_boundary = [=](Side side, int strip, double, double, double, int comp) {
        if (geom.roles[strip] != StripRole::Solid) return 0.0;
        double nx = 0.0, ny = 0.0;
        switch (side) {
            case Side::Left: nx = -1.0; break;
            case Side::Right: nx = 1.0; break;
            case Side::Bottom: ny = -1.0; break;
            case Side::Top: ny = 1.0; break;
        }
        return bx[comp] * nx + dy[comp] * ny;
    };
    c.j_interface = [=](int tag, double, double, int comp) {
        const double ny = geom.roles[tag] == StripRole::Fluid ? 1.0 : -1.0;
        return -dy[comp] * ny;
    };
    return c;
}

ExactField exact_at(const TimeField& f, int ncomp, double t) {
    ExactField e;
    e.ncomp = ncomp;
    e.value = [f, t](double x, double y, int strip, double* v) { f.value(x, y, strip, t, v); };
    e.grad = [f, t](double x, double y, int strip, double (*g)[2]) { f.grad(x, y, strip, t, g); };
    return e;
}

PointFn point_value(const TimeField& f, int ncomp, double t) {
    return [f, ncomp, t](double x, double y, int strip, int comp) {
        double v[2] = {0.0, 0.0};
        (void)ncomp;
        f.value(x, y, strip, t, v);
        return v[comp];
    };
}

namespace {

constexpr double kDelta = 1e-4;
constexpr double kMargin = 10.0 * kDelta;

// 4th-order central first derivative
template <class F>
double fd1(const F& f, double s) {
    return (-f(s + 2.0 * kDelta) + 8.0 * f(s + kDelta) - 8.0 * f(s - kDelta) + f(s - 2.0 * kDelta)) /
           (12.0 * kDelta);
}

struct Acc {
    VerifyReport rep;
    void add(const char* check, double r) {
        r = std::abs(r);
        for (auto& l : rep.lines)
            if (l.check == check) {
                l.max_residual = std::max(l.max_residual, r);
                ++rep.n_checks;
                return;
            }
        rep.lines.push_back({check, r});
        ++rep.n_checks;
    }
};

struct Probe {
    const CaseDef& c;

    double val(const TimeField& f, double x, double y, int strip, double t, int comp) const {
        double v[2] = {0.0, 0.0};
        f.value(x, y, strip, t, v);
        return v[comp];
    }
    double grd(const TimeField& f, double x, double y, int strip, double t, int comp,
               int dir) const {
        double g[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
        f.grad(x, y, strip, t, g);
        return g[comp][dir];
    }
    // derivative of an analytic gradient component along direction `dir2`
    double second(const TimeField& f, double x, double y, int strip, double t, int comp, int dir,
                  int dir2) const {
        auto along = [&](double s) {
            return grd(f, dir2 == 0 ? s : x, dir2 == 1 ? s : y, strip, t, comp, dir);
        };
        return fd1(along, dir2 == 0 ? x : y);
    }
    double dt(const TimeField& f, double x, double y, int strip, double t, int comp) const {
        return fd1([&](double s) { return val(f, x, y, strip, s, comp); }, t);
    }
    double laplace(const TimeField& f, double x, double y, int strip, double t, int comp) const {
        return second(f, x, y, strip, t, comp, 0, 0) + second(f, x, y, strip, t, comp, 1, 1);
    }
};

void check_gradients(Acc& acc, const Probe& pr, const char* name, const TimeField& f, double x,
                     double y, int strip, double t, int ncomp) {
    for (int comp = 0; comp < ncomp; ++comp) {
        const double gx = fd1([&](double s) { return pr.val(f, s, y, strip, t, comp); }, x);
        const double gy = fd1([&](double s) { return pr.val(f, x, s, strip, t, comp); }, y);
        acc.add(name, gx - pr.grd(f, x, y, strip, t, comp, 0));
        acc.add(name, gy - pr.grd(f, x, y, strip, t, comp, 1));
    }
}

void outward_normal(Side side, double& nx, double& ny) {
    nx = ny = 0.0;
    switch (side) {
        case Side::Left: nx = -1.0; break;
        case Side::Right: nx = 1.0; break;
        case Side::Bottom: ny = -1.0; break;
        case Side::Top: ny = 1.0; break;
    }
}

} // namespace

VerifyReport verify_sources(const CaseDef& c, int n_samples, unsigned seed) {
    if (!c.has_exact)
        throw std::invalid_argument("verify_sources: case '" + c.name + "' has no exact solution");
    if (n_samples < 1) throw std::invalid_argument("verify_sources: n_samples must be positive");

    const GeometrySpec& g = c.geom;
    const int nc = c.ncomp();
    const bool stokes = c.kind == ProblemKind::StokesWave;
    Probe pr{c};
    Acc acc;

    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> ux(g.x0 + kMargin, g.x1 - kMargin);
    std::uniform_real_distribution<double> ut(0.05, 1.0);
    auto uy = [&](int strip) {
        std::uniform_real_distribution<double> d(g.y_levels[strip] + kMargin,
                                                 g.y_levels[strip + 1] - kMargin);
        return d(rng);
    };

    // volume residuals per strip
    for (int s = 0; s < g.n_strips(); ++s) {
        const bool fluid = g.roles[s] == StripRole::Fluid;
        for (int k = 0; k < n_samples; ++k) {
            const double x = ux(rng), y = uy(s), t = ut(rng);
            if (fluid) {
                check_gradients(acc, pr, "grad_u_fd", c.u, x, y, s, t, nc);
                if (stokes) {
                    check_gradients(acc, pr, "grad_p_fd", c.p, x, y, s, t, 1);
                    for (int comp = 0; comp < nc; ++comp) {
                        // d_t u - div(D(u) - pI) = f with
                        // (div D(u))_c = (Lap u_c + d_c div u)/2
                        const double ddiv =
                            pr.second(c.u, x, y, s, t, 0, 0, comp) +
                            pr.second(c.u, x, y, s, t, 1, 1, comp);
                        const double dp =
                            fd1([&](double v) {
                                return pr.val(c.p, comp == 0 ? v : x, comp == 1 ? v : y, s, t, 0);
                            }, comp == 0 ? x : y);
                        const double r = pr.dt(c.u, x, y, s, t, comp) -
                                         0.5 * (pr.laplace(c.u, x, y, s, t, comp) + ddiv) + dp -
                                         (c.f_fluid ? c.f_fluid(x, y, s, t, comp) : 0.0);
                        acc.add("fluid_momentum", r);
                    }
                    const double divu =
                        fd1([&](double v) { return pr.val(c.u, v, y, s, t, 0); }, x) +
                        fd1([&](double v) { return pr.val(c.u, x, v, s, t, 1); }, y);
                    acc.add("continuity", divu - (c.g_mass ? c.g_mass(x, y, s, t) : 0.0));
                } else {
                    const double r = pr.dt(c.u, x, y, s, t, 0) - pr.laplace(c.u, x, y, s, t, 0) -
                                     (c.f_fluid ? c.f_fluid(x, y, s, t, 0) : 0.0);
                    acc.add("heat_momentum", r);
                }
            } else {
                check_gradients(acc, pr, "grad_eta_fd", c.eta, x, y, s, t, nc);
                for (int comp = 0; comp < nc; ++comp) {
                    acc.add("w_eq_dt_eta",
                            pr.val(c.w, x, y, s, t, comp) - pr.dt(c.eta, x, y, s, t, comp));
                    // d_tt eta = d_t w keeps every stencil first order
                    const double r = pr.dt(c.w, x, y, s, t, comp) -
                                     pr.laplace(c.eta, x, y, s, t, comp) -
                                     (c.f_solid ? c.f_solid(x, y, s, t, comp) : 0.0);
                    acc.add(stokes ? "solid_momentum" : "wave_momentum", r);
                }
            }
        }
    }

    // interface conditions
    for (int tag = 0; tag < g.n_interfaces(); ++tag) {
        const double yl = g.interface_y(tag);
        const bool fluid_below = g.roles[tag] == StripRole::Fluid;
        const int sf = fluid_below ? tag : tag + 1;
        const int ss = fluid_below ? tag + 1 : tag;
        const double ny = fluid_below ? 1.0 : -1.0;  // fluid -> solid
        for (int k = 0; k < n_samples; ++k) {
            const double x = ux(rng), t = ut(rng);
            for (int comp = 0; comp < nc; ++comp) {
                acc.add("kinematic", pr.val(c.u, x, yl, sf, t, comp) -
                                         pr.val(c.w, x, yl, ss, t, comp));
                const double j = c.j_interface ? c.j_interface(tag, x, t, comp) : 0.0;
                double lhs;
                if (stokes) {
                    double gu[2][2];
                    c.u.grad(x, yl, sf, t, gu);
                    const double Dc1 = 0.5 * (gu[comp][1] + gu[1][comp]);
                    const double pv = pr.val(c.p, x, yl, sf, t, 0);
                    lhs = (Dc1 - (comp == 1 ? pv : 0.0)) * ny;
                } else {
                    lhs = pr.grd(c.u, x, yl, sf, t, 0, 1) * ny;
                }
                const double dneta = pr.grd(c.eta, x, yl, ss, t, comp, 1) * ny;
                acc.add("traction_jump", lhs - dneta - j);
            }
        }
    }

    // outer boundary data
    for (int side = 0; side < 4; ++side) {
        const Side sd = static_cast<Side>(side);
        const BcType bc = g.side_bc(sd);
        if (bc == BcType::PeriodicX) continue;
        double nx, nyv;
        outward_normal(sd, nx, nyv);
        for (int s = 0; s < g.n_strips(); ++s) {
            if ((sd == Side::Bottom && s != 0) || (sd == Side::Top && s != g.n_strips() - 1))
                continue;
            const bool fluid = g.roles[s] == StripRole::Fluid;
            for (int k = 0; k < n_samples; ++k) {
                double x, y;
                if (sd == Side::Left || sd == Side::Right) {
                    x = sd == Side::Left ? g.x0 : g.x1;
                    y = uy(s);
                } else {
                    x = ux(rng);
                    y = sd == Side::Bottom ? g.y_levels.front() : g.y_levels.back();
                }
                const double t = ut(rng);
                for (int comp = 0; comp < nc; ++comp) {
                    if (bc == BcType::DirichletZero) {
                        if (fluid) {
                            acc.add("dirichlet_data", pr.val(c.u, x, y, s, t, comp));
                        } else {
                            acc.add("dirichlet_data", pr.val(c.eta, x, y, s, t, comp));
                            acc.add("dirichlet_data", pr.val(c.w, x, y, s, t, comp));
                        }
                        continue;
                    }
                    const double gb =
                        c.g_boundary ? c.g_boundary(sd, s, x, y, t, comp) : 0.0;
                    double lhs;
                    if (fluid && stokes) {
                        double gu[2][2];
                        c.u.grad(x, y, s, t, gu);
                        const double D[2][2] = {{gu[0][0], 0.5 * (gu[0][1] + gu[1][0])},
                                                {0.5 * (gu[0][1] + gu[1][0]), gu[1][1]}};
                        const double pv = pr.val(c.p, x, y, s, t, 0);
                        lhs = (D[comp][0] - (comp == 0 ? pv : 0.0)) * nx +
                              (D[comp][1] - (comp == 1 ? pv : 0.0)) * nyv;
                    } else if (fluid) {
                        lhs = pr.grd(c.u, x, y, s, t, 0, 0) * nx +
                              pr.grd(c.u, x, y, s, t, 0, 1) * nyv;
                    } else {
                        lhs = pr.grd(c.eta, x, y, s, t, comp, 0) * nx +
                              pr.grd(c.eta, x, y, s, t, comp, 1) * nyv;
                    }
                    acc.add("boundary_data", lhs - gb);
                }
            }
        }
    }

    for (const auto& l : acc.rep.lines)
        acc.rep.max_residual = std::max(acc.rep.max_residual, l.max_residual);
    acc.rep.pass = acc.rep.max_residual <= 1e-6;
    return acc.rep;
}

} // namespace fsifem
