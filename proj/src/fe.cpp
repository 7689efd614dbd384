#include "fsifem/fe.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace fsifem {

int n_shape(ElementType e) {
    switch (e) {
        case ElementType::P1: return 3;
        case ElementType::P1B: return 4;
        case ElementType::P2: return 6;
    }
    throw std::logic_error("unknown element type");
}

int poly_order(ElementType e) {
    return e == ElementType::P2 ? 2 : 1;
}

void shape_values(ElementType e, double x, double y, double* N) {
    const double l1 = 1.0 - x - y, l2 = x, l3 = y;
    switch (e) {
        case ElementType::P1:
            N[0] = l1; N[1] = l2; N[2] = l3;
            return;
        case ElementType::P1B:
            N[0] = l1; N[1] = l2; N[2] = l3;
            N[3] = 27.0 * l1 * l2 * l3;
            return;
        case ElementType::P2:
            N[0] = l1 * (2.0 * l1 - 1.0);
            N[1] = l2 * (2.0 * l2 - 1.0);
            N[2] = l3 * (2.0 * l3 - 1.0);
            N[3] = 4.0 * l1 * l2;
            N[4] = 4.0 * l2 * l3;
            N[5] = 4.0 * l3 * l1;
            return;
    }
    throw std::logic_error("unknown element type");
}

void shape_grads(ElementType e, double x, double y, double g[][2]) {
    const double l1 = 1.0 - x - y, l2 = x, l3 = y;
    // grad l1 = (-1,-1), grad l2 = (1,0), grad l3 = (0,1)
    switch (e) {
        case ElementType::P1:
            g[0][0] = -1.0; g[0][1] = -1.0;
            g[1][0] = 1.0;  g[1][1] = 0.0;
            g[2][0] = 0.0;  g[2][1] = 1.0;
            return;
        case ElementType::P1B:
            g[0][0] = -1.0; g[0][1] = -1.0;
            g[1][0] = 1.0;  g[1][1] = 0.0;
            g[2][0] = 0.0;  g[2][1] = 1.0;
            g[3][0] = 27.0 * (-l2 * l3 + l1 * l3);
            g[3][1] = 27.0 * (-l2 * l3 + l1 * l2);
            return;
        case ElementType::P2:
            g[0][0] = -(4.0 * l1 - 1.0); g[0][1] = -(4.0 * l1 - 1.0);
            g[1][0] = 4.0 * l2 - 1.0;    g[1][1] = 0.0;
            g[2][0] = 0.0;               g[2][1] = 4.0 * l3 - 1.0;
            g[3][0] = 4.0 * (l1 - l2);   g[3][1] = -4.0 * l2;
            g[4][0] = 4.0 * l3;          g[4][1] = 4.0 * l2;
            g[5][0] = -4.0 * l3;         g[5][1] = 4.0 * (l1 - l3);
            return;
    }
    throw std::logic_error("unknown element type");
}

namespace {

// Symmetric rule tables.  Orbit parameters were taken from the standard
// published rules and re-solved against the exact simplex moments
// (max monomial residual below 3e-17 for every stored degree).
struct Orbit {
    int kind;        // 0 centroid, 1 = perms of (a,a,1-2a), 2 = perms of (a,b,1-a-b)
    double a, b, w;  // w is the per-point weight (already including the 1/2 area)
};

void expand(const Orbit& o, QuadratureRule& r) {
    auto add = [&r, &o](double l2, double l3) {
        r.pts.push_back({l2, l3});
        r.w.push_back(o.w);
    };
    const double third = 1.0 / 3.0;
    switch (o.kind) {
        case 0:
            add(third, third);
            return;
        case 1: {
            const double c = 1.0 - 2.0 * o.a;
            // barycentric perms of (a,a,c); points are (l2,l3)
            add(o.a, c);
            add(c, o.a);
            add(o.a, o.a);
            return;
        }
        case 2: {
            const double c = 1.0 - o.a - o.b;
            add(o.b, c);
            add(c, o.b);
            add(o.a, c);
            add(c, o.a);
            add(o.a, o.b);
            add(o.b, o.a);
            return;
        }
    }
}

QuadratureRule make_rule(int degree, std::initializer_list<Orbit> orbits) {
    QuadratureRule r;
    r.degree = degree;
    for (const auto& o : orbits) expand(o, r);
    return r;
}

const std::vector<QuadratureRule>& stored_rules() {
    static const std::vector<QuadratureRule> rules = [] {
        std::vector<QuadratureRule> v;
        v.push_back(make_rule(1, {{0, 0, 0, 0.5}}));
        v.push_back(make_rule(2, {{1, 1.0 / 6.0, 0, 1.0 / 6.0}}));
        v.push_back(make_rule(4, {
            {1, 0.44594849091596472, 0, 0.11169079483900549},
            {1, 0.091576213509771076, 0, 0.054975871827661178}}));
        v.push_back(make_rule(5, {
            {0, 0, 0, 0.1125},
            {1, 0.47014206410511494, 0, 0.066197076394252943},
            {1, 0.10128650732345645, 0, 0.062969590272413709}}));
        v.push_back(make_rule(6, {
            {1, 0.24928674517090399, 0, 0.058393137863194805},
            {1, 0.063089014491503503, 0, 0.025422453185104315},
            {2, 0.31035245103378906, 0.63650249912139811, 0.04142553780918376}}));
        v.push_back(make_rule(8, {
            {0, 0, 0, 0.07215780383890881},
            {1, 0.45929258829274566, 0, 0.047545817133631402},
            {1, 0.17056930775178419, 0, 0.051608685267362356},
            {1, 0.05054722831703147, 0, 0.016229248811598339},
            {2, 0.26311282963457439, 0.72849239295544732, 0.013615157087219153}}));
        v.push_back(make_rule(10, {
            {0, 0, 0, 0.04540899519146336},
            {1, 0.48557763338386833, 0, 0.018362978878080333},
            {1, 0.10948157548506238, 0, 0.022660529717766522},
            {2, 0.14170721941452652, 0.30793983876438563, 0.036378958422813301},
            {2, 0.025003534762608685, 0.24667256063970222, 0.014163621265488294},
            {2, 0.0095408154003357396, 0.066803251012143391, 0.0047108334818644227}}));
        return v;
    }();
    return rules;
}

} // namespace

const QuadratureRule& triangle_rule(int degree) {
    if (degree < 0 || degree > 10)
        throw std::invalid_argument("triangle_rule: degree must be in [0, 10]");
    for (const auto& r : stored_rules())
        if (r.degree >= degree) return r;
    throw std::logic_error("triangle_rule: no stored rule");
}

const GaussRule1D& gauss_rule_1d(int npoints) {
    if (npoints < 1 || npoints > 30)
        throw std::invalid_argument("gauss_rule_1d: npoints must be in [1, 30]");
    static std::map<int, GaussRule1D> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(npoints);
    if (it != cache.end()) return it->second;

    // Legendre nodes on [-1,1] by Newton iteration, then mapped onto [0,1].
    GaussRule1D r;
    const int n = npoints;
    for (int i = 0; i < n; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        for (int it2 = 0; it2 < 100; ++it2) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            double dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        double dp = n * (x * p1 - p0) / (x * x - 1.0);
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        r.x.push_back(0.5 * (x + 1.0));
        r.w.push_back(0.5 * w);
    }
    // ascending nodes for reproducible assembly order
    for (size_t i = 0; i + 1 < r.x.size(); ++i)
        for (size_t j = i + 1; j < r.x.size(); ++j)
            if (r.x[j] < r.x[i]) {
                std::swap(r.x[i], r.x[j]);
                std::swap(r.w[i], r.w[j]);
            }
    return cache.emplace(npoints, std::move(r)).first->second;
}

AffineMap affine_map(const double* a, const double* b, const double* c) {
    AffineMap m;
    m.x0 = a[0];
    m.y0 = a[1];
    m.J[0][0] = b[0] - a[0];
    m.J[0][1] = c[0] - a[0];
    m.J[1][0] = b[1] - a[1];
    m.J[1][1] = c[1] - a[1];
    m.det = m.J[0][0] * m.J[1][1] - m.J[0][1] * m.J[1][0];
    if (m.det == 0.0) throw std::invalid_argument("affine_map: degenerate triangle");
    const double inv = 1.0 / m.det;
    // inv(J) = [[J11, -J01], [-J10, J00]]/det; invJT is its transpose
    m.invJT[0][0] = m.J[1][1] * inv;
    m.invJT[0][1] = -m.J[1][0] * inv;
    m.invJT[1][0] = -m.J[0][1] * inv;
    m.invJT[1][1] = m.J[0][0] * inv;
    return m;
}

} // namespace fsifem
