#include "bdiv/green.hpp"

#include <optional>
#include <set>

#include "bdiv/canonical.hpp"
#include "bdiv/errors.hpp"
#include "bdiv/linalg.hpp"

namespace bdiv {

AdmissibleData admissible_measure(const GraphPtr& g, GraphDivisor K, const Rat& h) {
    if (h.is_zero()) throw InputError("admissible data requires h != 0");
    if (g->component_count() != 1)
        throw InputError("admissible data requires a connected graph; solve per component");
    for (const auto& [p, c] : K.terms()) g->check_point(p);
    if (K.degree() != Rat(2) * h - Rat(2))
        throw InputError("deg K = " + K.degree().str() + " but 2h-2 = " + (Rat(2) * h - Rat(2)).str());

    GraphMeasure mu = GraphMeasure::from_divisor(g, K) + Rat(2) * canonical_measure(g);
    mu *= Rat(1) / (Rat(2) * h);
    if (mu.total_mass() != Rat(1)) throw ConsistencyError("admissible measure mass is not 1");
    return AdmissibleData{g, std::move(K), h, std::move(mu)};
}

namespace {

// Cut set turning the atoms of m (and optionally x) into vertices, together
// with the density breakpoints of m.
std::vector<GraphPoint> interior_support(const GraphMeasure& m, const GraphPoint* x) {
    std::set<GraphPoint> cuts;
    for (const auto& [p, c] : m.dirac().terms())
        if (!p.is_vertex()) cuts.insert(p);
    const GraphPtr& g = m.graph();
    for (int e = 0; e < g->edge_count(); ++e) {
        const auto& segs = m.density(e);
        for (size_t k = 1; k < segs.size(); ++k) cuts.insert(GraphPoint::on_edge(e, segs[k].lo));
    }
    if (x && !x->is_vertex()) cuts.insert(*x);
    return {cuts.begin(), cuts.end()};
}

// Solves for the vertex values of g with Delta g = delta_x - mu on a graph
// where mu has constant density per edge and atoms only at vertices. Grounded
// at vertex 0; the normalization is applied by the caller.
PwQuad solve_vertex_system(const GraphPtr& g, const GraphMeasure& mu, int x_vertex) {
    const int n = g->vertex_count();
    std::vector<Rat> edge_density(static_cast<size_t>(g->edge_count()));
    for (int e = 0; e < g->edge_count(); ++e) {
        const auto& segs = mu.density(e);
        if (segs.size() != 1)
            throw ConsistencyError("green solve expected a single density segment per edge");
        edge_density[static_cast<size_t>(e)] = segs.front().density;
    }

    // Kirchhoff: (L g)_p = [p = x] - mu({p}) - sum_{e at p} density_e l_e / 2.
    std::vector<Rat> rhs(static_cast<size_t>(n), Rat(0));
    rhs[static_cast<size_t>(x_vertex)] += Rat(1);
    for (int v = 0; v < n; ++v) {
        rhs[static_cast<size_t>(v)] -= mu.dirac().coeff(GraphPoint::vertex(v));
        for (auto [e, at_a] : g->incident(v)) {
            (void)at_a;
            rhs[static_cast<size_t>(v)] -=
                edge_density[static_cast<size_t>(e)] * g->edge(e).length / Rat(2);
        }
    }

    RatMatrix lap(static_cast<size_t>(n - 1), std::vector<Rat>(static_cast<size_t>(n - 1), Rat(0)));
    for (int e = 0; e < g->edge_count(); ++e) {
        const auto& ed = g->edge(e);
        const Rat c = Rat(1) / ed.length;
        const int ia = ed.a - 1, ib = ed.b - 1;  // vertex 0 grounded
        if (ia >= 0) lap[static_cast<size_t>(ia)][static_cast<size_t>(ia)] += c;
        if (ib >= 0) lap[static_cast<size_t>(ib)][static_cast<size_t>(ib)] += c;
        if (ia >= 0 && ib >= 0) {
            lap[static_cast<size_t>(ia)][static_cast<size_t>(ib)] -= c;
            lap[static_cast<size_t>(ib)][static_cast<size_t>(ia)] -= c;
        }
    }
    std::vector<Rat> values(static_cast<size_t>(n), Rat(0));
    if (n > 1) {
        std::vector<Rat> reduced_rhs(rhs.begin() + 1, rhs.end());
        std::vector<Rat> sol = solve_linear(std::move(lap), std::move(reduced_rhs));
        for (int v = 1; v < n; ++v) values[static_cast<size_t>(v)] = sol[static_cast<size_t>(v - 1)];
    }

    // Each edge carries the quadratic with g'' = density interpolating the
    // endpoint values.
    std::vector<std::vector<PwQuad::Piece>> pieces(static_cast<size_t>(g->edge_count()));
    for (int e = 0; e < g->edge_count(); ++e) {
        const auto& ed = g->edge(e);
        const Rat a = edge_density[static_cast<size_t>(e)] / Rat(2);
        const Rat c0 = values[static_cast<size_t>(ed.a)];
        const Rat b = (values[static_cast<size_t>(ed.b)] - c0) / ed.length - a * ed.length;
        pieces[static_cast<size_t>(e)] = {PwQuad::Piece{Rat(0), ed.length, a, b, c0}};
    }
    return PwQuad(g, std::move(values), std::move(pieces));
}

}  // namespace

PwQuad green(const AdmissibleData& data, const GraphPoint& x) {
    const GraphPtr& g = data.graph;
    g->check_point(x);

    std::vector<GraphPoint> cuts = interior_support(data.mu, &x);
    if (cuts.empty()) {
        PwQuad f = solve_vertex_system(g, data.mu, x.index);
        return f + (-integrate(f, data.mu));
    }
    Subdivision sub = subdivide(g, cuts);
    GraphMeasure mu_fine = push_measure(sub, data.mu);
    const GraphPoint xf = sub.map_point(x);
    PwQuad f = solve_vertex_system(sub.child(), mu_fine, xf.index);
    f += -integrate(f, mu_fine);
    return pull_function(sub, f);
}

Rat zhang_constant(const AdmissibleData& data) {
    const GraphPtr& g = data.graph;
    std::vector<GraphPoint> probes;
    for (int v = 0; v < g->vertex_count() && probes.size() < 4; ++v)
        probes.push_back(GraphPoint::vertex(v));
    for (int e = 0; e < g->edge_count() && probes.size() < 4; ++e)
        probes.push_back(GraphPoint::on_edge(e, g->edge(e).length / Rat(2)));

    std::optional<Rat> c;
    for (const GraphPoint& y : probes) {
        const PwQuad gy = green(data, y);
        const Rat cy = -gy(y) - gy.on_divisor(data.K);
        if (!c)
            c = cy;
        else if (*c != cy)
            throw ConsistencyError("zhang constant differs between probe points: " + c->str() +
                                   " vs " + cy.str());
    }
    return *c;
}

PwQuad diagonal_green(const AdmissibleData& data) {
    const GraphPtr& g = data.graph;
    std::vector<GraphPoint> cuts = interior_support(data.mu, nullptr);
    std::optional<Subdivision> sub;
    GraphPtr work = g;
    if (!cuts.empty()) {
        sub.emplace(subdivide(g, cuts));
        work = sub->child();
    }
    auto on_parent = [&](const GraphPoint& p) { return sub ? sub->locate_in_parent(p) : p; };

    auto diag_at = [&](const GraphPoint& work_point) {
        const GraphPoint p = on_parent(work_point);
        return green(data, p)(p);
    };

    std::vector<Rat> vertex_diag(static_cast<size_t>(work->vertex_count()));
    for (int v = 0; v < work->vertex_count(); ++v)
        vertex_diag[static_cast<size_t>(v)] = diag_at(GraphPoint::vertex(v));

    std::vector<std::vector<PwQuad::Piece>> pieces(static_cast<size_t>(work->edge_count()));
    for (int e = 0; e < work->edge_count(); ++e) {
        const auto& ed = work->edge(e);
        const Rat l = ed.length;
        const Rat du = vertex_diag[static_cast<size_t>(ed.a)];
        const Rat dw = vertex_diag[static_cast<size_t>(ed.b)];
        const Rat dm = diag_at(GraphPoint::on_edge(e, l / Rat(2)));
        const Rat a = (Rat(2) * du + Rat(2) * dw - Rat(4) * dm) / (l * l);
        const Rat b = (Rat(4) * dm - Rat(3) * du - dw) / l;
        // Fourth sample validates the quadratic model.
        const Rat q = l / Rat(4);
        const Rat expect = (a * q + b) * q + du;
        const Rat have = diag_at(GraphPoint::on_edge(e, q));
        if (expect != have)
            throw ConsistencyError("diagonal green failed quadratic validation on edge " +
                                   std::to_string(e));
        pieces[static_cast<size_t>(e)] = {PwQuad::Piece{Rat(0), l, a, b, du}};
    }
    PwQuad f(work, std::move(vertex_diag), std::move(pieces));
    return sub ? pull_function(*sub, f) : f;
}

}  // namespace bdiv
