#include "bdiv/resistance.hpp"

#include "bdiv/errors.hpp"
#include "bdiv/linalg.hpp"

namespace bdiv {

namespace {

// Weighted Laplacian of one component (conductance 1/length), with the
// component's first vertex grounded (row and column dropped).
struct GroundedLaplacian {
    std::vector<int> vertices;       // component vertices in order; [0] is ground
    std::vector<int> slot;           // graph vertex -> row in the reduced matrix, -1 for ground
    RatMatrix reduced;
};

GroundedLaplacian grounded_laplacian(const MetrizedGraph& g, int component) {
    GroundedLaplacian gl;
    gl.vertices = g.component_vertices().at(static_cast<size_t>(component));
    gl.slot.assign(static_cast<size_t>(g.vertex_count()), -1);
    for (size_t i = 1; i < gl.vertices.size(); ++i)
        gl.slot[static_cast<size_t>(gl.vertices[i])] = static_cast<int>(i - 1);
    const size_t n = gl.vertices.size() - 1;
    gl.reduced.assign(n, std::vector<Rat>(n, Rat(0)));
    for (int e : g.component_edges().at(static_cast<size_t>(component))) {
        const auto& ed = g.edge(e);
        const Rat c = Rat(1) / ed.length;
        const int ia = gl.slot[static_cast<size_t>(ed.a)];
        const int ib = gl.slot[static_cast<size_t>(ed.b)];
        if (ia >= 0) gl.reduced[static_cast<size_t>(ia)][static_cast<size_t>(ia)] += c;
        if (ib >= 0) gl.reduced[static_cast<size_t>(ib)][static_cast<size_t>(ib)] += c;
        if (ia >= 0 && ib >= 0) {
            gl.reduced[static_cast<size_t>(ia)][static_cast<size_t>(ib)] -= c;
            gl.reduced[static_cast<size_t>(ib)][static_cast<size_t>(ia)] -= c;
        }
    }
    return gl;
}

}  // namespace

ResistanceValue effective_resistance(const GraphPtr& g, const GraphPoint& x, const GraphPoint& y) {
    g->check_point(x);
    g->check_point(y);
    if (x == y) return ResistanceValue::finite(Rat(0));

    // Promote interior points to vertices.
    GraphPtr work = g;
    GraphPoint px = x, py = y;
    std::vector<GraphPoint> cuts;
    if (!x.is_vertex()) cuts.push_back(x);
    if (!y.is_vertex()) cuts.push_back(y);
    if (!cuts.empty()) {
        Subdivision sub = subdivide(g, cuts);
        px = sub.map_point(x);
        py = sub.map_point(y);
        work = sub.child();
    }

    const int cx = work->component_of(px.index);
    if (cx != work->component_of(py.index)) return ResistanceValue::inf();

    GroundedLaplacian gl = grounded_laplacian(*work, cx);
    if (gl.reduced.empty()) return ResistanceValue::finite(Rat(0));  // single-vertex component
    std::vector<Rat> rhs(gl.reduced.size(), Rat(0));
    const int sx = gl.slot[static_cast<size_t>(px.index)];
    const int sy = gl.slot[static_cast<size_t>(py.index)];
    if (sx >= 0) rhs[static_cast<size_t>(sx)] = Rat(1);
    if (sy >= 0) rhs[static_cast<size_t>(sy)] = Rat(-1);
    std::vector<Rat> phi = solve_linear(gl.reduced, rhs);
    const Rat vx = sx >= 0 ? phi[static_cast<size_t>(sx)] : Rat(0);
    const Rat vy = sy >= 0 ? phi[static_cast<size_t>(sy)] : Rat(0);
    return ResistanceValue::finite(vx - vy);
}

std::vector<Rat> edge_endpoint_resistances(const MetrizedGraph& g) {
    std::vector<Rat> out(static_cast<size_t>(g.edge_count()), Rat(0));
    for (int comp = 0; comp < g.component_count(); ++comp) {
        const auto& edges = g.component_edges().at(static_cast<size_t>(comp));
        if (edges.empty()) continue;
        GroundedLaplacian gl = grounded_laplacian(g, comp);
        RatMatrix z = invert(gl.reduced);
        auto zat = [&](int u, int v) {
            const int su = gl.slot[static_cast<size_t>(u)], sv = gl.slot[static_cast<size_t>(v)];
            if (su < 0 || sv < 0) return Rat(0);
            return z[static_cast<size_t>(su)][static_cast<size_t>(sv)];
        };
        for (int e : edges) {
            const auto& ed = g.edge(e);
            out[static_cast<size_t>(e)] =
                zat(ed.a, ed.a) + zat(ed.b, ed.b) - Rat(2) * zat(ed.a, ed.b);
        }
    }
    return out;
}

std::vector<long> betti_numbers(const MetrizedGraph& g) {
    std::vector<long> out;
    for (int c = 0; c < g.component_count(); ++c)
        out.push_back(static_cast<long>(g.component_edges().at(static_cast<size_t>(c)).size()) -
                      static_cast<long>(g.component_vertices().at(static_cast<size_t>(c)).size()) + 1);
    return out;
}

}  // namespace bdiv
