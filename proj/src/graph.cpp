#include "bdiv/graph.hpp"

#include <algorithm>
#include <set>

#include "bdiv/errors.hpp"

namespace bdiv {

std::string to_string(const GraphPoint& p) {
    if (p.is_vertex()) return "v" + std::to_string(p.index);
    return "e" + std::to_string(p.index) + "@" + p.offset.str();
}

MetrizedGraph::MetrizedGraph(std::vector<std::string> vertex_names, std::vector<Edge> edges,
                             std::vector<std::string> cusp_labels)
    : names_(std::move(vertex_names)), edges_(std::move(edges)), cusps_(std::move(cusp_labels)) {
    const int n = vertex_count();
    if (cusps_.size() != names_.size())
        throw InputError("cusp label count does not match vertex count");
    {
        std::set<std::string> seen;
        for (const auto& nm : names_)
            if (!seen.insert(nm).second) throw InputError("duplicate vertex name '" + nm + "'");
    }
    incident_.assign(static_cast<size_t>(n), {});
    for (size_t e = 0; e < edges_.size(); ++e) {
        const Edge& ed = edges_[e];
        if (ed.a < 0 || ed.a >= n || ed.b < 0 || ed.b >= n)
            throw InputError("edge endpoint out of range");
        if (ed.a == ed.b) throw InputError("loop edge reached graph core (normalize via build_graph)");
        if (!(ed.length > Rat(0))) throw InputError("edge length must be strictly positive");
        incident_[static_cast<size_t>(ed.a)].emplace_back(static_cast<int>(e), true);
        incident_[static_cast<size_t>(ed.b)].emplace_back(static_cast<int>(e), false);
    }

    // Connected components by union-find.
    std::vector<int> parent(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) parent[static_cast<size_t>(i)] = i;
    auto find = [&](int v) {
        while (parent[static_cast<size_t>(v)] != v) {
            parent[static_cast<size_t>(v)] = parent[static_cast<size_t>(parent[static_cast<size_t>(v)])];
            v = parent[static_cast<size_t>(v)];
        }
        return v;
    };
    for (const Edge& ed : edges_) parent[static_cast<size_t>(find(ed.a))] = find(ed.b);

    component_of_.assign(static_cast<size_t>(n), -1);
    for (int v = 0; v < n; ++v) {
        int root = find(v);
        if (component_of_[static_cast<size_t>(root)] < 0) {
            component_of_[static_cast<size_t>(root)] = static_cast<int>(component_vertices_.size());
            component_vertices_.emplace_back();
        }
        component_of_[static_cast<size_t>(v)] = component_of_[static_cast<size_t>(root)];
        component_vertices_[static_cast<size_t>(component_of_[static_cast<size_t>(v)])].push_back(v);
    }
    component_edges_.assign(component_vertices_.size(), {});
    for (size_t e = 0; e < edges_.size(); ++e)
        component_edges_[static_cast<size_t>(component_of_[static_cast<size_t>(edges_[e].a)])]
            .push_back(static_cast<int>(e));

    for (int v = 0; v < n; ++v)
        if (cusps_[static_cast<size_t>(v)] !=
            cusps_[static_cast<size_t>(component_vertices_[static_cast<size_t>(component_of(v))][0])])
            throw InputError("cusp label varies on a connected component");
}

std::optional<int> MetrizedGraph::vertex_by_name(const std::string& name) const {
    for (size_t i = 0; i < names_.size(); ++i)
        if (names_[i] == name) return static_cast<int>(i);
    return std::nullopt;
}

int MetrizedGraph::component_of_point(const GraphPoint& p) const {
    check_point(p);
    if (p.is_vertex()) return component_of(p.index);
    return component_of(edge(p.index).a);
}

const std::string& MetrizedGraph::cusp_of_component(int c) const {
    return cusps_.at(static_cast<size_t>(component_vertices_.at(static_cast<size_t>(c)).at(0)));
}

Rat MetrizedGraph::total_length() const {
    Rat acc(0);
    for (const Edge& e : edges_) acc += e.length;
    return acc;
}

void MetrizedGraph::check_point(const GraphPoint& p) const {
    if (p.is_vertex()) {
        if (p.index < 0 || p.index >= vertex_count())
            throw InputError("point refers to unknown vertex " + std::to_string(p.index));
        return;
    }
    if (p.index < 0 || p.index >= edge_count())
        throw InputError("point refers to unknown edge " + std::to_string(p.index));
    const Edge& e = edge(p.index);
    if (!(p.offset > Rat(0)) || !(p.offset < e.length))
        throw InputError("edge point offset " + p.offset.str() + " outside (0, " + e.length.str() + ")");
}

bool MetrizedGraph::same_shape(const MetrizedGraph& o) const {
    if (vertex_count() != o.vertex_count() || edge_count() != o.edge_count()) return false;
    for (int e = 0; e < edge_count(); ++e) {
        const Edge &x = edge(e), &y = o.edge(e);
        if (x.a != y.a || x.b != y.b || x.length != y.length) return false;
    }
    return cusps_ == o.cusps_;
}

void GraphDivisor::add(const GraphPoint& p, const Rat& coeff) {
    if (coeff.is_zero()) return;
    auto [it, inserted] = coeffs_.emplace(p, coeff);
    if (!inserted) {
        it->second += coeff;
        if (it->second.is_zero()) coeffs_.erase(it);
    }
}

Rat GraphDivisor::coeff(const GraphPoint& p) const {
    auto it = coeffs_.find(p);
    return it == coeffs_.end() ? Rat(0) : it->second;
}

Rat GraphDivisor::degree() const {
    Rat acc(0);
    for (const auto& [p, c] : coeffs_) acc += c;
    return acc;
}

Rat GraphDivisor::degree_on_component(const MetrizedGraph& g, int component) const {
    Rat acc(0);
    for (const auto& [p, c] : coeffs_)
        if (g.component_of_point(p) == component) acc += c;
    return acc;
}

GraphDivisor& GraphDivisor::operator+=(const GraphDivisor& o) {
    for (const auto& [p, c] : o.coeffs_) add(p, c);
    return *this;
}

GraphDivisor& GraphDivisor::operator*=(const Rat& s) {
    if (s.is_zero()) {
        coeffs_.clear();
        return *this;
    }
    for (auto& [p, c] : coeffs_) c *= s;
    return *this;
}

BuiltGraph build_graph(const GraphSpec& spec) {
    std::vector<std::string> names = spec.names;
    if (names.empty())
        for (int i = 0; i < spec.vertex_count; ++i) names.push_back("v" + std::to_string(i));
    const int n_in = static_cast<int>(names.size());

    std::set<std::string> used(names.begin(), names.end());
    auto fresh_name = [&](const std::string& base) {
        std::string nm = base;
        int k = 0;
        while (used.count(nm)) nm = base + "_" + std::to_string(++k);
        used.insert(nm);
        return nm;
    };

    std::vector<MetrizedGraph::Edge> edges;
    BuiltGraph out;
    out.input_edges.resize(spec.edges.size());

    // Loops are split in three by two interior points; everything downstream
    // assumes a loop-free multigraph. The split is an isometry.
    std::vector<std::string> all_names = names;
    for (size_t ie = 0; ie < spec.edges.size(); ++ie) {
        auto [a, b, len] = spec.edges[ie];
        if (a < 0 || a >= n_in || b < 0 || b >= n_in)
            throw InputError("edge endpoint out of range in graph description");
        if (!(len > Rat(0))) throw InputError("edge length must be strictly positive");
        EdgeImage& img = out.input_edges[ie];
        if (a != b) {
            img.edges.push_back(static_cast<int>(edges.size()));
            edges.push_back({a, b, len});
        } else {
            int p = static_cast<int>(all_names.size());
            all_names.push_back(fresh_name(names[static_cast<size_t>(a)] + ".l1"));
            int q = static_cast<int>(all_names.size());
            all_names.push_back(fresh_name(names[static_cast<size_t>(a)] + ".l2"));
            const Rat third = len / Rat(3);
            img.inner_vertices = {p, q};
            img.edges = {static_cast<int>(edges.size()), static_cast<int>(edges.size()) + 1,
                         static_cast<int>(edges.size()) + 2};
            edges.push_back({a, p, third});
            edges.push_back({p, q, third});
            edges.push_back({q, a, third});
        }
    }

    std::vector<std::string> cusps;
    if (!spec.cusps.empty()) {
        if (spec.cusps.size() != names.size())
            throw InputError("cusp label count does not match vertex count");
        cusps = spec.cusps;
        cusps.resize(all_names.size());
        // Inserted loop points inherit the loop vertex's label.
        for (size_t ie = 0; ie < spec.edges.size(); ++ie)
            for (int iv : out.input_edges[ie].inner_vertices)
                cusps[static_cast<size_t>(iv)] = cusps[static_cast<size_t>(std::get<0>(spec.edges[ie]))];
        out.graph = std::make_shared<MetrizedGraph>(all_names, edges, cusps);
    } else {
        // Auto-label components c0, c1, ... in vertex order.
        std::vector<std::string> blank(all_names.size(), "c?");
        MetrizedGraph probe(all_names, edges, blank);
        cusps.resize(all_names.size());
        for (size_t v = 0; v < all_names.size(); ++v)
            cusps[v] = "c" + std::to_string(probe.component_of(static_cast<int>(v)));
        out.graph = std::make_shared<MetrizedGraph>(all_names, edges, cusps);
    }
    return out;
}

GraphPoint BuiltGraph::locate(int input_edge, const Rat& offset) const {
    if (input_edge < 0 || input_edge >= static_cast<int>(input_edges.size()))
        throw InputError("unknown input edge " + std::to_string(input_edge));
    const EdgeImage& img = input_edges[static_cast<size_t>(input_edge)];
    Rat remaining = offset;
    for (size_t k = 0; k < img.edges.size(); ++k) {
        const auto& e = graph->edge(img.edges[k]);
        if (remaining < e.length)
            return remaining.is_zero() ? GraphPoint::vertex(e.a)
                                       : GraphPoint::on_edge(img.edges[k], remaining);
        if (remaining == e.length && k + 1 == img.edges.size()) return GraphPoint::vertex(e.b);
        remaining -= e.length;
    }
    throw InputError("offset " + offset.str() + " beyond input edge length");
}

GraphPtr make_graph(int vertex_count, std::vector<std::tuple<int, int, Rat>> edges) {
    GraphSpec spec;
    spec.vertex_count = vertex_count;
    spec.edges = std::move(edges);
    return build_graph(spec).graph;
}

GraphPoint Subdivision::map_point(const GraphPoint& p) const {
    parent_->check_point(p);
    if (p.is_vertex()) return p;
    const EdgeSplit& sp = splits_.at(static_cast<size_t>(p.index));
    Rat lo(0);
    for (size_t k = 0; k <= sp.cuts.size(); ++k) {
        const Rat hi = k < sp.cuts.size() ? sp.cuts[k] : parent_->edge(p.index).length;
        if (p.offset == hi && k < sp.cuts.size()) return GraphPoint::vertex(sp.child_vertices[k]);
        if (p.offset < hi) return GraphPoint::on_edge(sp.child_edges[k], p.offset - lo);
        lo = hi;
    }
    throw ConsistencyError("subdivision point mapping fell through");
}

GraphDivisor Subdivision::map_divisor(const GraphDivisor& d) const {
    GraphDivisor out;
    for (const auto& [p, c] : d.terms()) out.add(map_point(p), c);
    return out;
}

GraphPoint Subdivision::locate_in_parent(const GraphPoint& child_point) const {
    child_->check_point(child_point);
    if (child_point.is_vertex()) {
        if (child_point.index < parent_->vertex_count()) return child_point;
        return child_vertex_origin_.at(static_cast<size_t>(child_point.index - parent_->vertex_count()));
    }
    const auto& [pe, base] = child_edge_origin_.at(static_cast<size_t>(child_point.index));
    return GraphPoint::on_edge(pe, base + child_point.offset);
}

Subdivision subdivide(const GraphPtr& g, const std::vector<GraphPoint>& pts) {
    std::set<GraphPoint> seen;
    std::vector<std::vector<Rat>> cuts(static_cast<size_t>(g->edge_count()));
    for (const GraphPoint& p : pts) {
        g->check_point(p);
        if (p.is_vertex()) throw InputError("subdivision point must lie in an edge interior");
        if (!seen.insert(p).second) throw InputError("duplicate subdivision point " + to_string(p));
        cuts[static_cast<size_t>(p.index)].push_back(p.offset);
    }
    for (auto& c : cuts) std::sort(c.begin(), c.end());

    std::vector<std::string> names;
    names.reserve(static_cast<size_t>(g->vertex_count()));
    std::set<std::string> used;
    for (int v = 0; v < g->vertex_count(); ++v) {
        names.push_back(g->vertex_name(v));
        used.insert(names.back());
    }
    auto fresh_name = [&](const std::string& base) {
        std::string nm = base;
        int k = 0;
        while (used.count(nm)) nm = base + "_" + std::to_string(++k);
        used.insert(nm);
        return nm;
    };

    std::vector<std::string> cusps;
    for (int v = 0; v < g->vertex_count(); ++v) cusps.push_back(g->cusp_of_vertex(v));

    Subdivision sub;
    sub.parent_ = g;
    sub.splits_.resize(static_cast<size_t>(g->edge_count()));
    std::vector<MetrizedGraph::Edge> edges;
    for (int e = 0; e < g->edge_count(); ++e) {
        const auto& ed = g->edge(e);
        Subdivision::EdgeSplit& sp = sub.splits_[static_cast<size_t>(e)];
        sp.cuts = cuts[static_cast<size_t>(e)];
        int prev = ed.a;
        Rat lo(0);
        for (size_t k = 0; k <= sp.cuts.size(); ++k) {
            const bool last = k == sp.cuts.size();
            const Rat hi = last ? ed.length : sp.cuts[k];
            int next;
            if (last) {
                next = ed.b;
            } else {
                next = static_cast<int>(names.size());
                names.push_back(fresh_name("e" + std::to_string(e) + "@" + sp.cuts[k].str()));
                cusps.push_back(g->cusp_of_vertex(ed.a));
                sp.child_vertices.push_back(next);
                sub.child_vertex_origin_.push_back(GraphPoint::on_edge(e, sp.cuts[k]));
            }
            sp.child_edges.push_back(static_cast<int>(edges.size()));
            sub.child_edge_origin_.emplace_back(e, lo);
            edges.push_back({prev, next, hi - lo});
            prev = next;
            lo = hi;
        }
    }
    sub.child_ = std::make_shared<MetrizedGraph>(names, edges, cusps);
    return sub;
}

GraphPtr remove_edge(const MetrizedGraph& g, int e) {
    if (e < 0 || e >= g.edge_count()) throw InputError("remove_edge: unknown edge");
    std::vector<std::string> names, cusps;
    for (int v = 0; v < g.vertex_count(); ++v) {
        names.push_back(g.vertex_name(v));
        cusps.push_back(g.cusp_of_vertex(v));
    }
    std::vector<MetrizedGraph::Edge> edges;
    for (int k = 0; k < g.edge_count(); ++k)
        if (k != e) edges.push_back(g.edge(k));
    return std::make_shared<MetrizedGraph>(std::move(names), std::move(edges), std::move(cusps));
}

GraphPoint ComponentView::to_local(const GraphPoint& parent_point) const {
    if (parent_point.is_vertex()) {
        const int lv = vertex_from_parent.at(static_cast<size_t>(parent_point.index));
        if (lv < 0) throw InputError("point lies outside the component");
        return GraphPoint::vertex(lv);
    }
    const int le = edge_from_parent.at(static_cast<size_t>(parent_point.index));
    if (le < 0) throw InputError("point lies outside the component");
    return GraphPoint::on_edge(le, parent_point.offset);
}

GraphPoint ComponentView::to_parent(const GraphPoint& local_point) const {
    if (local_point.is_vertex())
        return GraphPoint::vertex(vertex_to_parent.at(static_cast<size_t>(local_point.index)));
    return GraphPoint::on_edge(edge_to_parent.at(static_cast<size_t>(local_point.index)),
                               local_point.offset);
}

GraphDivisor ComponentView::divisor_to_local(const GraphDivisor& d, const MetrizedGraph& parent,
                                             int component) const {
    GraphDivisor out;
    for (const auto& [p, c] : d.terms())
        if (parent.component_of_point(p) == component) out.add(to_local(p), c);
    return out;
}

std::vector<ComponentView> split_components(const GraphPtr& g) {
    std::vector<ComponentView> out;
    for (int comp = 0; comp < g->component_count(); ++comp) {
        ComponentView cv;
        cv.vertex_from_parent.assign(static_cast<size_t>(g->vertex_count()), -1);
        cv.edge_from_parent.assign(static_cast<size_t>(g->edge_count()), -1);
        std::vector<std::string> names, cusps;
        for (int v : g->component_vertices().at(static_cast<size_t>(comp))) {
            cv.vertex_from_parent[static_cast<size_t>(v)] = static_cast<int>(cv.vertex_to_parent.size());
            cv.vertex_to_parent.push_back(v);
            names.push_back(g->vertex_name(v));
            cusps.push_back(g->cusp_of_vertex(v));
        }
        std::vector<MetrizedGraph::Edge> edges;
        for (int e : g->component_edges().at(static_cast<size_t>(comp))) {
            const auto& ed = g->edge(e);
            cv.edge_from_parent[static_cast<size_t>(e)] = static_cast<int>(cv.edge_to_parent.size());
            cv.edge_to_parent.push_back(e);
            edges.push_back({cv.vertex_from_parent[static_cast<size_t>(ed.a)],
                             cv.vertex_from_parent[static_cast<size_t>(ed.b)], ed.length});
        }
        cv.graph = std::make_shared<MetrizedGraph>(std::move(names), std::move(edges), std::move(cusps));
        out.push_back(std::move(cv));
    }
    return out;
}

}  // namespace bdiv
