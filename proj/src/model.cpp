#include "bdiv/model.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "bdiv/errors.hpp"

namespace bdiv {

namespace {

Rat seg_length(const Rat& t0, const Rat& t1) { return (t1 - t0).abs(); }

}  // namespace

ModelGraph ModelGraph::base(std::vector<Vertex> vertices, std::vector<std::pair<int, int>> edges) {
    ModelGraph m;
    m.verts_ = std::move(vertices);
    m.edges_ = std::move(edges);
    m.base_vertex_count_ = m.vertex_count();

    const int n = m.vertex_count();
    if (n == 0) throw InputError("model requires at least one vertex");
    std::set<std::string> seen;
    for (int v = 0; v < n; ++v) {
        if (m.verts_[static_cast<size_t>(v)].mult <= 0)
            throw InputError("vertex multiplicity must be a positive integer");
        if (m.verts_[static_cast<size_t>(v)].name.empty())
            m.verts_[static_cast<size_t>(v)].name = "x" + std::to_string(v);
        if (!seen.insert(m.verts_[static_cast<size_t>(v)].name).second)
            throw InputError("duplicate model vertex name '" + m.verts_[static_cast<size_t>(v)].name + "'");
    }
    for (auto [a, b] : m.edges_)
        if (a < 0 || a >= n || b < 0 || b >= n) throw InputError("model edge endpoint out of range");

    // Components, for cusp validation / assignment.
    std::vector<int> comp(static_cast<size_t>(n), -1);
    {
        std::vector<std::vector<int>> adj(static_cast<size_t>(n));
        for (auto [a, b] : m.edges_) {
            adj[static_cast<size_t>(a)].push_back(b);
            adj[static_cast<size_t>(b)].push_back(a);
        }
        int nc = 0;
        for (int s = 0; s < n; ++s) {
            if (comp[static_cast<size_t>(s)] >= 0) continue;
            std::vector<int> stack{s};
            comp[static_cast<size_t>(s)] = nc;
            while (!stack.empty()) {
                int v = stack.back();
                stack.pop_back();
                for (int w : adj[static_cast<size_t>(v)])
                    if (comp[static_cast<size_t>(w)] < 0) {
                        comp[static_cast<size_t>(w)] = nc;
                        stack.push_back(w);
                    }
            }
            ++nc;
        }
    }
    bool any_label = false;
    for (const auto& v : m.verts_) any_label = any_label || !v.cusp.empty();
    if (any_label) {
        for (const auto& v : m.verts_)
            if (v.cusp.empty()) throw InputError("either label every model vertex with a cusp or none");
        std::map<std::string, int> cusp_comp;
        for (int v = 0; v < n; ++v) {
            auto [it, fresh] = cusp_comp.emplace(m.verts_[static_cast<size_t>(v)].cusp,
                                                 comp[static_cast<size_t>(v)]);
            if (!fresh && it->second != comp[static_cast<size_t>(v)])
                throw InputError("cusp '" + it->first + "' is not connected in the model");
        }
        for (auto [a, b] : m.edges_)
            if (m.verts_[static_cast<size_t>(a)].cusp != m.verts_[static_cast<size_t>(b)].cusp)
                throw InputError("model edge joins different cusps");
    } else {
        for (int v = 0; v < n; ++v)
            m.verts_[static_cast<size_t>(v)].cusp = "c" + std::to_string(comp[static_cast<size_t>(v)]);
    }

    // Base skeleton with positions and traces.
    GraphSpec spec;
    for (const auto& v : m.verts_) {
        spec.names.push_back(v.name);
        spec.cusps.push_back(v.cusp);
    }
    for (size_t e = 0; e < m.edges_.size(); ++e) {
        auto [a, b] = m.edges_[e];
        const Rat len(1, m.verts_[static_cast<size_t>(a)].mult * m.verts_[static_cast<size_t>(b)].mult);
        spec.edges.emplace_back(a, b, len);
    }
    BuiltGraph built = build_graph(spec);
    m.skel_ = built.graph;
    for (int v = 0; v < n; ++v) m.pos_.push_back(GraphPoint::vertex(v));
    for (size_t e = 0; e < m.edges_.size(); ++e) {
        Trace tr;
        for (int se : built.input_edges[e].edges) {
            const auto& ed = m.skel_->edge(se);
            tr.segs.push_back(Seg{se, Rat(0), ed.length});
        }
        m.traces_.push_back(std::move(tr));
    }
    return m;
}

Rat ModelGraph::edge_length(int e) const {
    auto [a, b] = edges_.at(static_cast<size_t>(e));
    return Rat(1, mult(a) * mult(b));
}

GraphPtr ModelGraph::own_skeleton() const {
    GraphSpec spec;
    for (const auto& v : verts_) {
        spec.names.push_back(v.name);
        spec.cusps.push_back(v.cusp);
    }
    for (int e = 0; e < edge_count(); ++e)
        spec.edges.emplace_back(edges_[static_cast<size_t>(e)].first,
                                edges_[static_cast<size_t>(e)].second, edge_length(e));
    return build_graph(spec).graph;
}

std::vector<std::string> ModelGraph::cusp_names() const {
    std::vector<std::string> out;
    std::set<std::string> seen;
    for (const auto& v : verts_)
        if (seen.insert(v.cusp).second) out.push_back(v.cusp);
    return out;
}

std::vector<int> ModelGraph::cusp_vertex_list(const std::string& cusp) const {
    std::vector<int> out;
    for (int v = 0; v < vertex_count(); ++v)
        if (verts_[static_cast<size_t>(v)].cusp == cusp) out.push_back(v);
    if (out.empty()) throw InputError("unknown cusp '" + cusp + "'");
    return out;
}

GraphPoint ModelGraph::walk(const Trace& tr, const Rat& s) const {
    if (!tr.on_skeleton) return tr.retract;
    Rat remaining = s;
    for (size_t k = 0; k < tr.segs.size(); ++k) {
        const Seg& seg = tr.segs[k];
        const Rat len = seg_length(seg.t0, seg.t1);
        if (remaining < len || (remaining == len && k + 1 == tr.segs.size())) {
            const bool forward = seg.t0 < seg.t1;
            const Rat t = forward ? seg.t0 + remaining : seg.t0 - remaining;
            const auto& ed = skel_->edge(seg.edge);
            if (t.is_zero()) return GraphPoint::vertex(ed.a);
            if (t == ed.length) return GraphPoint::vertex(ed.b);
            return GraphPoint::on_edge(seg.edge, t);
        }
        remaining -= len;
    }
    throw ConsistencyError("walk beyond the end of an edge trace");
}

std::pair<ModelGraph::Trace, ModelGraph::Trace> ModelGraph::split_trace(const Trace& tr,
                                                                        const Rat& s) const {
    if (!tr.on_skeleton) {
        Trace half;
        half.on_skeleton = false;
        half.retract = tr.retract;
        return {half, half};
    }
    Trace front, back;
    Rat remaining = s;
    size_t k = 0;
    for (; k < tr.segs.size(); ++k) {
        const Seg& seg = tr.segs[k];
        const Rat len = seg_length(seg.t0, seg.t1);
        if (remaining < len) break;
        front.segs.push_back(seg);
        remaining -= len;
        if (remaining.is_zero()) {
            ++k;
            break;
        }
    }
    if (!remaining.is_zero()) {
        const Seg& seg = tr.segs[k];
        const bool forward = seg.t0 < seg.t1;
        const Rat cut = forward ? seg.t0 + remaining : seg.t0 - remaining;
        front.segs.push_back(Seg{seg.edge, seg.t0, cut});
        back.segs.push_back(Seg{seg.edge, cut, seg.t1});
        ++k;
    }
    for (; k < tr.segs.size(); ++k) back.segs.push_back(tr.segs[k]);
    if (front.segs.empty() || back.segs.empty())
        throw ConsistencyError("trace split produced an empty half");
    return {front, back};
}

BlowUpResult ModelGraph::blow_up_edge(int e) const {
    if (e < 0 || e >= edge_count()) throw InputError("blow_up_edge: unknown edge");
    auto [x, y] = edges_[static_cast<size_t>(e)];
    const long mx = mult(x), my = mult(y);

    ModelGraph m = *this;
    m.depth_ = depth_ + 1;
    m.provenance_ = Provenance{BlowUpKind::Edge, vertex_count(), x, y};
    const int z = vertex_count();
    m.verts_.push_back(Vertex{"z" + std::to_string(depth_) + "." + std::to_string(e), mx + my,
                              verts_[static_cast<size_t>(x)].cusp});

    const Rat s_front(1, mx * (mx + my));
    const Trace& tr = traces_[static_cast<size_t>(e)];
    auto [front, back] = split_trace(tr, s_front);
    m.pos_.push_back(walk(tr, s_front));

    m.edges_.erase(m.edges_.begin() + e);
    m.traces_.erase(m.traces_.begin() + e);
    BlowUpResult out{std::move(m), z, {}};
    out.new_edges = {out.model.edge_count(), out.model.edge_count() + 1};
    out.model.edges_.emplace_back(x, z);
    out.model.traces_.push_back(std::move(front));
    out.model.edges_.emplace_back(z, y);
    out.model.traces_.push_back(std::move(back));
    return out;
}

BlowUpResult ModelGraph::blow_up_smooth_point(int x) const {
    if (x < 0 || x >= vertex_count()) throw InputError("blow_up_smooth_point: unknown vertex");
    ModelGraph m = *this;
    m.depth_ = depth_ + 1;
    m.essential_ = false;
    m.provenance_ = Provenance{BlowUpKind::SmoothPoint, vertex_count(), x, -1};
    const int z = vertex_count();
    m.verts_.push_back(Vertex{"z" + std::to_string(depth_) + ".p" + std::to_string(x), mult(x),
                              verts_[static_cast<size_t>(x)].cusp});
    m.pos_.push_back(pos_[static_cast<size_t>(x)]);
    Trace tr;
    tr.on_skeleton = false;
    tr.retract = pos_[static_cast<size_t>(x)];
    BlowUpResult out{std::move(m), z, {}};
    out.new_edges = {out.model.edge_count()};
    out.model.edges_.emplace_back(x, z);
    out.model.traces_.push_back(std::move(tr));
    return out;
}

bool ModelGraph::extends(const ModelGraph& ancestor) const {
    if (skel_ != ancestor.skel_ || depth_ < ancestor.depth_) return false;
    if (vertex_count() < ancestor.vertex_count()) return false;
    for (int v = 0; v < ancestor.vertex_count(); ++v) {
        const Vertex &a = verts_[static_cast<size_t>(v)], &b = ancestor.verts_[static_cast<size_t>(v)];
        if (a.name != b.name || a.mult != b.mult || a.cusp != b.cusp) return false;
    }
    return true;
}

VertexFunction divisor_to_function(const ModelGraph& m, const VerticalDivisor& d) {
    if (d.size() != static_cast<size_t>(m.vertex_count()))
        throw InputError("vertical divisor size mismatch");
    VertexFunction g(d.size());
    for (size_t v = 0; v < d.size(); ++v) g[v] = d[v] / Rat(m.mult(static_cast<int>(v)));
    return g;
}

VertexFunction pullback_function(const ModelGraph& child, const VertexFunction& on_parent) {
    const auto& prov = child.provenance();
    if (!prov) throw InputError("pullback requires a model produced by a recorded blow-up");
    if (on_parent.size() != static_cast<size_t>(prov->parent_vertex_count))
        throw InputError("pullback: function not on the parent model");
    VertexFunction g = on_parent;
    if (prov->kind == ModelGraph::BlowUpKind::SmoothPoint) {
        g.push_back(on_parent[static_cast<size_t>(prov->a)]);
    } else {
        const long mx = child.mult(prov->a), my = child.mult(prov->b);
        g.push_back((Rat(mx) * on_parent[static_cast<size_t>(prov->a)] +
                     Rat(my) * on_parent[static_cast<size_t>(prov->b)]) /
                    Rat(mx + my));
    }
    return g;
}

VertexFunction pushforward_function(const ModelGraph& child, const VertexFunction& on_child) {
    const auto& prov = child.provenance();
    if (!prov) throw InputError("pushforward requires a model produced by a recorded blow-up");
    if (on_child.size() != static_cast<size_t>(child.vertex_count()))
        throw InputError("pushforward: function not on the child model");
    return VertexFunction(on_child.begin(), on_child.begin() + prov->parent_vertex_count);
}

RatMatrix intersection_matrix(const ModelGraph& m, const std::string& cusp) {
    const std::vector<int> verts = m.cusp_vertex_list(cusp);
    std::vector<int> local(static_cast<size_t>(m.vertex_count()), -1);
    for (size_t i = 0; i < verts.size(); ++i) local[static_cast<size_t>(verts[i])] = static_cast<int>(i);

    // Connectivity of the fiber.
    {
        std::vector<int> parent(verts.size());
        for (size_t i = 0; i < verts.size(); ++i) parent[i] = static_cast<int>(i);
        auto find = [&](int v) {
            while (parent[static_cast<size_t>(v)] != v) v = parent[static_cast<size_t>(v)] =
                                                            parent[static_cast<size_t>(parent[static_cast<size_t>(v)])];
            return v;
        };
        for (auto [a, b] : m.edges()) {
            const int la = local[static_cast<size_t>(a)], lb = local[static_cast<size_t>(b)];
            if (la >= 0 && lb >= 0) parent[static_cast<size_t>(find(la))] = find(lb);
        }
        for (size_t i = 1; i < verts.size(); ++i)
            if (find(static_cast<int>(i)) != find(0))
                throw InputError("cusp fiber '" + cusp + "' is not connected");
    }

    const size_t k = verts.size();
    RatMatrix q(k, std::vector<Rat>(k, Rat(0)));
    for (auto [a, b] : m.edges()) {
        if (a == b) continue;  // a self-node is not a crossing of two components
        const int la = local[static_cast<size_t>(a)], lb = local[static_cast<size_t>(b)];
        if (la < 0 || lb < 0) continue;
        q[static_cast<size_t>(la)][static_cast<size_t>(lb)] += Rat(1);
        q[static_cast<size_t>(lb)][static_cast<size_t>(la)] += Rat(1);
    }
    // Diagonal from the fiber relation.
    for (size_t i = 0; i < k; ++i) {
        Rat acc(0);
        for (size_t j = 0; j < k; ++j)
            if (j != i) acc += Rat(m.mult(verts[j])) * q[i][j];
        q[i][i] = -acc / Rat(m.mult(verts[i]));
    }
    return q;
}

Rat vertical_pairing(const ModelGraph& m, const VerticalDivisor& a, const VerticalDivisor& b) {
    if (a.size() != static_cast<size_t>(m.vertex_count()) || b.size() != a.size())
        throw InputError("vertical divisor size mismatch");
    Rat acc(0);
    for (const std::string& cusp : m.cusp_names()) {
        const std::vector<int> verts = m.cusp_vertex_list(cusp);
        const RatMatrix q = intersection_matrix(m, cusp);
        for (size_t i = 0; i < verts.size(); ++i) {
            if (a[static_cast<size_t>(verts[i])].is_zero()) continue;
            for (size_t j = 0; j < verts.size(); ++j)
                acc += a[static_cast<size_t>(verts[i])] * b[static_cast<size_t>(verts[j])] * q[i][j];
        }
    }
    return acc;
}

namespace {

VerticalDivisor scale_by_mult(const ModelGraph& m, const VertexFunction& g) {
    VerticalDivisor a(g.size());
    for (size_t v = 0; v < g.size(); ++v) a[v] = g[v] * Rat(m.mult(static_cast<int>(v)));
    return a;
}

}  // namespace

Rat discrete_pairing_sum(const ModelGraph& m, const VertexFunction& g1, const VertexFunction& g2) {
    return vertical_pairing(m, scale_by_mult(m, g1), scale_by_mult(m, g2));
}

Rat discrete_pairing_sum_on_cusp(const ModelGraph& m, const VertexFunction& g1,
                                 const VertexFunction& g2, const std::string& cusp) {
    if (g1.size() != static_cast<size_t>(m.vertex_count()) || g2.size() != g1.size())
        throw InputError("vertex function size mismatch");
    const std::vector<int> verts = m.cusp_vertex_list(cusp);
    const RatMatrix q = intersection_matrix(m, cusp);
    Rat acc(0);
    for (size_t i = 0; i < verts.size(); ++i)
        for (size_t j = 0; j < verts.size(); ++j)
            acc += g1[static_cast<size_t>(verts[i])] * Rat(m.mult(verts[i])) *
                   g2[static_cast<size_t>(verts[j])] * Rat(m.mult(verts[j])) * q[i][j];
    return acc;
}

std::vector<std::pair<int, PwQuad::Piece>> ModelGraph::edge_affine_pieces(int e, const Rat& va,
                                                                          const Rat& vb) const {
    const Trace& tr = traces_.at(static_cast<size_t>(e));
    std::vector<std::pair<int, PwQuad::Piece>> out;
    if (!tr.on_skeleton) return out;
    const Rat len = edge_length(e);
    const Rat slope = (vb - va) / len;
    Rat w(0);  // arclength from the edge's first endpoint
    for (const Seg& seg : tr.segs) {
        if (seg.t0 < seg.t1) {
            // value(t) = va + slope (w + t - t0)
            out.emplace_back(seg.edge,
                             PwQuad::Piece{seg.t0, seg.t1, Rat(0), slope, va + slope * (w - seg.t0)});
        } else {
            // value(t) = va + slope (w + t0 - t)
            out.emplace_back(seg.edge,
                             PwQuad::Piece{seg.t1, seg.t0, Rat(0), -slope, va + slope * (w + seg.t0)});
        }
        w += seg_length(seg.t0, seg.t1);
    }
    return out;
}

PwQuad interpolate_on_skeleton(const ModelGraph& m, const VertexFunction& values) {
    if (!m.essential()) throw InputError("skeleton interpolation requires an essential model");
    if (values.size() != static_cast<size_t>(m.vertex_count()))
        throw InputError("vertex function size mismatch");
    const GraphPtr& skel = m.base_skeleton();

    std::vector<std::vector<PwQuad::Piece>> pieces(static_cast<size_t>(skel->edge_count()));
    for (int e = 0; e < m.edge_count(); ++e) {
        auto [x, y] = m.edges()[static_cast<size_t>(e)];
        for (auto& [se, piece] : m.edge_affine_pieces(e, values[static_cast<size_t>(x)],
                                                      values[static_cast<size_t>(y)]))
            pieces[static_cast<size_t>(se)].push_back(piece);
    }
    for (auto& ps : pieces)
        std::sort(ps.begin(), ps.end(), [](const PwQuad::Piece& a, const PwQuad::Piece& b) {
            return a.lo < b.lo;
        });

    std::vector<Rat> vertex_values(static_cast<size_t>(skel->vertex_count()), Rat(0));
    std::vector<bool> have(static_cast<size_t>(skel->vertex_count()), false);
    for (int v = 0; v < m.base_vertex_count(); ++v) {
        vertex_values[static_cast<size_t>(v)] = values[static_cast<size_t>(v)];
        have[static_cast<size_t>(v)] = true;
    }
    for (int v = 0; v < skel->vertex_count(); ++v) {
        if (have[static_cast<size_t>(v)]) continue;
        // Loop-normalization points: read the value off an incident piece.
        const auto& inc = skel->incident(v);
        if (inc.empty()) throw ConsistencyError("skeleton vertex without value or incident edge");
        auto [e, at_a] = inc.front();
        const auto& ps = pieces[static_cast<size_t>(e)];
        if (ps.empty()) throw ConsistencyError("skeleton edge not covered by any model edge");
        vertex_values[static_cast<size_t>(v)] =
            at_a ? ps.front().eval(ps.front().lo) : ps.back().eval(ps.back().hi);
    }
    return PwQuad(skel, std::move(vertex_values), std::move(pieces));
}

}  // namespace bdiv
