#include "bdiv/pwquad.hpp"

#include <algorithm>

#include "bdiv/errors.hpp"

namespace bdiv {

PwQuad::PwQuad(GraphPtr graph, std::vector<Rat> vertex_values,
               std::vector<std::vector<Piece>> edge_pieces)
    : graph_(std::move(graph)),
      vertex_values_(std::move(vertex_values)),
      pieces_(std::move(edge_pieces)) {
    validate();
    canonicalize();
}

void PwQuad::validate() const {
    if (!graph_) throw InputError("PwQuad without a graph");
    if (static_cast<int>(vertex_values_.size()) != graph_->vertex_count())
        throw InputError("PwQuad vertex value count mismatch");
    if (static_cast<int>(pieces_.size()) != graph_->edge_count())
        throw InputError("PwQuad edge piece count mismatch");
    for (int e = 0; e < graph_->edge_count(); ++e) {
        const auto& ed = graph_->edge(e);
        const auto& ps = pieces_[static_cast<size_t>(e)];
        if (ps.empty()) throw InputError("PwQuad edge without pieces");
        if (!ps.front().lo.is_zero() || ps.back().hi != ed.length)
            throw InputError("PwQuad pieces do not cover the edge");
        for (size_t k = 0; k < ps.size(); ++k) {
            if (!(ps[k].lo < ps[k].hi)) throw InputError("PwQuad piece with empty interior");
            if (k > 0) {
                if (ps[k - 1].hi != ps[k].lo) throw InputError("PwQuad pieces leave a gap");
                if (ps[k - 1].eval(ps[k].lo) != ps[k].eval(ps[k].lo))
                    throw InputError("PwQuad discontinuous at an interior breakpoint");
            }
        }
        if (ps.front().eval(Rat(0)) != vertex_values_[static_cast<size_t>(ed.a)] ||
            ps.back().eval(ed.length) != vertex_values_[static_cast<size_t>(ed.b)])
            throw InputError("PwQuad discontinuous at a vertex");
    }
}

void PwQuad::canonicalize() {
    for (auto& ps : pieces_) {
        std::vector<Piece> merged;
        for (const Piece& p : ps) {
            if (!merged.empty() && merged.back().a == p.a && merged.back().b == p.b &&
                merged.back().c == p.c)
                merged.back().hi = p.hi;
            else
                merged.push_back(p);
        }
        ps = std::move(merged);
    }
}

PwQuad PwQuad::constant(GraphPtr graph, const Rat& value) {
    std::vector<Rat> vals(static_cast<size_t>(graph->vertex_count()), value);
    std::vector<std::vector<Piece>> ps(static_cast<size_t>(graph->edge_count()));
    for (int e = 0; e < graph->edge_count(); ++e)
        ps[static_cast<size_t>(e)] = {Piece{Rat(0), graph->edge(e).length, Rat(0), Rat(0), value}};
    return PwQuad(std::move(graph), std::move(vals), std::move(ps));
}

PwQuad PwQuad::interpolate(GraphPtr graph, std::vector<Rat> vertex_values) {
    if (static_cast<int>(vertex_values.size()) != graph->vertex_count())
        throw InputError("interpolate: vertex value count mismatch");
    std::vector<std::vector<Piece>> ps(static_cast<size_t>(graph->edge_count()));
    for (int e = 0; e < graph->edge_count(); ++e) {
        const auto& ed = graph->edge(e);
        const Rat va = vertex_values[static_cast<size_t>(ed.a)];
        const Rat vb = vertex_values[static_cast<size_t>(ed.b)];
        ps[static_cast<size_t>(e)] = {Piece{Rat(0), ed.length, Rat(0), (vb - va) / ed.length, va}};
    }
    return PwQuad(std::move(graph), std::move(vertex_values), std::move(ps));
}

Rat PwQuad::operator()(const GraphPoint& p) const {
    graph_->check_point(p);
    if (p.is_vertex()) return vertex_values_[static_cast<size_t>(p.index)];
    for (const Piece& piece : pieces_[static_cast<size_t>(p.index)])
        if (p.offset <= piece.hi) return piece.eval(p.offset);
    throw ConsistencyError("PwQuad evaluation fell off the edge partition");
}

Rat PwQuad::on_divisor(const GraphDivisor& d) const {
    Rat acc(0);
    for (const auto& [p, c] : d.terms()) acc += c * (*this)(p);
    return acc;
}

namespace {

// Common refinement of two partitions of the same edge.
std::vector<Rat> merged_breaks(const std::vector<PwQuad::Piece>& x,
                               const std::vector<PwQuad::Piece>& y) {
    std::vector<Rat> breaks;
    for (const auto& p : x) breaks.push_back(p.hi);
    for (const auto& p : y) breaks.push_back(p.hi);
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    return breaks;
}

const PwQuad::Piece& piece_at(const std::vector<PwQuad::Piece>& ps, const Rat& lo) {
    for (const auto& p : ps)
        if (lo < p.hi) return p;
    return ps.back();
}

}  // namespace

PwQuad& PwQuad::operator+=(const PwQuad& o) {
    if (!graph_->same_shape(*o.graph_)) throw InputError("PwQuad sum across different graphs");
    for (size_t v = 0; v < vertex_values_.size(); ++v) vertex_values_[v] += o.vertex_values_[v];
    for (size_t e = 0; e < pieces_.size(); ++e) {
        std::vector<Piece> out;
        Rat lo(0);
        for (const Rat& hi : merged_breaks(pieces_[e], o.pieces_[e])) {
            const Piece& x = piece_at(pieces_[e], lo);
            const Piece& y = piece_at(o.pieces_[e], lo);
            out.push_back(Piece{lo, hi, x.a + y.a, x.b + y.b, x.c + y.c});
            lo = hi;
        }
        pieces_[e] = std::move(out);
    }
    canonicalize();
    return *this;
}

PwQuad& PwQuad::operator-=(const PwQuad& o) {
    PwQuad neg = o;
    neg *= Rat(-1);
    return *this += neg;
}

PwQuad& PwQuad::operator*=(const Rat& s) {
    for (auto& v : vertex_values_) v *= s;
    for (auto& ps : pieces_)
        for (auto& p : ps) {
            p.a *= s;
            p.b *= s;
            p.c *= s;
        }
    canonicalize();
    return *this;
}

PwQuad& PwQuad::operator+=(const Rat& c) {
    for (auto& v : vertex_values_) v += c;
    for (auto& ps : pieces_)
        for (auto& p : ps) p.c += c;
    return *this;
}

bool operator==(const PwQuad& a, const PwQuad& b) {
    return a.graph_->same_shape(*b.graph_) && a.vertex_values_ == b.vertex_values_ &&
           a.pieces_ == b.pieces_;
}

PwQuad push_function(const Subdivision& sub, const PwQuad& on_parent) {
    const GraphPtr& parent = sub.parent();
    const GraphPtr& child = sub.child();
    if (!on_parent.graph()->same_shape(*parent))
        throw InputError("push_function: function not on the subdivision's parent");

    std::vector<Rat> vals(static_cast<size_t>(child->vertex_count()), Rat(0));
    for (int v = 0; v < parent->vertex_count(); ++v) vals[static_cast<size_t>(v)] = on_parent.at_vertex(v);
    std::vector<std::vector<PwQuad::Piece>> pieces(static_cast<size_t>(child->edge_count()));

    for (int e = 0; e < parent->edge_count(); ++e) {
        const auto& sp = sub.split(e);
        Rat lo(0);
        for (size_t k = 0; k < sp.child_edges.size(); ++k) {
            const Rat hi = k < sp.cuts.size() ? sp.cuts[k] : parent->edge(e).length;
            if (k < sp.child_vertices.size())
                vals[static_cast<size_t>(sp.child_vertices[k])] =
                    on_parent(GraphPoint::on_edge(e, hi));
            // Restrict parent pieces to [lo, hi] and shift to the child coordinate.
            std::vector<PwQuad::Piece> out;
            for (const PwQuad::Piece& p : on_parent.pieces(e)) {
                const Rat plo = max(p.lo, lo), phi = min(p.hi, hi);
                if (!(plo < phi)) continue;
                // t_child = t_parent - lo
                const Rat A = p.a;
                const Rat B = p.b + Rat(2) * p.a * lo;
                const Rat C = (p.a * lo + p.b) * lo + p.c;
                out.push_back(PwQuad::Piece{plo - lo, phi - lo, A, B, C});
            }
            pieces[static_cast<size_t>(sp.child_edges[k])] = std::move(out);
            lo = hi;
        }
    }
    return PwQuad(child, std::move(vals), std::move(pieces));
}

PwQuad pull_function(const Subdivision& sub, const PwQuad& on_child) {
    const GraphPtr& parent = sub.parent();
    if (!on_child.graph()->same_shape(*sub.child()))
        throw InputError("pull_function: function not on the subdivision's child");

    std::vector<Rat> vals(static_cast<size_t>(parent->vertex_count()));
    for (int v = 0; v < parent->vertex_count(); ++v) vals[static_cast<size_t>(v)] = on_child.at_vertex(v);
    std::vector<std::vector<PwQuad::Piece>> pieces(static_cast<size_t>(parent->edge_count()));

    for (int e = 0; e < parent->edge_count(); ++e) {
        const auto& sp = sub.split(e);
        Rat lo(0);
        std::vector<PwQuad::Piece> out;
        for (size_t k = 0; k < sp.child_edges.size(); ++k) {
            for (const PwQuad::Piece& p : on_child.pieces(sp.child_edges[k])) {
                // t_parent = t_child + lo
                const Rat A = p.a;
                const Rat B = p.b - Rat(2) * p.a * lo;
                const Rat C = (p.a * lo - p.b) * lo + p.c;
                out.push_back(PwQuad::Piece{p.lo + lo, p.hi + lo, A, B, C});
            }
            lo += sub.child()->edge(sp.child_edges[k]).length;
        }
        pieces[static_cast<size_t>(e)] = std::move(out);
    }
    return PwQuad(parent, std::move(vals), std::move(pieces));
}

}  // namespace bdiv
