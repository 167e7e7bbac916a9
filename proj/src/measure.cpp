#include "bdiv/measure.hpp"

#include <algorithm>

#include "bdiv/errors.hpp"

namespace bdiv {

GraphMeasure::GraphMeasure(GraphPtr graph, GraphDivisor dirac,
                           std::vector<std::vector<Segment>> density)
    : graph_(std::move(graph)), dirac_(std::move(dirac)), density_(std::move(density)) {
    validate();
    canonicalize();
}

void GraphMeasure::validate() const {
    if (!graph_) throw InputError("GraphMeasure without a graph");
    for (const auto& [p, c] : dirac_.terms()) graph_->check_point(p);
    if (static_cast<int>(density_.size()) != graph_->edge_count())
        throw InputError("GraphMeasure density edge count mismatch");
    for (int e = 0; e < graph_->edge_count(); ++e) {
        const auto& segs = density_[static_cast<size_t>(e)];
        if (segs.empty()) throw InputError("GraphMeasure edge without density segments");
        if (!segs.front().lo.is_zero() || segs.back().hi != graph_->edge(e).length)
            throw InputError("GraphMeasure density segments do not cover the edge");
        for (size_t k = 0; k < segs.size(); ++k) {
            if (!(segs[k].lo < segs[k].hi)) throw InputError("GraphMeasure empty density segment");
            if (k > 0 && segs[k - 1].hi != segs[k].lo)
                throw InputError("GraphMeasure density segments leave a gap");
        }
    }
}

void GraphMeasure::canonicalize() {
    for (auto& segs : density_) {
        std::vector<Segment> merged;
        for (const Segment& s : segs) {
            if (!merged.empty() && merged.back().density == s.density)
                merged.back().hi = s.hi;
            else
                merged.push_back(s);
        }
        segs = std::move(merged);
    }
}

GraphMeasure GraphMeasure::zero(GraphPtr graph) {
    return from_divisor(std::move(graph), GraphDivisor{});
}

GraphMeasure GraphMeasure::from_divisor(GraphPtr graph, GraphDivisor dirac) {
    std::vector<std::vector<Segment>> density(static_cast<size_t>(graph->edge_count()));
    for (int e = 0; e < graph->edge_count(); ++e)
        density[static_cast<size_t>(e)] = {Segment{Rat(0), graph->edge(e).length, Rat(0)}};
    return GraphMeasure(std::move(graph), std::move(dirac), std::move(density));
}

GraphMeasure GraphMeasure::from_edge_densities(GraphPtr graph, std::vector<Rat> density) {
    if (static_cast<int>(density.size()) != graph->edge_count())
        throw InputError("from_edge_densities: density count mismatch");
    std::vector<std::vector<Segment>> segs(static_cast<size_t>(graph->edge_count()));
    for (int e = 0; e < graph->edge_count(); ++e)
        segs[static_cast<size_t>(e)] = {
            Segment{Rat(0), graph->edge(e).length, density[static_cast<size_t>(e)]}};
    return GraphMeasure(std::move(graph), GraphDivisor{}, std::move(segs));
}

Rat GraphMeasure::total_mass() const {
    Rat acc = dirac_.degree();
    for (const auto& segs : density_)
        for (const Segment& s : segs) acc += s.density * (s.hi - s.lo);
    return acc;
}

Rat GraphMeasure::component_mass(int component) const {
    Rat acc = dirac_.degree_on_component(*graph_, component);
    for (int e : graph_->component_edges().at(static_cast<size_t>(component)))
        for (const Segment& s : density_[static_cast<size_t>(e)]) acc += s.density * (s.hi - s.lo);
    return acc;
}

bool GraphMeasure::is_positive() const {
    for (const auto& [p, c] : dirac_.terms())
        if (c.sign() < 0) return false;
    for (const auto& segs : density_)
        for (const Segment& s : segs)
            if (s.density.sign() < 0) return false;
    return true;
}

GraphMeasure& GraphMeasure::operator+=(const GraphMeasure& o) {
    if (!graph_->same_shape(*o.graph_)) throw InputError("measure sum across different graphs");
    dirac_ += o.dirac_;
    for (size_t e = 0; e < density_.size(); ++e) {
        std::vector<Rat> breaks;
        for (const Segment& s : density_[e]) breaks.push_back(s.hi);
        for (const Segment& s : o.density_[e]) breaks.push_back(s.hi);
        std::sort(breaks.begin(), breaks.end());
        breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
        auto density_at = [](const std::vector<Segment>& segs, const Rat& lo) {
            for (const Segment& s : segs)
                if (lo < s.hi) return s.density;
            return segs.back().density;
        };
        std::vector<Segment> out;
        Rat lo(0);
        for (const Rat& hi : breaks) {
            out.push_back(Segment{lo, hi, density_at(density_[e], lo) + density_at(o.density_[e], lo)});
            lo = hi;
        }
        density_[e] = std::move(out);
    }
    canonicalize();
    return *this;
}

GraphMeasure& GraphMeasure::operator-=(const GraphMeasure& o) {
    GraphMeasure neg = o;
    neg *= Rat(-1);
    return *this += neg;
}

GraphMeasure& GraphMeasure::operator*=(const Rat& s) {
    dirac_ *= s;
    for (auto& segs : density_)
        for (Segment& seg : segs) seg.density *= s;
    canonicalize();
    return *this;
}

bool operator==(const GraphMeasure& a, const GraphMeasure& b) {
    return a.graph_->same_shape(*b.graph_) && a.dirac_ == b.dirac_ && a.density_ == b.density_;
}

GraphMeasure laplacian(const PwQuad& f) {
    const GraphPtr& g = f.graph();
    GraphDivisor dirac;
    std::vector<std::vector<GraphMeasure::Segment>> density(static_cast<size_t>(g->edge_count()));

    for (int e = 0; e < g->edge_count(); ++e) {
        const auto& ps = f.pieces(e);
        auto& segs = density[static_cast<size_t>(e)];
        for (const auto& p : ps) segs.push_back({p.lo, p.hi, Rat(-2) * p.a});
        // Slope breaks at interior breakpoints contribute Dirac terms.
        for (size_t k = 1; k < ps.size(); ++k) {
            const Rat t = ps[k].lo;
            const Rat jump = ps[k - 1].slope(t) - ps[k].slope(t);
            dirac.add(GraphPoint::on_edge(e, t), jump);
        }
    }
    for (int v = 0; v < g->vertex_count(); ++v) {
        Rat outgoing(0);
        for (auto [e, at_a] : g->incident(v)) {
            const auto& ps = f.pieces(e);
            if (at_a)
                outgoing += ps.front().slope(Rat(0));
            else
                outgoing -= ps.back().slope(g->edge(e).length);
        }
        dirac.add(GraphPoint::vertex(v), -outgoing);
    }
    return GraphMeasure(g, std::move(dirac), std::move(density));
}

namespace {

Rat integrate_edge(const PwQuad& f, const GraphMeasure& m, int e) {
    Rat acc(0);
    for (const auto& seg : m.density(e)) {
        if (seg.density.is_zero()) continue;
        for (const auto& p : f.pieces(e)) {
            const Rat lo = max(p.lo, seg.lo), hi = min(p.hi, seg.hi);
            if (!(lo < hi)) continue;
            const Rat i3 = (hi * hi * hi - lo * lo * lo) / Rat(3);
            const Rat i2 = (hi * hi - lo * lo) / Rat(2);
            acc += seg.density * (p.a * i3 + p.b * i2 + p.c * (hi - lo));
        }
    }
    return acc;
}

}  // namespace

Rat integrate(const PwQuad& f, const GraphMeasure& m) {
    if (!f.graph()->same_shape(*m.graph()))
        throw InputError("integrate: function and measure on different graphs");
    Rat acc = f.on_divisor(m.dirac());
    for (int e = 0; e < f.graph()->edge_count(); ++e) acc += integrate_edge(f, m, e);
    return acc;
}

Rat integrate_on_component(const PwQuad& f, const GraphMeasure& m, int component) {
    if (!f.graph()->same_shape(*m.graph()))
        throw InputError("integrate: function and measure on different graphs");
    const MetrizedGraph& g = *f.graph();
    Rat acc(0);
    for (const auto& [p, c] : m.dirac().terms())
        if (g.component_of_point(p) == component) acc += c * f(p);
    for (int e : g.component_edges().at(static_cast<size_t>(component)))
        acc += integrate_edge(f, m, e);
    return acc;
}

GraphMeasure push_measure(const Subdivision& sub, const GraphMeasure& m) {
    if (!m.graph()->same_shape(*sub.parent()))
        throw InputError("push_measure: measure not on the subdivision's parent");
    const GraphPtr& child = sub.child();
    GraphDivisor dirac = sub.map_divisor(m.dirac());
    std::vector<std::vector<GraphMeasure::Segment>> density(static_cast<size_t>(child->edge_count()));

    for (int e = 0; e < sub.parent()->edge_count(); ++e) {
        const auto& sp = sub.split(e);
        Rat lo(0);
        for (size_t k = 0; k < sp.child_edges.size(); ++k) {
            const Rat hi = k < sp.cuts.size() ? sp.cuts[k] : sub.parent()->edge(e).length;
            std::vector<GraphMeasure::Segment> out;
            for (const auto& seg : m.density(e)) {
                const Rat slo = max(seg.lo, lo), shi = min(seg.hi, hi);
                if (!(slo < shi)) continue;
                out.push_back({slo - lo, shi - lo, seg.density});
            }
            density[static_cast<size_t>(sp.child_edges[k])] = std::move(out);
            lo = hi;
        }
    }
    return GraphMeasure(child, std::move(dirac), std::move(density));
}

}  // namespace bdiv
