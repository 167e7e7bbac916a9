#include "bdiv/pairing.hpp"

#include <algorithm>

#include "bdiv/errors.hpp"

namespace bdiv {

CartierData CartierData::primitive(std::string id, Rat relative_degree, GraphDivisor restriction) {
    CartierData c;
    c.components = {{id, Rat(1)}};
    c.id = std::move(id);
    c.relative_degree = std::move(relative_degree);
    c.restriction = std::move(restriction);
    return c;
}

CartierData CartierData::combine(std::string id,
                                 const std::vector<std::pair<const CartierData*, Rat>>& parts) {
    CartierData out;
    out.id = std::move(id);
    std::map<std::string, Rat> acc;
    for (const auto& [part, coeff] : parts) {
        out.relative_degree += coeff * part->relative_degree;
        out.restriction += coeff * part->restriction;
        for (const auto& [pid, pc] : part->components) acc[pid] += coeff * pc;
    }
    for (const auto& [pid, pc] : acc)
        if (!pc.is_zero()) out.components.emplace_back(pid, pc);
    return out;
}

void CartierData::validate(const MetrizedGraph& skeleton) const {
    for (const auto& [p, c] : restriction.terms()) skeleton.check_point(p);
    for (int comp = 0; comp < skeleton.component_count(); ++comp) {
        const Rat deg = restriction.degree_on_component(skeleton, comp);
        if (deg != relative_degree)
            throw InputError("cartier '" + id + "': restriction degree " + deg.str() + " on cusp " +
                             skeleton.cusp_of_component(comp) + " differs from relative degree " +
                             relative_degree.str());
    }
}

void GeometricTable::set(const std::string& a, const std::string& b, Rat value) {
    entries_[a <= b ? std::make_pair(a, b) : std::make_pair(b, a)] = std::move(value);
}

bool GeometricTable::has(const std::string& a, const std::string& b) const {
    return entries_.count(a <= b ? std::make_pair(a, b) : std::make_pair(b, a)) > 0;
}

Rat GeometricTable::primitive_product(const std::string& a, const std::string& b) const {
    auto it = entries_.find(a <= b ? std::make_pair(a, b) : std::make_pair(b, a));
    if (it == entries_.end())
        throw InputError("geometric table is missing the entry (" + a + "," + b + ")");
    return it->second;
}

Rat GeometricTable::product(const CartierData& c1, const CartierData& c2) const {
    Rat acc(0);
    for (const auto& [id1, k1] : c1.components)
        for (const auto& [id2, k2] : c2.components) acc += k1 * k2 * primitive_product(id1, id2);
    return acc;
}

CompactifiedBDivisor scale_bdiv(const CompactifiedBDivisor& b, const Rat& s, std::string id) {
    CartierData c = CartierData::combine(std::move(id), {{&b.cartier, s}});
    return CompactifiedBDivisor{std::move(c), s * b.g};
}

CompactifiedBDivisor tensor_bdiv(const CompactifiedBDivisor& a, const CompactifiedBDivisor& b,
                                 std::string id) {
    CartierData c = CartierData::combine(std::move(id), {{&a.cartier, Rat(1)}, {&b.cartier, Rat(1)}});
    return CompactifiedBDivisor{std::move(c), a.g + b.g};
}

GraphMeasure curvature(const CompactifiedBDivisor& b) {
    return GraphMeasure::from_divisor(b.g.graph(), b.cartier.restriction) - laplacian(b.g);
}

bool is_semipositive(const CompactifiedBDivisor& b) { return curvature(b).is_positive(); }

namespace {

PwQuad assemble_function(const GraphPtr& parent, const std::vector<ComponentView>& comps,
                         const std::vector<PwQuad>& fs) {
    std::vector<Rat> values(static_cast<size_t>(parent->vertex_count()), Rat(0));
    std::vector<std::vector<PwQuad::Piece>> pieces(static_cast<size_t>(parent->edge_count()));
    for (size_t c = 0; c < comps.size(); ++c) {
        const ComponentView& cv = comps[c];
        for (size_t lv = 0; lv < cv.vertex_to_parent.size(); ++lv)
            values[static_cast<size_t>(cv.vertex_to_parent[lv])] =
                fs[c].at_vertex(static_cast<int>(lv));
        for (size_t le = 0; le < cv.edge_to_parent.size(); ++le)
            pieces[static_cast<size_t>(cv.edge_to_parent[le])] = fs[c].pieces(static_cast<int>(le));
    }
    return PwQuad(parent, std::move(values), std::move(pieces));
}

GraphMeasure assemble_measure(const GraphPtr& parent, const std::vector<ComponentView>& comps,
                              const std::vector<GraphMeasure>& ms) {
    GraphDivisor dirac;
    std::vector<std::vector<GraphMeasure::Segment>> density(
        static_cast<size_t>(parent->edge_count()));
    for (size_t c = 0; c < comps.size(); ++c) {
        const ComponentView& cv = comps[c];
        for (const auto& [p, coeff] : ms[c].dirac().terms()) dirac.add(cv.to_parent(p), coeff);
        for (size_t le = 0; le < cv.edge_to_parent.size(); ++le)
            density[static_cast<size_t>(cv.edge_to_parent[le])] =
                ms[c].density(static_cast<int>(le));
    }
    return GraphMeasure(parent, std::move(dirac), std::move(density));
}

}  // namespace

AdmissibleFamily::AdmissibleFamily(GraphPtr graph, GraphDivisor K, Rat h)
    : graph_(std::move(graph)), K_(std::move(K)), h_(std::move(h)) {
    comps_ = split_components(graph_);
    std::vector<GraphMeasure> mus;
    for (int c = 0; c < static_cast<int>(comps_.size()); ++c) {
        GraphDivisor k_local = comps_[static_cast<size_t>(c)].divisor_to_local(K_, *graph_, c);
        data_.push_back(admissible_measure(comps_[static_cast<size_t>(c)].graph, std::move(k_local), h_));
        mus.push_back(data_.back().mu);
    }
    mu_ = assemble_measure(graph_, comps_, mus);
}

PwQuad AdmissibleFamily::green_for(const GraphDivisor& marks) const {
    std::vector<PwQuad> fs;
    for (int c = 0; c < component_count(); ++c) {
        const ComponentView& cv = comps_[static_cast<size_t>(c)];
        GraphDivisor local = cv.divisor_to_local(marks, *graph_, c);
        if (local.size() != 1 || local.terms().begin()->second != Rat(1))
            throw InputError("expected exactly one point of coefficient 1 on cusp " +
                             graph_->cusp_of_component(c));
        fs.push_back(green(data_[static_cast<size_t>(c)], local.terms().begin()->first));
    }
    return assemble_function(graph_, comps_, fs);
}

PwQuad AdmissibleFamily::diagonal() const {
    std::vector<PwQuad> fs;
    for (int c = 0; c < component_count(); ++c)
        fs.push_back(diagonal_green(data_[static_cast<size_t>(c)]));
    return assemble_function(graph_, comps_, fs);
}

Rat AdmissibleFamily::zhang_constant_on(int component) const {
    return zhang_constant(data_.at(static_cast<size_t>(component)));
}

bool is_admissible(const CompactifiedBDivisor& b, const AdmissibleFamily& family) {
    return curvature(b) == b.cartier.relative_degree * family.mu();
}

CompactifiedBDivisor admissible_bundle(const AdmissibleFamily& family, CartierData cartier) {
    cartier.validate(*family.graph());
    if (cartier.relative_degree != Rat(1))
        throw InputError("admissible bundle requires relative degree 1");
    PwQuad g = family.green_for(cartier.restriction);
    return CompactifiedBDivisor{std::move(cartier), std::move(g)};
}

CompactifiedBDivisor admissible_omega(const AdmissibleFamily& family, CartierData cartier) {
    cartier.validate(*family.graph());
    if (!(cartier.restriction == family.K()))
        throw InputError("omega bundle requires restriction equal to K");
    if (cartier.relative_degree != Rat(2) * family.h() - Rat(2))
        throw InputError("omega bundle requires relative degree 2h-2");
    PwQuad g = Rat(-1) * family.diagonal();
    return CompactifiedBDivisor{std::move(cartier), std::move(g)};
}

Rat pair_bdiv(const CompactifiedBDivisor& b1, const CompactifiedBDivisor& b2,
              const GeometricTable& table) {
    if (!b1.g.graph()->same_shape(*b2.g.graph()))
        throw InputError("pairing of b-divisors on different skeleta");
    return table.product(b1.cartier, b2.cartier) + b1.g.on_divisor(b2.cartier.restriction) +
           b2.g.on_divisor(b1.cartier.restriction) - integrate(b1.g, laplacian(b2.g));
}

DeligneDecomposition deligne_decomposition(const CompactifiedBDivisor& b1,
                                           const CompactifiedBDivisor& b2,
                                           const GeometricTable& table) {
    if (!b1.g.graph()->same_shape(*b2.g.graph()))
        throw InputError("pairing of b-divisors on different skeleta");
    const MetrizedGraph& g = *b1.g.graph();
    DeligneDecomposition out;
    out.global = table.product(b1.cartier, b2.cartier);
    out.total = out.global;
    const GraphMeasure lap2 = laplacian(b2.g);
    for (int c = 0; c < g.component_count(); ++c) {
        Rat local(0);
        for (const auto& [p, coeff] : b2.cartier.restriction.terms())
            if (g.component_of_point(p) == c) local += coeff * b1.g(p);
        for (const auto& [p, coeff] : b1.cartier.restriction.terms())
            if (g.component_of_point(p) == c) local += coeff * b2.g(p);
        local -= integrate_on_component(b1.g, lap2, c);
        out.local_by_cusp.emplace_back(g.cusp_of_component(c), local);
        out.total += local;
    }
    return out;
}

Incarnation incarnation(const CompactifiedBDivisor& b, const ModelGraph& m) {
    if (!m.base_skeleton()->same_shape(*b.g.graph()))
        throw InputError("incarnation: model does not lie over the b-divisor's skeleton");
    Incarnation out;
    out.cartier = b.cartier;
    out.vertical.resize(static_cast<size_t>(m.vertex_count()));
    for (int v = 0; v < m.vertex_count(); ++v)
        out.vertical[static_cast<size_t>(v)] = b.g(m.position(v)) * Rat(m.mult(v));
    return out;
}

namespace {

// (D . x) for a model vertex: Cartier data are realized on the base model, so
// exceptional vertices meet the pullback trivially.
Rat cartier_dot_vertex(const CartierData& c, const ModelGraph& m, int v) {
    if (!m.is_base_vertex(v)) return Rat(0);
    return c.restriction.coeff(m.position(v)) / Rat(m.mult(v));
}

void check_restriction_on_model(const CartierData& c, const ModelGraph& m) {
    for (const auto& [p, coeff] : c.restriction.terms())
        if (!p.is_vertex() || p.index >= m.base_vertex_count())
            throw InputError("cartier '" + c.id + "': restriction point " + to_string(p) +
                             " is not a vertex of the model");
}

}  // namespace

Rat finite_level_pair(const CompactifiedBDivisor& b1, const CompactifiedBDivisor& b2,
                      const ModelGraph& m, const GeometricTable& table) {
    const Incarnation i1 = incarnation(b1, m);
    const Incarnation i2 = incarnation(b2, m);
    check_restriction_on_model(b1.cartier, m);
    check_restriction_on_model(b2.cartier, m);

    Rat acc = table.product(b1.cartier, b2.cartier);
    for (int v = 0; v < m.vertex_count(); ++v) {
        acc += i2.vertical[static_cast<size_t>(v)] * cartier_dot_vertex(b1.cartier, m, v);
        acc += i1.vertical[static_cast<size_t>(v)] * cartier_dot_vertex(b2.cartier, m, v);
    }
    return acc + vertical_pairing(m, i1.vertical, i2.vertical);
}

ConvergenceReport convergence_experiment(const CompactifiedBDivisor& b1,
                                         const CompactifiedBDivisor& b2,
                                         const std::vector<ModelGraph>& tower,
                                         const GeometricTable& table) {
    if (tower.empty()) throw InputError("convergence experiment requires at least one model");
    for (size_t k = 0; k < tower.size(); ++k) {
        if (!tower[k].essential())
            throw InputError("convergence experiment requires essential models");
        if (k > 0 && !tower[k].extends(tower[k - 1]))
            throw InputError("tower is not a chain of blow-ups");
    }
    ConvergenceReport out;
    for (const ModelGraph& m : tower) out.stage_values.push_back(finite_level_pair(b1, b2, m, table));
    out.limit = pair_bdiv(b1, b2, table);
    for (const Rat& v : out.stage_values) out.differences.push_back(v - out.limit);
    return out;
}

Rat sampled_dirichlet(const PwQuad& f1, const PwQuad& f2, const std::vector<GraphPoint>& cuts) {
    if (!f1.graph()->same_shape(*f2.graph()))
        throw InputError("sampled_dirichlet: functions on different graphs");
    const GraphPtr& g = f1.graph();
    auto dirichlet = [](const MetrizedGraph& graph, auto&& value1, auto&& value2) {
        Rat acc(0);
        for (int e = 0; e < graph.edge_count(); ++e) {
            const auto& ed = graph.edge(e);
            acc += (value1(ed.a) - value1(ed.b)) * (value2(ed.a) - value2(ed.b)) / ed.length;
        }
        return acc;
    };
    if (cuts.empty())
        return dirichlet(*g, [&](int v) { return f1.at_vertex(v); },
                         [&](int v) { return f2.at_vertex(v); });
    Subdivision sub = subdivide(g, cuts);
    std::vector<Rat> v1, v2;
    for (int v = 0; v < sub.child()->vertex_count(); ++v) {
        const GraphPoint p = sub.locate_in_parent(GraphPoint::vertex(v));
        v1.push_back(f1(p));
        v2.push_back(f2(p));
    }
    return dirichlet(*sub.child(), [&](int v) { return v1[static_cast<size_t>(v)]; },
                     [&](int v) { return v2[static_cast<size_t>(v)]; });
}

PrincipalEmbedding principal_embedding(const ModelGraph& m, const VertexFunction& g,
                                       std::string id) {
    if (g.size() != static_cast<size_t>(m.vertex_count()))
        throw InputError("principal embedding: vertex function size mismatch");
    PwQuad metric = interpolate_on_skeleton(m, g);

    VerticalDivisor vertical(g.size());
    for (size_t v = 0; v < g.size(); ++v) vertical[v] = -g[v] * Rat(m.mult(static_cast<int>(v)));

    GraphDivisor restriction;
    for (const std::string& cusp : m.cusp_names()) {
        const std::vector<int> verts = m.cusp_vertex_list(cusp);
        const RatMatrix q = intersection_matrix(m, cusp);
        for (size_t i = 0; i < verts.size(); ++i) {
            Rat acc(0);
            for (size_t j = 0; j < verts.size(); ++j)
                acc += vertical[static_cast<size_t>(verts[j])] * q[i][j];
            restriction.add(m.position(verts[i]), Rat(m.mult(verts[i])) * acc);
        }
    }
    CartierData cartier = CartierData::primitive(std::move(id), Rat(0), std::move(restriction));
    return PrincipalEmbedding{CompactifiedBDivisor{std::move(cartier), std::move(metric)},
                              std::move(vertical)};
}

void register_embedding_products(GeometricTable& table, const ModelGraph& m,
                                 const PrincipalEmbedding& embedding,
                                 std::span<const CartierData> others) {
    const std::string& eid = embedding.bdiv.cartier.id;
    table.set(eid, eid, vertical_pairing(m, embedding.vertical, embedding.vertical));
    for (const CartierData& other : others) {
        if (other.components.size() != 1)
            throw InputError("embedding products require primitive Cartier data");
        // Positions of model vertices are distinct on an essential model, so
        // the restriction encodes (x . other) at every vertex.
        Rat acc(0);
        for (int v = 0; v < m.vertex_count(); ++v)
            acc += embedding.vertical[static_cast<size_t>(v)] *
                   other.restriction.coeff(m.position(v)) / Rat(m.mult(v));
        const auto& [oid, ocoeff] = other.components.front();
        table.set(eid, oid, acc / ocoeff);
    }
}

}  // namespace bdiv
