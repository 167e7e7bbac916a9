#include "bdiv/elliptic.hpp"

#include <set>

#include "bdiv/errors.hpp"

namespace bdiv {

EllipticFamily EllipticFamily::gamma_n(long n, long p) {
    if (n < 1 || p < 1) throw InputError("gamma_n family requires N >= 1 and p >= 1");
    return EllipticFamily{std::vector<long>(static_cast<size_t>(p), n)};
}

Rat EllipticFamily::d() const {
    Rat acc(0);
    for (long w : cusp_widths) acc += Rat(w);
    return acc;
}

bool EllipticFamily::uniform() const {
    for (long w : cusp_widths)
        if (w != cusp_widths.front()) return false;
    return !cusp_widths.empty();
}

long EllipticFamily::uniform_width() const {
    if (!uniform()) throw InputError("family does not have uniform cusp widths");
    return cusp_widths.front();
}

Rat circle_green(const Rat& l, const Rat& s, const Rat& t) {
    if (!(l > Rat(0))) throw InputError("circle length must be positive");
    if (s < Rat(0) || !(s < l) || t < Rat(0) || !(t < l))
        throw InputError("circle coordinates must lie in [0, l)");
    const Rat d = (s - t).abs();
    return d * d / (Rat(2) * l) - d / Rat(2) + l / Rat(12);
}

namespace {

ModelGraph build_minimal_model(const EllipticFamily& fam) {
    if (fam.cusp_widths.empty()) throw InputError("family requires at least one cusp");
    std::vector<ModelGraph::Vertex> verts;
    std::vector<std::pair<int, int>> edges;
    for (size_t c = 0; c < fam.cusp_widths.size(); ++c) {
        const long w = fam.cusp_widths[c];
        if (w < 1) throw InputError("cusp widths must be positive integers");
        const int first = static_cast<int>(verts.size());
        const std::string cusp = "c" + std::to_string(c);
        for (long k = 0; k < w; ++k)
            verts.push_back({(k == 0 ? "o" : "x") + std::to_string(c) +
                                 (k == 0 ? "" : "." + std::to_string(k)),
                             1, cusp});
        for (long k = 0; k < w; ++k)
            edges.emplace_back(first + static_cast<int>(k),
                               first + static_cast<int>((k + 1) % w));
    }
    return ModelGraph::base(std::move(verts), std::move(edges));
}

GraphDivisor zero_section_marks(const ModelGraph& m) {
    GraphDivisor marks;
    std::set<std::string> seen;
    for (int v = 0; v < m.vertex_count(); ++v)
        if (seen.insert(m.vertex(v).cusp).second) marks.add(m.position(v), Rat(1));
    return marks;
}

}  // namespace

EllipticSurface::EllipticSurface(EllipticFamily fam)
    : fam_(std::move(fam)),
      model_(build_minimal_model(fam_)),
      family_(model_.base_skeleton(), GraphDivisor{}, Rat(1)),
      o_a_{CartierData{}, PwQuad::constant(model_.base_skeleton(), Rat(0))},
      theta_{CartierData{}, PwQuad::constant(model_.base_skeleton(), Rat(0))} {
    const Rat dl = fam_.deg_lambda();
    table_.set("O", "O", -dl);
    table_.set("O", "Lam", dl);
    table_.set("Lam", "Lam", Rat(0));

    CartierData o_cartier = CartierData::primitive("O", Rat(1), zero_section_marks(model_));
    o_a_ = admissible_bundle(family_, std::move(o_cartier));

    CompactifiedBDivisor lam{CartierData::primitive("Lam", Rat(0), GraphDivisor{}),
                             PwQuad::constant(model_.base_skeleton(), Rat(0))};
    theta_ = tensor_bdiv(scale_bdiv(o_a_, Rat(8), "8(O)a"), scale_bdiv(lam, Rat(4), "lam4"), "Lbar");
}

Rat EllipticSurface::zero_section_self_intersection() const {
    return pair_bdiv(o_a_, o_a_, table_);
}

Rat EllipticSurface::b_self_intersection() const { return pair_bdiv(theta_, theta_, table_); }

Rat EllipticSurface::finite_level_theta(long power, const ModelGraph& m) const {
    const CompactifiedBDivisor b =
        scale_bdiv(theta_, Rat(power), "Lbar^" + std::to_string(power));
    return finite_level_pair(b, b, m, table_);
}

Rat EllipticSurface::minimal_model_self_intersection(long power) const {
    return finite_level_theta(power, model_);
}

EllipticSurface::HeightJumpReport EllipticSurface::height_jump(int depth) const {
    HeightJumpReport report;
    report.power = fam_.uniform() ? fam_.uniform_width() : 1;
    const CompactifiedBDivisor b =
        scale_bdiv(theta_, Rat(report.power), "Lbar^" + std::to_string(report.power));

    std::vector<ModelGraph> tower;
    tower.push_back(model_);
    for (int k = 0; k < depth; ++k) {
        ModelGraph stage = tower.back();
        const int boundary_points = stage.edge_count();
        for (int e = 0; e < boundary_points; ++e) stage = stage.blow_up_edge(0).model;
        tower.push_back(std::move(stage));
    }
    ConvergenceReport conv = convergence_experiment(b, b, tower, table_);
    report.stage_values = std::move(conv.stage_values);
    report.stage_limit = conv.limit;
    report.b_limit = pair_bdiv(theta_, theta_, table_);
    report.differences = std::move(conv.differences);
    return report;
}

}  // namespace bdiv
