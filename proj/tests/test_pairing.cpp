#include <doctest.h>

#include <set>

#include "bdiv/elliptic.hpp"
#include "bdiv/errors.hpp"
#include "bdiv/pairing.hpp"
#include "oracles.hpp"

using namespace bdiv;
namespace bt = bdiv::testing;

namespace {

ModelGraph ngon(int n) {
    std::vector<ModelGraph::Vertex> verts;
    std::vector<std::pair<int, int>> edges;
    for (int k = 0; k < n; ++k) verts.push_back({"x" + std::to_string(k), 1, "c0"});
    for (int k = 0; k < n; ++k) edges.emplace_back(k, (k + 1) % n);
    return ModelGraph::base(std::move(verts), std::move(edges));
}

// Admissible family with K = 0 and h = 1 over a model whose fibers all have
// cycles (so that mu stays positive is not required; this is h = 1 data).
AdmissibleFamily elliptic_family(const ModelGraph& m) {
    return AdmissibleFamily(m.base_skeleton(), GraphDivisor{}, Rat(1));
}

// A per-cusp one-point divisor of coefficient one at the first vertex of
// every cusp, as Cartier data of relative degree 1.
CartierData section_cartier(const ModelGraph& m, const std::string& id) {
    GraphDivisor marks;
    std::set<std::string> seen;
    for (int v = 0; v < m.vertex_count(); ++v)
        if (seen.insert(m.vertex(v).cusp).second) marks.add(m.position(v), Rat(1));
    return CartierData::primitive(id, Rat(1), std::move(marks));
}

VertexFunction random_vertex_function(bt::Rng& rng, const ModelGraph& m) {
    VertexFunction g;
    for (int v = 0; v < m.vertex_count(); ++v) g.push_back(bt::random_rat(rng));
    return g;
}

}  // namespace

TEST_CASE("cartier data validates per-cusp degrees and combines bilinearly") {
    const ModelGraph m = ngon(3);
    CartierData o = section_cartier(m, "O");
    CHECK_NOTHROW(o.validate(*m.base_skeleton()));

    GraphDivisor bad;
    bad.add(GraphPoint::vertex(0), Rat(2));
    CartierData wrong = CartierData::primitive("W", Rat(1), bad);
    CHECK_THROWS_AS(wrong.validate(*m.base_skeleton()), InputError);

    CartierData lam = CartierData::primitive("Lam", Rat(0), GraphDivisor{});
    CartierData mix = CartierData::combine("mix", {{&o, Rat(8)}, {&lam, Rat(4)}});
    CHECK(mix.relative_degree == Rat(8));
    CHECK(mix.components.size() == 2);

    GeometricTable table;
    table.set("O", "O", Rat(-1));
    table.set("O", "Lam", Rat(1));
    table.set("Lam", "Lam", Rat(0));
    CHECK(table.product(mix, mix) == Rat(64) * Rat(-1) + Rat(2 * 32) * Rat(1));
    CHECK_THROWS_AS(table.primitive_product("O", "missing"), InputError);
}

TEST_CASE("curvature of the trivial metric is the restriction") {
    const ModelGraph m = ngon(3);
    CartierData o = section_cartier(m, "O");
    const GraphDivisor r = o.restriction;
    CompactifiedBDivisor b{std::move(o), PwQuad::constant(m.base_skeleton(), Rat(0))};
    CHECK(curvature(b) == GraphMeasure::from_divisor(m.base_skeleton(), r));
    CHECK(is_semipositive(b));
}

TEST_CASE("admissible bundle has curvature mu and is semipositive") {
    const ModelGraph m = ngon(4);
    const AdmissibleFamily fam = elliptic_family(m);
    const CompactifiedBDivisor oa = admissible_bundle(fam, section_cartier(m, "O"));
    CHECK(curvature(oa) == fam.mu());
    CHECK(is_semipositive(oa));
    CHECK(is_admissible(oa, fam));
    CHECK(curvature(oa).component_mass(0) == Rat(1));

    // Restriction mismatch: coefficient 2 cannot make an admissible bundle.
    GraphDivisor two;
    two.add(GraphPoint::vertex(0), Rat(2));
    CHECK_THROWS_AS(admissible_bundle(fam, CartierData::primitive("T", Rat(2), two)), InputError);
}

TEST_CASE("omega bundle is admissible for geometric-style data") {
    bt::Rng rng(11001);
    for (int trial = 0; trial < 4; ++trial) {
        const ModelGraph m = bt::random_model(rng, 2, 3);
        const Rat h(2);
        GraphDivisor k = bt::random_divisor_per_component_degree(rng, m.base_skeleton(),
                                                                 Rat(2) * h - Rat(2));
        const AdmissibleFamily fam(m.base_skeleton(), k, h);
        CartierData omega = CartierData::primitive("w", Rat(2) * h - Rat(2), k);
        const CompactifiedBDivisor wa = admissible_omega(fam, omega);
        CHECK(is_admissible(wa, fam));
        CHECK(curvature(wa) == (Rat(2) * h - Rat(2)) * fam.mu());

        CartierData not_k = CartierData::primitive(
            "v", Rat(2) * h - Rat(2),
            bt::random_divisor_per_component_degree(rng, m.base_skeleton(), Rat(2) * h - Rat(2)));
        if (!(not_k.restriction == k)) CHECK_THROWS_AS(admissible_omega(fam, not_k), InputError);
    }
}

TEST_CASE("semipositivity fails for a spike") {
    const ModelGraph m = ngon(3);
    // A PA spike has negative curvature atoms at its feet.
    VertexFunction spike{Rat(5), Rat(0), Rat(0)};
    CartierData triv = CartierData::primitive("T", Rat(0), GraphDivisor{});
    CompactifiedBDivisor b{std::move(triv), interpolate_on_skeleton(m, spike)};
    CHECK(!is_semipositive(b));
}

TEST_CASE("principal embeddings have vanishing curvature") {
    bt::Rng rng(11002);
    for (int trial = 0; trial < 20; ++trial) {
        ModelGraph m = bt::random_model(rng, 2, 4);
        // Sometimes climb the tower first so corners sit at blown-up points.
        std::uniform_int_distribution<int> hops(0, 2);
        for (int k = hops(rng); k > 0 && m.edge_count() > 0; --k) {
            std::uniform_int_distribution<int> epick(0, m.edge_count() - 1);
            m = m.blow_up_edge(epick(rng)).model;
        }
        const PrincipalEmbedding emb =
            principal_embedding(m, random_vertex_function(rng, m), "E");
        CHECK(curvature(emb.bdiv) == GraphMeasure::zero(m.base_skeleton()));
    }
}

TEST_CASE("pair with zero metrics returns the table value") {
    const ModelGraph m = ngon(3);
    CartierData p = section_cartier(m, "P");
    GeometricTable table;
    table.set("P", "P", Rat(5));
    CompactifiedBDivisor b{p, PwQuad::constant(m.base_skeleton(), Rat(0))};
    CHECK(pair_bdiv(b, b, table) == Rat(5));
    CHECK(finite_level_pair(b, b, m, table) == Rat(5));
}

TEST_CASE("pair of admissible bundles obeys the adjunction-style formula") {
    // O(P)_a . O(Q)_a = table(P,Q) + g(x, y).
    bt::Rng rng(11003);
    for (int trial = 0; trial < 6; ++trial) {
        const ModelGraph m = bt::random_model(rng, 2, 3);
        const AdmissibleFamily fam = elliptic_family(m);
        std::vector<GraphDivisor> marks(2);
        std::vector<GraphPoint> pts[2];
        for (const std::string& cusp : m.cusp_names()) {
            const auto verts = m.cusp_vertex_list(cusp);
            std::uniform_int_distribution<size_t> vpick(0, verts.size() - 1);
            for (int i = 0; i < 2; ++i) {
                const GraphPoint pt = m.position(verts[vpick(rng)]);
                marks[static_cast<size_t>(i)].add(pt, Rat(1));
                pts[i].push_back(pt);
            }
        }
        if (marks[0].size() != pts[0].size() || marks[1].size() != pts[1].size()) continue;
        const CompactifiedBDivisor bp =
            admissible_bundle(fam, CartierData::primitive("P", Rat(1), marks[0]));
        const CompactifiedBDivisor bq =
            admissible_bundle(fam, CartierData::primitive("Q", Rat(1), marks[1]));
        GeometricTable table;
        const Rat t = bt::random_rat(rng);
        table.set("P", "Q", t);
        Rat expected = t;
        for (size_t c = 0; c < pts[0].size(); ++c) expected += bp.g(pts[1][c]);
        CHECK(pair_bdiv(bp, bq, table) == expected);
        CHECK(pair_bdiv(bq, bp, table) == expected);
    }
}

TEST_CASE("pair agrees with the curvature-form rewriting") {
    bt::Rng rng(11004);
    for (int trial = 0; trial < 8; ++trial) {
        const ModelGraph m = bt::random_model(rng, 1, 4);
        const GraphPtr skel = m.base_skeleton();
        CartierData c1 = section_cartier(m, "A");
        CartierData c2 = section_cartier(m, "B");
        const CompactifiedBDivisor b1{c1, bt::random_pwquad(rng, skel)};
        const CompactifiedBDivisor b2{c2, bt::random_pwquad(rng, skel)};
        GeometricTable table;
        table.set("A", "B", bt::random_rat(rng));
        const Rat direct = pair_bdiv(b1, b2, table);
        const Rat with_curv = table.product(b1.cartier, b2.cartier) +
                              b2.g.on_divisor(b1.cartier.restriction) +
                              integrate(b1.g, curvature(b2));
        CHECK(direct == with_curv);
        CHECK(direct == pair_bdiv(b2, b1, table));
    }
}

TEST_CASE("pair is bilinear with a bilinearly extended table") {
    bt::Rng rng(11005);
    const ModelGraph m = ngon(4);
    const GraphPtr skel = m.base_skeleton();
    CartierData a = section_cartier(m, "A");
    CartierData b = section_cartier(m, "B");
    CartierData c = section_cartier(m, "C");
    GeometricTable table;
    for (const char* x : {"A", "B", "C"})
        for (const char* y : {"A", "B", "C"}) table.set(x, y, bt::random_rat(rng));
    const CompactifiedBDivisor ba{a, bt::random_pwquad(rng, skel)};
    const CompactifiedBDivisor bb{b, bt::random_pwquad(rng, skel)};
    const CompactifiedBDivisor bc{c, bt::random_pwquad(rng, skel)};
    const Rat s(3, 7);
    const CompactifiedBDivisor combo = tensor_bdiv(scale_bdiv(ba, s, "sA"), bb, "sA+B");
    CHECK(pair_bdiv(combo, bc, table) ==
          s * pair_bdiv(ba, bc, table) + pair_bdiv(bb, bc, table));
}

TEST_CASE("adding a principal embedding does not change the pairing") {
    bt::Rng rng(11006);
    for (int trial = 0; trial < 10; ++trial) {
        const ModelGraph m = bt::random_model(rng, 1, 4);
        const GraphPtr skel = m.base_skeleton();
        CartierData a = section_cartier(m, "A");
        CartierData b = section_cartier(m, "B");
        const CompactifiedBDivisor ba{a, bt::random_pwquad(rng, skel)};
        const CompactifiedBDivisor bb{b, bt::random_pwquad(rng, skel)};
        const PrincipalEmbedding emb =
            principal_embedding(m, random_vertex_function(rng, m), "E");

        GeometricTable table;
        table.set("A", "A", bt::random_rat(rng));
        table.set("A", "B", bt::random_rat(rng));
        table.set("B", "B", bt::random_rat(rng));
        const std::vector<CartierData> others{ba.cartier, bb.cartier};
        register_embedding_products(table, m, emb, others);

        const Rat before = pair_bdiv(ba, bb, table);
        const CompactifiedBDivisor shifted = tensor_bdiv(ba, emb.bdiv, "A+E");
        CHECK(pair_bdiv(shifted, bb, table) == before);
        CHECK(pair_bdiv(emb.bdiv, bb, table) == Rat(0));
        CHECK(pair_bdiv(emb.bdiv, emb.bdiv, table) == Rat(0));
    }
}

TEST_CASE("deligne decomposition sums to the pairing") {
    const EllipticSurface surf(EllipticFamily{{3, 5}});
    const CompactifiedBDivisor& oa = surf.zero_section_bundle();
    const DeligneDecomposition dec = deligne_decomposition(oa, oa, surf.table());
    CHECK(dec.total == pair_bdiv(oa, oa, surf.table()));
    REQUIRE(dec.local_by_cusp.size() == 2);
    // Local contribution l_c / 12 per cusp.
    CHECK(dec.local_by_cusp[0].second == Rat(3, 12));
    CHECK(dec.local_by_cusp[1].second == Rat(5, 12));
    CHECK(dec.global == -surf.family_spec().deg_lambda());
}

TEST_CASE("incarnation of a zero metric is bare Cartier data") {
    const ModelGraph m = ngon(3);
    CartierData p = section_cartier(m, "P");
    CompactifiedBDivisor b{p, PwQuad::constant(m.base_skeleton(), Rat(0))};
    const Incarnation inc = incarnation(b, m);
    for (const Rat& v : inc.vertical) CHECK(v == Rat(0));
}

TEST_CASE("incarnation coefficients of the elliptic zero section") {
    const int n = 5;
    const EllipticSurface surf(EllipticFamily::gamma_n(n, 1));
    const Incarnation inc = incarnation(surf.zero_section_bundle(), surf.minimal_model());
    for (int k = 0; k < n; ++k) {
        const Rat expect = Rat(static_cast<long>(k) * k, 2L * n) - Rat(k, 2) + Rat(n, 12);
        CHECK(inc.vertical[static_cast<size_t>(k)] == expect);
    }
    // Pushforward compatibility: the deeper incarnation restricts to this one.
    const BlowUpResult r = surf.minimal_model().blow_up_edge(0);
    const Incarnation deeper = incarnation(surf.zero_section_bundle(), r.model);
    for (int k = 0; k < n; ++k) CHECK(deeper.vertical[static_cast<size_t>(k)] == inc.vertical[static_cast<size_t>(k)]);
}

TEST_CASE("finite level pair on the minimal elliptic model") {
    // Trace self-intersection of O(O)_a on the width-N gons: p/(12N).
    for (long n : {2L, 3L, 5L}) {
        for (long p : {1L, 3L}) {
            const EllipticSurface surf(EllipticFamily::gamma_n(n, p));
            const Rat got = finite_level_pair(surf.zero_section_bundle(), surf.zero_section_bundle(),
                                              surf.minimal_model(), surf.table());
            CHECK(got == Rat(p, 12 * n));
        }
    }
}

TEST_CASE("finite level pair is invariant under blow-ups for pulled-back metrics") {
    bt::Rng rng(11007);
    int done = 0;
    while (done < 20) {
        const ModelGraph m = bt::random_model(rng, 2, 4);
        const GraphPtr skel = m.base_skeleton();
        // PA metric parts with corners at the model's vertices are exactly the
        // pullback-compatible ones.
        CartierData a = section_cartier(m, "A");
        CartierData b = section_cartier(m, "B");
        const CompactifiedBDivisor ba{a, interpolate_on_skeleton(m, random_vertex_function(rng, m))};
        const CompactifiedBDivisor bb{b, interpolate_on_skeleton(m, random_vertex_function(rng, m))};
        GeometricTable table;
        table.set("A", "A", bt::random_rat(rng));
        table.set("A", "B", bt::random_rat(rng));
        table.set("B", "B", bt::random_rat(rng));
        const Rat base_value = finite_level_pair(ba, bb, m, table);

        std::uniform_int_distribution<int> coin(0, 1);
        ModelGraph stage = m;
        for (int hops = 0; hops < 3; ++hops) {
            if (coin(rng) == 0 && stage.edge_count() > 0) {
                std::uniform_int_distribution<int> epick(0, stage.edge_count() - 1);
                stage = stage.blow_up_edge(epick(rng)).model;
            } else {
                std::uniform_int_distribution<int> vpick(0, stage.vertex_count() - 1);
                stage = stage.blow_up_smooth_point(vpick(rng)).model;
            }
            CHECK(finite_level_pair(ba, bb, stage, table) == base_value);
            ++done;
        }
    }
}

TEST_CASE("convergence experiment on the elliptic family") {
    const EllipticSurface surf(EllipticFamily::gamma_n(3, 1));
    std::vector<ModelGraph> tower{surf.minimal_model()};
    for (int k = 0; k < 3; ++k) {
        ModelGraph stage = tower.back();
        const int edges = stage.edge_count();
        for (int e = 0; e < edges; ++e) stage = stage.blow_up_edge(0).model;
        tower.push_back(std::move(stage));
    }
    const ConvergenceReport rep = convergence_experiment(
        surf.zero_section_bundle(), surf.zero_section_bundle(), tower, surf.table());
    CHECK(rep.stage_values.front() == Rat(1, 36));  // p/(12N)
    CHECK(rep.limit == Rat(0));
    for (size_t k = 1; k < rep.differences.size(); ++k)
        CHECK(rep.differences[k].abs() < rep.differences[k - 1].abs());

    // A non-chain input is rejected.
    std::vector<ModelGraph> broken{tower[1], tower[0]};
    CHECK_THROWS_AS(convergence_experiment(surf.zero_section_bundle(), surf.zero_section_bundle(),
                                           broken, surf.table()),
                    InputError);
}

TEST_CASE("convergence experiment stabilizes exactly for PA metrics") {
    bt::Rng rng(11008);
    const ModelGraph m = ngon(3);
    // Corners at the midpoints of all three edges: resolved after one round
    // of blow-ups (all multiplicities one, so blow-ups bisect).
    ModelGraph fine = m;
    for (int e = 0; e < 3; ++e) fine = fine.blow_up_edge(0).model;
    VertexFunction g = random_vertex_function(rng, fine);
    const PwQuad metric = interpolate_on_skeleton(fine, g);
    CartierData a = section_cartier(m, "A");
    const CompactifiedBDivisor b{a, metric};
    GeometricTable table;
    table.set("A", "A", Rat(2));

    std::vector<ModelGraph> tower{m, fine};
    for (int k = 0; k < 2; ++k) {
        ModelGraph stage = tower.back();
        const int edges = stage.edge_count();
        for (int e = 0; e < edges; ++e) stage = stage.blow_up_edge(0).model;
        tower.push_back(std::move(stage));
    }
    const ConvergenceReport rep = convergence_experiment(b, b, tower, table);
    // Once the corner locus is resolved the value is exactly the limit.
    CHECK(rep.differences[1] == Rat(0));
    CHECK(rep.differences[2] == Rat(0));
    CHECK(rep.differences[3] == Rat(0));
    CHECK(rep.stage_values[1] == rep.limit);
}

TEST_CASE("sampled dirichlet approaches the Laplacian pairing on the unit cycle") {
    GraphSpec spec;
    spec.vertex_count = 1;
    spec.edges = {{0, 0, Rat(1)}};
    const GraphPtr g = build_graph(spec).graph;
    const AdmissibleData data = admissible_measure(g, GraphDivisor{}, Rat(1));
    const PwQuad green_fn = green(data, GraphPoint::vertex(0));

    const Rat target = integrate(green_fn, laplacian(green_fn));
    CHECK(target == Rat(1, 12));
    Rat prev_err(1);
    for (int k : {3, 6, 12, 24}) {
        // k equally spaced samples; 0, 1/3 and 2/3 are vertices already.
        std::vector<GraphPoint> cuts;
        for (int j = 1; j < k; ++j) {
            const Rat t(j, k);
            if (t == Rat(1, 3) || t == Rat(2, 3)) continue;
            const int edge = (3 * j) / k;
            cuts.push_back(GraphPoint::on_edge(edge, t - Rat(edge, 3)));
        }
        const Rat e_k = sampled_dirichlet(green_fn, green_fn, cuts);
        CHECK(e_k == Rat(1, 12) - Rat(1, 12L * k * k));
        const Rat err = (e_k - target).abs();
        CHECK(err < prev_err);
        prev_err = err;
    }
}

TEST_CASE("curvature mass per cusp equals the relative degree") {
    bt::Rng rng(11009);
    for (int trial = 0; trial < 6; ++trial) {
        const ModelGraph m = bt::random_model(rng, 3, 3);
        const GraphPtr skel = m.base_skeleton();
        CartierData c = section_cartier(m, "A");
        const CompactifiedBDivisor b{c, bt::random_pwquad(rng, skel)};
        const GraphMeasure curv = curvature(b);
        for (int comp = 0; comp < skel->component_count(); ++comp)
            CHECK(curv.component_mass(comp) == b.cartier.relative_degree);
    }
}

TEST_CASE("embedding curvature vanishes when a blow-up lands on a loop point") {
    // Blowing up the loop and then the x-z edge puts the new vertex exactly
    // on a loop-normalization vertex of the skeleton.
    const ModelGraph loop = ModelGraph::base({{"x", 1, "c0"}}, {{0, 0}});
    const BlowUpResult r1 = loop.blow_up_edge(0);
    const BlowUpResult r2 = r1.model.blow_up_edge(r1.new_edges[0]);
    CHECK(r2.model.position(r2.new_vertex).is_vertex());
    CHECK(r2.model.mult(r2.new_vertex) == 3);
    CHECK(r2.model.edge_length(r2.new_edges[0]) == Rat(1, 3));
    CHECK(r2.model.edge_length(r2.new_edges[1]) == Rat(1, 6));

    bt::Rng rng(11010);
    VertexFunction g;
    for (int v = 0; v < r2.model.vertex_count(); ++v) g.push_back(bt::random_rat(rng));
    const PrincipalEmbedding emb = principal_embedding(r2.model, g, "E");
    CHECK(curvature(emb.bdiv) == GraphMeasure::zero(r2.model.base_skeleton()));
}

TEST_CASE("finite level pair rejects restriction support off the model's vertices") {
    const ModelGraph m = ngon(3);
    GraphDivisor interior;
    interior.add(GraphPoint::on_edge(0, Rat(1, 2)), Rat(1));
    CartierData c = CartierData::primitive("P", Rat(1), interior);
    const CompactifiedBDivisor b{c, PwQuad::constant(m.base_skeleton(), Rat(0))};
    GeometricTable table;
    table.set("P", "P", Rat(0));
    CHECK_THROWS_AS(finite_level_pair(b, b, m, table), InputError);
    // The b-limit pairing itself stays available.
    CHECK(pair_bdiv(b, b, table) == Rat(0));
}

TEST_CASE("incarnation requires a model over the same skeleton") {
    const EllipticSurface surf(EllipticFamily::gamma_n(3, 1));
    const ModelGraph other = ngon(4);
    CHECK_THROWS_AS(incarnation(surf.zero_section_bundle(), other), InputError);
}
