#include <doctest.h>

#include "bdiv/canonical.hpp"
#include "bdiv/errors.hpp"
#include "oracles.hpp"

using namespace bdiv;
namespace bt = bdiv::testing;

TEST_CASE("effective resistance basics") {
    const GraphPtr cycle = bt::cycle_graph({Rat(1), Rat(1), Rat(1)});
    CHECK(effective_resistance(cycle, GraphPoint::vertex(1), GraphPoint::vertex(1)) ==
          ResistanceValue::finite(Rat(0)));
    CHECK(effective_resistance(cycle, GraphPoint::vertex(0), GraphPoint::vertex(1)) ==
          ResistanceValue::finite(Rat(2, 3)));

    GraphSpec spec;
    spec.vertex_count = 4;
    spec.edges = {{0, 1, Rat(1)}, {2, 3, Rat(1)}};
    const GraphPtr two = build_graph(spec).graph;
    CHECK(effective_resistance(two, GraphPoint::vertex(0), GraphPoint::vertex(2)).infinite);
}

TEST_CASE("resistance accepts edge-interior points") {
    const GraphPtr seg = make_graph(2, {{0, 1, Rat(1)}});
    const auto r = effective_resistance(seg, GraphPoint::on_edge(0, Rat(1, 4)),
                                        GraphPoint::on_edge(0, Rat(3, 4)));
    CHECK(r == ResistanceValue::finite(Rat(1, 2)));
}

TEST_CASE("parallel edges combine like resistors") {
    const GraphPtr par = make_graph(2, {{0, 1, Rat(1)}, {0, 1, Rat(1, 2)}});
    // 1 || 1/2 = 1/3
    CHECK(effective_resistance(par, GraphPoint::vertex(0), GraphPoint::vertex(1)) ==
          ResistanceValue::finite(Rat(1, 3)));
}

TEST_CASE("matrix-tree and enumeration oracles agree with the solver") {
    bt::Rng rng(8101);
    for (int trial = 0; trial < 30; ++trial) {
        const GraphPtr g = bt::random_graph(rng, 8);
        if (g->vertex_count() < 2) continue;
        std::uniform_int_distribution<int> pick(0, g->vertex_count() - 1);
        const int x = pick(rng), y = pick(rng);
        const auto solved = effective_resistance(g, GraphPoint::vertex(x), GraphPoint::vertex(y));
        CHECK(solved == bt::resistance_matrix_tree(*g, x, y));
        if (g->edge_count() <= 14) CHECK(solved == bt::resistance_enumeration(*g, x, y));
    }
}

TEST_CASE("resistance satisfies the triangle inequality") {
    bt::Rng rng(8102);
    for (int trial = 0; trial < 10; ++trial) {
        const GraphPtr g = bt::random_connected_graph(rng, 6, 3);
        std::uniform_int_distribution<int> pick(0, g->vertex_count() - 1);
        for (int k = 0; k < 5; ++k) {
            const int a = pick(rng), b = pick(rng), c = pick(rng);
            auto r = [&](int u, int v) {
                return effective_resistance(g, GraphPoint::vertex(u), GraphPoint::vertex(v)).value;
            };
            CHECK(r(a, c) <= r(a, b) + r(b, c));
        }
    }
}

TEST_CASE("Rayleigh monotonicity: deleting an edge never lowers resistance") {
    bt::Rng rng(8103);
    for (int trial = 0; trial < 12; ++trial) {
        const GraphPtr g = bt::random_connected_graph(rng, 6, 3);
        std::uniform_int_distribution<int> pick(0, g->vertex_count() - 1);
        std::uniform_int_distribution<int> epick(0, g->edge_count() - 1);
        const int x = pick(rng), y = pick(rng);
        const int e = epick(rng);
        const auto before = effective_resistance(g, GraphPoint::vertex(x), GraphPoint::vertex(y));
        const auto after =
            effective_resistance(remove_edge(*g, e), GraphPoint::vertex(x), GraphPoint::vertex(y));
        REQUIRE(!before.infinite);
        if (!after.infinite) CHECK(before.value <= after.value);
    }
}

TEST_CASE("canonical divisor of the named examples") {
    const GraphPtr cycle = bt::cycle_graph({Rat(1), Rat(1), Rat(1)});
    CHECK(canonical_divisor(*cycle).empty());

    const GraphPtr seg = make_graph(2, {{0, 1, Rat(1)}});
    GraphDivisor expect_seg;
    expect_seg.add(GraphPoint::vertex(0), Rat(-1));
    expect_seg.add(GraphPoint::vertex(1), Rat(-1));
    CHECK(canonical_divisor(*seg) == expect_seg);

    const GraphPtr theta = make_graph(2, {{0, 1, Rat(1)}, {0, 1, Rat(1)}, {0, 1, Rat(1)}});
    GraphDivisor expect_theta;
    expect_theta.add(GraphPoint::vertex(0), Rat(1));
    expect_theta.add(GraphPoint::vertex(1), Rat(1));
    CHECK(canonical_divisor(*theta) == expect_theta);
    CHECK(canonical_divisor(*theta).degree() == Rat(2));  // 2 b1 - 2 with b1 = 2
    CHECK(betti_numbers(*theta) == std::vector<long>{2});
}

TEST_CASE("betti numbers per component") {
    GraphSpec spec;
    spec.vertex_count = 5;
    spec.edges = {{0, 1, Rat(1)}, {1, 2, Rat(1)}, {3, 4, Rat(1)}, {3, 4, Rat(1)}};
    const GraphPtr g = build_graph(spec).graph;
    CHECK(betti_numbers(*g) == std::vector<long>{0, 1});
    CHECK(betti_numbers(*bt::cycle_graph({Rat(2), Rat(3)})) == std::vector<long>{1});
}

TEST_CASE("canonical measure of cycles, trees and the single edge") {
    const GraphPtr cycle = bt::cycle_graph({Rat(1), Rat(1), Rat(1), Rat(1)});
    const GraphMeasure mu_cycle = canonical_measure(cycle);
    CHECK(mu_cycle ==
          GraphMeasure::from_edge_densities(cycle, {Rat(1, 4), Rat(1, 4), Rat(1, 4), Rat(1, 4)}));

    const GraphPtr seg = make_graph(2, {{0, 1, Rat(1)}});
    GraphDivisor half_ends;
    half_ends.add(GraphPoint::vertex(0), Rat(1, 2));
    half_ends.add(GraphPoint::vertex(1), Rat(1, 2));
    CHECK(canonical_measure(seg) == GraphMeasure::from_divisor(seg, half_ends));

    bt::Rng rng(8104);
    const GraphPtr tree = bt::random_connected_graph(rng, 7, 0);
    const GraphMeasure mu_tree = canonical_measure(tree);
    GraphDivisor expect = canonical_divisor(*tree);
    expect *= Rat(-1, 2);
    CHECK(mu_tree == GraphMeasure::from_divisor(tree, expect));
    CHECK(mu_tree.total_mass() == Rat(1));
}

TEST_CASE("canonical measure has unit mass on every component") {
    bt::Rng rng(8105);
    for (int trial = 0; trial < 25; ++trial) {
        const GraphPtr g = bt::random_graph(rng, 10);
        const GraphMeasure mu = canonical_measure(g);
        for (int c = 0; c < g->component_count(); ++c) CHECK(mu.component_mass(c) == Rat(1));
    }
}

TEST_CASE("edge density matches direct single-edge deletion") {
    bt::Rng rng(8106);
    for (int trial = 0; trial < 10; ++trial) {
        const GraphPtr g = bt::random_connected_graph(rng, 6, 3);
        const GraphMeasure mu = canonical_measure(g);
        for (int e = 0; e < g->edge_count(); ++e) {
            const auto& ed = g->edge(e);
            const auto r = effective_resistance(remove_edge(*g, e), GraphPoint::vertex(ed.a),
                                                GraphPoint::vertex(ed.b));
            const Rat expect = r.infinite ? Rat(0) : Rat(1) / (ed.length + r.value);
            REQUIRE(mu.density(e).size() == 1);
            CHECK(mu.density(e).front().density == expect);
        }
    }
}

TEST_CASE("canonical measure is invariant under subdivision") {
    bt::Rng rng(8107);
    for (int trial = 0; trial < 8; ++trial) {
        const GraphPtr g = bt::random_graph(rng, 7);
        if (g->edge_count() == 0) continue;
        std::vector<GraphPoint> cuts;
        for (int e = 0; e < g->edge_count(); ++e)
            cuts.push_back(GraphPoint::on_edge(e, g->edge(e).length * Rat(1, 3)));
        Subdivision sub = subdivide(g, cuts);
        CHECK(push_measure(sub, canonical_measure(g)) == canonical_measure(sub.child()));
    }
}
