#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <set>

#include "doctest.h"
#include "polyfract/boundary.hpp"
#include "polyfract/fixtures.hpp"
#include "polyfract/system.hpp"
#include "polyfract/wordtree.hpp"

using namespace polyfract;

namespace {

ValidatedSystem load(const std::string& name) {
    return validate_or_throw(load_system(fixture_text(name)));
}

SubsetZJ mask(std::initializer_list<int> indices) {
    SubsetZJ X = 0;
    for (int i : indices) X |= SubsetZJ{1} << i;
    return X;
}

/// Closure conditions defining the essential-boundary fixed point: group
/// invariance, both indices of every level-1 full-edge contact inside, and
/// closedness under inner-edge-on-outer-edge promotion.
bool closure_holds(const ValidatedSystem& sys, SubsetZJ X) {
    if (!is_invariant(sys, X)) return false;
    for (const EllEdge1& e : sys.ell_edges) {
        if (!subset_contains(X, e.i) || !subset_contains(X, e.j)) return false;
    }
    for (int s = 0; s < sys.cell_count(); ++s) {
        for (int k = 0; k < sys.J; ++k) {
            int outer = sys.edge_on_boundary[s][k];
            if (outer >= 0 && subset_contains(X, outer) && !subset_contains(X, k)) return false;
        }
    }
    return true;
}

}  // namespace

TEST_CASE("subset helpers") {
    CHECK(full_subset(4) == 15);
    CHECK(subset_complement(mask({0, 2}), 4) == mask({1, 3}));
    CHECK(subset_elements(mask({1, 3}), 4) == std::vector<int>{1, 3});
    CHECK(subset_to_string(mask({1, 3}), 4) == "{1,3}");
    CHECK(subset_to_string(0, 4) == "{}");
}

TEST_CASE("essential boundary values and closure minimality") {
    struct Plan {
        const char* name;
        SubsetZJ expected;
    };
    for (const Plan& plan : {Plan{"carpet", 15}, Plan{"folded-square", 15},
                             Plan{"folded-triangle", 7}, Plan{"hexa-d3", mask({1, 3, 5})}}) {
        CAPTURE(plan.name);
        ValidatedSystem sys = load(plan.name);
        SubsetZJ e = essential_boundary(sys);
        CHECK(e == plan.expected);
        CHECK(closure_holds(sys, e));
        // Minimality: dropping any single index breaks one of the closure
        // conditions.
        for (int i : subset_elements(e, sys.J)) {
            CAPTURE(i);
            CHECK_FALSE(closure_holds(sys, e & ~(SubsetZJ{1} << i)));
        }
    }
}

TEST_CASE("orbit transitivity") {
    ValidatedSystem carpet = load("carpet");
    CHECK(is_transitive(carpet, full_subset(4)));
    CHECK_FALSE(is_transitive(carpet, 0));

    ValidatedSystem hexa = load("hexa-d3");
    CHECK(is_transitive(hexa, mask({1, 3, 5})));
    CHECK(is_transitive(hexa, mask({0, 2, 4})));
    CHECK_FALSE(is_transitive(hexa, full_subset(6)));
    CHECK(is_invariant(hexa, full_subset(6)));

    ValidatedSystem fsq = load("folded-square");
    CHECK_FALSE(is_transitive(fsq, full_subset(4)));
    CHECK(is_transitive(fsq, mask({2})));
}

TEST_CASE("restricted edge sets") {
    for (const std::string& name : {"carpet", "folded-square", "hexa-d3"}) {
        CAPTURE(name);
        ValidatedSystem sys = load(name);
        LevelGraph g = build_level(sys, 2);
        CHECK(restricted_edges(g, full_subset(sys.J)).size() == g.ell_edges.size());
        CHECK(restricted_edges(g, 0).empty());
        // For group-invariant index sets the two stored indices agree on
        // membership, so the both-indices rule equals the either-index rule.
        for (SubsetZJ Y = 0; Y <= full_subset(sys.J); ++Y) {
            if (!is_invariant(sys, Y)) continue;
            for (const auto& e : g.ell_edges) {
                CHECK(subset_contains(Y, e.i) == subset_contains(Y, e.j));
            }
        }
    }
}

TEST_CASE("boundary traces from letter tables") {
    ValidatedSystem carpet = load("carpet");
    int sw = carpet.cell_index("sw");
    CHECK(boundary_trace(carpet, {{sw}}, full_subset(4)) == mask({0, 3}));
    CHECK(boundary_trace(carpet, {{sw, sw}}, full_subset(4)) == mask({0, 3}));
    CHECK(boundary_trace(carpet, {}, full_subset(4)) == 0);
    CHECK(boundary_trace(carpet, {{sw}}, 0) == 0);
    // The middle cell of an edge keeps only that edge under refinement.
    int s = carpet.cell_index("s");
    CHECK(boundary_trace(carpet, {{s, s}}, full_subset(4)) == mask({0}));

    // Every outer edge is covered at every level.
    for (const std::string& name : {"carpet", "folded-square", "folded-triangle", "hexa-d3"}) {
        CAPTURE(name);
        ValidatedSystem sys = load(name);
        for (int m = 1; m <= 2; ++m) {
            std::vector<Word> all;
            LevelGraph g = build_level(sys, m);
            for (NodeId a = 0; a < g.node_count; ++a) {
                all.push_back(decode_word(a, g.alphabet, g.level));
            }
            CHECK(boundary_trace(sys, all, full_subset(sys.J)) == full_subset(sys.J));
        }
    }
}

TEST_CASE("plain boundary touch adds vertex contacts for odd J") {
    // Central triangle cell: its edges are interior chords, but its vertices
    // are the outer edge midpoints, which belong to the fractal part.
    ValidatedSystem tri = load("folded-triangle");
    Word center = {tri.cell_index("m")};
    CHECK(boundary_trace(tri, {center}, full_subset(3)) == 0);
    CHECK(boundary_touch(tri, {center}) == full_subset(3));

    // For even J the two notions coincide.
    for (const std::string& name : {"carpet", "folded-square", "hexa-d3"}) {
        CAPTURE(name);
        ValidatedSystem sys = load(name);
        for (int s = 0; s < sys.cell_count(); ++s) {
            for (int t = 0; t < sys.cell_count(); ++t) {
                std::vector<Word> A = {{s, t}};
                CHECK(boundary_touch(sys, A) == boundary_trace(sys, A, full_subset(sys.J)));
            }
        }
    }
}

TEST_CASE("component decompositions") {
    ValidatedSystem carpet = load("carpet");
    LevelGraph g1 = level1_graph(carpet);

    // No cut: one component with the full trace.
    ComponentDecomposition whole = components(carpet, g1, 0);
    REQUIRE(whole.components.size() == 1);
    CHECK(whole.components[0].members.size() == 8);
    CHECK(whole.components[0].trace == full_subset(4));

    // Full cut: all singletons with empty traces.
    ComponentDecomposition cutall = components(carpet, g1, full_subset(4));
    CHECK(cutall.components.size() == 8);
    for (const auto& c : cutall.components) CHECK(c.trace == 0);

    // Cutting the bottom direction: ring splits into two arcs and the two
    // mid-edge cells whose gluings used index 0.
    ComponentDecomposition cut0 = components(carpet, g1, mask({0}));
    REQUIRE(cut0.components.size() == 4);
    int sw = carpet.cell_index("sw"), s = carpet.cell_index("s"), se = carpet.cell_index("se");
    int e = carpet.cell_index("e"), ne = carpet.cell_index("ne"), n = carpet.cell_index("n");
    int nw = carpet.cell_index("nw"), w = carpet.cell_index("w");
    auto find_component = [&](int cell) {
        for (const auto& c : cut0.components) {
            if (std::count(c.members.begin(), c.members.end(), cell)) return c;
        }
        REQUIRE(false);
        return cut0.components[0];
    };
    CHECK(find_component(sw).members == std::vector<NodeId>{sw, s, se});
    CHECK(find_component(sw).trace == mask({1, 3}));
    CHECK(find_component(e).members == std::vector<NodeId>{e});
    CHECK(find_component(e).trace == mask({1}));
    CHECK(find_component(n).members == std::vector<NodeId>{ne, n, nw});
    CHECK(find_component(n).trace == mask({1, 2, 3}));
    CHECK(find_component(w).members == std::vector<NodeId>{w});
    CHECK(find_component(w).trace == mask({3}));
}

TEST_CASE("level-1 set family map") {
    for (const std::string& name : {"carpet", "folded-square", "folded-triangle", "hexa-d3"}) {
        CAPTURE(name);
        ValidatedSystem sys = load(name);
        LevelGraph g1 = level1_graph(sys);
        CHECK(f_partial(sys, g1, 0) == std::vector<SubsetZJ>{0});
        CHECK(f_partial(sys, g1, full_subset(sys.J)) ==
              std::vector<SubsetZJ>{full_subset(sys.J)});
    }

    ValidatedSystem carpet = load("carpet");
    LevelGraph g1 = level1_graph(carpet);
    CHECK(f_partial(carpet, g1, mask({0})) ==
          std::vector<SubsetZJ>{mask({0}), mask({0, 2}), mask({0, 1, 2}), mask({0, 2, 3})});

    // The filled square: cutting both interior directions fixes the family.
    ValidatedSystem fsq = load("folded-square");
    LevelGraph f1 = level1_graph(fsq);
    CHECK(f_partial(fsq, f1, mask({0, 2})) == std::vector<SubsetZJ>{mask({0, 2})});
    CHECK(f_partial(fsq, f1, mask({0})) == std::vector<SubsetZJ>{mask({0, 2})});
}

TEST_CASE("set family monotonicity in the cut") {
    for (const std::string& name : {"carpet", "folded-square", "folded-triangle", "hexa-d3"}) {
        CAPTURE(name);
        ValidatedSystem sys = load(name);
        LevelGraph g1 = level1_graph(sys);
        std::vector<std::vector<SubsetZJ>> fp(full_subset(sys.J) + 1);
        for (SubsetZJ X = 0; X <= full_subset(sys.J); ++X) fp[X] = f_partial(sys, g1, X);
        for (SubsetZJ X = 0; X <= full_subset(sys.J); ++X) {
            for (SubsetZJ Y = 0; Y <= full_subset(sys.J); ++Y) {
                if ((X & Y) != X) continue;  // require X subset of Y
                for (SubsetZJ Z : fp[X]) {
                    bool dominated = false;
                    for (SubsetZJ Zp : fp[Y]) dominated = dominated || (Z & Zp) == Z;
                    CHECK(dominated);
                }
                for (SubsetZJ Zp : fp[Y]) {
                    bool refines = false;
                    for (SubsetZJ Z : fp[X]) refines = refines || (Z & Zp) == Z;
                    CHECK(refines);
                }
            }
        }
    }
}

TEST_CASE("low family absorption") {
    for (const std::string& name : {"carpet", "folded-square", "folded-triangle", "hexa-d3"}) {
        CAPTURE(name);
        ValidatedSystem sys = load(name);
        LevelGraph g1 = level1_graph(sys);
        for (SubsetZJ X = 0; X <= full_subset(sys.J); ++X) {
            std::vector<SubsetZJ> img = f_partial(sys, g1, X);
            // Die-out dominance: once a component exposes everything, every
            // other image member is low.
            if (std::count(img.begin(), img.end(), SubsetZJ{0})) {
                for (SubsetZJ Z : img) CHECK((Z == 0 || in_b_low(Z, sys.J)));
            }
            // Low sets map into low sets.
            if (X != 0 && in_b_low(X, sys.J)) {
                for (SubsetZJ Z : img) CHECK(in_b_low(Z, sys.J));
            }
        }
    }
}

TEST_CASE("high and low family definitions") {
    // J = 4: high = the four singletons plus the two opposite-pair
    // complements, which happen to be the diagonal pairs.
    std::vector<SubsetZJ> h4 = b_high(4);
    std::vector<SubsetZJ> expected = {mask({0}), mask({1}), mask({0, 2}), mask({2}),
                                      mask({1, 3}), mask({3})};
    std::sort(expected.begin(), expected.end());
    CHECK(h4 == expected);
    CHECK_FALSE(in_b_low(mask({0, 2}), 4));
    CHECK(in_b_low(mask({0, 1}), 4));
    CHECK(in_b_low(full_subset(4), 4));
    CHECK_FALSE(in_b_low(0, 4));
    // J = 3: no high sets at all.
    CHECK(b_high(3).empty());
    // J = 6: sizes 1..3 plus three opposite-pair complements.
    CHECK(b_high(6).size() == 6 + 15 + 20 + 3);
}

TEST_CASE("iterating the set family map") {
    ValidatedSystem fsq = load("folded-square");
    auto orbits = f_partial_iterate(fsq, b_high(4), 16);
    REQUIRE(orbits.size() == b_high(4).size());
    // The filled square fails the recurrence-free condition: the diagonal
    // pair {0,2} is a fixed point of the map.
    bool any_recurs = false;
    for (const auto& o : orbits) {
        any_recurs = any_recurs || o.seed_recurs;
        CHECK(o.cycled);
        if (o.seed == mask({0, 2})) {
            CHECK(o.seed_recurs);
            REQUIRE(o.families.size() >= 1);
            CHECK(o.families[0] == std::vector<SubsetZJ>{mask({0, 2})});
        }
        // Lemma consistency on the computed orbit.
        for (const auto& fam : o.families) {
            if (std::count(fam.begin(), fam.end(), SubsetZJ{0})) {
                for (SubsetZJ Z : fam) CHECK((Z == 0 || in_b_low(Z, 4)));
            }
        }
    }
    CHECK(any_recurs);

    ValidatedSystem carpet = load("carpet");
    CHECK_THROWS_AS(f_partial_iterate(carpet, {mask({0})}, 4), NotTrivialGroup);
}

TEST_CASE("level composition of the set family map for trivial symmetry") {
    for (const std::string& name : {"folded-square", "folded-triangle"}) {
        CAPTURE(name);
        ValidatedSystem sys = load(name);
        LevelGraph g1 = level1_graph(sys);
        LevelGraph g2 = extend_level(sys, g1);
        LevelGraph g3 = extend_level(sys, g2);
        for (SubsetZJ X = 0; X <= full_subset(sys.J); ++X) {
            CAPTURE(X);
            std::vector<SubsetZJ> composed;
            for (SubsetZJ Y : f_partial(sys, g1, X)) {
                for (SubsetZJ Z : f_partial(sys, g1, Y)) composed.push_back(Z);
            }
            std::sort(composed.begin(), composed.end());
            composed.erase(std::unique(composed.begin(), composed.end()), composed.end());
            CHECK(f_partial(sys, g2, X) == composed);

            std::vector<SubsetZJ> composed3;
            for (SubsetZJ Y : composed) {
                for (SubsetZJ Z : f_partial(sys, g1, Y)) composed3.push_back(Z);
            }
            std::sort(composed3.begin(), composed3.end());
            composed3.erase(std::unique(composed3.begin(), composed3.end()), composed3.end());
            CHECK(f_partial(sys, g3, X) == composed3);
        }
    }
}

TEST_CASE("isolated contact point reports") {
    ValidatedSystem carpet = load("carpet");
    ContactPointReport rc = isolated_contact_report(carpet, 3);
    CHECK(rc.verdict == ContactPointReport::Verdict::NoneExist);
    CHECK(rc.nic1);
    CHECK(rc.nic2);
    CHECK(rc.nic2_witnesses.empty());
    CHECK_FALSE(rc.oracle_found);
    CHECK(rc.criterion_available);

    ValidatedSystem fsq = load("folded-square");
    ContactPointReport rf = isolated_contact_report(fsq, 3);
    CHECK(rf.verdict == ContactPointReport::Verdict::NoneExist);
    CHECK(rf.nic1);
    CHECK(rf.nic2);
    CHECK_FALSE(rf.oracle_found);
    // The center point is shared by all four cells, glued in a 4-cycle.
    bool saw_four = false;
    for (const std::string& line : rf.nic1_points) {
        saw_four = saw_four || line.find("4 cells, connected") != std::string::npos;
    }
    CHECK(saw_four);

    ValidatedSystem hexa = load("hexa-d3");
    ContactPointReport rh = isolated_contact_report(hexa, 2);
    CHECK(rh.verdict == ContactPointReport::Verdict::NoneExist);
    CHECK(rh.nic1);
    CHECK(rh.nic2);
    CHECK_FALSE(rh.oracle_found);

    ValidatedSystem tri = load("folded-triangle");
    ContactPointReport rt = isolated_contact_report(tri, 3);
    CHECK_FALSE(rt.criterion_available);
    CHECK_FALSE(rt.oracle_found);
    CHECK(rt.verdict == ContactPointReport::Verdict::Unknown);
}
