#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <set>

#include "doctest.h"
#include "polyfract/fixtures.hpp"
#include "polyfract/system.hpp"

using namespace polyfract;

namespace {

ValidatedSystem load_validate(const std::string& name) {
    return validate_or_throw(load_system(fixture_text(name)));
}

// Canonical key of the exact vertex set of f(Q_*), optionally moved by g.
std::vector<std::vector<Rational>> cell_key(const ValidatedSystem& sys, const Contraction& f,
                                            const DihedralElement& g) {
    std::vector<std::vector<Rational>> key;
    for (int k = 0; k < sys.J; ++k) {
        key.push_back(g.apply(f.apply(sys.polygon.vertices[k])).coeffs());
    }
    auto less = [](const std::vector<Rational>& x, const std::vector<Rational>& y) {
        for (std::size_t i = 0; i < x.size(); ++i) {
            int c = cmp(x[i], y[i]);
            if (c != 0) return c < 0;
        }
        return false;
    };
    std::sort(key.begin(), key.end(), less);
    return key;
}

}  // namespace

TEST_CASE("description parsing") {
    SystemDescription desc = load_system(fixture_text("carpet"));
    CHECK(desc.J == 4);
    CHECK(desc.r_expr == "1/3");
    CHECK(desc.group.kind == "dihedral");
    CHECK(desc.group.k == 4);
    REQUIRE(desc.cells.size() == 8);
    CHECK(desc.cells.front().id == "sw");
    CHECK(desc.cells.front().center_expr == "2 * r * p3");
    CHECK_FALSE(desc.cells.front().phi_conj);

    const std::string header =
        "format = \"polyfract/v1\"\nJ = 4\nr = \"1/3\"\n[group]\nkind = \"trivial\"\n";
    const std::string one_cell =
        "[[cells]]\nid = \"a\"\nphi = { half_turns = 0, conj = false }\ncenter = \"0\"\n";

    CHECK_THROWS_AS(load_system(header), EmptyCells);
    CHECK_THROWS_AS(load_system("format = \"polyfract/v2\"\n" + header.substr(24) + one_cell),
                    SyntaxError);
    CHECK_THROWS_AS(load_system(header + "bogus = 1\n" + one_cell), SyntaxError);
    CHECK_THROWS_AS(load_system(header + one_cell + one_cell), DuplicateCellId);
    {
        std::string bad_kind = header;
        bad_kind.replace(bad_kind.find("trivial"), 7, "spooky1");
        CHECK_THROWS_AS(load_system(bad_kind + one_cell), UnknownGroupKind);
    }
    {
        std::string bad_r = header;
        bad_r.replace(bad_r.find("1/3"), 3, "1//3");
        CHECK_THROWS_AS(load_system(bad_r + one_cell), SyntaxError);
    }
    // Unknown keys inside tables are rejected too.
    CHECK_THROWS_AS(load_system(header + "[[cells]]\nid = \"a\"\nwat = 2\n"
                                         "phi = { half_turns = 0, conj = false }\n"
                                         "center = \"0\"\n"),
                    SyntaxError);
}

TEST_CASE("carpet passes every axiom with the expected contact structure") {
    ValidationResult result = validate(load_system(fixture_text("carpet")));
    REQUIRE(result.ok());
    CHECK(result.report.all_pass());
    const ValidatedSystem& sys = *result.system;

    CHECK(sys.cell_count() == 8);
    CHECK(sys.group.size() == 8);
    CHECK(sys.ell_edges.size() == 8);
    CHECK(sys.vertex_contacts.size() == 4);

    // Every full-edge element is the stored composition and lies in G; with
    // all placements unrotated it reduces to the edge-line reflection.
    for (const EllEdge1& e : sys.ell_edges) {
        DihedralElement expected = (sys.cells[e.t].phi.inverse() * sys.cells[e.s].phi *
                                    DihedralElement::edge_reflection(sys.J, e.i))
                                       .normalized();
        CHECK(e.g == expected);
        CHECK(e.g == DihedralElement::edge_reflection(sys.J, e.i).normalized());
        CHECK(sys.group.contains(e.g));
        CHECK(sys.edge_group_element(e.s, e.t) == e.g);
        // Opposite direction: the inverse constraint, recomputed from j.
        DihedralElement back = (sys.cells[e.s].phi.inverse() * sys.cells[e.t].phi *
                                DihedralElement::edge_reflection(sys.J, e.j))
                                   .normalized();
        CHECK(sys.edge_group_element(e.t, e.s) == back);
        CHECK((e.g * back).is_identity());
    }

    // Bottom-middle cell: exactly its bottom edge lies on the outer boundary.
    int s = sys.cell_index("s");
    CHECK(sys.edge_on_boundary[s] == std::vector<int>{0, -1, -1, -1});
    int sw = sys.cell_index("sw");
    CHECK(sys.edge_on_boundary[sw] == std::vector<int>{0, -1, -1, 3});
    // The south-west cell's corner vertex sits at the outer corner p_3.
    CHECK(sys.vertex_at_corner[sw][3] == 3);
    CHECK(sys.vertex_at_corner[s][3] == -1);

    // Contact oracle entries.
    int se = sys.cell_index("se");
    int e_ = sys.cell_index("e");
    CHECK(sys.contact[s][se].kind == ContactClass::Kind::Edge);
    CHECK(sys.contact[s][e_].kind == ContactClass::Kind::Vertex);
    CHECK(sys.contact[sw][se].kind == ContactClass::Kind::Disjoint);
}

TEST_CASE("all-identity quadrants fail exactly the contact-symmetry axiom") {
    ValidationResult result = validate(load_system(fixture_text("unfolded-square")));
    REQUIRE_FALSE(result.ok());
    CHECK(result.report.a1.pass);
    CHECK(result.report.a2.pass);
    CHECK(result.report.a3.pass);
    CHECK_FALSE(result.report.a4.pass);
    CHECK(result.report.a5.pass);
    REQUIRE_FALSE(result.report.a4.witnesses.empty());
    CHECK(result.report.a4.witnesses.front().find("reflection") != std::string::npos);
    CHECK_THROWS_AS(validate_or_throw(load_system(fixture_text("unfolded-square"))),
                    NotValidated);
}

TEST_CASE("two opposite corners fail boundary coverage and connectivity") {
    ValidationResult result = validate(load_system(fixture_text("opposite-pair")));
    REQUIRE_FALSE(result.ok());
    CHECK(result.report.a1.pass);
    CHECK_FALSE(result.report.a2.pass);
    CHECK(result.report.a3.pass);
    CHECK(result.report.a4.pass);
    CHECK_FALSE(result.report.a5.pass);
    // Two of the four outer edges are uncovered.
    CHECK(result.report.a2.witnesses.size() == 2);
}

TEST_CASE("folded square and folded triangle validate and fold consistently") {
    for (const char* name : {"folded-square", "folded-triangle"}) {
        CAPTURE(name);
        ValidatedSystem sys = load_validate(name);
        CHECK(sys.group.is_trivial());
        FoldabilityReport fold = detect_trivial_symmetry(sys);
        CHECK(fold.foldable);
        CHECK(fold.witnesses.empty());
    }

    ValidatedSystem square = load_validate("folded-square");
    CHECK(square.ell_edges.size() == 4);
    CHECK(square.vertex_contacts.size() == 2);
    for (const EllEdge1& e : square.ell_edges) {
        CHECK(e.g.is_identity());
        CHECK(e.i == e.j);
    }

    ValidatedSystem triangle = load_validate("folded-triangle");
    CHECK(triangle.ell_edges.size() == 3);
    CHECK(triangle.vertex_contacts.size() == 3);

    ValidatedSystem carpet = load_validate("carpet");
    CHECK_FALSE(detect_trivial_symmetry(carpet).foldable);
}

TEST_CASE("hexagonal honeycomb fixture validates with odd contact directions") {
    ValidatedSystem sys = load_validate("hexa-d3");
    CHECK(sys.J == 6);
    CHECK(sys.cell_count() == 31);
    CHECK(sys.group.size() == 6);
    CHECK(sys.ell_edges.size() == 36);
    CHECK(sys.vertex_contacts.empty());
    for (const EllEdge1& e : sys.ell_edges) {
        // Exactly one side of every contact is an unreflected cell, and the
        // index on that side is odd (the essential directions 1, 3, 5).
        bool s_plain = !sys.cells[e.s].phi.conj;
        bool t_plain = !sys.cells[e.t].phi.conj;
        CHECK(s_plain != t_plain);
        int plain_index = s_plain ? e.i : e.j;
        CHECK(plain_index % 2 == 1);
        int mirrored_index = s_plain ? e.j : e.i;
        CHECK(mirrored_index % 2 == 1);
        CHECK(sys.group.contains(e.g));
    }
    // Only unreflected cells reach the outer boundary with an edge.
    for (int s = 0; s < sys.cell_count(); ++s) {
        for (int k = 0; k < sys.J; ++k) {
            if (sys.edge_on_boundary[s][k] >= 0) {
                CHECK_FALSE(sys.cells[s].phi.conj);
            }
        }
    }
}

TEST_CASE("word action matches exact geometry") {
    ValidatedSystem sys = load_validate("carpet");

    // Identity and the single-letter table.
    Word w = {0, 3, 5};
    CHECK(group_action_on_words(sys, DihedralElement::identity(4), w) == w);
    for (const DihedralElement& g : sys.group.elements) {
        for (int s = 0; s < sys.cell_count(); ++s) {
            Word image = group_action_on_words(sys, g, {s});
            CHECK(image == Word{sys.cell_action.at(g)[s]});
        }
    }

    // Oracle: g(Q_w) = Q_{g_*(w)} as exact point sets, for every g and a
    // spread of words up to length 3.
    std::vector<Word> words = {{0}, {7}, {1, 2}, {3, 0}, {6, 6}, {0, 1, 2}, {5, 2, 7}};
    for (const DihedralElement& g : sys.group.elements) {
        for (const Word& word : words) {
            Word image = group_action_on_words(sys, g, word);
            CHECK(cell_key(sys, word_map(sys, word), g) ==
                  cell_key(sys, word_map(sys, image), DihedralElement::identity(4)));
        }
    }

    // Composition property: (g h)_* = g_* o h_*.
    for (const DihedralElement& g : sys.group.elements) {
        for (const DihedralElement& h : sys.group.elements) {
            Word lhs = group_action_on_words(sys, (g * h).normalized(), w);
            Word rhs = group_action_on_words(sys, g, group_action_on_words(sys, h, w));
            CHECK(lhs == rhs);
        }
    }

    // Residual element is consistent: g(Q_{wu}) = Q_{g_*(w) h_*(u)}.
    auto [image, residual] = group_action_with_residual(
        sys, DihedralElement::rotation(4, 1), Word{1, 2});
    for (int u = 0; u < sys.cell_count(); ++u) {
        Word whole = group_action_on_words(sys, DihedralElement::rotation(4, 1), Word{1, 2, u});
        Word tail = image;
        tail.push_back(sys.cell_action.at(residual)[u]);
        CHECK(whole == tail);
    }

    ValidatedSystem square = load_validate("folded-square");
    CHECK_THROWS_AS(group_action_on_words(square, DihedralElement::rotation(4, 1), {0}),
                    NotInG);
}

TEST_CASE("maximal-symmetry candidates") {
    ValidatedSystem carpet = load_validate("carpet");
    SymmetryCandidates c = candidate_maximal_symmetry(carpet, 3);
    CHECK(c.elements.size() == 8);
    CHECK(c.verified_depth == 3);
    CHECK(std::binary_search(c.elements.begin(), c.elements.end(),
                             DihedralElement::identity(4)));

    // The folded square's generations tile the full square grid, so the whole
    // dihedral symmetry of the square survives even though G = {I}.
    ValidatedSystem square = load_validate("folded-square");
    SymmetryCandidates s = candidate_maximal_symmetry(square, 3);
    CHECK(s.elements.size() == 8);

    ValidatedSystem hexa = load_validate("hexa-d3");
    SymmetryCandidates h = candidate_maximal_symmetry(hexa, 2);
    CHECK(h.elements.size() >= hexa.group.size());
    for (const DihedralElement& g : hexa.group.elements) {
        CHECK(std::binary_search(h.elements.begin(), h.elements.end(), g));
    }
}
