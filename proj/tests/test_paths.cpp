#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "doctest.h"
#include "polyfract/boundary.hpp"
#include "polyfract/errors.hpp"
#include "polyfract/fixtures.hpp"
#include "polyfract/paths.hpp"
#include "polyfract/system.hpp"
#include "polyfract/wordtree.hpp"

using namespace polyfract;

namespace {

ValidatedSystem load(const std::string& name) {
    return validate_or_throw(load_system(fixture_text(name)));
}

NodeId encode(std::initializer_list<int> letters, int alphabet) {
    NodeId id = 0;
    for (int c : letters) id = id * alphabet + c;
    return id;
}

PathSeq make_path(int level, std::vector<NodeId> nodes, EdgeKind kind = EdgeKind::Star) {
    PathSeq p;
    p.level = level;
    p.nodes = std::move(nodes);
    p.kind = kind;
    return p;
}

/// Random star walk of 1..max_len nodes in a level graph.
PathSeq random_walk(const LevelGraph& graph, std::mt19937_64& rng, int max_len) {
    PathSeq p;
    p.level = graph.level;
    p.kind = EdgeKind::Star;
    NodeId cur = static_cast<NodeId>(rng() % static_cast<std::uint64_t>(graph.node_count));
    p.nodes.push_back(cur);
    int len = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_len));
    for (int step = 1; step < len; ++step) {
        const auto& nb = graph.star_adj[static_cast<std::size_t>(cur)];
        if (nb.empty()) break;
        cur = nb[rng() % nb.size()];
        p.nodes.push_back(cur);
    }
    return p;
}

bool star_connected(const LevelGraph& graph, const std::vector<NodeId>& nodes) {
    if (nodes.empty()) return true;
    std::set<NodeId> pool(nodes.begin(), nodes.end());
    std::vector<NodeId> stack{*pool.begin()};
    std::set<NodeId> seen{*pool.begin()};
    while (!stack.empty()) {
        NodeId v = stack.back();
        stack.pop_back();
        for (NodeId u : graph.star_adj[static_cast<std::size_t>(v)])
            if (pool.count(u) && !seen.count(u)) {
                seen.insert(u);
                stack.push_back(u);
            }
    }
    return seen.size() == pool.size();
}

std::vector<Word> words_of(const ValidatedSystem& sys, int level,
                           std::initializer_list<NodeId> ids) {
    std::vector<Word> out;
    for (NodeId id : ids) out.push_back(decode_word(id, sys.cell_count(), level));
    return out;
}

}  // namespace

TEST_CASE("split and rejoin are mutually inverse on random walks") {
    struct Job {
        const char* name;
        int level;
        int count;
    };
    // hexa-d3 has 31 cells, so its deeper graphs are kept to level 2.
    const Job jobs[] = {{"carpet", 2, 250},        {"carpet", 3, 250},
                        {"folded-square", 3, 500}, {"folded-triangle", 3, 500},
                        {"hexa-d3", 2, 250}};
    for (const Job& job : jobs) {
        ValidatedSystem sys = load(job.name);
        LevelGraph graph = build_level(sys, job.level);
        std::mt19937_64 rng(0x5eed0 + job.level);
        for (int t = 0; t < job.count; ++t) {
            PathSeq path = random_walk(graph, rng, 15);
            for (int k = 0; k <= job.level; ++k) {
                PathBlocks split = decompose(path, k, graph.alphabet);
                // One run per projection node, monotone 1-based breakpoints
                // ending at the path length.
                REQUIRE(split.projection.level == k);
                REQUIRE(split.blocks.size() == split.projection.nodes.size());
                REQUIRE(split.breakpoints.size() == split.blocks.size());
                CHECK(split.breakpoints.back() == static_cast<int>(path.nodes.size()));
                std::size_t total = 0;
                for (std::size_t r = 0; r < split.blocks.size(); ++r) {
                    CHECK(split.blocks[r].level == job.level - k);
                    CHECK_FALSE(split.blocks[r].nodes.empty());
                    if (r + 1 < split.blocks.size())
                        CHECK(split.projection.nodes[r] != split.projection.nodes[r + 1]);
                    total += split.blocks[r].nodes.size();
                }
                CHECK(total == path.nodes.size());
                PathSeq rejoined = reassemble(split, graph.alphabet);
                CHECK(rejoined.level == path.level);
                CHECK(rejoined.nodes == path.nodes);
            }
        }
    }
}

TEST_CASE("split block structure at the extreme depths and across a wall") {
    ValidatedSystem sys = load("carpet");
    const int N = sys.cell_count();
    const int sw = sys.cell_index("sw"), s = sys.cell_index("s");
    const int e = sys.cell_index("e"), w = sys.cell_index("w");

    PathSeq path = make_path(2, {encode({sw, e}, N), encode({s, w}, N)});
    SUBCASE("full depth leaves the path as its own projection") {
        PathBlocks split = decompose(path, 2, N);
        CHECK(split.projection.nodes == path.nodes);
        CHECK(split.blocks.size() == 2);
        for (const PathSeq& b : split.blocks) CHECK(b.nodes == std::vector<NodeId>{0});
    }
    SUBCASE("depth zero gives a single block") {
        PathBlocks split = decompose(path, 0, N);
        CHECK(split.projection.nodes == std::vector<NodeId>{0});
        CHECK(split.blocks.size() == 1);
        CHECK(split.blocks[0].nodes == path.nodes);
        CHECK(split.breakpoints == std::vector<int>{2});
    }
    SUBCASE("crossing one wall gives two runs") {
        PathBlocks split = decompose(path, 1, N);
        CHECK(split.projection.nodes == std::vector<NodeId>{sw, s});
        REQUIRE(split.blocks.size() == 2);
        CHECK(split.blocks[0].nodes == std::vector<NodeId>{e});
        CHECK(split.blocks[1].nodes == std::vector<NodeId>{w});
        CHECK(split.breakpoints == std::vector<int>{1, 2});
    }
    SUBCASE("depth outside [0, level] is rejected") {
        CHECK_THROWS_AS(decompose(path, -1, N), BadLevel);
        CHECK_THROWS_AS(decompose(path, 3, N), BadLevel);
    }
}

TEST_CASE("joining paths") {
    ValidatedSystem sys = load("carpet");
    LevelGraph g1 = level1_graph(sys);
    const int sw = sys.cell_index("sw"), s = sys.cell_index("s"), se = sys.cell_index("se");
    const int e = sys.cell_index("e"), ne = sys.cell_index("ne");

    SUBCASE("shared junction node is dropped") {
        PathSeq r = concat(g1, make_path(1, {sw, s, se}, EdgeKind::Ell),
                           make_path(1, {se, e}, EdgeKind::Ell));
        CHECK(r.nodes == std::vector<NodeId>{sw, s, se, e});
        CHECK(r.kind == EdgeKind::Ell);
    }
    SUBCASE("palindrome through a shared endpoint") {
        PathSeq r = concat(g1, make_path(1, {sw, s, se}, EdgeKind::Ell),
                           make_path(1, {se, s, sw}, EdgeKind::Ell));
        CHECK(r.nodes == std::vector<NodeId>{sw, s, se, s, sw});
    }
    SUBCASE("adjacent junction keeps both nodes") {
        PathSeq r = concat(g1, make_path(1, {sw, s}, EdgeKind::Ell),
                           make_path(1, {se, e}, EdgeKind::Ell));
        CHECK(r.nodes == std::vector<NodeId>{sw, s, se, e});
        CHECK(r.kind == EdgeKind::Ell);
    }
    SUBCASE("point-contact junction demotes the kind") {
        PathSeq r = concat(g1, make_path(1, {sw, s}, EdgeKind::Ell),
                           make_path(1, {e, ne}, EdgeKind::Ell));
        CHECK(r.nodes == std::vector<NodeId>{sw, s, e, ne});
        CHECK(r.kind == EdgeKind::Star);
    }
    SUBCASE("far junction is rejected") {
        CHECK_THROWS_AS(concat(g1, make_path(1, {sw}), make_path(1, {ne})), NotJoinable);
    }
    SUBCASE("level mismatch is rejected") {
        CHECK_THROWS_AS(concat(g1, make_path(1, {sw}), make_path(2, {0})), BadLevel);
    }
}

TEST_CASE("folding a path into the frame of its first run") {
    ValidatedSystem carpet = load("carpet");
    GraphCache cache(carpet);
    const int N = carpet.cell_count();
    const int sw = carpet.cell_index("sw"), s = carpet.cell_index("s");
    const int se = carpet.cell_index("se"), e = carpet.cell_index("e");
    const int w = carpet.cell_index("w"), nw = carpet.cell_index("nw");

    SUBCASE("depth zero is the identity") {
        PathSeq path = make_path(2, {encode({sw, e}, N), encode({s, w}, N)});
        PathSeq r = fold(cache, path, 0);
        CHECK(r.level == 2);
        CHECK(r.nodes == path.nodes);
    }
    SUBCASE("full depth collapses to the root") {
        PathSeq path = make_path(2, {encode({sw, e}, N), encode({s, w}, N)});
        PathSeq r = fold(cache, path, 2);
        CHECK(r.level == 0);
        CHECK(r.nodes == std::vector<NodeId>{0});
    }
    SUBCASE("a single run is just re-rooted") {
        PathSeq path = make_path(2, {encode({sw, e}, N), encode({sw, se}, N)});
        PathSeq r = fold(cache, path, 1);
        CHECK(r.level == 1);
        CHECK(r.nodes == std::vector<NodeId>{e, se});
    }
    SUBCASE("the wall reflection mirrors the second run onto the first") {
        // The sw|s wall reflects across a vertical line, so the w child of s
        // lands on the e child of sw and the two folded nodes coincide.
        PathSeq path = make_path(2, {encode({sw, e}, N), encode({s, w}, N)});
        PathSeq r = fold(cache, path, 1);
        CHECK(r.level == 1);
        CHECK(r.nodes == std::vector<NodeId>{e});
    }
    SUBCASE("trivial-symmetry walls fold by coincidence") {
        ValidatedSystem fsq = load("folded-square");
        GraphCache fcache(fsq);
        const int M = fsq.cell_count();
        const int fsw = fsq.cell_index("sw"), fse = fsq.cell_index("se");
        PathSeq path = make_path(2, {encode({fsw, fse}, M), encode({fse, fse}, M)});
        PathSeq r = fold(fcache, path, 1);
        CHECK(r.level == 1);
        CHECK(r.nodes == std::vector<NodeId>{fse});
    }
    SUBCASE("point-contact projections are rejected") {
        PathSeq path = make_path(2, {encode({s, nw}, N), encode({w, se}, N)});
        CHECK(is_path(cache.at(2), path));
        CHECK_THROWS_AS(fold(cache, path, 1), ProjectionNotEll);
    }
}

TEST_CASE("symmetrized shift-and-respan word sets") {
    SUBCASE("trivial group, zero respan depth") {
        ValidatedSystem fsq = load("folded-square");
        Word u = {1, 2};
        std::vector<Word> H = h_set(fsq, u, 1, 0, 1);
        CHECK(H == std::vector<Word>{{2}});
    }
    SUBCASE("cardinality bound, sortedness and symmetry") {
        ValidatedSystem sys = load("carpet");
        Word u = {0, 1};
        std::vector<Word> H = h_set(sys, u, 1, 1, 3);
        const std::size_t bound =
            sys.group.size() * static_cast<std::size_t>(8 * 8);  // #(G) N^{m-|u|+n1}
        CHECK(H.size() <= bound);
        CHECK_FALSE(H.empty());
        CHECK(std::is_sorted(H.begin(), H.end()));
        CHECK(std::adjacent_find(H.begin(), H.end()) == H.end());
        for (const Word& v : H) CHECK(v.size() == 3);
        for (const DihedralElement& g : sys.group.elements)
            for (const Word& v : H) {
                Word gv = group_action_on_words(sys, g, v);
                CHECK(std::binary_search(H.begin(), H.end(), gv));
            }
    }
    SUBCASE("negative excess truncates to prefixes") {
        ValidatedSystem sys = load("carpet");
        Word u = {0, 1};
        std::vector<Word> H = h_set(sys, u, 1, 2, 1);
        // Target length 1 is below the respan depth 2, so the set is exactly
        // the level-1 alphabet.
        REQUIRE(H.size() == 8);
        for (int c = 0; c < 8; ++c) CHECK(H[static_cast<std::size_t>(c)] == Word{c});
    }
    SUBCASE("index validation") {
        ValidatedSystem sys = load("carpet");
        Word u = {0, 1};
        CHECK_THROWS_AS(h_set(sys, u, -1, 0, 2), BadIndices);
        CHECK_THROWS_AS(h_set(sys, u, 3, 0, 2), BadIndices);
        CHECK_THROWS_AS(h_set(sys, u, 0, -1, 2), BadIndices);
        CHECK_THROWS_AS(h_set(sys, u, 0, 0, 0), BadIndices);
    }
}

TEST_CASE("boundary alternation certificates") {
    ValidatedSystem sys = load("carpet");
    LevelGraph g1 = level1_graph(sys);
    const int sw = sys.cell_index("sw"), s = sys.cell_index("s"), se = sys.cell_index("se");
    const int e = sys.cell_index("e"), ne = sys.cell_index("ne"), n = sys.cell_index("n");
    const int w = sys.cell_index("w");

    SUBCASE("a set alternates with itself through any shared boundary point") {
        auto A = words_of(sys, 1, {sw});
        CHECK(alternated(sys, A, A) == Alternation::Yes);
    }
    SUBCASE("touching neighbors share a certified corner") {
        CHECK(alternated(sys, words_of(sys, 1, {sw}), words_of(sys, 1, {s})) ==
              Alternation::Yes);
    }
    SUBCASE("opposite mid-edge pairs interleave without touching") {
        CHECK(alternated(sys, words_of(sys, 1, {w, e}), words_of(sys, 1, {s, n})) ==
              Alternation::Yes);
    }
    SUBCASE("disjoint non-interleaved supports certify false") {
        CHECK(alternated(sys, words_of(sys, 1, {s}), words_of(sys, 1, {n})) ==
              Alternation::No);
        CHECK(alternated(sys, words_of(sys, 1, {sw}), words_of(sys, 1, {ne})) ==
              Alternation::No);
    }
    SUBCASE("empty sets never alternate") {
        CHECK(alternated(sys, {}, words_of(sys, 1, {s})) == Alternation::No);
    }
    SUBCASE("level mismatch is rejected") {
        CHECK_THROWS_AS(alternated(sys, words_of(sys, 1, {sw}), {Word{0, 0}}), BadLevel);
    }
    SUBCASE("certified alternation of connected sets yields a connected union") {
        struct Pair {
            std::vector<NodeId> a, b;
        };
        const Pair pairs[] = {{{sw, s, se}, {se, e, ne}}, {{sw}, {s}}, {{w, sw, s}, {s, se, e}}};
        for (const Pair& p : pairs) {
            auto A = words_of(sys, 1, {});
            auto B = words_of(sys, 1, {});
            for (NodeId v : p.a) A.push_back(decode_word(v, 8, 1));
            for (NodeId v : p.b) B.push_back(decode_word(v, 8, 1));
            REQUIRE(star_connected(g1, p.a));
            REQUIRE(star_connected(g1, p.b));
            REQUIRE(alternated(sys, A, B) == Alternation::Yes);
            std::vector<NodeId> both = p.a;
            both.insert(both.end(), p.b.begin(), p.b.end());
            CHECK(star_connected(g1, both));
        }
    }
}

TEST_CASE("corridor sampling is deterministic and definitionally sound") {
    ValidatedSystem sys = load("carpet");
    GraphCache cache(sys);
    const Word w = {sys.cell_index("sw")};

    SUBCASE("star corridors") {
        auto paths = sample_corridor_paths(cache, w, 2, 2, 30, 7);
        REQUIRE(paths.size() == 30);
        for (const PathSeq& p : paths) {
            CHECK(p.level == 3);
            CHECK(is_path(cache.at(3), p));
            CHECK(corridor_contains(cache, w, 2, 2, p));
        }
        auto again = sample_corridor_paths(cache, w, 2, 2, 30, 7);
        REQUIRE(again.size() == paths.size());
        for (std::size_t i = 0; i < paths.size(); ++i) CHECK(again[i].nodes == paths[i].nodes);
        auto other = sample_corridor_paths(cache, w, 2, 2, 30, 8);
        bool all_equal = other.size() == paths.size();
        if (all_equal)
            for (std::size_t i = 0; i < paths.size(); ++i)
                all_equal = all_equal && other[i].nodes == paths[i].nodes;
        CHECK_FALSE(all_equal);
    }
    SUBCASE("full-edge corridors") {
        auto paths = sample_corridor_paths(cache, w, 2, 2, 20, 11, EdgeKind::Ell);
        REQUIRE(paths.size() == 20);
        for (const PathSeq& p : paths) {
            CHECK(p.kind == EdgeKind::Ell);
            CHECK(is_path(cache.at(3), p));
            CHECK(corridor_contains(cache, w, 2, 2, p));
        }
    }
    SUBCASE("a ball swallowing the whole level leaves no corridor") {
        CHECK_THROWS_AS(sample_corridor_paths(cache, w, 4, 1, 1, 1), NoneFound);
    }
    SUBCASE("another system") {
        ValidatedSystem hexa = load("hexa-d3");
        GraphCache hcache(hexa);
        Word hw = {0};
        auto paths = sample_corridor_paths(hcache, hw, 1, 1, 10, 3);
        REQUIRE(paths.size() == 10);
        for (const PathSeq& p : paths) CHECK(corridor_contains(hcache, hw, 1, 1, p));
    }
}

TEST_CASE("folded corridor walks reach three essential edges or an opposite pair") {
    ValidatedSystem sys = load("carpet");
    GraphCache cache(sys);
    const int N = sys.cell_count();
    const int sw = sys.cell_index("sw"), ne = sys.cell_index("ne");
    const Word w = {sw};
    const int m = 2, M = 2;  // M is the path-length threshold for J = 4
    LevelGraph g1 = level1_graph(sys);

    // The punctured ball complement is exactly {ne}, which lies outside the
    // ball of w: the far-endpoint hypothesis holds for every extended sample.
    auto ball = gamma_ball(g1, w, M, EdgeKind::Star);
    CHECK(ball.size() == 7);
    CHECK(std::find(ball.begin(), ball.end(), Word{ne}) == ball.end());

    const LevelGraph& g3 = cache.at(3);
    auto prefix_of = [&](NodeId id) { return static_cast<int>(id / (N * N)); };
    auto find_ell_neighbor_with_prefix = [&](NodeId v, int want) {
        for (NodeId u : g3.ell_adj[static_cast<std::size_t>(v)])
            if (prefix_of(u) == want) return u;
        return NodeId{-1};
    };

    auto samples = sample_corridor_paths(cache, w, M, m, 50, 123, EdgeKind::Ell);
    REQUIRE(samples.size() == 50);
    for (const PathSeq& sample : samples) {
        // Extend into the refinement of w at the front and of the ball
        // complement at the back; both neighbors exist by construction.
        NodeId head = find_ell_neighbor_with_prefix(sample.nodes.front(), sw);
        NodeId tail = find_ell_neighbor_with_prefix(sample.nodes.back(), ne);
        REQUIRE(head >= 0);
        REQUIRE(tail >= 0);
        PathSeq extended = make_path(3, {head}, EdgeKind::Ell);
        extended.nodes.insert(extended.nodes.end(), sample.nodes.begin(), sample.nodes.end());
        extended.nodes.push_back(tail);
        REQUIRE(is_path(g3, extended));

        // Interior of the run decomposition: drop the first and last run.
        PathBlocks split = decompose(extended, 1, N);
        REQUIRE(split.blocks.size() >= 3);
        PathBlocks interior;
        interior.projection.level = 1;
        for (std::size_t r = 1; r + 1 < split.blocks.size(); ++r) {
            interior.projection.nodes.push_back(split.projection.nodes[r]);
            interior.blocks.push_back(split.blocks[r]);
            interior.breakpoints.push_back(split.breakpoints[r] - split.breakpoints[0]);
        }
        PathSeq inner = reassemble(interior, N);
        inner.kind = EdgeKind::Ell;
        CHECK(inner.nodes == sample.nodes);

        PathSeq folded = fold(cache, inner, 1);
        CHECK(folded.level == 2);
        CHECK(is_path(cache.at(2), folded));
        SubsetZJ touched = path_boundary(sys, folded, /*essential_only=*/true);
        std::vector<int> idx = subset_elements(touched, sys.J);
        bool opposite_pair = idx.size() == 2 && idx[1] == idx[0] + sys.J / 2;
        CHECK((idx.size() >= 3 || opposite_pair));
    }
}
