#include "polyfract/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace polyfract {

SubsetZJ full_subset(int J) { return (SubsetZJ{1} << J) - 1; }

SubsetZJ subset_complement(SubsetZJ X, int J) { return full_subset(J) & ~X; }

bool subset_contains(SubsetZJ X, int i) { return (X >> i) & 1u; }

std::vector<int> subset_elements(SubsetZJ X, int J) {
    std::vector<int> out;
    for (int i = 0; i < J; ++i) {
        if (subset_contains(X, i)) out.push_back(i);
    }
    return out;
}

std::string subset_to_string(SubsetZJ X, int J) {
    std::ostringstream os;
    os << '{';
    bool first = true;
    for (int i : subset_elements(X, J)) {
        if (!first) os << ',';
        os << i;
        first = false;
    }
    os << '}';
    return os.str();
}

SubsetZJ group_closure(const ValidatedSystem& sys, SubsetZJ X) {
    SubsetZJ out = X;
    for (const auto& [g, perm] : sys.index_action) {
        for (int i = 0; i < sys.J; ++i) {
            if (subset_contains(X, i)) out |= SubsetZJ{1} << perm[i];
        }
    }
    return out;
}

bool is_invariant(const ValidatedSystem& sys, SubsetZJ X) {
    return group_closure(sys, X) == X;
}

bool is_transitive(const ValidatedSystem& sys, SubsetZJ X) {
    if (X == 0) return false;
    int i = subset_elements(X, sys.J).front();
    return group_closure(sys, SubsetZJ{1} << i) == X;
}

SubsetZJ essential_boundary(const ValidatedSystem& sys) {
    if (sys.ell_edges.empty()) {
        throw InternalInconsistency("a validated system has full-edge contacts");
    }
    SubsetZJ X = 0;
    for (const EllEdge1& e : sys.ell_edges) {
        X |= SubsetZJ{1} << e.i;
        X |= SubsetZJ{1} << e.j;
    }
    for (;;) {
        SubsetZJ grown = group_closure(sys, X);
        for (int s = 0; s < sys.cell_count(); ++s) {
            for (int k = 0; k < sys.J; ++k) {
                int outer = sys.edge_on_boundary[s][k];
                if (outer >= 0 && subset_contains(grown, outer)) {
                    grown |= SubsetZJ{1} << k;
                }
            }
        }
        if (grown == X) return X;
        X = grown;
    }
}

std::vector<LevelGraph::EllEdge> restricted_edges(const LevelGraph& graph, SubsetZJ Y) {
    std::vector<LevelGraph::EllEdge> out;
    for (const auto& e : graph.ell_edges) {
        if (subset_contains(Y, e.i) && subset_contains(Y, e.j)) out.push_back(e);
    }
    return out;
}

namespace {

/// Outer boundary edge containing b_{inner}(w), or -1; folds the letter
/// table from the innermost letter outward.
int outer_edge_of(const ValidatedSystem& sys, const Word& w, int inner) {
    int j = inner;
    for (auto it = w.rbegin(); it != w.rend() && j >= 0; ++it) {
        j = sys.edge_on_boundary[*it][j];
    }
    return j;
}

/// Outer boundary edges containing the point f_w(p_k), as a bitmask; folds
/// corner/edge incidence tables from the innermost letter outward.
SubsetZJ outer_edges_of_vertex(const ValidatedSystem& sys, const Word& w, int k) {
    int corner = k;
    SubsetZJ mask = 0;
    bool at_corner = true;
    for (auto it = w.rbegin(); it != w.rend(); ++it) {
        int s = *it;
        if (at_corner) {
            int next = sys.vertex_at_corner[s][corner];
            if (next >= 0) {
                corner = next;
                continue;
            }
            at_corner = false;
            mask = sys.vertex_on_edges[s][corner];
        } else {
            SubsetZJ next_mask = 0;
            for (int m = 0; m < sys.J; ++m) {
                if (!subset_contains(mask, m)) continue;
                int outer = sys.edge_on_boundary[s][m];
                if (outer >= 0) next_mask |= SubsetZJ{1} << outer;
            }
            mask = next_mask;
        }
        if (!at_corner && mask == 0) return 0;
    }
    if (at_corner) {
        // p_c is the shared endpoint of b_c and b_{c+1}.
        return (SubsetZJ{1} << corner) | (SubsetZJ{1} << ((corner + 1) % sys.J));
    }
    return mask;
}

}  // namespace

SubsetZJ boundary_trace(const ValidatedSystem& sys, const std::vector<Word>& A, SubsetZJ Y) {
    SubsetZJ out = 0;
    for (const Word& w : A) {
        for (int inner = 0; inner < sys.J; ++inner) {
            if (!subset_contains(Y, inner)) continue;
            int outer = outer_edge_of(sys, w, inner);
            if (outer >= 0) out |= SubsetZJ{1} << outer;
        }
    }
    return out;
}

SubsetZJ boundary_touch(const ValidatedSystem& sys, const std::vector<Word>& A) {
    SubsetZJ out = boundary_trace(sys, A, full_subset(sys.J));
    VertexMembership vm = vertex_in_K(sys);
    for (const Word& w : A) {
        for (int k = 0; k < sys.J; ++k) {
            if (!vm.contains(k)) continue;
            out |= outer_edges_of_vertex(sys, w, k);
        }
    }
    return out;
}

ComponentDecomposition components(const ValidatedSystem& sys, const LevelGraph& graph,
                                  SubsetZJ X) {
    const SubsetZJ keep = subset_complement(X, sys.J);
    std::vector<NodeId> parent(graph.node_count);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<NodeId(NodeId)> find = [&](NodeId a) {
        while (parent[a] != a) {
            parent[a] = parent[parent[a]];
            a = parent[a];
        }
        return a;
    };
    for (const auto& e : restricted_edges(graph, keep)) {
        parent[find(e.w)] = find(e.v);
    }
    std::map<NodeId, std::vector<NodeId>> groups;
    for (NodeId a = 0; a < graph.node_count; ++a) groups[find(a)].push_back(a);

    ComponentDecomposition out;
    out.level = graph.level;
    out.cut = X;
    for (auto& [root, members] : groups) {
        (void)root;
        std::vector<Word> words;
        words.reserve(members.size());
        for (NodeId a : members) words.push_back(decode_word(a, graph.alphabet, graph.level));
        ComponentDecomposition::Component c;
        c.members = std::move(members);
        c.trace = boundary_trace(sys, words, keep);
        out.components.push_back(std::move(c));
    }
    return out;
}

std::vector<SubsetZJ> f_partial(const ValidatedSystem& sys, const LevelGraph& graph,
                                SubsetZJ X) {
    std::vector<SubsetZJ> out;
    for (const auto& c : components(sys, graph, X).components) {
        out.push_back(subset_complement(c.trace, sys.J));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<SubsetZJ> f_partial_level(const ValidatedSystem& sys, int n, SubsetZJ X) {
    return f_partial(sys, build_level(sys, n), X);
}

std::vector<SubsetZJ> b_high(int J) {
    std::vector<SubsetZJ> out;
    for (SubsetZJ X = 1; X < (SubsetZJ{1} << J); ++X) {
        int size = __builtin_popcount(X);
        if (size >= 1 && size <= J - 3) out.push_back(X);
    }
    if (J % 2 == 0) {
        for (int s = 0; s < J / 2; ++s) {
            SubsetZJ pair = (SubsetZJ{1} << s) | (SubsetZJ{1} << (s + J / 2));
            out.push_back(subset_complement(pair, J));
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool in_b_low(SubsetZJ X, int J) {
    int size = __builtin_popcount(X);
    if (size >= J - 1) return true;
    if (size != J - 2) return false;
    // Size J-2 sets belong to the low family unless the two missing indices
    // are opposite.
    SubsetZJ missing = subset_complement(X, J);
    if (J % 2 != 0) return true;
    std::vector<int> m = subset_elements(missing, J);
    return (m[1] - m[0]) != J / 2;
}

std::vector<FPartialOrbit> f_partial_iterate(const ValidatedSystem& sys,
                                             const std::vector<SubsetZJ>& seeds, int max_n) {
    if (!sys.group.is_trivial()) {
        throw NotTrivialGroup(
            "iterating the level-1 set-family map requires the trivial symmetry group");
    }
    const LevelGraph level1 = level1_graph(sys);
    std::map<SubsetZJ, std::vector<SubsetZJ>> step_cache;
    auto step_one = [&](SubsetZJ X) -> const std::vector<SubsetZJ>& {
        auto it = step_cache.find(X);
        if (it != step_cache.end()) return it->second;
        return step_cache.emplace(X, f_partial(sys, level1, X)).first->second;
    };

    std::vector<FPartialOrbit> out;
    for (SubsetZJ seed : seeds) {
        FPartialOrbit orbit;
        orbit.seed = seed;
        std::set<std::vector<SubsetZJ>> seen;
        std::vector<SubsetZJ> family = {seed};
        for (int n = 1; n <= max_n; ++n) {
            std::vector<SubsetZJ> next;
            for (SubsetZJ X : family) {
                const auto& img = step_one(X);
                next.insert(next.end(), img.begin(), img.end());
            }
            std::sort(next.begin(), next.end());
            next.erase(std::unique(next.begin(), next.end()), next.end());

            if (std::count(next.begin(), next.end(), SubsetZJ{0}) > 0) orbit.reached_empty = true;
            if (std::count(next.begin(), next.end(), seed) > 0) orbit.seed_recurs = true;
            bool low = true;
            for (SubsetZJ Y : next) low = low && (Y == 0 || in_b_low(Y, sys.J));
            if (low) orbit.entered_low = true;

            orbit.families.push_back(next);
            if (!seen.insert(next).second) {
                orbit.cycled = true;
                break;
            }
            family = std::move(next);
        }
        out.push_back(std::move(orbit));
    }
    return out;
}

namespace {

std::vector<Contraction> level_maps(const ValidatedSystem& sys, int m) {
    std::vector<Contraction> maps(sys.cells.begin(), sys.cells.end());
    for (int level = 1; level < m; ++level) {
        std::vector<Contraction> next;
        next.reserve(maps.size() * sys.cells.size());
        for (const Contraction& f : maps) {
            for (const Contraction& cell : sys.cells) next.push_back(f.compose(cell));
        }
        maps = std::move(next);
    }
    return maps;
}

/// Cells of the level with x in their fractal part. Sets `unknown` when a
/// membership search gives up.
std::vector<NodeId> k_star(const ValidatedSystem& sys, const std::vector<Contraction>& maps,
                           const CycloNumber& x, bool& unknown) {
    std::complex<double> xc = x.to_complex();
    double ratio = std::abs(sys.ratio.to_complex());
    double circum = std::abs(sys.polygon.vertices[0].to_complex());
    int m = 1;
    for (std::size_t n = sys.cells.size(); n < maps.size(); n *= sys.cells.size()) ++m;
    double reach = circum * std::pow(ratio, m) * (1.0 + 1e-9) + 1e-12;

    std::vector<NodeId> out;
    for (NodeId a = 0; a < static_cast<NodeId>(maps.size()); ++a) {
        if (std::abs(maps[a].center.to_complex() - xc) > reach) continue;
        CycloNumber pre = maps[a].apply_inverse(x);
        if (!point_in_gon(sys.polygon, pre)) continue;
        Membership mem = point_in_K(sys, pre, 512);
        if (mem == Membership::Unknown) unknown = true;
        if (mem == Membership::In) out.push_back(a);
    }
    return out;
}

bool connected_in_ell(const LevelGraph& graph, const std::vector<NodeId>& nodes) {
    if (nodes.size() <= 1) return true;
    std::set<NodeId> pool(nodes.begin(), nodes.end());
    std::vector<NodeId> stack = {nodes.front()};
    std::set<NodeId> seen = {nodes.front()};
    while (!stack.empty()) {
        NodeId a = stack.back();
        stack.pop_back();
        for (NodeId b : graph.ell_adj[a]) {
            if (pool.count(b) && seen.insert(b).second) stack.push_back(b);
        }
    }
    return seen.size() == pool.size();
}

}  // namespace

ContactPointReport isolated_contact_report(const ValidatedSystem& sys, int oracle_depth) {
    ContactPointReport report;
    report.oracle_depth = oracle_depth;
    const int J = sys.J;
    VertexMembership vm = vertex_in_K(sys);
    bool unknown = false;

    // First criterion: punctured stars of in-K single-point contacts at
    // level 1 are connected.
    report.nic1 = true;
    {
        LevelGraph level1 = level1_graph(sys);
        std::set<std::vector<Rational>> seen;
        for (const VertexContact1& c : sys.vertex_contacts) {
            CycloNumber x = sys.cells[c.s].apply(sys.polygon.vertices[c.i]);
            if (!seen.insert(x.coeffs()).second) continue;
            std::vector<Contraction> maps(sys.cells.begin(), sys.cells.end());
            bool u = false;
            std::vector<NodeId> star = k_star(sys, maps, x, u);
            unknown = unknown || u;
            bool conn = connected_in_ell(level1, star);
            std::ostringstream os;
            os << sys.cell_ids[c.s] << " vertex " << c.i << ": " << star.size()
               << " cells, " << (conn ? "connected" : "disconnected");
            report.nic1_points.push_back(os.str());
            if (!conn && !star.empty()) report.nic1 = false;
        }
    }

    // Second criterion: a cell whose fractal part meets an essential outer
    // edge must have a full sub-edge on it.
    report.nic2 = true;
    {
        SubsetZJ essential = essential_boundary(sys);
        for (int s = 0; s < sys.cell_count(); ++s) {
            for (int i = 0; i < J; ++i) {
                if (!subset_contains(essential, i)) continue;
                bool has_sub_edge = false;
                for (int k = 0; k < J; ++k) {
                    has_sub_edge = has_sub_edge || sys.edge_on_boundary[s][k] == i;
                }
                if (has_sub_edge) continue;
                for (int k = 0; k < J; ++k) {
                    if ((sys.vertex_on_edges[s][k] >> i & 1u) && vm.contains(k)) {
                        report.nic2 = false;
                        std::ostringstream os;
                        os << "cell " << sys.cell_ids[s] << " touches outer edge " << i
                           << " only at vertex " << k;
                        report.nic2_witnesses.push_back(os.str());
                    }
                }
            }
        }
    }

    // Direct search over computed levels.
    for (int n = 1; n <= oracle_depth && !report.oracle_found; ++n) {
        LevelGraph g = build_level(sys, n);
        std::vector<Contraction> maps = level_maps(sys, n);
        std::set<std::vector<Rational>> seen;
        for (const auto& e : g.point_edges) {
            if (!e.in_k) continue;
            CycloNumber x = maps[e.w].apply(sys.polygon.vertices[e.i]);
            if (!seen.insert(x.coeffs()).second) continue;
            bool u = false;
            std::vector<NodeId> star = k_star(sys, maps, x, u);
            unknown = unknown || u;
            if (!star.empty() && !connected_in_ell(g, star)) {
                report.oracle_found = true;
                std::ostringstream os;
                os << "level " << n << ": disconnected punctured star of " << star.size()
                   << " cells at a vertex of node " << e.w;
                report.oracle_witness = os.str();
                break;
            }
        }
    }

    report.criterion_available = J >= 4;
    if (J == 6) {
        report.verdict = ContactPointReport::Verdict::NoneExist;
        report.detail = "hexagonal systems admit no isolated contact points";
    } else if (J >= 4) {
        if (unknown) {
            report.verdict = ContactPointReport::Verdict::Unknown;
            report.detail = "a fractal-membership search exhausted its budget";
        } else if (report.nic1 && report.nic2) {
            report.verdict = ContactPointReport::Verdict::NoneExist;
            report.detail = "both nonexistence criteria hold";
        } else {
            report.verdict = ContactPointReport::Verdict::Exists;
            report.detail = report.nic1 ? "a cell meets an essential edge without a sub-edge"
                                        : "a punctured level-1 star is disconnected";
        }
    } else {
        if (report.oracle_found) {
            report.verdict = ContactPointReport::Verdict::Exists;
            report.detail = report.oracle_witness;
        } else {
            report.verdict = ContactPointReport::Verdict::Unknown;
            report.detail = "triangular systems have no criterion; no witness up to depth " +
                            std::to_string(oracle_depth);
        }
    }

    if (report.verdict == ContactPointReport::Verdict::NoneExist && report.oracle_found) {
        throw InternalInconsistency("direct search found an isolated contact point although "
                                    "the criteria certify nonexistence: " +
                                    report.oracle_witness);
    }
    return report;
}

}  // namespace polyfract
