#include "polyfract/wordtree.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <map>
#include <set>

namespace polyfract {

NodeId encode_word(const Word& w, int alphabet) {
    NodeId id = 0;
    for (int letter : w) {
        if (letter < 0 || letter >= alphabet) {
            throw UnknownWord("letter " + std::to_string(letter) + " outside the alphabet");
        }
        id = id * alphabet + letter;
    }
    return id;
}

Word decode_word(NodeId id, int alphabet, int level) {
    Word w(level);
    for (int k = level - 1; k >= 0; --k) {
        w[k] = static_cast<int>(id % alphabet);
        id /= alphabet;
    }
    return w;
}

Word word_prefix(const Word& w, int n) {
    if (n < 0 || n > static_cast<int>(w.size())) throw OutOfRange("prefix length out of range");
    return Word(w.begin(), w.begin() + n);
}

Word word_shift(const Word& w, int n) {
    if (n < 0 || n > static_cast<int>(w.size())) throw OutOfRange("shift length out of range");
    return Word(w.begin() + n, w.end());
}

VertexMembership vertex_in_K(const ValidatedSystem& sys) {
    const int J = sys.J;
    VertexMembership vm;
    vm.successors.assign(J, {});
    for (int i = 0; i < J; ++i) {
        for (int s = 0; s < sys.cell_count(); ++s) {
            for (int k = 0; k < J; ++k) {
                if (sys.vertex_at_corner[s][k] == i) {
                    vm.successors[i].push_back(k);
                }
            }
        }
        std::sort(vm.successors[i].begin(), vm.successors[i].end());
        vm.successors[i].erase(std::unique(vm.successors[i].begin(), vm.successors[i].end()),
                               vm.successors[i].end());
    }
    // Greatest fixed point: keep i while some successor is kept.
    std::vector<bool> alive(J, true);
    bool changed = true;
    while (changed) {
        changed = false;
        for (int i = 0; i < J; ++i) {
            if (!alive[i]) continue;
            bool has_live_successor = false;
            for (int j : vm.successors[i]) {
                if (alive[j]) {
                    has_live_successor = true;
                    break;
                }
            }
            if (!has_live_successor) {
                alive[i] = false;
                changed = true;
            }
        }
    }
    vm.in_k = std::move(alive);
    return vm;
}

namespace {

using CoeffKey = std::vector<Rational>;

bool point_in_cell(const ValidatedSystem& sys, const Contraction& f, const CycloNumber& x) {
    return point_in_gon(sys.polygon, f.apply_inverse(x));
}

Membership point_in_K_rec(const ValidatedSystem& sys, const CycloNumber& x,
                          std::map<CoeffKey, Membership>& memo, std::set<CoeffKey>& stack,
                          int& budget) {
    const CoeffKey key = x.coeffs();
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    if (stack.count(key)) return Membership::In;  // reachable cycle
    if (budget-- <= 0) return Membership::Unknown;

    stack.insert(key);
    bool unknown = false;
    bool in = false;
    for (int s = 0; s < sys.cell_count() && !in; ++s) {
        if (!point_in_cell(sys, sys.cells[s], x)) continue;
        Membership m = point_in_K_rec(sys, sys.cells[s].apply_inverse(x), memo, stack, budget);
        if (m == Membership::In) in = true;
        if (m == Membership::Unknown) unknown = true;
    }
    stack.erase(key);

    Membership result = in ? Membership::In : (unknown ? Membership::Unknown : Membership::Out);
    // A result leaning on an unfinished cycle back-edge is only valid within
    // this exploration; In via cycle is sound to cache, die-out too.
    if (result != Membership::Unknown) memo.emplace(key, result);
    return result;
}

}  // namespace

Membership point_in_K(const ValidatedSystem& sys, const CycloNumber& x, int budget) {
    if (!point_in_gon(sys.polygon, x)) return Membership::Out;
    std::map<CoeffKey, Membership> memo;
    std::set<CoeffKey> stack;
    return point_in_K_rec(sys, x, memo, stack, budget);
}

namespace {

void canonicalize(LevelGraph& g) {
    for (auto& e : g.ell_edges) {
        if (e.w > e.v) {
            std::swap(e.w, e.v);
            std::swap(e.i, e.j);
            e.g = e.g.inverse().normalized();
        }
    }
    for (auto& e : g.point_edges) {
        if (e.w > e.v) {
            std::swap(e.w, e.v);
            std::swap(e.i, e.j);
        }
    }
    auto ell_less = [](const LevelGraph::EllEdge& a, const LevelGraph::EllEdge& b) {
        return std::tie(a.w, a.v, a.i, a.j) < std::tie(b.w, b.v, b.i, b.j);
    };
    auto point_less = [](const LevelGraph::PointEdge& a, const LevelGraph::PointEdge& b) {
        return std::tie(a.w, a.v, a.i, a.j) < std::tie(b.w, b.v, b.i, b.j);
    };
    std::sort(g.ell_edges.begin(), g.ell_edges.end(), ell_less);
    g.ell_edges.erase(std::unique(g.ell_edges.begin(), g.ell_edges.end()), g.ell_edges.end());
    std::sort(g.point_edges.begin(), g.point_edges.end(), point_less);
    g.point_edges.erase(std::unique(g.point_edges.begin(), g.point_edges.end()),
                        g.point_edges.end());

    g.ell_adj.assign(g.node_count, {});
    g.star_adj.assign(g.node_count, {});
    for (const auto& e : g.ell_edges) {
        g.ell_adj[e.w].push_back(e.v);
        g.ell_adj[e.v].push_back(e.w);
        g.star_adj[e.w].push_back(e.v);
        g.star_adj[e.v].push_back(e.w);
    }
    for (const auto& e : g.point_edges) {
        if (!e.in_k) continue;
        g.star_adj[e.w].push_back(e.v);
        g.star_adj[e.v].push_back(e.w);
    }
    for (auto* adj : {&g.ell_adj, &g.star_adj}) {
        for (auto& list : *adj) {
            std::sort(list.begin(), list.end());
            list.erase(std::unique(list.begin(), list.end()), list.end());
        }
    }
}

NodeId power(NodeId base, int exp) {
    NodeId out = 1;
    for (int k = 0; k < exp; ++k) out *= base;
    return out;
}

/// Permutation of vertex indices under g: g(p_k) = p_{perm[k]}.
std::vector<int> vertex_index_action(const DihedralElement& g, const Polygon& P) {
    std::vector<int> perm(P.J, -1);
    for (int k = 0; k < P.J; ++k) {
        CycloNumber image = g.apply(P.vertices[k]);
        for (int i = 0; i < P.J; ++i) {
            if (image == P.vertices[i]) {
                perm[k] = i;
                break;
            }
        }
        if (perm[k] < 0) throw NotInDJ("element does not permute the polygon vertices");
    }
    return perm;
}

}  // namespace

LevelGraph level1_graph(const ValidatedSystem& sys) {
    LevelGraph g;
    g.level = 1;
    g.alphabet = sys.cell_count();
    g.node_count = sys.cell_count();
    VertexMembership vk = vertex_in_K(sys);
    for (const EllEdge1& e : sys.ell_edges) {
        g.ell_edges.push_back({e.s, e.t, e.i, e.j, e.g});
    }
    for (const VertexContact1& c : sys.vertex_contacts) {
        g.point_edges.push_back({c.s, c.t, c.i, c.j, vk.contains(c.i) && vk.contains(c.j)});
    }
    canonicalize(g);
    return g;
}

LevelGraph extend_level(const ValidatedSystem& sys, const LevelGraph& graph) {
    const int N = sys.cell_count();
    const int J = sys.J;
    const Polygon& P = sys.polygon;
    VertexMembership vk = vertex_in_K(sys);
    const LevelGraph level1 = level1_graph(sys);

    LevelGraph out;
    out.level = graph.level + 1;
    out.alphabet = N;
    out.node_count = graph.node_count * N;

    // (i) Within a parent: children inherit the level-1 contact structure.
    for (NodeId parent = 0; parent < graph.node_count; ++parent) {
        for (const auto& e : level1.ell_edges) {
            out.ell_edges.push_back({parent * N + e.w, parent * N + e.v, e.i, e.j, e.g});
        }
        for (const auto& e : level1.point_edges) {
            out.point_edges.push_back({parent * N + e.w, parent * N + e.v, e.i, e.j, e.in_k});
        }
    }

    // Per-boundary-index traces, shared by every parent edge with the same
    // index i: cells with a full sub-edge on b_i, and the exact point pairs
    // where two cell traces meet.
    struct Trace {
        std::vector<std::pair<int, int>> edges;  // (cell u, edge index k)
        // (u, vertex k, u0, vertex k0): f_u(p_k) = f_{u0}(p_{k0}) on b_i, a
        // candidate single-point child contact across the parent wall.
        std::vector<std::array<int, 4>> point_pairs;
    };
    std::map<int, Trace> traces;
    auto trace_for = [&](int i) -> const Trace& {
        auto it = traces.find(i);
        if (it != traces.end()) return it->second;
        Trace t;
        std::vector<std::tuple<int, int, CycloNumber>> verts;
        for (int u = 0; u < N; ++u) {
            for (int k = 0; k < J; ++k) {
                if (sys.edge_on_boundary[u][k] == i) t.edges.emplace_back(u, k);
                if (sys.vertex_on_edges[u][k] & (1u << i)) {
                    verts.emplace_back(u, k, sys.cells[u].apply(P.vertices[k]));
                }
            }
        }
        for (const auto& [u, k, y] : verts) {
            // Guard: a vertex inside another cell's sub-edge interior would be
            // a point contact that is not a vertex of both copies.
            for (auto [u2, k2] : t.edges) {
                if (u2 == u) continue;
                const CycloNumber e1 = sys.cells[u2].apply(P.vertices[(k2 + J - 1) % J]);
                const CycloNumber e2 = sys.cells[u2].apply(P.vertices[k2]);
                CycloNumber d = e2 - e1;
                if (dot(y - e1, d).real_sign() > 0 && dot(e2 - y, d).real_sign() > 0) {
                    throw InternalInconsistency(
                        "point contact inside a sub-edge interior is not representable");
                }
            }
            for (const auto& [u0, k0, y0] : verts) {
                if (!(y == y0)) continue;
                if (u0 == u) {
                    // Same wall cell: a point contact only when the cell has
                    // no sub-edge on the wall (else the full edge covers it).
                    bool has_edge = false;
                    for (auto [ue, ke] : t.edges) has_edge = has_edge || ue == u;
                    if (has_edge) continue;
                }
                t.point_pairs.push_back({u, k, u0, k0});
            }
        }
        return traces.emplace(i, std::move(t)).first->second;
    };

    std::map<DihedralElement, std::vector<int>> vertex_actions;
    auto vertex_action = [&](const DihedralElement& g) -> const std::vector<int>& {
        auto it = vertex_actions.find(g);
        if (it != vertex_actions.end()) return it->second;
        return vertex_actions.emplace(g, vertex_index_action(g, P)).first->second;
    };

    // (ii) Across a full-edge parent pair: the parent reflection matches the
    // children touching the shared segment.
    for (const auto& pe : graph.ell_edges) {
        const Trace& tr = trace_for(pe.i);
        const std::vector<int>& act = sys.cell_action.at(pe.g);

        // Residual group element per wall cell u: pe.g o f_u = f_{act[u]} o h.
        auto residual = [&](int u) {
            return (sys.cells[act[u]].phi.inverse() * pe.g * sys.cells[u].phi).normalized();
        };

        for (auto [u, k] : tr.edges) {
            DihedralElement h = residual(u);
            out.ell_edges.push_back({pe.w * N + u, pe.v * N + act[u], k,
                                     sys.index_action.at(h)[k], h});
        }
        // Vertex-level contacts: children of w and mirrored children of v
        // meet wherever their traces share an exact point.
        for (const auto& [u, k, u0, k0] : tr.point_pairs) {
            DihedralElement h0 = residual(u0);
            int kv = vertex_action(h0)[k0];
            out.point_edges.push_back({pe.w * N + u, pe.v * N + act[u0], k, kv,
                                       vk.contains(k) && vk.contains(kv)});
        }
    }

    // (iii) Across a single-point parent pair: children pinned at the corner.
    for (const auto& pp : graph.point_edges) {
        for (int u = 0; u < N; ++u) {
            for (int k = 0; k < J; ++k) {
                if (sys.vertex_at_corner[u][k] != pp.i) continue;
                for (int u2 = 0; u2 < N; ++u2) {
                    for (int k2 = 0; k2 < J; ++k2) {
                        if (sys.vertex_at_corner[u2][k2] != pp.j) continue;
                        out.point_edges.push_back({pp.w * N + u, pp.v * N + u2, k, k2,
                                                   vk.contains(k) && vk.contains(k2)});
                    }
                }
            }
        }
    }

    canonicalize(out);
    return out;
}

LevelGraph build_level(const ValidatedSystem& sys, int m) {
    if (m < 1) throw BadLevel("level must be at least 1");
    LevelGraph g = level1_graph(sys);
    for (int k = 1; k < m; ++k) g = extend_level(sys, g);
    return g;
}

namespace {

/// Exact orientation part of the word map (product of the cell isometries).
DihedralElement word_phi(const ValidatedSystem& sys, const Word& w) {
    DihedralElement phi = DihedralElement::identity(sys.J);
    for (int letter : w) phi = (phi * sys.cells[letter].phi).normalized();
    return phi;
}

std::vector<Contraction> all_word_maps(const ValidatedSystem& sys, int m) {
    if (m < 1) throw BadLevel("level must be at least 1");
    std::vector<Contraction> maps(sys.cells.begin(), sys.cells.end());
    for (int level = 1; level < m; ++level) {
        std::vector<Contraction> next;
        next.reserve(maps.size() * sys.cells.size());
        for (const Contraction& f : maps) {
            for (const Contraction& cell : sys.cells) {
                next.push_back(f.compose(cell));
            }
        }
        maps = std::move(next);
    }
    return maps;
}

}  // namespace

LevelGraph geometric_adjacency_oracle(const ValidatedSystem& sys, int m, bool spatial_filter,
                                      bool force) {
    const int N = sys.cell_count();
    const NodeId count = power(N, m);
    if (count > 10000 && !force) {
        throw TooLarge("oracle guard: " + std::to_string(count) + " nodes exceeds 10^4");
    }

    std::vector<Contraction> maps = all_word_maps(sys, m);
    VertexMembership vk = vertex_in_K(sys);

    LevelGraph g;
    g.level = m;
    g.alphabet = N;
    g.node_count = count;

    // Conservative near-pair filter: centers farther than two circumradii
    // (with generous slack) cannot touch.
    double ratio = std::abs(sys.ratio.to_complex());
    double circum = std::abs(sys.polygon.vertices[0].to_complex());
    double reach = 2.0 * circum * std::pow(ratio, m) * (1.0 + 1e-9) + 1e-12;

    std::vector<std::pair<NodeId, NodeId>> pairs;
    if (spatial_filter) {
        std::map<std::pair<long, long>, std::vector<NodeId>> buckets;
        auto bucket_of = [&](NodeId a) {
            std::complex<double> c = maps[a].center.to_complex();
            return std::make_pair(static_cast<long>(std::floor(c.real() / reach)),
                                  static_cast<long>(std::floor(c.imag() / reach)));
        };
        for (NodeId a = 0; a < count; ++a) buckets[bucket_of(a)].push_back(a);
        for (const auto& [cell, members] : buckets) {
            for (long dx = -1; dx <= 1; ++dx) {
                for (long dy = -1; dy <= 1; ++dy) {
                    auto it = buckets.find({cell.first + dx, cell.second + dy});
                    if (it == buckets.end()) continue;
                    for (NodeId a : members) {
                        for (NodeId b : it->second) {
                            if (a < b) pairs.emplace_back(a, b);
                        }
                    }
                }
            }
        }
    } else {
        for (NodeId a = 0; a < count; ++a) {
            for (NodeId b = a + 1; b < count; ++b) pairs.emplace_back(a, b);
        }
    }

    // Conservative double-precision separating-axis prefilter: touching
    // polygons have gap 0, so a gap above the rounding margin certifies
    // disjointness without an exact test.  Disabled together with the bucket
    // filter so the unfiltered path stays a pure exact computation.
    std::vector<std::vector<std::complex<double>>> approx;
    if (spatial_filter) {
        approx.resize(static_cast<std::size_t>(count));
        for (NodeId a = 0; a < count; ++a) {
            approx[a].reserve(sys.polygon.vertices.size());
            for (const CycloNumber& v : sys.polygon.vertices)
                approx[a].push_back(maps[a].apply(v).to_complex());
        }
    }
    auto separated = [&](NodeId a, NodeId b) {
        constexpr double margin = 1e-9;
        const auto& A = approx[a];
        const auto& B = approx[b];
        auto axis_gap = [&](std::complex<double> n) {
            double a_min = 1e300, a_max = -1e300, b_min = 1e300, b_max = -1e300;
            for (const auto& z : A) {
                double t = z.real() * n.real() + z.imag() * n.imag();
                a_min = std::min(a_min, t);
                a_max = std::max(a_max, t);
            }
            for (const auto& z : B) {
                double t = z.real() * n.real() + z.imag() * n.imag();
                b_min = std::min(b_min, t);
                b_max = std::max(b_max, t);
            }
            return std::max(b_min - a_max, a_min - b_max);
        };
        for (const auto& poly : {A, B}) {
            for (std::size_t k = 0; k < poly.size(); ++k) {
                std::complex<double> e = poly[(k + 1) % poly.size()] - poly[k];
                double len = std::abs(e);
                if (len == 0.0) continue;
                if (axis_gap({-e.imag() / len, e.real() / len}) > margin) return true;
            }
        }
        return false;
    };

    // Contact classification is similarity-invariant, so it only depends on
    // the two orientations and the exact center offset in cell units; near
    // pairs repeat a handful of such poses, which are classified once each.
    std::map<std::string, ContactClass> pose_memo;
    auto classify_pose = [&](NodeId a, NodeId b) {
        const Contraction& fa = maps[a];
        const Contraction& fb = maps[b];
        CycloNumber delta = (fb.center - fa.center) / fa.ratio;
        std::string key = std::to_string(fa.phi.half_turns) + (fa.phi.conj ? "c" : "r") + "|" +
                          std::to_string(fb.phi.half_turns) + (fb.phi.conj ? "c" : "r") + "|";
        for (const Rational& q : delta.coeffs()) {
            key += q.get_str();
            key += ",";
        }
        auto it = pose_memo.find(key);
        if (it != pose_memo.end()) return it->second;
        CycloNumber zero = CycloNumber::zero(delta.field());
        Contraction ga(sys.ratio, fa.phi, zero);
        Contraction gb(sys.ratio, fb.phi, sys.ratio * delta);
        ContactClass c = classify_contact(ga, gb, sys.polygon);
        pose_memo.emplace(std::move(key), c);
        return c;
    };

    for (auto [a, b] : pairs) {
        if (spatial_filter && separated(a, b)) continue;
        ContactClass c = classify_pose(a, b);
        if (c.kind == ContactClass::Kind::Disjoint) continue;
        if (c.kind == ContactClass::Kind::Overlap) {
            throw InternalInconsistency("level-" + std::to_string(m) +
                                        " cells overlap beyond an edge or a point");
        }
        if (c.kind == ContactClass::Kind::Edge) {
            Word wa = decode_word(a, N, m);
            Word wb = decode_word(b, N, m);
            DihedralElement e = (word_phi(sys, wb).inverse() * word_phi(sys, wa) *
                                 DihedralElement::edge_reflection(sys.J, c.i))
                                    .normalized();
            g.ell_edges.push_back({a, b, c.i, c.j, e});
        } else {
            g.point_edges.push_back({a, b, c.i, c.j, vk.contains(c.i) && vk.contains(c.j)});
        }
    }
    canonicalize(g);
    return g;
}

std::vector<Word> gamma_ball(const LevelGraph& graph, const Word& w, int M, EdgeKind kind) {
    if (static_cast<int>(w.size()) != graph.level) {
        throw UnknownWord("word length does not match the graph level");
    }
    NodeId start = encode_word(w, graph.alphabet);
    const auto& adj = (kind == EdgeKind::Ell) ? graph.ell_adj : graph.star_adj;

    std::map<NodeId, int> dist;
    dist[start] = 0;
    std::deque<NodeId> queue = {start};
    while (!queue.empty()) {
        NodeId x = queue.front();
        queue.pop_front();
        if (dist[x] >= M) continue;
        for (NodeId y : adj[x]) {
            if (!dist.count(y)) {
                dist[y] = dist[x] + 1;
                queue.push_back(y);
            }
        }
    }
    std::vector<Word> out;
    out.reserve(dist.size());
    for (const auto& [id, d] : dist) {
        (void)d;
        out.push_back(decode_word(id, graph.alphabet, graph.level));
    }
    return out;
}

LevelStats level_stats(const ValidatedSystem& sys, const LevelGraph& graph) {
    LevelStats stats;
    stats.node_count = graph.node_count;
    stats.ell_count = graph.ell_edges.size();
    stats.star_count = graph.ell_edges.size();
    for (const auto& e : graph.point_edges) {
        if (e.in_k) ++stats.star_count;
    }
    for (const auto& list : graph.star_adj) {
        stats.max_degree = std::max(stats.max_degree, list.size());
    }

    // Contact-point multiplicity: number of level cells containing the point.
    std::vector<Contraction> maps = all_word_maps(sys, graph.level);
    std::set<std::vector<Rational>> seen;
    std::vector<CycloNumber> points;
    for (const auto& e : graph.point_edges) {
        Word w = decode_word(e.w, graph.alphabet, graph.level);
        CycloNumber x = maps[e.w].apply(sys.polygon.vertices[e.i]);
        (void)w;
        if (seen.insert(x.coeffs()).second) points.push_back(x);
    }
    double ratio = std::abs(sys.ratio.to_complex());
    double circum = std::abs(sys.polygon.vertices[0].to_complex());
    double reach = circum * std::pow(ratio, graph.level) * (1.0 + 1e-9) + 1e-12;
    for (const CycloNumber& x : points) {
        std::complex<double> xc = x.to_complex();
        std::size_t multiplicity = 0;
        for (NodeId a = 0; a < graph.node_count; ++a) {
            if (std::abs(maps[a].center.to_complex() - xc) > reach) continue;
            if (point_in_gon(sys.polygon, maps[a].apply_inverse(x))) ++multiplicity;
        }
        stats.max_point_multiplicity = std::max(stats.max_point_multiplicity, multiplicity);
    }
    return stats;
}

}  // namespace polyfract
