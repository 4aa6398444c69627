#include "polyfract/paths.hpp"

#include <algorithm>
#include <random>
#include <cmath>
#include <set>

#include "polyfract/errors.hpp"
#include "polyfract/geometry.hpp"

namespace polyfract {

namespace {

NodeId pow_ll(int base, int exp) {
    NodeId out = 1;
    for (int i = 0; i < exp; ++i) out *= base;
    return out;
}

const std::vector<std::vector<NodeId>>& adjacency(const LevelGraph& graph, EdgeKind kind) {
    return kind == EdgeKind::Ell ? graph.ell_adj : graph.star_adj;
}

bool adjacent(const LevelGraph& graph, EdgeKind kind, NodeId a, NodeId b) {
    const auto& list = adjacency(graph, kind)[static_cast<std::size_t>(a)];
    return std::find(list.begin(), list.end(), b) != list.end();
}

/// Stored-direction group element of a level ell edge: the element whose
/// word action carries a-side suffixes to b-side suffixes under the shared
/// reflection.  Throws ProjectionNotEll when (a, b) is not an ell edge.
DihedralElement transport_element(const LevelGraph& graph, NodeId a, NodeId b) {
    NodeId lo = std::min(a, b), hi = std::max(a, b);
    auto it = std::lower_bound(graph.ell_edges.begin(), graph.ell_edges.end(), std::pair(lo, hi),
                               [](const LevelGraph::EllEdge& e, const std::pair<NodeId, NodeId>& k) {
                                   return std::pair(e.w, e.v) < k;
                               });
    if (it == graph.ell_edges.end() || it->w != lo || it->v != hi) {
        throw ProjectionNotEll("projection step (" + std::to_string(a) + ", " +
                               std::to_string(b) + ") is not a full-edge contact");
    }
    return a == lo ? it->g : it->g.inverse().normalized();
}

}  // namespace

const LevelGraph& GraphCache::at(int level) {
    auto it = cache_.find(level);
    if (it == cache_.end()) {
        it = cache_.emplace(level, build_level(*sys_, level)).first;
    }
    return it->second;
}

bool is_path(const LevelGraph& graph, const PathSeq& path) {
    if (path.level != graph.level || path.nodes.empty()) return false;
    for (NodeId id : path.nodes) {
        if (id < 0 || id >= graph.node_count) return false;
    }
    for (std::size_t i = 0; i + 1 < path.nodes.size(); ++i) {
        if (!adjacent(graph, path.kind, path.nodes[i], path.nodes[i + 1])) return false;
    }
    return true;
}

PathBlocks decompose(const PathSeq& path, int k, int alphabet) {
    if (k < 0 || k > path.level) {
        throw BadLevel("prefix length " + std::to_string(k) + " outside [0, " +
                       std::to_string(path.level) + "]");
    }
    if (path.nodes.empty()) throw BadLevel("empty path");
    NodeId pow = pow_ll(alphabet, path.level - k);

    PathBlocks out;
    out.projection.level = k;
    out.projection.kind = EdgeKind::Star;
    for (std::size_t i = 0; i < path.nodes.size(); ++i) {
        NodeId prefix = path.nodes[i] / pow;
        NodeId suffix = path.nodes[i] % pow;
        if (i == 0 || prefix != out.projection.nodes.back()) {
            out.projection.nodes.push_back(prefix);
            out.blocks.push_back({path.level - k, {}, path.kind});
            if (i > 0) out.breakpoints.push_back(static_cast<int>(i));
        }
        out.blocks.back().nodes.push_back(suffix);
    }
    out.breakpoints.push_back(static_cast<int>(path.nodes.size()));
    return out;
}

PathSeq reassemble(const PathBlocks& blocks, int alphabet) {
    PathSeq out;
    out.kind = blocks.blocks.empty() ? EdgeKind::Star : blocks.blocks.front().kind;
    out.level = blocks.projection.level +
                (blocks.blocks.empty() ? 0 : blocks.blocks.front().level);
    NodeId pow = pow_ll(alphabet, out.level - blocks.projection.level);
    for (std::size_t i = 0; i < blocks.blocks.size(); ++i) {
        for (NodeId suffix : blocks.blocks[i].nodes) {
            out.nodes.push_back(blocks.projection.nodes[i] * pow + suffix);
        }
    }
    return out;
}

PathSeq concat(const LevelGraph& graph, const PathSeq& a, const PathSeq& b) {
    if (a.level != b.level || a.level != graph.level) {
        throw BadLevel("concatenation requires matching levels");
    }
    if (a.nodes.empty() || b.nodes.empty()) throw NotJoinable("empty operand");
    NodeId end = a.nodes.back(), start = b.nodes.front();
    bool same = end == start;
    if (!same && !adjacent(graph, EdgeKind::Star, end, start)) {
        throw NotJoinable("cells " + std::to_string(end) + " and " + std::to_string(start) +
                          " do not meet");
    }
    PathSeq out;
    out.level = a.level;
    bool junction_ell = same || adjacent(graph, EdgeKind::Ell, end, start);
    out.kind = (a.kind == EdgeKind::Ell && b.kind == EdgeKind::Ell && junction_ell)
                   ? EdgeKind::Ell
                   : EdgeKind::Star;
    out.nodes = a.nodes;
    out.nodes.insert(out.nodes.end(), b.nodes.begin() + (same ? 1 : 0), b.nodes.end());
    return out;
}

PathSeq fold(GraphCache& cache, const PathSeq& path, int k) {
    const ValidatedSystem& sys = cache.system();
    int N = sys.cell_count();
    if (k < 0 || k > path.level) {
        throw BadLevel("folding depth " + std::to_string(k) + " outside [0, " +
                       std::to_string(path.level) + "]");
    }
    if (k == 0) return path;
    if (k == path.level) return PathSeq{0, {0}, EdgeKind::Star};

    PathBlocks blocks = decompose(path, k, N);
    const LevelGraph& parents = cache.at(k);
    const LevelGraph& target = cache.at(path.level - k);

    PathSeq result = blocks.blocks[0];
    result.kind = EdgeKind::Star;
    DihedralElement h = DihedralElement::identity(sys.J);
    for (std::size_t j = 1; j < blocks.blocks.size(); ++j) {
        // Transport block j into the frame of the first parent: one step of
        // the shared-edge reflection per projection edge, innermost first.
        h = (h * transport_element(parents, blocks.projection.nodes[j],
                                   blocks.projection.nodes[j - 1]))
                .normalized();
        PathSeq moved{path.level - k, {}, EdgeKind::Star};
        for (NodeId id : blocks.blocks[j].nodes) {
            Word u = decode_word(id, N, path.level - k);
            moved.nodes.push_back(encode_word(group_action_on_words(sys, h, u), N));
        }
        result = concat(target, result, moved);
    }
    if (!is_path(target, result)) {
        throw InternalInconsistency("folded sequence is not a star path");
    }
    return result;
}

std::vector<Word> h_set(const ValidatedSystem& sys, const Word& u, int n1, int n2, int m) {
    int N = sys.cell_count();
    if (n1 < 0 || n1 > static_cast<int>(u.size()) || n2 < 0 || m < 1) {
        throw BadIndices("shift/prefix/target levels out of range");
    }
    int shifted_len = static_cast<int>(u.size()) - n1;
    int l = m - n2 - shifted_len;
    if (l >= 0 &&
        static_cast<double>(sys.group.size()) * std::pow(static_cast<double>(N), n2 + l) > 1e6) {
        throw TooLarge("symmetrized word set would exceed 10^6 members");
    }
    Word shifted(u.begin() + n1, u.end());

    std::vector<Word> out;
    for (const DihedralElement& g : sys.group.elements) {
        Word gu = group_action_on_words(sys, g, shifted);
        for (NodeId vid = 0; vid < pow_ll(N, n2); ++vid) {
            Word base = decode_word(vid, N, n2);
            base.insert(base.end(), gu.begin(), gu.end());
            if (l >= 0) {
                for (NodeId sid = 0; sid < pow_ll(N, l); ++sid) {
                    Word full = base;
                    Word tail = decode_word(sid, N, l);
                    full.insert(full.end(), tail.begin(), tail.end());
                    out.push_back(std::move(full));
                }
            } else {
                base.resize(m);
                out.push_back(std::move(base));
            }
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

namespace {

/// Linear position along the outer boundary: edge index plus the exact dot
/// numerator of the point along that edge (shared denominator |edge|^2).
/// Arc ends keep t = den instead of wrapping so arcs never fold backwards.
struct BoundaryPos {
    int edge = 0;
    CycloNumber t;
};

int compare_pos(const BoundaryPos& a, const BoundaryPos& b) {
    if (a.edge != b.edge) return a.edge < b.edge ? -1 : 1;
    return compare_real(a.t, b.t);
}

struct BoundarySupport {
    std::vector<std::pair<BoundaryPos, BoundaryPos>> arcs;  // start <= end
    std::vector<BoundaryPos> points;                        // isolated touches
    std::vector<BoundaryPos> certified;                     // provably in K
};

/// The outer-boundary portions of the closed cells of A: sub-edge arcs plus
/// boundary vertex images; vertex images whose polygon vertex lies in the
/// fractal part are certified K-points.
BoundarySupport boundary_support(const ValidatedSystem& sys, const std::vector<Word>& A) {
    const Polygon& P = sys.polygon;
    int J = sys.J;
    CycloNumber den = dot(P.vertices[0] - P.vertices[J - 1], P.vertices[0] - P.vertices[J - 1]);
    VertexMembership vm = vertex_in_K(sys);

    auto position = [&](const CycloNumber& x, bool as_end) -> std::vector<BoundaryPos> {
        std::vector<BoundaryPos> hits;
        for (int i = 0; i < J; ++i) {
            const CycloNumber& a = P.vertices[(i + J - 1) % J];
            const CycloNumber& d0 = P.vertices[i];
            CycloNumber d = d0 - a;
            if (cross(d, x - a).real_sign() != 0) continue;
            CycloNumber t = dot(d, x - a);
            if (t.real_sign() < 0 || compare_real(t, den) > 0) continue;
            if (compare_real(t, den) == 0 && !as_end) {
                hits.push_back({(i + 1) % J, CycloNumber::zero(t.field())});
            } else {
                hits.push_back({i, t});
            }
        }
        return hits;
    };

    BoundarySupport out;
    for (const Word& w : A) {
        Contraction fw = word_map(sys, w);
        std::vector<CycloNumber> img;
        for (int kidx = 0; kidx < J; ++kidx) img.push_back(fw.apply(P.vertices[kidx]));

        std::vector<bool> on_boundary(J, false);
        for (int kidx = 0; kidx < J; ++kidx) {
            std::vector<BoundaryPos> hits = position(img[kidx], false);
            on_boundary[kidx] = !hits.empty();
            for (BoundaryPos& p : hits) {
                out.points.push_back(p);
                if (vm.contains(kidx)) out.certified.push_back(p);
                break;  // a normalized position is unique
            }
        }
        for (int kidx = 0; kidx < J; ++kidx) {
            int prev = (kidx + J - 1) % J;
            if (!on_boundary[prev] || !on_boundary[kidx]) continue;
            // A cell sub-edge on the outer boundary: both endpoints on the
            // same outer edge.
            for (int i = 0; i < J; ++i) {
                const CycloNumber& a = P.vertices[(i + J - 1) % J];
                CycloNumber d = P.vertices[i] - a;
                auto on_edge = [&](const CycloNumber& x) {
                    if (cross(d, x - a).real_sign() != 0) return false;
                    CycloNumber t = dot(d, x - a);
                    return t.real_sign() >= 0 && compare_real(t, den) <= 0;
                };
                if (!on_edge(img[prev]) || !on_edge(img[kidx])) continue;
                BoundaryPos s{i, dot(d, img[prev] - a)};
                BoundaryPos e{i, dot(d, img[kidx] - a)};
                if (compare_pos(e, s) < 0) std::swap(s, e);
                out.arcs.push_back({s, e});
                break;
            }
        }
    }
    return out;
}

std::vector<BoundaryPos> sorted_unique(std::vector<BoundaryPos> pts) {
    std::sort(pts.begin(), pts.end(),
              [](const BoundaryPos& a, const BoundaryPos& b) { return compare_pos(a, b) < 0; });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const BoundaryPos& a, const BoundaryPos& b) {
                              return compare_pos(a, b) == 0;
                          }),
              pts.end());
    return pts;
}

/// Circular label-change count of two disjoint sorted position lists; >= 4
/// means the lists interleave around the boundary.
int label_changes(const std::vector<std::pair<BoundaryPos, int>>& items) {
    int changes = 0;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (items[i].second != items[(i + 1) % items.size()].second) ++changes;
    }
    return changes;
}

}  // namespace

Alternation alternated(const ValidatedSystem& sys, const std::vector<Word>& A,
                       const std::vector<Word>& B) {
    if (!A.empty() && !B.empty() && A.front().size() != B.front().size()) {
        throw BadLevel("alternation requires same-level word sets");
    }
    if (A.empty() || B.empty()) return Alternation::No;

    BoundarySupport sa = boundary_support(sys, A);
    BoundarySupport sb = boundary_support(sys, B);

    // Certified-true: a shared provable K-point, or four provable K-points in
    // strictly interleaved circular order.
    std::vector<BoundaryPos> ca = sorted_unique(sa.certified);
    std::vector<BoundaryPos> cb = sorted_unique(sb.certified);
    {
        std::vector<std::pair<BoundaryPos, int>> merged;
        for (const BoundaryPos& p : ca) merged.push_back({p, 0});
        for (const BoundaryPos& p : cb) merged.push_back({p, 1});
        std::sort(merged.begin(), merged.end(), [](const auto& x, const auto& y) {
            int c = compare_pos(x.first, y.first);
            return c != 0 ? c < 0 : x.second < y.second;
        });
        for (std::size_t i = 0; i + 1 < merged.size(); ++i) {
            if (merged[i].second != merged[i + 1].second &&
                compare_pos(merged[i].first, merged[i + 1].first) == 0) {
                return Alternation::Yes;  // shared boundary point of both K-sets
            }
        }
        if (!ca.empty() && !cb.empty() && label_changes(merged) >= 4) return Alternation::Yes;
    }

    // Certified-false: the full supports (arcs plus every touch point,
    // regardless of membership) are disjoint and do not interleave.
    auto pieces = [](const BoundarySupport& s) {
        std::vector<std::pair<BoundaryPos, BoundaryPos>> v = s.arcs;
        for (const BoundaryPos& p : s.points) v.push_back({p, p});
        std::sort(v.begin(), v.end(), [](const auto& x, const auto& y) {
            int c = compare_pos(x.first, y.first);
            return c != 0 ? c < 0 : compare_pos(x.second, y.second) < 0;
        });
        // Merge overlapping or touching pieces.
        std::vector<std::pair<BoundaryPos, BoundaryPos>> merged;
        for (const auto& piece : v) {
            if (!merged.empty() && compare_pos(piece.first, merged.back().second) <= 0) {
                if (compare_pos(piece.second, merged.back().second) > 0) {
                    merged.back().second = piece.second;
                }
            } else {
                merged.push_back(piece);
            }
        }
        return merged;
    };
    std::vector<std::pair<BoundaryPos, BoundaryPos>> pa = pieces(sa);
    std::vector<std::pair<BoundaryPos, BoundaryPos>> pb = pieces(sb);
    // The boundary start/end wrap: a piece ending at the last corner touches
    // one starting at position zero.
    auto wraps_to_start = [&](const BoundaryPos& end, const BoundaryPos& start) {
        return end.edge == sys.J - 1 && start.edge == 0 && start.t.real_sign() == 0 &&
               compare_real(end.t, dot(sys.polygon.vertices[0] - sys.polygon.vertices[sys.J - 1],
                                       sys.polygon.vertices[0] - sys.polygon.vertices[sys.J - 1])) == 0;
    };
    for (const auto& x : pa) {
        for (const auto& y : pb) {
            bool disjoint = compare_pos(x.second, y.first) < 0 || compare_pos(y.second, x.first) < 0;
            bool wrap = wraps_to_start(x.second, y.first) || wraps_to_start(y.second, x.first);
            if (!disjoint || wrap) return Alternation::Unknown;
        }
    }
    std::vector<std::pair<BoundaryPos, int>> items;
    for (const auto& x : pa) items.push_back({x.first, 0});
    for (const auto& y : pb) items.push_back({y.first, 1});
    std::sort(items.begin(), items.end(), [](const auto& x, const auto& y) {
        return compare_pos(x.first, y.first) < 0;
    });
    return label_changes(items) >= 4 ? Alternation::Unknown : Alternation::No;
}

SubsetZJ path_boundary(const ValidatedSystem& sys, const PathSeq& path, bool essential_only) {
    std::vector<Word> words;
    for (NodeId id : path.nodes) words.push_back(decode_word(id, sys.cell_count(), path.level));
    SubsetZJ touch = boundary_touch(sys, words);
    return essential_only ? (touch & essential_boundary(sys)) : touch;
}

std::vector<PathSeq> sample_corridor_paths(GraphCache& cache, const Word& w, int M, int m,
                                           int count, std::uint64_t rng_seed, EdgeKind kind,
                                           int attempt_cap) {
    const ValidatedSystem& sys = cache.system();
    int N = sys.cell_count();
    int n = static_cast<int>(w.size());
    if (n < 1 || m < 1 || M < 1) throw BadLevel("corridor sampling needs |w|, m, M >= 1");
    const LevelGraph& base = cache.at(n);
    const LevelGraph& fine = cache.at(n + m);
    NodeId pow = pow_ll(N, m);
    NodeId wid = encode_word(w, N);

    // The punctured M-ball around w and its complement, as level-n prefixes.
    std::set<NodeId> ball;
    for (const Word& v : gamma_ball(base, w, M, EdgeKind::Star)) {
        ball.insert(encode_word(v, N));
    }
    bool complement_empty = static_cast<NodeId>(ball.size()) == base.node_count;
    if (complement_empty) throw NoneFound("the ball complement is empty");

    auto allowed = [&](NodeId id) {
        NodeId prefix = id / pow;
        return prefix != wid && ball.count(prefix) > 0;
    };
    auto exit_adjacent = [&](NodeId id) {
        for (NodeId nb : adjacency(fine, kind)[static_cast<std::size_t>(id)]) {
            if (ball.count(nb / pow) == 0) return true;
        }
        return false;
    };

    // Admissible entry nodes: corridor cells touching a refinement of w.
    std::vector<NodeId> starts;
    for (NodeId suffix = 0; suffix < pow; ++suffix) {
        NodeId inside = wid * pow + suffix;
        for (NodeId nb : adjacency(fine, kind)[static_cast<std::size_t>(inside)]) {
            if (allowed(nb)) starts.push_back(nb);
        }
    }
    std::sort(starts.begin(), starts.end());
    starts.erase(std::unique(starts.begin(), starts.end()), starts.end());
    if (starts.empty()) throw NoneFound("no corridor cell touches the refined center");

    std::mt19937_64 rng(rng_seed);
    std::vector<PathSeq> samples;
    const int walk_cap = static_cast<int>(8 * pow);
    int attempts = 0;
    while (static_cast<int>(samples.size()) < count) {
        if (++attempts > attempt_cap) {
            if (samples.empty()) throw NoneFound("attempt budget exhausted");
            break;
        }
        PathSeq path{n + m, {starts[static_cast<std::size_t>(rng() % starts.size())]}, kind};
        bool done = exit_adjacent(path.nodes.back());
        while (!done && static_cast<int>(path.nodes.size()) < walk_cap) {
            std::vector<NodeId> next;
            for (NodeId nb : adjacency(fine, kind)[static_cast<std::size_t>(path.nodes.back())]) {
                if (allowed(nb)) next.push_back(nb);
            }
            if (next.empty()) break;
            path.nodes.push_back(next[static_cast<std::size_t>(rng() % next.size())]);
            done = exit_adjacent(path.nodes.back());
        }
        if (done) samples.push_back(std::move(path));
    }
    return samples;
}

bool corridor_contains(GraphCache& cache, const Word& w, int M, int m, const PathSeq& path) {
    const ValidatedSystem& sys = cache.system();
    int N = sys.cell_count();
    int n = static_cast<int>(w.size());
    if (path.level != n + m || path.nodes.empty()) return false;
    const LevelGraph& base = cache.at(n);
    const LevelGraph& fine = cache.at(n + m);
    if (!is_path(fine, path)) return false;
    NodeId pow = pow_ll(N, m);
    NodeId wid = encode_word(w, N);
    std::set<NodeId> ball;
    for (const Word& v : gamma_ball(base, w, M, EdgeKind::Star)) ball.insert(encode_word(v, N));

    for (NodeId id : path.nodes) {
        NodeId prefix = id / pow;
        if (prefix == wid || ball.count(prefix) == 0) return false;
    }
    bool enters = false, exits = false;
    for (NodeId nb : adjacency(fine, path.kind)[static_cast<std::size_t>(path.nodes.front())]) {
        enters = enters || nb / pow == wid;
    }
    for (NodeId nb : adjacency(fine, path.kind)[static_cast<std::size_t>(path.nodes.back())]) {
        exits = exits || ball.count(nb / pow) == 0;
    }
    return enters && exits;
}

}  // namespace polyfract
