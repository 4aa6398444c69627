#pragma once

#include <cstdint>
#include <vector>

#include "polyfract/system.hpp"

namespace polyfract {

/// Words of a fixed level are numbered lexicographically (first letter most
/// significant), so dropping the last letter is integer division by N.
using NodeId = std::int64_t;

NodeId encode_word(const Word& w, int alphabet);
Word decode_word(NodeId id, int alphabet, int level);

/// Prefix [w]_n (first n letters) and shift (drop the first n letters).
Word word_prefix(const Word& w, int n);
Word word_shift(const Word& w, int n);

/// Level-m adjacency structure of {Q_w : w in T_m}: full-edge contacts with
/// their boundary indices and group elements, and single-point contacts with
/// the flag telling whether the touching point belongs to both fractal parts.
struct LevelGraph {
    struct EllEdge {
        NodeId w, v;
        int i, j;
        DihedralElement g;

        bool operator==(const EllEdge& o) const {
            return w == o.w && v == o.v && i == o.i && j == o.j && g == o.g;
        }
    };
    struct PointEdge {
        NodeId w, v;
        int i, j;
        bool in_k;

        bool operator==(const PointEdge& o) const {
            return w == o.w && v == o.v && i == o.i && j == o.j && in_k == o.in_k;
        }
    };

    int level = 0;
    int alphabet = 0;
    NodeId node_count = 0;
    std::vector<EllEdge> ell_edges;      // canonically sorted, w < v
    std::vector<PointEdge> point_edges;  // canonically sorted, w < v

    /// Neighbor lists; star additionally contains in-K point contacts.
    std::vector<std::vector<NodeId>> ell_adj;
    std::vector<std::vector<NodeId>> star_adj;
};

/// Vertex indices i with p_i in K, decided by the greatest fixed point of the
/// successor relation i -> j whenever some cell maps p_j onto p_i.
struct VertexMembership {
    std::vector<bool> in_k;                       // indexed by Z_J
    std::vector<std::vector<int>> successors;     // i -> all such j

    bool contains(int i) const { return in_k.at(i); }
};

VertexMembership vertex_in_K(const ValidatedSystem& sys);

enum class Membership { In, Out, Unknown };

/// Membership of an exact point of Q_* in K, by exploring the preimage graph
/// x -> f_s^{-1}(x) over cells containing x with memoization. A reachable
/// cycle certifies In, full die-out certifies Out; exceeding the node budget
/// yields Unknown.
Membership point_in_K(const ValidatedSystem& sys, const CycloNumber& x, int budget = 256);

/// The level-1 graph, straight from the validated contact table.
LevelGraph level1_graph(const ValidatedSystem& sys);

/// One recursion step m -> m+1: parent-interior lifts, full-edge parent pairs
/// (children matched through the parent reflection), and point parent pairs
/// (children pinned at the shared point).
LevelGraph extend_level(const ValidatedSystem& sys, const LevelGraph& graph);

/// Recursion from level 1 to level m.
LevelGraph build_level(const ValidatedSystem& sys, int m);

/// Brute-force cross-check: classify every near cell pair by exact geometry.
/// Guarded to alphabet^m <= 10^4 nodes unless force = true; spatial_filter
/// skips provably far pairs by a double-precision center-distance bound.
LevelGraph geometric_adjacency_oracle(const ValidatedSystem& sys, int m,
                                      bool spatial_filter = true, bool force = false);

enum class EdgeKind { Ell, Star };

/// All words reachable from w by at most M edges of the chosen kind
/// (paths of at most M+1 nodes), including w itself.
std::vector<Word> gamma_ball(const LevelGraph& graph, const Word& w, int M, EdgeKind kind);

struct LevelStats {
    NodeId node_count = 0;
    std::size_t ell_count = 0;
    std::size_t star_count = 0;
    std::size_t max_degree = 0;             // star adjacency
    std::size_t max_point_multiplicity = 0; // cells containing a contact point
};

LevelStats level_stats(const ValidatedSystem& sys, const LevelGraph& graph);

}  // namespace polyfract
