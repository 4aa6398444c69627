#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "polyfract/boundary.hpp"
#include "polyfract/system.hpp"
#include "polyfract/wordtree.hpp"

namespace polyfract {

/// A walk in a fixed-level cell graph; consecutive nodes must be adjacent in
/// the declared edge set (ell = shared full edges only, star = shared points
/// too) and the sequence is nonempty.
struct PathSeq {
    int level = 0;
    std::vector<NodeId> nodes;
    EdgeKind kind = EdgeKind::Star;
};

/// Memoized level-graph builder shared by path operations.
class GraphCache {
  public:
    explicit GraphCache(const ValidatedSystem& sys) : sys_(&sys) {}

    const LevelGraph& at(int level);
    const ValidatedSystem& system() const { return *sys_; }

  private:
    const ValidatedSystem* sys_;
    std::map<int, LevelGraph> cache_;
};

/// True iff consecutive nodes are adjacent (or equal levels match etc.);
/// used by tests and by fold's postcondition assertion.
bool is_path(const LevelGraph& graph, const PathSeq& path);

/// Split of a path at prefix length k: the projection to level k (one node
/// per maximal run of a constant prefix) and, per run, the block of suffixes
/// at level n - k.  breakpoints[i] is the 1-based index of the last node of
/// run i in the original path.
struct PathBlocks {
    PathSeq projection;           // level k
    std::vector<PathSeq> blocks;  // level n - k
    std::vector<int> breakpoints;
};

/// Requires 0 <= k <= path.level (BadLevel otherwise).
PathBlocks decompose(const PathSeq& path, int k, int alphabet);

/// Inverse of decompose: prepends each run's prefix to its block and joins.
PathSeq reassemble(const PathBlocks& blocks, int alphabet);

/// Joins two same-level paths, dropping the duplicated node when the first
/// ends where the second starts.  NotJoinable unless the junction cells are
/// equal or adjacent in the path's edge kind.
PathSeq concat(const LevelGraph& graph, const PathSeq& a, const PathSeq& b);

/// k-folding: the first block stays put and every later block is transported
/// into the first parent's frame by the composed full-edge reflection
/// elements along the projection.  Requires the projection to be an ell path
/// (ProjectionNotEll) and asserts that the result is a star path at level
/// n - k.
PathSeq fold(GraphCache& cache, const PathSeq& path, int k);

/// Symmetrized shift-and-respan word set at level m: all level-m words
/// obtained from the n1-shift of u by a group move, an arbitrary level-n2
/// prefix, and descending (or ascending) the remaining levels.  Sorted and
/// deduplicated.  BadIndices for out-of-range n1/n2/m.
std::vector<Word> h_set(const ValidatedSystem& sys, const Word& u, int n1, int n2, int m);

/// Alternation of two same-level word sets on the outer boundary: certified
/// true when exact in-K boundary points interleave (or coincide), certified
/// false when the full boundary supports are disjoint and non-interleaved,
/// unknown otherwise.
enum class Alternation { Yes, No, Unknown };

Alternation alternated(const ValidatedSystem& sys, const std::vector<Word>& A,
                       const std::vector<Word>& B);

/// Boundary touch set of a node set at one level (the indices i with
/// b_i meeting the closed cells), restricted to the essential set when
/// essential_only is set; helper shared with the theorem property tests.
SubsetZJ path_boundary(const ValidatedSystem& sys, const PathSeq& path, bool essential_only);

/// Uniformly seeded rejection sampling of corridor walks around w: paths
/// through the m-step refinements of the punctured M-ball of w, admissibly
/// entered from the refinements of w and exiting toward the ball complement.
/// Deterministic per seed.  NoneFound when the corridor is empty or the
/// attempt budget is exhausted.
std::vector<PathSeq> sample_corridor_paths(GraphCache& cache, const Word& w, int M, int m,
                                           int count, std::uint64_t rng_seed,
                                           EdgeKind kind = EdgeKind::Star,
                                           int attempt_cap = 10000);

/// Definition re-check for sampled corridor membership.
bool corridor_contains(GraphCache& cache, const Word& w, int M, int m, const PathSeq& path);

}  // namespace polyfract
