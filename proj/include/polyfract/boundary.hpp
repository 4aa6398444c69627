#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "polyfract/system.hpp"
#include "polyfract/wordtree.hpp"

namespace polyfract {

/// Subset of Z_J as a bitmask (bit i = boundary index i).
using SubsetZJ = std::uint32_t;

SubsetZJ full_subset(int J);
SubsetZJ subset_complement(SubsetZJ X, int J);
bool subset_contains(SubsetZJ X, int i);
std::vector<int> subset_elements(SubsetZJ X, int J);
std::string subset_to_string(SubsetZJ X, int J);

/// Orbit closure and invariance of index sets under the symmetry group,
/// via the boundary-index permutations of the group elements.
SubsetZJ group_closure(const ValidatedSystem& sys, SubsetZJ X);
bool is_invariant(const ValidatedSystem& sys, SubsetZJ X);

/// True iff X is a single group orbit (the orbit of any of its members);
/// the empty set is not transitive.
bool is_transitive(const ValidatedSystem& sys, SubsetZJ X);

/// The essential boundary indices: the least group-invariant set containing
/// both indices of every level-1 full-edge contact and closed under
/// "inner edge on outer edge" promotion (if f_s(b_i) lies inside b_j and j
/// is in the set, then so is i).
SubsetZJ essential_boundary(const ValidatedSystem& sys);

/// Full-edge contacts whose both stored indices lie in Y. For
/// group-invariant Y membership of the two indices always agrees; for other
/// Y the both-indices reading is applied.
std::vector<LevelGraph::EllEdge> restricted_edges(const LevelGraph& graph, SubsetZJ Y);

/// The outer boundary indices touched by the words of A through sub-edges
/// with inner index in Y: {i : exists w in A, i' in Y with b_{i'}(w) in b_i}.
/// Computed by folding the per-letter edge-on-boundary table along each word.
SubsetZJ boundary_trace(const ValidatedSystem& sys, const std::vector<Word>& A, SubsetZJ Y);

/// The plain boundary trace: outer indices i with K(A) meeting b_i, which
/// adds single vertex touches whose touching vertex belongs to K. For even J
/// this coincides with boundary_trace(A, Z_J).
SubsetZJ boundary_touch(const ValidatedSystem& sys, const std::vector<Word>& A);

/// Connected components of (T_n, restricted_edges(X^c)) with their traces.
struct ComponentDecomposition {
    struct Component {
        std::vector<NodeId> members;  // sorted
        SubsetZJ trace = 0;           // outer indices reached through X^c sub-edges
    };
    int level = 0;
    SubsetZJ cut = 0;  // X
    std::vector<Component> components;  // sorted by smallest member
};

ComponentDecomposition components(const ValidatedSystem& sys, const LevelGraph& graph,
                                  SubsetZJ X);

/// The family {(trace of A)^c : A a component after cutting X}, deduplicated
/// and sorted by bitmask value.
std::vector<SubsetZJ> f_partial(const ValidatedSystem& sys, const LevelGraph& graph, SubsetZJ X);
std::vector<SubsetZJ> f_partial_level(const ValidatedSystem& sys, int n, SubsetZJ X);

/// The special index-set families driving the trivial-group criterion:
/// "high" = all sets of size 1..J-3 plus the opposite-side pairs' complements
/// (even J), "low" = the remaining sets of size >= J-2.
std::vector<SubsetZJ> b_high(int J);
bool in_b_low(SubsetZJ X, int J);

/// Orbit of one seed under repeated application of the level-1 set-family
/// map, with cycle detection. Composition iteration is only sound for the
/// trivial group (NotTrivialGroup otherwise).
struct FPartialOrbit {
    SubsetZJ seed = 0;
    /// families[k] is the deduplicated family after k+1 applications.
    std::vector<std::vector<SubsetZJ>> families;
    bool reached_empty = false;  // empty set appeared in some family
    bool entered_low = false;    // some family lies inside {empty} + low sets
    bool seed_recurs = false;    // the seed reappeared in a family of its own orbit
    bool cycled = false;         // the family sequence repeated before max_n
};

std::vector<FPartialOrbit> f_partial_iterate(const ValidatedSystem& sys,
                                             const std::vector<SubsetZJ>& seeds, int max_n);

/// Decision report for isolated contact points of cells: single points of K
/// whose punctured cell-neighborhood is disconnected at some level.
struct ContactPointReport {
    enum class Verdict { NoneExist, Exists, Unknown };

    Verdict verdict = Verdict::Unknown;
    std::string detail;

    /// Criterion route (J >= 4): every in-K single-point contact at level 1
    /// has a connected punctured star, and every cell whose fractal part
    /// meets an essential outer edge does so through a full sub-edge.
    bool criterion_available = false;
    bool nic1 = false;
    bool nic2 = false;
    std::vector<std::string> nic1_points;     // per checked point, with outcome
    std::vector<std::string> nic2_witnesses;  // failures only

    /// Direct search: disconnected punctured stars at levels n <= depth.
    int oracle_depth = 0;
    bool oracle_found = false;
    std::string oracle_witness;
};

ContactPointReport isolated_contact_report(const ValidatedSystem& sys, int oracle_depth);

}  // namespace polyfract
