#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "polyfract/geometry.hpp"

namespace polyfract {

/// Parsed-but-unvalidated description of a (J, G)-self-similar system.
struct SystemDescription {
    struct Cell {
        std::string id;
        int phi_half_turns = 0;
        bool phi_conj = false;
        std::string center_expr;
    };
    struct Group {
        std::string kind;  // trivial | rot | dihedral | dihedral_v | explicit
        int k = 0;
        std::vector<std::pair<int, bool>> elements;  // (half_turns, conj) generators
    };

    int J = 0;
    std::string r_expr;
    Group group;
    std::vector<Cell> cells;
};

/// Parse the "polyfract/v1" TOML-syntax description. Unknown keys are errors.
/// Throws SyntaxError, UnknownGroupKind, DuplicateCellId, EmptyCells.
SystemDescription load_system(const std::string& text);

/// Machine-readable axiom verdicts; validation never partially succeeds.
struct AxiomReport {
    struct Check {
        bool pass = true;
        std::vector<std::string> witnesses;
    };
    Check a1, a2, a3, a4, a5;

    bool all_pass() const {
        return a1.pass && a2.pass && a3.pass && a4.pass && a5.pass;
    }
};

/// Level-1 full-edge contact with its boundary indices and group element:
/// Q_s cap Q_t = f_s(b_i) = f_t(b_j) and g = (phi_t)^{-1} phi_s R_{rho(i)}
/// is the element with R_{s,t}(Q_{s w}) = Q_{t g(w)}.
struct EllEdge1 {
    int s = 0, t = 0;
    int i = 0, j = 0;
    DihedralElement g;
};

/// Level-1 single-vertex contact f_s(p_i) = f_t(p_j).
struct VertexContact1 {
    int s = 0, t = 0;
    int i = 0, j = 0;
};

/// A system that has passed axioms (A1)-(A5), with the cached level-1 contact
/// classification and all action tables later modules need.
struct ValidatedSystem {
    int J = 0;
    CycloFieldPtr field;
    Polygon polygon;
    CycloNumber ratio;
    SymmetryGroup group;
    std::vector<std::string> cell_ids;
    std::vector<Contraction> cells;

    /// Full contact matrix (diagonal unused).
    std::vector<std::vector<ContactClass>> contact;
    std::vector<EllEdge1> ell_edges;
    std::vector<VertexContact1> vertex_contacts;

    /// For each g in G: the cell permutation g_* with g(Q_s) = Q_{g_*(s)}.
    std::map<DihedralElement, std::vector<int>> cell_action;
    /// For each g in G: the boundary-index permutation with g(b_i) = b_{g_*(i)}.
    std::map<DihedralElement, std::vector<int>> index_action;

    /// edge_on_boundary[s][k] = outer index i with f_s(b_k) contained in b_i,
    /// or -1 when the image edge is not on the outer boundary.
    std::vector<std::vector<int>> edge_on_boundary;
    /// vertex_at_corner[s][k] = outer vertex index i with f_s(p_k) = p_i, or -1.
    std::vector<std::vector<int>> vertex_at_corner;
    /// vertex_on_edges[s][k] = bitmask of outer edges b_i containing f_s(p_k).
    std::vector<std::vector<unsigned>> vertex_on_edges;

    ValidatedSystem(CycloNumber ratio_in, SymmetryGroup group_in)
        : ratio(std::move(ratio_in)), group(std::move(group_in)) {}

    int cell_count() const { return static_cast<int>(cells.size()); }
    int cell_index(const std::string& id) const;

    /// Directional group element of a level-1 ell edge: the g with
    /// R_{s,t}(Q_{s u}) = Q_{t g_*(u)} for suffixes u. Throws
    /// InternalInconsistency when (s, t) is not an ell edge.
    DihedralElement edge_group_element(int s, int t) const;
    /// The boundary indices (i on s, j on t) of an ell edge.
    std::pair<int, int> edge_indices(int s, int t) const;
};

/// Outcome of validate(): either a validated system or the failure report.
struct ValidationResult {
    std::optional<ValidatedSystem> system;
    AxiomReport report;

    bool ok() const { return system.has_value(); }
};

ValidationResult validate(const SystemDescription& desc);

/// Convenience: validate-or-throw (NotValidated carrying the first witness).
ValidatedSystem validate_or_throw(const SystemDescription& desc);

using Word = std::vector<int>;

/// g_*(w) with g(Q_w) = Q_{g_*(w)}, by the letter-by-letter recursion that
/// carries the evolving group element. Throws NotInG.
Word group_action_on_words(const ValidatedSystem& sys, const DihedralElement& g, const Word& w);

/// Same recursion, also returning the residual element h with
/// g(Q_{w u}) = Q_{g_*(w) h_*(u)} for all suffixes u.
std::pair<Word, DihedralElement> group_action_with_residual(const ValidatedSystem& sys,
                                                            const DihedralElement& g,
                                                            const Word& w);

/// Folding-structure detection: foldable iff G = {I}; when foldable,
/// verifies that the two maps of every full-edge contact agree pointwise on
/// the shared segment and reports any inconsistency.
struct FoldabilityReport {
    bool foldable = false;
    std::vector<std::string> witnesses;  // inconsistencies (empty when consistent)
};

FoldabilityReport detect_trivial_symmetry(const ValidatedSystem& sys);

/// Elements of D_J that permute {Q_w : w in T_n} for every n <= n_max; an
/// upper bound for the maximal symmetry group, valid to the verified depth.
struct SymmetryCandidates {
    std::vector<DihedralElement> elements;
    int verified_depth = 0;
};

SymmetryCandidates candidate_maximal_symmetry(const ValidatedSystem& sys, int n_max);

/// Exact affine map of a word: f_w = f_{w_1} o ... o f_{w_m}.
Contraction word_map(const ValidatedSystem& sys, const Word& w);

}  // namespace polyfract
