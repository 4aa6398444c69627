#pragma once

#include <string>
#include <vector>

#include "polyfract/boundary.hpp"
#include "polyfract/system.hpp"

namespace polyfract {

/// One checked hypothesis inside a sufficient-condition test.
struct PrereqCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Outcome of a single sufficient-condition test.  `applies` means every
/// hypothesis passed and the test concludes conductive homogeneity for all
/// exponents above the conformal dimension.
struct PartialVerdict {
    std::string theorem;  // J3, ZJ_transitive, essential_transitive,
                          // even_J_F_partial, trivial_G_F_partial
    bool applies = false;
    std::vector<PrereqCheck> prerequisites;
    std::vector<std::string> details;
    /// even_J_F_partial: the two level-1 image families of the parity classes.
    std::vector<std::vector<SubsetZJ>> families;
    /// trivial_G_F_partial: full iteration data per high-family seed.
    std::vector<FPartialOrbit> orbits;
};

/// Combined decision.  Inconclusive never claims non-homogeneity: every
/// implemented criterion is sufficient only.
struct Verdict {
    enum class Status { ConductivelyHomogeneous, Inconclusive };

    Status status = Status::Inconclusive;
    std::string theorem = "none";  // tag of the first applicable criterion
    /// Path-length threshold used by downstream conductance estimates:
    /// J - 2 for even J, 2J - 2 for odd J.
    int m_j = 0;
    ContactPointReport contact;
    std::vector<PartialVerdict> reports;
};

int m_j_constant(int J);

/// J = 3 needs no further hypotheses.
PartialVerdict check_j3(const ValidatedSystem& sys);

/// Full symmetry: Z_J is one G-orbit.  Cross-checks the classification of
/// transitive subgroups (full dihedral, full rotation, or the vertex-axis
/// half-dihedral group for even J); a mismatch throws InternalInconsistency.
PartialVerdict check_zj_transitive(const ValidatedSystem& sys);

/// No isolated contact points and the essential boundary set is one G-orbit.
PartialVerdict check_essential_transitive(const ValidatedSystem& sys,
                                          const ContactPointReport& contact);

/// J = 2q (q >= 3), G the edge-axis half-dihedral group D_q or the rotation
/// group Rot_q, no isolated contact points.  Homogeneous unless a parity
/// class recurs under the level-1 set family map (for J in {6, 8} the mixed
/// two-way recurrence is excluded a priori).  Throws PreconditionFailed when
/// a hypothesis fails.
PartialVerdict check_even_j(const ValidatedSystem& sys, const ContactPointReport& contact);

/// Trivial symmetry group and no isolated contact points.  Iterates the set
/// family map from every high-family seed; homogeneous iff each orbit
/// eventually lands inside the low family (plus possibly the empty set).
/// The three equivalent formulations are evaluated independently and must
/// agree (InternalInconsistency otherwise).  Throws PreconditionFailed when
/// a hypothesis fails.
PartialVerdict check_trivial_g(const ValidatedSystem& sys, const ContactPointReport& contact);

/// Runs the five checks in priority order; the first success decides.
/// PreconditionFailed from individual checks is recorded, not propagated.
Verdict theorem_dispatch(const ValidatedSystem& sys, int contact_oracle_depth = 2);

}  // namespace polyfract
