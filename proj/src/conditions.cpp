#include "polyfract/conditions.hpp"

#include <algorithm>
#include <sstream>

#include "polyfract/errors.hpp"
#include "polyfract/wordtree.hpp"

namespace polyfract {

namespace {

bool same_elements(const SymmetryGroup& a, const SymmetryGroup& b) {
    if (a.size() != b.size()) return false;
    for (const DihedralElement& g : a.elements) {
        if (!b.contains(g)) return false;
    }
    return true;
}

std::string family_string(const std::vector<SubsetZJ>& fam, int J) {
    std::ostringstream out;
    out << "{";
    for (std::size_t k = 0; k < fam.size(); ++k) {
        if (k) out << ", ";
        out << subset_to_string(fam[k], J);
    }
    out << "}";
    return out.str();
}

PrereqCheck contact_check(const ContactPointReport& contact) {
    PrereqCheck c;
    c.name = "no isolated contact points";
    c.passed = contact.verdict == ContactPointReport::Verdict::NoneExist;
    c.detail = contact.detail;
    return c;
}

bool all_passed(const std::vector<PrereqCheck>& checks) {
    return std::all_of(checks.begin(), checks.end(),
                       [](const PrereqCheck& c) { return c.passed; });
}

}  // namespace

int m_j_constant(int J) { return J % 2 == 0 ? J - 2 : 2 * J - 2; }

PartialVerdict check_j3(const ValidatedSystem& sys) {
    PartialVerdict v;
    v.theorem = "J3";
    v.prerequisites.push_back({"J == 3", sys.J == 3, "J = " + std::to_string(sys.J)});
    v.applies = sys.J == 3;
    return v;
}

PartialVerdict check_zj_transitive(const ValidatedSystem& sys) {
    PartialVerdict v;
    v.theorem = "ZJ_transitive";
    bool transitive = is_transitive(sys, full_subset(sys.J));
    v.prerequisites.push_back(
        {"Z_J is one G-orbit", transitive, "group size " + std::to_string(sys.group.size())});
    v.applies = transitive;

    // Classification cross-check: the index set is one orbit exactly for the
    // full dihedral group, the full rotation group, and (even J only) the
    // vertex-axis half-dihedral group.
    bool classified = same_elements(sys.group, SymmetryGroup::dihedral(sys.J, sys.J)) ||
                      same_elements(sys.group, SymmetryGroup::rot(sys.J, sys.J)) ||
                      (sys.J % 2 == 0 && same_elements(sys.group, SymmetryGroup::dihedral_v(sys.J)));
    if (classified != transitive) {
        throw InternalInconsistency(
            "transitive-group classification disagrees with the computed orbit");
    }
    v.details.push_back(classified ? "group matches the transitive classification"
                                   : "group is outside the transitive classification");
    return v;
}

PartialVerdict check_essential_transitive(const ValidatedSystem& sys,
                                          const ContactPointReport& contact) {
    PartialVerdict v;
    v.theorem = "essential_transitive";
    SubsetZJ e = essential_boundary(sys);
    v.prerequisites.push_back(contact_check(contact));
    bool transitive = is_transitive(sys, e);
    v.prerequisites.push_back({"essential boundary set is one G-orbit", transitive,
                               "essential set " + subset_to_string(e, sys.J)});
    v.applies = all_passed(v.prerequisites);
    return v;
}

PartialVerdict check_even_j(const ValidatedSystem& sys, const ContactPointReport& contact) {
    PartialVerdict v;
    v.theorem = "even_J_F_partial";
    int J = sys.J;
    int q = J / 2;
    if (J % 2 != 0 || q < 3) {
        throw PreconditionFailed("requires J = 2q with q >= 3, got J = " + std::to_string(J));
    }
    // The admissible groups: Rot_q, or the half-dihedral group containing
    // Rot_q whose reflections fix edge axes (the vertex-axis variant acts
    // transitively on Z_J and belongs to the full-symmetry criterion).
    bool is_rot_q = same_elements(sys.group, SymmetryGroup::rot(J, q));
    bool contains_rot_q = true;
    for (const DihedralElement& g : SymmetryGroup::rot(J, q).elements) {
        contains_rot_q = contains_rot_q && sys.group.contains(g);
    }
    bool is_edge_dq = static_cast<int>(sys.group.size()) == 2 * q && contains_rot_q &&
                      !is_transitive(sys, full_subset(J));
    if (!is_rot_q && !is_edge_dq) {
        throw PreconditionFailed("requires G = D_q (edge-axis) or Rot_q for q = J/2");
    }
    if (contact.verdict != ContactPointReport::Verdict::NoneExist) {
        throw PreconditionFailed("requires the absence of isolated contact points");
    }
    v.prerequisites.push_back({"J = 2q, q >= 3", true, "q = " + std::to_string(q)});
    v.prerequisites.push_back(
        {"G = D_q or Rot_q", true, is_rot_q ? "rotation group" : "edge-axis half-dihedral"});
    v.prerequisites.push_back(contact_check(contact));

    // Parity classes of boundary indices.
    SubsetZJ even_class = 0, odd_class = 0;
    for (int i = 0; i < J; ++i) (i % 2 == 0 ? even_class : odd_class) |= SubsetZJ{1} << i;

    LevelGraph g1 = level1_graph(sys);
    std::vector<SubsetZJ> f_even = f_partial(sys, g1, even_class);
    std::vector<SubsetZJ> f_odd = f_partial(sys, g1, odd_class);
    v.families = {f_even, f_odd};
    v.details.push_back("image of even parity class: " + family_string(f_even, J));
    v.details.push_back("image of odd parity class: " + family_string(f_odd, J));

    auto member = [](const std::vector<SubsetZJ>& fam, SubsetZJ X) {
        return std::count(fam.begin(), fam.end(), X) > 0;
    };
    bool same_parity_recurs = member(f_even, even_class) || member(f_odd, odd_class);
    bool mixed_recurs = member(f_even, odd_class) && member(f_odd, even_class);
    bool mixed_excluded = J == 6 || J == 8;
    bool failure = same_parity_recurs || (!mixed_excluded && mixed_recurs);
    v.details.push_back(same_parity_recurs ? "a parity class recurs"
                                           : "no parity class recurs");
    if (mixed_excluded) {
        v.details.push_back("two-way parity exchange excluded for this J");
    } else if (mixed_recurs) {
        v.details.push_back("the parity classes exchange under the map");
    }
    v.applies = !failure;
    return v;
}

PartialVerdict check_trivial_g(const ValidatedSystem& sys, const ContactPointReport& contact) {
    PartialVerdict v;
    v.theorem = "trivial_G_F_partial";
    if (!sys.group.is_trivial()) {
        throw PreconditionFailed("requires the trivial symmetry group");
    }
    if (contact.verdict != ContactPointReport::Verdict::NoneExist) {
        throw PreconditionFailed("requires the absence of isolated contact points");
    }
    v.prerequisites.push_back({"G = {I}", true, ""});
    v.prerequisites.push_back(contact_check(contact));

    constexpr int kMaxIterations = 4096;
    std::vector<SubsetZJ> seeds = b_high(sys.J);
    v.orbits = f_partial_iterate(sys, seeds, kMaxIterations);

    // Three formulations of the stopping condition, evaluated independently:
    // (1) no seed ever reappears in its own orbit; (2) every orbit reaches a
    // family containing the empty set or lying inside the low sets; (3) every
    // orbit reaches a family inside the low sets plus possibly the empty set.
    bool no_recurrence = true, reaches_sink = true, reaches_low_or_empty = true;
    for (const FPartialOrbit& o : v.orbits) {
        if (!o.cycled) {
            throw NonConvergence("set family iteration did not cycle within " +
                                 std::to_string(kMaxIterations) + " steps");
        }
        no_recurrence = no_recurrence && !o.seed_recurs;
        bool sink = false, low_or_empty = false;
        for (const std::vector<SubsetZJ>& fam : o.families) {
            bool has_empty = std::count(fam.begin(), fam.end(), SubsetZJ{0}) > 0;
            bool all_low = true, all_low_or_empty = true;
            for (SubsetZJ Z : fam) {
                bool low = in_b_low(Z, sys.J);
                all_low = all_low && low;
                all_low_or_empty = all_low_or_empty && (low || Z == 0);
            }
            sink = sink || has_empty || all_low;
            low_or_empty = low_or_empty || all_low_or_empty;
        }
        reaches_sink = reaches_sink && sink;
        reaches_low_or_empty = reaches_low_or_empty && low_or_empty;
        std::ostringstream line;
        line << "seed " << subset_to_string(o.seed, sys.J) << ": "
             << (o.seed_recurs ? "recurs" : "transient") << ", "
             << (low_or_empty ? "absorbed low" : "stays high") << " within "
             << o.families.size() << " steps";
        v.details.push_back(line.str());
    }
    if (no_recurrence != reaches_sink || reaches_sink != reaches_low_or_empty) {
        throw InternalInconsistency(
            "the equivalent stopping-condition formulations disagree");
    }
    v.prerequisites.push_back({"every high seed is absorbed into the low family",
                               reaches_low_or_empty, ""});
    v.applies = all_passed(v.prerequisites);
    return v;
}

Verdict theorem_dispatch(const ValidatedSystem& sys, int contact_oracle_depth) {
    Verdict verdict;
    verdict.m_j = m_j_constant(sys.J);
    verdict.contact = isolated_contact_report(sys, contact_oracle_depth);

    auto consider = [&](PartialVerdict partial) {
        verdict.reports.push_back(std::move(partial));
        if (verdict.theorem == "none" && verdict.reports.back().applies) {
            verdict.status = Verdict::Status::ConductivelyHomogeneous;
            verdict.theorem = verdict.reports.back().theorem;
        }
    };
    auto consider_guarded = [&](const char* tag, auto&& check) {
        try {
            consider(check());
        } catch (const PreconditionFailed& e) {
            PartialVerdict skipped;
            skipped.theorem = tag;
            skipped.prerequisites.push_back({"preconditions", false, e.what()});
            verdict.reports.push_back(std::move(skipped));
        }
    };

    consider(check_j3(sys));
    consider(check_zj_transitive(sys));
    consider(check_essential_transitive(sys, verdict.contact));
    consider_guarded("even_J_F_partial", [&] { return check_even_j(sys, verdict.contact); });
    consider_guarded("trivial_G_F_partial",
                     [&] { return check_trivial_g(sys, verdict.contact); });
    return verdict;
}

}  // namespace polyfract
