#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>

#include "doctest.h"
#include "polyfract/boundary.hpp"
#include "polyfract/conditions.hpp"
#include "polyfract/errors.hpp"
#include "polyfract/fixtures.hpp"
#include "polyfract/system.hpp"

using namespace polyfract;

namespace {

ValidatedSystem load(const std::string& name) {
    return validate_or_throw(load_system(fixture_text(name)));
}

SubsetZJ mask(std::initializer_list<int> indices) {
    SubsetZJ X = 0;
    for (int i : indices) X |= SubsetZJ{1} << i;
    return X;
}

}  // namespace

TEST_CASE("path-length thresholds") {
    CHECK(m_j_constant(4) == 2);
    CHECK(m_j_constant(6) == 4);
    CHECK(m_j_constant(3) == 4);
    CHECK(m_j_constant(5) == 8);
    CHECK(m_j_constant(8) == 6);
}

TEST_CASE("triangle criterion") {
    CHECK(check_j3(load("folded-triangle")).applies);
    CHECK_FALSE(check_j3(load("carpet")).applies);
    CHECK_FALSE(check_j3(load("hexa-d3")).applies);
}

TEST_CASE("full-orbit criterion with classification cross-check") {
    CHECK(check_zj_transitive(load("carpet")).applies);
    CHECK_FALSE(check_zj_transitive(load("hexa-d3")).applies);
    CHECK_FALSE(check_zj_transitive(load("folded-square")).applies);
    CHECK_FALSE(check_zj_transitive(load("folded-triangle")).applies);
}

TEST_CASE("essential-orbit criterion") {
    ValidatedSystem carpet = load("carpet");
    ContactPointReport cc = isolated_contact_report(carpet, 2);
    // Whenever the full index set is one orbit and contacts are absent, the
    // essential-orbit criterion applies as well.
    CHECK(check_zj_transitive(carpet).applies);
    CHECK(check_essential_transitive(carpet, cc).applies);

    ValidatedSystem hexa = load("hexa-d3");
    CHECK(check_essential_transitive(hexa, isolated_contact_report(hexa, 2)).applies);

    ValidatedSystem fsq = load("folded-square");
    CHECK_FALSE(check_essential_transitive(fsq, isolated_contact_report(fsq, 2)).applies);

    // A failed contact hypothesis blocks the criterion.
    ContactPointReport unknown;
    unknown.verdict = ContactPointReport::Verdict::Unknown;
    CHECK_FALSE(check_essential_transitive(carpet, unknown).applies);
}

TEST_CASE("even-J parity criterion") {
    ValidatedSystem carpet = load("carpet");
    CHECK_THROWS_AS(check_even_j(carpet, isolated_contact_report(carpet, 2)),
                    PreconditionFailed);
    ValidatedSystem tri = load("folded-triangle");
    CHECK_THROWS_AS(check_even_j(tri, isolated_contact_report(tri, 2)), PreconditionFailed);
    ValidatedSystem fsq = load("folded-square");
    CHECK_THROWS_AS(check_even_j(fsq, isolated_contact_report(fsq, 2)), PreconditionFailed);

    // The hexagonal example: every gluing uses an odd index, so cutting the
    // odd class disconnects everything while cutting the even class leaves
    // the level connected with an all-odd trace.  The even class is then a
    // fixed point of the set family map and the criterion is inconclusive.
    ValidatedSystem hexa = load("hexa-d3");
    PartialVerdict v = check_even_j(hexa, isolated_contact_report(hexa, 2));
    CHECK_FALSE(v.applies);
    REQUIRE(v.families.size() == 2);
    CHECK(v.families[0] == std::vector<SubsetZJ>{mask({0, 2, 4})});
    SubsetZJ all = full_subset(6);
    std::vector<SubsetZJ> expected_odd = {all & ~mask({4}), all & ~mask({2}),
                                          all & ~mask({0}), all};
    std::sort(expected_odd.begin(), expected_odd.end());
    CHECK(v.families[1] == expected_odd);
}

TEST_CASE("trivial-group orbit criterion") {
    ValidatedSystem carpet = load("carpet");
    CHECK_THROWS_AS(check_trivial_g(carpet, isolated_contact_report(carpet, 2)),
                    PreconditionFailed);

    // The filled square keeps both diagonal directions glued forever: the
    // diagonal pair of indices is a fixed point, so no formulation of the
    // stopping condition holds.
    ValidatedSystem fsq = load("folded-square");
    PartialVerdict v = check_trivial_g(fsq, isolated_contact_report(fsq, 2));
    CHECK_FALSE(v.applies);
    CHECK(v.orbits.size() == b_high(4).size());
    bool diag_fixed = false;
    for (const FPartialOrbit& o : v.orbits) {
        CHECK(o.cycled);
        if (o.seed == mask({0, 2})) diag_fixed = o.seed_recurs;
    }
    CHECK(diag_fixed);
}

TEST_CASE("dispatch priority and verdicts") {
    Verdict tri = theorem_dispatch(load("folded-triangle"));
    CHECK(tri.status == Verdict::Status::ConductivelyHomogeneous);
    CHECK(tri.theorem == "J3");
    CHECK(tri.m_j == 4);

    Verdict carpet = theorem_dispatch(load("carpet"));
    CHECK(carpet.status == Verdict::Status::ConductivelyHomogeneous);
    CHECK(carpet.theorem == "ZJ_transitive");
    CHECK(carpet.m_j == 2);
    CHECK(carpet.contact.verdict == ContactPointReport::Verdict::NoneExist);

    Verdict hexa = theorem_dispatch(load("hexa-d3"));
    CHECK(hexa.status == Verdict::Status::ConductivelyHomogeneous);
    CHECK(hexa.theorem == "essential_transitive");
    CHECK(hexa.m_j == 4);

    Verdict fsq = theorem_dispatch(load("folded-square"));
    CHECK(fsq.status == Verdict::Status::Inconclusive);
    CHECK(fsq.theorem == "none");
    // All five sub-reports are attached, none applicable.
    CHECK(fsq.reports.size() == 5);
    for (const PartialVerdict& r : fsq.reports) CHECK_FALSE(r.applies);

    // Exactly one success is recorded as the deciding criterion; dispatch is
    // deterministic.
    Verdict again = theorem_dispatch(load("hexa-d3"));
    CHECK(again.theorem == hexa.theorem);
    CHECK(again.reports.size() == hexa.reports.size());
}
