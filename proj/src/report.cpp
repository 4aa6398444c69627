#include "polyfract/report.hpp"

namespace polyfract {

using nlohmann::json;

namespace {

json check_json(const AxiomReport::Check& c) {
    return json{{"pass", c.pass}, {"witnesses", c.witnesses}};
}

const char* verdict_status_name(Verdict::Status s) {
    return s == Verdict::Status::ConductivelyHomogeneous ? "conductively_homogeneous"
                                                         : "inconclusive";
}

const char* contact_verdict_name(ContactPointReport::Verdict v) {
    switch (v) {
        case ContactPointReport::Verdict::NoneExist: return "none_exist";
        case ContactPointReport::Verdict::Exists: return "exists";
        default: return "unknown";
    }
}

}  // namespace

json axiom_report_json(const AxiomReport& report) {
    return json{{"a1", check_json(report.a1)}, {"a2", check_json(report.a2)},
                {"a3", check_json(report.a3)}, {"a4", check_json(report.a4)},
                {"a5", check_json(report.a5)}, {"all_pass", report.all_pass()}};
}

json system_summary_json(const SystemDescription& desc) {
    json cells = json::array();
    for (const auto& c : desc.cells)
        cells.push_back(json{{"id", c.id},
                             {"phi_half_turns", c.phi_half_turns},
                             {"phi_conj", c.phi_conj},
                             {"center", c.center_expr}});
    json group{{"kind", desc.group.kind}};
    if (desc.group.kind == "rot" || desc.group.kind == "dihedral" ||
        desc.group.kind == "dihedral_v")
        group["k"] = desc.group.k;
    if (desc.group.kind == "explicit") {
        json elems = json::array();
        for (const auto& [half_turns, conj] : desc.group.elements)
            elems.push_back(json{{"half_turns", half_turns}, {"conj", conj}});
        group["elements"] = elems;
    }
    return json{{"J", desc.J}, {"ratio", desc.r_expr}, {"group", group}, {"cells", cells}};
}

json contact_report_json(const ContactPointReport& report) {
    return json{{"verdict", contact_verdict_name(report.verdict)},
                {"detail", report.detail},
                {"criterion_available", report.criterion_available},
                {"nic1", report.nic1},
                {"nic2", report.nic2},
                {"nic1_points", report.nic1_points},
                {"nic2_witnesses", report.nic2_witnesses},
                {"oracle_depth", report.oracle_depth},
                {"oracle_found", report.oracle_found},
                {"oracle_witness", report.oracle_witness}};
}

json verdict_json(const Verdict& verdict) {
    json reports = json::array();
    for (const PartialVerdict& pv : verdict.reports) {
        json prereqs = json::array();
        for (const PrereqCheck& pc : pv.prerequisites)
            prereqs.push_back(
                json{{"name", pc.name}, {"passed", pc.passed}, {"detail", pc.detail}});
        json entry{{"theorem", pv.theorem},
                   {"applies", pv.applies},
                   {"prerequisites", prereqs},
                   {"details", pv.details}};
        if (!pv.families.empty()) {
            json fams = json::array();
            for (const auto& fam : pv.families) {
                json f = json::array();
                for (SubsetZJ X : fam) f.push_back(static_cast<unsigned>(X));
                fams.push_back(f);
            }
            entry["families"] = fams;
        }
        if (!pv.orbits.empty()) {
            json orbits = json::array();
            for (const FPartialOrbit& o : pv.orbits) {
                json fams = json::array();
                for (const auto& fam : o.families) {
                    json f = json::array();
                    for (SubsetZJ X : fam) f.push_back(static_cast<unsigned>(X));
                    fams.push_back(f);
                }
                orbits.push_back(json{{"seed", static_cast<unsigned>(o.seed)},
                                      {"families", fams},
                                      {"reached_empty", o.reached_empty},
                                      {"entered_low", o.entered_low},
                                      {"seed_recurs", o.seed_recurs},
                                      {"cycled", o.cycled}});
            }
            entry["orbits"] = orbits;
        }
        reports.push_back(entry);
    }
    return json{{"status", verdict_status_name(verdict.status)},
                {"theorem", verdict.theorem},
                {"m_j", verdict.m_j},
                {"contact", contact_report_json(verdict.contact)},
                {"reports", reports}};
}

json scaling_estimate_json(const std::string& system_name, const ScalingEstimate& est) {
    return json{{"system", system_name},
                {"p", est.p},
                {"M", est.M},
                {"base_level", est.base_level},
                {"values", est.values},
                {"ratios", est.ratios},
                {"roots", est.roots},
                {"approximate", true}};
}

json analysis_report_json(const std::string& system_name, const SystemDescription& desc,
                          const ValidatedSystem& sys, const AxiomReport& axioms,
                          const Verdict& verdict, bool deterministic, double elapsed_ms) {
    json j{{"schema_version", kReportSchemaVersion},
           {"system", json{{"name", system_name}, {"summary", system_summary_json(desc)}}},
           {"axioms", axiom_report_json(axioms)},
           {"essential_boundary", subset_to_string(essential_boundary(sys), sys.J)},
           {"contact", contact_report_json(verdict.contact)},
           {"verdict", verdict_json(verdict)}};
    if (!deterministic) j["timing_ms"] = elapsed_ms;
    return j;
}

json error_object_json(const std::string& kind, const std::string& message, int exit_code) {
    return json{{"error", json{{"kind", kind}, {"message", message}, {"exit_code", exit_code}}}};
}

std::string report_to_string(const json& j) { return j.dump(2) + "\n"; }

}  // namespace polyfract
