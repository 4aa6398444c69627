#pragma once

#include <string>

#include "json.hpp"
#include "polyfract/boundary.hpp"
#include "polyfract/conditions.hpp"
#include "polyfract/energy.hpp"
#include "polyfract/system.hpp"

namespace polyfract {

inline constexpr const char* kReportSchemaVersion = "1";

nlohmann::json axiom_report_json(const AxiomReport& report);
nlohmann::json system_summary_json(const SystemDescription& desc);
nlohmann::json contact_report_json(const ContactPointReport& report);
nlohmann::json verdict_json(const Verdict& verdict);
nlohmann::json scaling_estimate_json(const std::string& system_name, const ScalingEstimate& est);

/// Full analysis report (schema_version "1"): system summary, axiom report,
/// essential boundary, contact report, verdict, and (unless `deterministic`)
/// wall-clock timing in milliseconds.
nlohmann::json analysis_report_json(const std::string& system_name, const SystemDescription& desc,
                                    const ValidatedSystem& sys, const AxiomReport& axioms,
                                    const Verdict& verdict, bool deterministic,
                                    double elapsed_ms);

/// Machine-readable error object emitted on stderr by the CLI under --json.
nlohmann::json error_object_json(const std::string& kind, const std::string& message,
                                 int exit_code);

/// Serialization with a stable layout (2-space indent, sorted keys are not
/// needed since insertion order is fixed) and a trailing newline.
std::string report_to_string(const nlohmann::json& j);

}  // namespace polyfract
