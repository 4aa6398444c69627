#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "polyfract/boundary.hpp"
#include "polyfract/conditions.hpp"
#include "polyfract/energy.hpp"
#include "polyfract/errors.hpp"
#include "polyfract/fixtures.hpp"
#include "polyfract/paths.hpp"
#include "polyfract/render.hpp"
#include "polyfract/report.hpp"
#include "polyfract/system.hpp"

namespace {

using nlohmann::json;
using namespace polyfract;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;
constexpr int kExitComputation = 3;

/// Input resolution: an existing file wins; otherwise builtin fixture names
/// are accepted directly.
struct Input {
    std::string name;
    std::string text;
};

Input load_input(const std::string& arg) {
    std::ifstream in(arg, std::ios::binary);
    if (in) {
        std::ostringstream buf;
        buf << in.rdbuf();
        std::string base = arg;
        if (auto slash = base.find_last_of('/'); slash != std::string::npos)
            base = base.substr(slash + 1);
        if (base.size() > 5 && base.substr(base.size() - 5) == ".toml")
            base = base.substr(0, base.size() - 5);
        return {base, buf.str()};
    }
    for (const std::string& name : fixture_names())
        if (name == arg) return {name, fixture_text(name)};
    throw UsageError("cannot read '" + arg + "' (not a file or builtin example)");
}

void write_output(const std::string& path, const std::string& content) {
    if (path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot open '" + path + "' for writing");
    out << content;
}

int classify_error(const Error& e) {
    const std::string& c = e.code();
    if (c == "UsageError" || c == "BadBracket" || c == "BadExponent" || c == "BadLevel" ||
        c == "BadIndices" || c == "OutOfRange" || c == "TooLarge")
        return kExitUsage;
    if (c == "SyntaxError" || c == "UnknownSymbol" || c == "UnknownGroupKind" ||
        c == "DuplicateCellId" || c == "EmptyCells" || c == "NotValidated" ||
        c == "JTooSmall" || c == "NotInDJ" || c == "NotInDJStar" || c == "BadGroup")
        return kExitValidation;
    return kExitComputation;
}

struct Options {
    bool json_errors = false;    // any --json option was given
    bool deterministic = false;  // exclude wall-clock data from reports
    int workers = 0;             // 0 = available parallelism
};

int effective_workers(const Options& opt) {
    if (opt.workers > 0) return opt.workers;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void print_axioms(const AxiomReport& report) {
    const AxiomReport::Check* checks[] = {&report.a1, &report.a2, &report.a3, &report.a4,
                                          &report.a5};
    for (int i = 0; i < 5; ++i) {
        std::cout << "A" << (i + 1) << ": " << (checks[i]->pass ? "pass" : "FAIL") << "\n";
        for (const std::string& w : checks[i]->witnesses) std::cout << "  " << w << "\n";
    }
    std::cout << "validation: " << (report.all_pass() ? "pass" : "fail") << "\n";
}

int cmd_validate(const std::string& file, const std::string& json_path) {
    Input in = load_input(file);
    SystemDescription desc = load_system(in.text);
    ValidationResult result = validate(desc);
    if (!json_path.empty()) {
        json j{{"schema_version", kReportSchemaVersion},
               {"system", json{{"name", in.name}, {"summary", system_summary_json(desc)}}},
               {"axioms", axiom_report_json(result.report)}};
        write_output(json_path, report_to_string(j));
    } else {
        print_axioms(result.report);
    }
    return result.ok() ? kExitOk : kExitValidation;
}

int cmd_analyze(const std::string& file, int max_level, const std::string& json_path,
                const Options& opt) {
    Input in = load_input(file);
    SystemDescription desc = load_system(in.text);
    auto t0 = std::chrono::steady_clock::now();
    ValidationResult result = validate(desc);
    if (!result.ok()) {
        if (!json_path.empty()) {
            json j{{"schema_version", kReportSchemaVersion},
                   {"system", json{{"name", in.name}, {"summary", system_summary_json(desc)}}},
                   {"axioms", axiom_report_json(result.report)}};
            write_output(json_path, report_to_string(j));
        } else {
            print_axioms(result.report);
        }
        return kExitValidation;
    }
    const ValidatedSystem& sys = *result.system;
    Verdict verdict = theorem_dispatch(sys, max_level);
    double elapsed_ms = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - t0)
                            .count();
    if (!json_path.empty()) {
        json j = analysis_report_json(in.name, desc, sys, result.report, verdict,
                                      opt.deterministic, elapsed_ms);
        write_output(json_path, report_to_string(j));
    } else {
        std::cout << "system: " << in.name << " (J=" << sys.J << ", " << sys.cell_count()
                  << " cells)\n";
        std::cout << "essential boundary: " << subset_to_string(essential_boundary(sys), sys.J)
                  << "\n";
        std::cout << "isolated contact points: ";
        switch (verdict.contact.verdict) {
            case ContactPointReport::Verdict::NoneExist: std::cout << "none_exist"; break;
            case ContactPointReport::Verdict::Exists: std::cout << "exists"; break;
            default: std::cout << "unknown"; break;
        }
        std::cout << " (" << verdict.contact.detail << ")\n";
        std::cout << "verdict: "
                  << (verdict.status == Verdict::Status::ConductivelyHomogeneous
                          ? "conductively_homogeneous"
                          : "inconclusive")
                  << " (theorem: " << verdict.theorem << ", m_J=" << verdict.m_j << ")\n";
    }
    return kExitOk;
}

int cmd_energy(const std::string& file, double p, int M, int m_max, const std::string& csv_path,
               const std::string& json_path, const Options& opt) {
    Input in = load_input(file);
    ValidatedSystem sys = validate_or_throw(load_system(in.text));
    GraphCache cache(sys);
    ScalingEstimate est = scaling_estimate(cache, p, M, m_max, effective_workers(opt));
    std::cout << "system: " << in.name << "  p=" << p << "  M=" << M
              << "  base_level=" << est.base_level << "\n";
    std::cout << "m\tE(m)\tratio\troot\n";
    char line[160];
    for (std::size_t i = 0; i < est.values.size(); ++i) {
        if (i == 0)
            std::snprintf(line, sizeof line, "%zu\t%.6g\t-\t%.6g\n", i + 1, est.values[i],
                          est.roots[i]);
        else
            std::snprintf(line, sizeof line, "%zu\t%.6g\t%.6g\t%.6g\n", i + 1, est.values[i],
                          est.ratios[i - 1], est.roots[i]);
        std::cout << line;
    }
    if (!est.ratios.empty())
        std::cout << "lambda estimate (last ratio): " << est.ratios.back()
                  << "  [finite-level estimate]\n";
    if (!csv_path.empty()) {
        std::vector<EnergyCsvRow> rows;
        for (std::size_t i = 0; i < est.values.size(); ++i)
            rows.push_back({in.name, p, M, static_cast<int>(i) + 1, "conductance",
                            est.values[i], 0, 0.0});
        for (std::size_t i = 0; i < est.ratios.size(); ++i)
            rows.push_back({in.name, p, M, static_cast<int>(i) + 2, "ratio", est.ratios[i], 0,
                            0.0});
        for (std::size_t i = 0; i < est.roots.size(); ++i)
            rows.push_back({in.name, p, M, static_cast<int>(i) + 1, "root", est.roots[i], 0,
                            0.0});
        write_output(csv_path, energy_csv(rows));
    }
    if (!json_path.empty())
        write_output(json_path, report_to_string(scaling_estimate_json(in.name, est)));
    return kExitOk;
}

int cmd_dimar(const std::string& file, double p_lo, double p_hi, double tol, int M, int m_max,
              const Options& opt) {
    (void)opt;
    Input in = load_input(file);
    ValidatedSystem sys = validate_or_throw(load_system(in.text));
    GraphCache cache(sys);
    auto [lo, hi] = dimar_bracket(cache, p_lo, p_hi, tol, M, m_max);
    char line[160];
    std::snprintf(line, sizeof line,
                  "dim_AR bracket: [%.6g, %.6g]  (finite-level estimate, tol=%.3g)\n", lo, hi,
                  tol);
    std::cout << line;
    return kExitOk;
}

RenderSpec parse_overlay(const std::string& overlay, int J) {
    RenderSpec spec;
    if (overlay.empty() || overlay == "none") {
        spec.overlay = OverlayKind::None;
    } else if (overlay == "essential_edges") {
        spec.overlay = OverlayKind::EssentialEdges;
    } else if (overlay == "phi_parity_fill") {
        spec.overlay = OverlayKind::PhiParityFill;
    } else if (overlay.rfind("components", 0) == 0) {
        spec.overlay = OverlayKind::Components;
        spec.component_cut = 0;
        if (overlay.size() > 10) {
            if (overlay[10] != ':')
                throw UsageError("overlay syntax: components[:i,j,...]");
            std::stringstream ss(overlay.substr(11));
            std::string tok;
            while (std::getline(ss, tok, ',')) {
                int i = 0;
                try {
                    i = std::stoi(tok);
                } catch (const std::exception&) {
                    throw UsageError("overlay components: bad index '" + tok + "'");
                }
                if (i < 0 || i >= J)
                    throw UsageError("overlay components: index out of Z_J range");
                spec.component_cut |= (SubsetZJ{1} << i);
            }
        }
    } else {
        throw UsageError("unknown overlay '" + overlay +
                         "' (none|essential_edges|components[:ARG]|phi_parity_fill)");
    }
    return spec;
}

int cmd_render(const std::string& file, int level, const std::string& overlay,
               const std::string& out_path) {
    Input in = load_input(file);
    ValidatedSystem sys = validate_or_throw(load_system(in.text));
    RenderSpec spec = parse_overlay(overlay, sys.J);
    spec.level = level;
    write_output(out_path, render_svg(sys, spec));
    return kExitOk;
}

int cmd_examples(const std::string& action, const std::string& name, const std::string& path) {
    if (action == "list") {
        for (const std::string& n : fixture_names()) std::cout << n << "\n";
        return kExitOk;
    }
    if (action == "show") {
        std::cout << fixture_text(name);
        return kExitOk;
    }
    if (action == "write") {
        write_output(path, fixture_text(name));
        return kExitOk;
    }
    throw UsageError("examples action must be list, show, or write");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Self-similar polygonal fractal analyzer"};
    app.require_subcommand(1);
    // Let global flags (--deterministic, --workers) appear after a subcommand.
    app.fallthrough();

    Options opt;
    app.add_flag("--deterministic", opt.deterministic,
                 "Exclude wall-clock data from reports (byte-stable output)");
    app.add_option("--workers", opt.workers, "Worker thread count (default: all cores)");

    std::string file, json_path, csv_path, out_path, overlay, ex_action, ex_name, ex_path;
    int max_level = 2, M = 1, m_max = 3, level = 1;
    double p = 2.0, p_lo = 0.0, p_hi = 0.0, tol = 0.1;

    auto* validate_cmd = app.add_subcommand("validate", "Check the axioms of a system file");
    validate_cmd->add_option("FILE", file, "System description file or builtin example name")
        ->required();
    validate_cmd->add_option("--json", json_path, "Write the JSON report to PATH ('-' = stdout)");

    auto* analyze_cmd =
        app.add_subcommand("analyze", "Full combinatorial report and homogeneity verdict");
    analyze_cmd->add_option("FILE", file)->required();
    analyze_cmd->add_option("--max-level", max_level,
                            "Direct-search depth for the contact-point oracle");
    analyze_cmd->add_option("--json", json_path, "Write the JSON report to PATH ('-' = stdout)");

    auto* energy_cmd = app.add_subcommand("energy", "Conductance scaling tables");
    energy_cmd->add_option("FILE", file)->required();
    energy_cmd->add_option("--p", p, "Energy exponent (> 1)")->required();
    energy_cmd->add_option("--M", M, "Neighborhood ball radius");
    energy_cmd->add_option("--m-max", m_max, "Deepest refinement level");
    energy_cmd->add_option("--csv", csv_path, "Write measurement rows to PATH ('-' = stdout)");
    energy_cmd->add_option("--json", json_path, "Write the JSON table to PATH ('-' = stdout)");

    auto* dimar_cmd =
        app.add_subcommand("dimar", "Bracket the conformal-dimension exponent crossing");
    dimar_cmd->add_option("FILE", file)->required();
    dimar_cmd->add_option("--p-lo", p_lo, "Lower exponent (ratio above 1)")->required();
    dimar_cmd->add_option("--p-hi", p_hi, "Upper exponent (ratio below 1)")->required();
    dimar_cmd->add_option("--tol", tol, "Bracket width target");
    dimar_cmd->add_option("--M", M, "Neighborhood ball radius");
    dimar_cmd->add_option("--m-max", m_max, "Deepest refinement level");

    auto* render_cmd = app.add_subcommand("render", "Write an SVG picture of a generation");
    render_cmd->add_option("FILE", file)->required();
    render_cmd->add_option("--level", level, "Generation to draw")->required();
    render_cmd->add_option("--overlay", overlay,
                           "none | essential_edges | components[:i,j,...] | phi_parity_fill");
    render_cmd->add_option("--out", out_path, "Output path ('-' = stdout)")->required();

    auto* examples_cmd = app.add_subcommand("examples", "Builtin example systems");
    examples_cmd->add_option("ACTION", ex_action, "list | show NAME | write NAME PATH")
        ->required();
    examples_cmd->add_option("NAME", ex_name, "Example name");
    examples_cmd->add_option("PATH", ex_path, "Destination file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
        app.exit(e);
        return kExitUsage;
    }

    opt.json_errors = !json_path.empty();
    try {
        if (validate_cmd->parsed()) return cmd_validate(file, json_path);
        if (analyze_cmd->parsed()) return cmd_analyze(file, max_level, json_path, opt);
        if (energy_cmd->parsed())
            return cmd_energy(file, p, M, m_max, csv_path, json_path, opt);
        if (dimar_cmd->parsed()) return cmd_dimar(file, p_lo, p_hi, tol, M, m_max, opt);
        if (render_cmd->parsed()) return cmd_render(file, level, overlay, out_path);
        if (examples_cmd->parsed()) {
            if ((ex_action == "show" || ex_action == "write") && ex_name.empty())
                throw UsageError("examples " + ex_action + " needs NAME");
            if (ex_action == "write" && ex_path.empty())
                throw UsageError("examples write needs NAME PATH");
            return cmd_examples(ex_action, ex_name, ex_path);
        }
        throw UsageError("no subcommand given");
    } catch (const Error& e) {
        int code = classify_error(e);
        if (opt.json_errors)
            std::cerr << report_to_string(error_object_json(e.code(), e.what(), code));
        else
            std::cerr << "error (" << e.code() << "): " << e.what() << "\n";
        return code;
    } catch (const std::exception& e) {
        if (opt.json_errors)
            std::cerr << report_to_string(
                error_object_json("InternalError", e.what(), kExitComputation));
        else
            std::cerr << "error: " << e.what() << "\n";
        return kExitComputation;
    }
}
