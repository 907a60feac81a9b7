#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "hgo/experiments.hpp"

namespace hgo {

enum class ReportFormat { csv, json };

inline ReportFormat parse_report_format(const std::string& s) {
    if (s == "csv") return ReportFormat::csv;
    if (s == "json") return ReportFormat::json;
    throw std::invalid_argument("format must be csv or json, got '" + s + "'");
}

/// Run metadata embedded in JSON reports so a result can be reproduced.
/// Deliberately excludes anything that does not affect the numbers (such
/// as the concurrency level): identical inputs must give identical bytes.
struct ReportMetadata {
    std::uint64_t seed = 0;
    double quad_rel_tol = 0.0;
    long mc_samples = 0;
    std::string omega_convention = "omega_Q = Q * Lebesgue volume of the unit gauge ball";
    std::vector<std::string> notes;
};

namespace detail {

/// Shortest exact decimal form; identical inputs give identical bytes.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace detail

inline std::string sweeps_to_csv(std::span<const RatioSweep> sweeps) {
    std::string out = "experiment,epsilon,ratio,ratio_error,constant,ratio_over_constant\n";
    for (const RatioSweep& sweep : sweeps) {
        for (const RatioSweepRow& row : sweep.rows) {
            const double nan = std::numeric_limits<double>::quiet_NaN();
            const double ratio = row.valid ? row.ratio : nan;
            const double err = row.valid ? row.ratio_error : nan;
            const double over = row.valid ? row.ratio / sweep.constant_value : nan;
            out += sweep.experiment;
            out += ',';
            out += detail::format_double(row.epsilon);
            out += ',';
            out += detail::format_double(ratio);
            out += ',';
            out += detail::format_double(err);
            out += ',';
            out += detail::format_double(sweep.constant_value);
            out += ',';
            out += detail::format_double(over);
            out += '\n';
        }
    }
    return out;
}

inline nlohmann::json metadata_to_json(const ReportMetadata& meta) {
    return {{"seed", meta.seed},
            {"quad_rel_tol", meta.quad_rel_tol},
            {"mc_samples", meta.mc_samples},
            {"omega_convention", meta.omega_convention},
            {"notes", meta.notes}};
}

inline nlohmann::json sweeps_to_json(std::span<const RatioSweep> sweeps,
                                     const ReportMetadata& meta) {
    nlohmann::json experiments = nlohmann::json::array();
    for (const RatioSweep& sweep : sweeps) {
        nlohmann::json rows = nlohmann::json::array();
        for (const RatioSweepRow& row : sweep.rows) {
            nlohmann::json r = {{"epsilon", row.epsilon}, {"valid", row.valid}};
            if (row.valid) {
                r["ratio"] = row.ratio;
                r["ratio_error"] = row.ratio_error;
                r["ratio_over_constant"] = row.ratio / sweep.constant_value;
            } else {
                r["note"] = row.note;
            }
            rows.push_back(std::move(r));
        }
        experiments.push_back({{"experiment", sweep.experiment},
                               {"constant", sweep.constant_value},
                               {"monotone", sweep.monotone},
                               {"extrapolated_limit", sweep.extrapolated_limit},
                               {"rows", std::move(rows)}});
    }
    return {{"metadata", metadata_to_json(meta)}, {"sweeps", std::move(experiments)}};
}

inline nlohmann::json constant_to_json(const SharpConstantReport& report) {
    return {{"name", report.name},
            {"closed_form_value", report.closed_form_value},
            {"quadrature_value", report.quadrature_value},
            {"relative_gap", report.relative_gap},
            {"quoted_convention_value", report.quoted_convention_value},
            {"omega_convention", report.omega_convention},
            {"notes", report.notes}};
}

inline std::string constants_to_csv(std::span<const SharpConstantReport> reports) {
    std::string out = "name,closed_form,quadrature,relative_gap,quoted_convention_value\n";
    for (const SharpConstantReport& r : reports) {
        out += r.name;
        out += ',';
        out += detail::format_double(r.closed_form_value);
        out += ',';
        out += detail::format_double(r.quadrature_value);
        out += ',';
        out += detail::format_double(r.relative_gap);
        out += ',';
        out += detail::format_double(r.quoted_convention_value);
        out += '\n';
    }
    return out;
}

inline nlohmann::json suite_to_json(const SuiteReport& report) {
    nlohmann::json checks = nlohmann::json::array();
    for (const CheckResult& c : report.checks)
        checks.push_back({{"suite", c.suite},
                          {"check", c.name},
                          {"passed", c.passed},
                          {"detail", c.detail}});
    return {{"all_passed", report.all_passed()},
            {"failures", report.failures()},
            {"checks", std::move(checks)}};
}

/// Writes content to the path, creating parent directories. Identical
/// content produces byte-identical files.
inline void write_text_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open output file " + path.string());
    out << content;
    if (!out) throw std::runtime_error("failed writing output file " + path.string());
}

inline void emit_report(std::span<const RatioSweep> sweeps, const ReportMetadata& meta,
                        ReportFormat format, const std::filesystem::path& path) {
    if (format == ReportFormat::csv)
        write_text_file(path, sweeps_to_csv(sweeps));
    else
        write_text_file(path, sweeps_to_json(sweeps, meta).dump(2) + "\n");
}

}  // namespace hgo
