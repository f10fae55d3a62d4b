#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "scatternet/analysis.hpp"

namespace scatternet {

// -----------------------------------------------------------------------------
// Deterministic number formatting
// -----------------------------------------------------------------------------

/// 17 significant digits: enough for a bit-exact binary64 decimal round trip,
/// and byte-stable across runs.
[[nodiscard]] inline std::string format_g17(double x) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

/// RFC-4180 field quoting; only applied when the field needs it.
[[nodiscard]] inline std::string csv_quote(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) {
        return field;
    }
    std::string out = "\"";
    for (const char c : field) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    out += '"';
    return out;
}

// -----------------------------------------------------------------------------
// CSV emission
// -----------------------------------------------------------------------------

inline constexpr const char* kSweepCsvHeader =
    "omega,re_t,im_t,re_r_left,im_r_left,re_r_right,im_r_right,"
    "T,R_left,R_right,eig_ratio,det_residual,flags";

[[nodiscard]] inline std::string sweep_csv(const std::vector<SweepRecord>& records) {
    std::string out(kSweepCsvHeader);
    out += '\n';
    for (const SweepRecord& r : records) {
        out += format_g17(r.omega);
        for (const Complex& z : {r.t, r.r_left, r.r_right}) {
            out += ',' + format_g17(z.real()) + ',' + format_g17(z.imag());
        }
        for (const double x : {r.T, r.R_left, r.R_right, r.eig_ratio, r.det_residual}) {
            out += ',' + format_g17(x);
        }
        out += ',' + csv_quote(r.flags) + '\n';
    }
    return out;
}

// -----------------------------------------------------------------------------
// Report emission (flat JSON, hand-serialized for byte determinism)
// -----------------------------------------------------------------------------

namespace detail {

inline std::string json_string(const std::string& s) {
    std::string out = "\"";
    for (const char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out += c;
        }
    }
    out += '"';
    return out;
}

}  // namespace detail

[[nodiscard]] inline std::string singularities_json(
    const std::vector<SingularityReport>& reports) {
    std::string out = "[\n";
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const SingularityReport& r = reports[i];
        out += "  {\"kind\": ";
        out += r.kind == SingularityKind::lasing ? "\"lasing\"" : "\"cpa\"";
        out += ", \"omega_c\": " + format_g17(r.omega_c);
        out += ", \"residual\": " + format_g17(r.residual);
        out += ", \"bracket\": [" + format_g17(r.bracket_lo) + ", " +
               format_g17(r.bracket_hi) + "]";
        out += std::string(", \"near_miss\": ") + (r.near_miss ? "true" : "false");
        out += i + 1 < reports.size() ? "},\n" : "}\n";
    }
    out += "]\n";
    return out;
}

[[nodiscard]] inline std::string exceptional_points_json(
    const std::vector<ExceptionalPointReport>& reports) {
    const auto mode_name = [](EPMode m) {
        switch (m) {
            case EPMode::single: return "single";
            case EPMode::serial: return "serial";
            default: return "parallel";
        }
    };
    std::string out = "[\n";
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const ExceptionalPointReport& r = reports[i];
        out += "  {\"mode\": " + detail::json_string(mode_name(r.mode));
        out += ", \"omega\": " + format_g17(r.omega);
        out += ", \"condition_residual\": " + format_g17(r.condition_residual);
        out += std::string(", \"branch_sign\": \"") + (r.branch_sign > 0 ? "+" : "-") + "\"";
        out += ", \"ratio_below\": " + format_g17(r.ratio_below);
        out += ", \"ratio_above\": " + format_g17(r.ratio_above);
        out += i + 1 < reports.size() ? "},\n" : "}\n";
    }
    out += "]\n";
    return out;
}

[[nodiscard]] inline std::string atr_json(const ATRScan& scan) {
    std::string out = "{\n  \"resonances\": [\n";
    for (std::size_t i = 0; i < scan.resonances.size(); ++i) {
        const ATRRecord& r = scan.resonances[i];
        out += "    {\"omega\": " + format_g17(r.omega);
        out += std::string(", \"direction\": \"") +
               (r.direction == AtrSide::left ? "left" : "right") + "\"";
        out += ", \"T\": " + format_g17(r.T);
        out += ", \"dead_side_R\": " + format_g17(r.dead_side_R);
        out += i + 1 < scan.resonances.size() ? "},\n" : "}\n";
    }
    out += "  ],\n  \"bidirectional\": [\n";
    for (std::size_t i = 0; i < scan.bidirectional.size(); ++i) {
        const TransparencyPoint& p = scan.bidirectional[i];
        out += "    {\"omega\": " + format_g17(p.omega);
        out += ", \"T\": " + format_g17(p.T);
        out += ", \"R_left\": " + format_g17(p.R_left);
        out += ", \"R_right\": " + format_g17(p.R_right);
        out += i + 1 < scan.bidirectional.size() ? "},\n" : "}\n";
    }
    out += "  ]\n}\n";
    return out;
}

// -----------------------------------------------------------------------------
// File output
// -----------------------------------------------------------------------------

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::error_code ec;
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    out << content;
    if (!out) {
        throw IoError("write failed for " + path.string());
    }
}

}  // namespace scatternet
