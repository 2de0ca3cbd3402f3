#pragma once

#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace tfdiff {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Experimental order of convergence between two rows:
/// log(err_prev/err) / log(h_prev/h).
inline double eoc(double err_prev, double err, double h_prev, double h) {
    return std::log(err_prev / err) / std::log(h_prev / h);
}

/// Round to the 4 decimals used in the emitted tables, so that reports
/// round-trip bit-exactly through their CSV form.
inline double round_order(double order) {
    return std::round(order * 1e4) / 1e4;
}

/// One study: rows of (h, tau, L2 error, observed order) sorted by
/// decreasing h (or tau for temporal studies), plus the full configuration
/// as ordered key=value metadata.
struct ConvergenceReport {
    struct Row {
        double h;
        double tau;
        double l2_error;
        std::optional<double> order; // first row has none
        bool operator==(const Row&) const = default;
    };
    std::vector<std::pair<std::string, std::string>> metadata;
    std::vector<Row> rows;

    void set_meta(const std::string& key, const std::string& value) {
        for (auto& kv : metadata)
            if (kv.first == key) {
                kv.second = value;
                return;
            }
        metadata.emplace_back(key, value);
    }
    std::string meta(const std::string& key) const {
        for (const auto& kv : metadata)
            if (kv.first == key) return kv.second;
        return {};
    }

    /// Append a row, deriving the observed order from the previous row of
    /// the study (using the ratio of the chosen refinement parameter).
    void add_row(double h, double tau, double err, bool temporal) {
        Row row{h, tau, err, std::nullopt};
        if (!rows.empty()) {
            const Row& prev = rows.back();
            const double r_prev = temporal ? prev.tau : prev.h;
            const double r_cur = temporal ? tau : h;
            if (err > 0.0 && prev.l2_error > 0.0)
                row.order = round_order(eoc(prev.l2_error, err, r_prev, r_cur));
        }
        rows.push_back(row);
    }

    bool operator==(const ConvergenceReport& o) const = default;
};

inline std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// Schema: `# key=value` metadata block, a `h,tau,l2_error,order` header,
/// then one row per mesh; the order field is empty on the first row and
/// carries 4 decimals elsewhere.
inline void write_report_csv(std::ostream& os, const ConvergenceReport& report) {
    for (const auto& [k, v] : report.metadata) os << "# " << k << "=" << v << "\n";
    os << "h,tau,l2_error,order\n";
    for (const auto& row : report.rows) {
        os << format_g17(row.h) << "," << format_g17(row.tau) << ","
           << format_g17(row.l2_error) << ",";
        if (row.order) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.4f", *row.order);
            os << buf;
        }
        os << "\n";
    }
}

inline ConvergenceReport parse_report_csv(std::istream& is) {
    ConvergenceReport report;
    std::string line;
    bool header_seen = false;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line.rfind("# ", 0) == 0) {
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw ConfigError("report metadata line without '=': " + line);
            report.metadata.emplace_back(line.substr(2, eq - 2), line.substr(eq + 1));
            continue;
        }
        if (!header_seen) {
            if (line != "h,tau,l2_error,order")
                throw ConfigError("unexpected report header: " + line);
            header_seen = true;
            continue;
        }
        std::istringstream ss(line);
        std::string field;
        ConvergenceReport::Row row{};
        std::getline(ss, field, ',');
        row.h = std::stod(field);
        std::getline(ss, field, ',');
        row.tau = std::stod(field);
        std::getline(ss, field, ',');
        row.l2_error = std::stod(field);
        if (std::getline(ss, field, ',') && !field.empty()) row.order = std::stod(field);
        report.rows.push_back(row);
    }
    if (!header_seen) throw ConfigError("report CSV missing header row");
    return report;
}

} // namespace tfdiff
