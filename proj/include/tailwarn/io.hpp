#pragma once

// CSV output with round-trip number formatting, and series input.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "tailwarn/config.hpp"
#include "tailwarn/density.hpp"
#include "tailwarn/error.hpp"
#include "tailwarn/experiments.hpp"
#include "tailwarn/simulate.hpp"

namespace tailwarn {

/// 17 significant digits; NaN is written as "nan" and infinities as "inf"/"-inf".
inline std::string format_real(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// Minimal CSV writer; fields containing separators or quotes are quoted.
class CsvWriter {
public:
    explicit CsvWriter(std::ostream& os) : os_(os) {}

    CsvWriter& field(std::string_view s) {
        sep();
        if (s.find_first_of(",\"\n") == std::string_view::npos) {
            os_ << s;
        } else {
            os_ << '"';
            for (char ch : s) os_ << (ch == '"' ? "\"\"" : std::string(1, ch));
            os_ << '"';
        }
        return *this;
    }
    CsvWriter& field(double v) { return field(std::string_view(format_real(v))); }
    CsvWriter& field(std::size_t v) { return field(std::string_view(std::to_string(v))); }
    CsvWriter& field(bool v) { return field(std::string_view(v ? "true" : "false")); }
    CsvWriter& field(const char* s) { return field(std::string_view(s)); }
    CsvWriter& field(const std::string& s) { return field(std::string_view(s)); }

    void end_row() {
        os_ << '\n';
        first_ = true;
    }

    template <class... T>
    void row(const T&... fields) {
        (field(fields), ...);
        end_row();
    }

private:
    void sep() {
        if (!first_) os_ << ',';
        first_ = false;
    }
    std::ostream& os_;
    bool first_ = true;
};

inline constexpr std::string_view kEstimateColumns[] = {"a", "lambda_true", "method", "boundary_mode", "n", "b",
                                                        "q", "realization", "lambda_hat", "abs_error", "status"};

inline void write_estimates_header(CsvWriter& w) {
    for (auto c : kEstimateColumns) w.field(c);
    w.end_row();
}

inline void write_estimate(CsvWriter& w, const EstimateRow& r) {
    w.row(r.a, r.lambda_true, std::string(method_name(r.method)), std::string(boundary_name(r.boundary)), r.n, r.b,
          r.q, r.realization, r.lambda_hat, r.abs_error, r.status);
}

inline void write_estimates_csv(std::ostream& os, std::span<const EstimateRow> rows) {
    CsvWriter w(os);
    write_estimates_header(w);
    for (const auto& r : rows) write_estimate(w, r);
}

inline void write_summary_csv(std::ostream& os, std::span<const CellSummary> cells) {
    CsvWriter w(os);
    w.row("a", "lambda_true", "method", "boundary_mode", "realizations", "failures", "mean", "q1", "median", "q3",
          "whisker_low", "whisker_high", "outliers", "mean_abs_error");
    for (const auto& c : cells)
        w.row(c.a, c.lambda_true, std::string(method_name(c.method)), std::string(boundary_name(c.boundary)),
              c.realizations, c.failures, c.estimate.mean, c.estimate.q1, c.estimate.median, c.estimate.q3,
              c.estimate.whisker_low, c.estimate.whisker_high, c.estimate.outliers, c.mean_abs_error);
}

inline void write_density_csv(std::ostream& os, const UlamDensity& u) {
    CsvWriter w(os);
    w.row("bin_index", "left_edge", "midpoint", "height");
    for (std::size_t i = 0; i < u.bins(); ++i)
        w.row(i, u.x_minus + static_cast<double>(i) * u.delta(), u.midpoint(i), u.heights[i]);
}

inline void write_series_csv(std::ostream& os, std::span<const double> v) {
    CsvWriter w(os);
    w.row("t", "y");
    for (std::size_t t = 0; t < v.size(); ++t) w.row(t, v[t]);
}

inline void write_sweep_csv(std::ostream& os, const SweepResult& r) {
    CsvWriter w(os);
    w.row("a", "y0", "final_value", "variance", "tipped", "tip_index");
    for (const auto& rec : r.records)
        w.row(rec.a, rec.y0, rec.final_value, rec.variance, rec.tipped(),
              rec.tip_index ? std::to_string(*rec.tip_index) : std::string());
}

inline void write_variance_csv(std::ostream& os, const VarianceDemoResult& r) {
    CsvWriter w(os);
    w.row("a", "realization", "variance", "tipped", "method", "lambda_true", "lambda_hat", "abs_error", "status");
    for (const auto& row : r.rows)
        for (const auto& e : row.estimates)
            w.row(row.a, row.realization, row.variance, row.tipped, std::string(method_name(e.method)),
                  e.lambda_true, e.lambda_hat, e.abs_error, e.status);
}

inline void write_variance_summary_csv(std::ostream& os, const VarianceDemoResult& r,
                                       std::span<const Method> methods) {
    CsvWriter w(os);
    w.field("a");
    w.field("lambda_true");
    w.field("mean_variance");
    for (auto m : methods) w.field("mean_lambda_hat_" + std::string(method_name(m)));
    w.field("tipped");
    w.end_row();
    for (const auto& s : r.summary) {
        w.field(s.a);
        w.field(s.lambda_true);
        w.field(s.mean_variance);
        for (double v : s.mean_lambda_hat) w.field(v);
        w.field(s.tipped);
        w.end_row();
    }
}

inline void write_tipping_csv(std::ostream& os, const VarianceDemoResult& r) {
    CsvWriter w(os);
    w.row("realization", "tipping_parameter");
    for (std::size_t i = 0; i < r.tipping_parameter.size(); ++i) w.row(i, r.tipping_parameter[i]);
}

inline void write_rmse_csv(std::ostream& os, std::span<const RmseRow> table) {
    CsvWriter w(os);
    w.row("b", "q", "method", "boundary_mode", "rmse", "used", "skipped");
    for (const auto& t : table)
        w.row(t.b, t.q, std::string(method_name(t.method)), std::string(boundary_name(t.boundary)), t.rmse, t.used,
              t.skipped);
}

inline void write_boundary_csv(std::ostream& os, std::span<const BoundaryRow> rows) {
    CsvWriter w(os);
    w.row("lambda_true", "a", "method", "realization", "boundary_offset", "estimate_gap", "status");
    for (const auto& r : rows)
        w.row(r.lambda_true, r.a, std::string(method_name(r.method)), r.realization, r.offset, r.gap, r.status);
}

inline void write_boundary_slopes_csv(std::ostream& os, const BoundaryStudyResult& r) {
    CsvWriter w(os);
    w.row("lambda_true", "a", "method", "mean_slope", "pooled_slope", "realizations_used");
    for (const auto& s : r.slopes)
        w.row(s.lambda_true, s.a, std::string(method_name(s.method)), s.mean_slope, s.pooled_slope,
              s.realizations_used);
}

/// Reads a series: one value per line, or CSV whose last column is the value.
/// Blank lines, `#` comments and non-numeric header lines are skipped.
inline std::vector<double> read_series(std::istream& in) {
    std::vector<double> v;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const auto comma = line.rfind(',');
        const std::string cell = config_detail::trim(comma == std::string::npos ? line : line.substr(comma + 1));
        if (cell.empty()) continue;
        double x = 0.0;
        const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), x);
        if (ec != std::errc() || ptr != cell.data() + cell.size()) {
            if (v.empty()) continue;  // header
            detail::fail("cli", Errc::Io, "non-numeric value on line " + std::to_string(line_no));
        }
        v.push_back(x);
    }
    return v;
}

inline std::vector<double> read_series_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) detail::fail("cli", Errc::Io, "cannot open " + path);
    return read_series(in);
}

}  // namespace tailwarn
