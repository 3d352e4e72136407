#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace steig {

// One CSV row per finite-rank eigenpair, sorted by lambda ascending.
// best_res is floored at 1e-25 when present; shift_dist = |1 - lambda/sigma|
// and shift_dist_sym = |(1 - lambda/sigma)(1 - sigma/lambda)| are emitted so
// residual curves can be overlaid on reports.
struct ReportRow {
    int index = 0;
    double alpha = 0.0;
    double beta = 0.0;
    double lambda = 0.0;
    double rel_res = 0.0;
    std::optional<double> best_res;
    bool negative = false;
    std::optional<double> shift_dist;
    std::optional<double> shift_dist_sym;
    std::string method; // only used when the method column is requested
};

inline constexpr double kBestResFloor = 1e-25;

// Fixed 17-significant-digit scientific notation; byte-identical output for
// identical inputs.
void write_report_csv(std::ostream& out, const std::vector<ReportRow>& rows, bool with_method);

std::string format_report_double(double v);

} // namespace steig
