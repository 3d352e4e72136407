#include "steig/reports.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace steig {

std::string format_report_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.16e", v);
    return buf;
}

void write_report_csv(std::ostream& out, const std::vector<ReportRow>& rows, bool with_method) {
    out << "index,alpha,beta,lambda,rel_res,best_res,negative,shift_dist,shift_dist_sym";
    if (with_method) out << ",method";
    out << "\n";
    for (const ReportRow& r : rows) {
        out << r.index << ',' << format_report_double(r.alpha) << ','
            << format_report_double(r.beta) << ',' << format_report_double(r.lambda) << ','
            << format_report_double(r.rel_res) << ',';
        if (r.best_res) out << format_report_double(std::max(*r.best_res, kBestResFloor));
        out << ',' << (r.negative ? 1 : 0) << ',';
        if (r.shift_dist) out << format_report_double(*r.shift_dist);
        out << ',';
        if (r.shift_dist_sym) out << format_report_double(*r.shift_dist_sym);
        if (with_method) out << ',' << r.method;
        out << "\n";
    }
}

} // namespace steig
