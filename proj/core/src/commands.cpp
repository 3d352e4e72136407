#include "steig/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "steig/matrix_market.hpp"
#include "steig/reports.hpp"
#include "steig/residual.hpp"
#include "steig/spectral.hpp"

namespace steig {

BestResidualMode BestResidualMode::parse(const std::string& text) {
    BestResidualMode m;
    if (text == "none") {
        m.kind = Kind::none;
    } else if (text == "all") {
        m.kind = Kind::all;
    } else if (text.rfind("sample:", 0) == 0) {
        m.kind = Kind::sample;
        try {
            m.sample_count = std::stoi(text.substr(7));
        } catch (const std::exception&) {
            throw std::invalid_argument("bad --best-residuals value: " + text);
        }
        if (m.sample_count <= 0)
            throw std::invalid_argument("--best-residuals sample count must be positive");
    } else {
        throw std::invalid_argument("bad --best-residuals value: " + text);
    }
    return m;
}

SymMatrix modify_mass_matrix(const SymMatrix& b0, const NormOptions& opts) {
    const int n = b0.dim();
    bool nonzero = false;
    for (double v : b0.data())
        if (v != 0.0) {
            nonzero = true;
            break;
        }
    if (!nonzero) throw std::invalid_argument("modify_mass_matrix: B0 is zero");

    const Norm2Estimate nb = norm2_estimate(b0, opts);
    SymMatrix b(n);
    for (int j = 0; j < n; ++j)
        for (int i = j; i < n; ++i) b.set(i, j, b0(i, j));
    for (int k = 1; k <= n; ++k) {
        const double lift = std::exp(-0.02 * double(n - k + 1)) * nb.value;
        b.set(k - 1, k - 1, b0(k - 1, k - 1) + lift);
    }
    return b;
}

namespace {

// Indices (into a lambda-sorted row list) that get a best-possible residual.
std::set<int> best_res_selection(const BestResidualMode& mode, int count) {
    std::set<int> out;
    if (mode.kind == BestResidualMode::Kind::all) {
        for (int i = 0; i < count; ++i) out.insert(i);
    } else if (mode.kind == BestResidualMode::Kind::sample) {
        const int k = std::min(mode.sample_count, count);
        if (k == 1) {
            out.insert(0);
        } else {
            for (int i = 0; i < k; ++i) {
                const long idx = (long(i) * (count - 1)) / (k - 1);
                out.insert(int(idx));
            }
        }
    }
    return out;
}

std::vector<ReportRow> build_rows(const SymMatrix& a, const SymMatrix& b,
                                  const SpectralResult& res, const PencilNorms& norms,
                                  std::optional<double> sigma, const BestResidualMode& mode,
                                  const std::string& method) {
    const int r = res.rank;
    std::vector<int> order(r);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int i, int j) {
        return res.pairs[i].lambda < res.pairs[j].lambda;
    });

    const std::set<int> want_best = best_res_selection(mode, r);

    std::vector<ReportRow> rows(r);
    for (int k = 0; k < r; ++k) {
        const EigenPair& p = res.pairs[order[k]];
        ReportRow& row = rows[k];
        row.index = k + 1;
        row.alpha = p.alpha;
        row.beta = p.beta;
        row.lambda = p.lambda;
        row.negative = p.lambda < 0.0;
        row.method = method;
        std::span<const double> v(res.v.col(order[k]), size_t(res.n));
        row.rel_res = relative_residual(a, b, p.alpha, p.beta, v, norms);
        if (want_best.count(k) != 0)
            row.best_res = best_possible_residual(a, b, p.alpha, p.beta, norms);
        if (sigma && *sigma != 0.0) {
            row.shift_dist = std::abs(1.0 - p.lambda / *sigma);
            row.shift_dist_sym =
                std::abs((1.0 - p.lambda / *sigma) * (1.0 - *sigma / p.lambda));
        }
    }
    return rows;
}

void norm_to_json(nlohmann::json& j, const char* key, const Norm2Estimate& e) {
    j[key] = {{"value", e.value}, {"iterations", e.iterations}, {"converged", e.converged}};
}

nlohmann::json diagnostics_json(const ShiftDiagnostics& d, const SpectralResult& res,
                                const BestResidualMode& mode,
                                const BestResidualOptions& best_opts) {
    nlohmann::json j;
    j["sigma"] = d.sigma;
    j["sigma0"] = d.sigma0;
    j["eta"] = d.eta;
    j["eta_x"] = d.eta_x;
    j["gamma"] = d.gamma;
    if (std::isinf(d.mu)) {
        j["mu_infinite"] = true;
    } else {
        j["mu"] = d.mu;
        j["mu_infinite"] = false;
    }
    j["rank_r"] = res.rank;
    j["n"] = res.n;
    j["infinite_count"] = res.infinite_count;
    norm_to_json(j, "norm_a", d.norm_a);
    norm_to_json(j, "norm_b", d.norm_b);
    norm_to_json(j, "norm_shifted", d.norm_shifted);
    norm_to_json(j, "norm_x", d.norm_x);
    j["estimator"] = {{"tol", d.norm_options.tol}, {"max_iter", d.norm_options.max_iter}};
    if (mode.kind != BestResidualMode::Kind::none)
        j["best_res_iteration"] = {{"rayleigh_tol", best_opts.rayleigh_tol},
                                   {"max_iter", best_opts.max_iter}};
    return j;
}

int write_text_output(const std::string& path, const std::string& text, const char* what) {
    if (path.empty()) {
        std::cout << text;
        return kExitOk;
    }
    std::ofstream out(path);
    if (!out) {
        std::cerr << "error: cannot open " << what << " file '" << path << "'\n";
        return kExitIoError;
    }
    out << text;
    if (!out) {
        std::cerr << "error: write to '" << path << "' failed\n";
        return kExitIoError;
    }
    return kExitOk;
}

std::string rows_to_csv(const std::vector<ReportRow>& rows, bool with_method) {
    std::ostringstream os;
    write_report_csv(os, rows, with_method);
    return os.str();
}

struct LoadedPencil {
    SymMatrix a;
    SymMatrix b;
};

// Exit-code bearing failure used internally by the commands.
struct CommandFailure {
    int code;
    std::string message;
};

LoadedPencil load_pencil(const std::string& path_a, const std::string& path_b) {
    try {
        LoadedPencil p;
        p.a = read_matrix_market(path_a);
        p.b = read_matrix_market(path_b);
        if (p.a.dim() != p.b.dim())
            throw CommandFailure{kExitIoError, "matrices have different dimensions"};
        return p;
    } catch (const MatrixMarketError& e) {
        throw CommandFailure{kExitIoError, e.what()};
    } catch (const std::invalid_argument& e) {
        throw CommandFailure{kExitIoError, e.what()};
    }
}

double resolve_shift(const SymMatrix& a, const SymMatrix& b, const std::optional<double>& shift,
                     const std::optional<double>& scaled_shift) {
    if (shift.has_value() == scaled_shift.has_value())
        throw CommandFailure{kExitIoError, "exactly one of --shift / --scaled-shift is required"};
    if (shift) return *shift;
    return sigma_from_scaled(a, b, *scaled_shift).sigma;
}

} // namespace

int cmd_solve(const SolveArgs& args) {
    try {
        const LoadedPencil p = load_pencil(args.matrix_a, args.matrix_b);
        const double sigma = resolve_shift(p.a, p.b, args.shift, args.scaled_shift);

        SolveSettings settings;
        settings.etax_max = args.etax_max;
        SpectralResult res;
        try {
            res = spectral_trans_eig(p.a, p.b, sigma, settings);
        } catch (const GuardError& e) {
            std::cerr << "error: " << e.what() << "\n";
            return kExitGuard;
        }

        const ShiftDiagnostics& d = *res.diagnostics;
        const PencilNorms norms{d.norm_a.value, d.norm_b.value};
        const std::vector<ReportRow> rows =
            build_rows(p.a, p.b, res, norms, sigma, args.best_res, "spectral");

        const int rc = write_text_output(args.out, rows_to_csv(rows, false), "output");
        if (rc != kExitOk) return rc;
        if (!args.diagnostics.empty()) {
            const nlohmann::json j =
                diagnostics_json(d, res, args.best_res, BestResidualOptions{});
            return write_text_output(args.diagnostics, j.dump(2) + "\n", "diagnostics");
        }
        return kExitOk;
    } catch (const CommandFailure& f) {
        std::cerr << "error: " << f.message << "\n";
        return f.code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIoError;
    }
}

int cmd_standard(const StandardArgs& args) {
    try {
        const LoadedPencil p = load_pencil(args.matrix_a, args.matrix_b);

        SpectralResult res;
        try {
            res = standard_cholesky_eig(p.a, p.b);
        } catch (const NotPosDefError& e) {
            std::cerr << "error: " << e.what() << "\n";
            return kExitNotPosDef;
        }

        const PencilNorms norms{norm2_estimate(p.a).value, norm2_estimate(p.b).value};
        const std::vector<ReportRow> rows =
            build_rows(p.a, p.b, res, norms, std::nullopt, args.best_res, "standard");

        const int rc = write_text_output(args.out, rows_to_csv(rows, false), "output");
        if (rc != kExitOk) return rc;
        if (!args.diagnostics.empty()) {
            nlohmann::json j;
            j["method"] = "standard";
            j["n"] = res.n;
            j["rank_r"] = res.rank;
            j["norm_a"] = norms.norm_a;
            j["norm_b"] = norms.norm_b;
            return write_text_output(args.diagnostics, j.dump(2) + "\n", "diagnostics");
        }
        return kExitOk;
    } catch (const CommandFailure& f) {
        std::cerr << "error: " << f.message << "\n";
        return f.code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIoError;
    }
}

int cmd_compare(const CompareArgs& args) {
    try {
        const SolveArgs& s = args.solve;
        const LoadedPencil p = load_pencil(s.matrix_a, s.matrix_b);
        const double sigma = resolve_shift(p.a, p.b, s.shift, s.scaled_shift);

        SolveSettings settings;
        settings.etax_max = s.etax_max;
        SpectralResult spectral;
        try {
            spectral = spectral_trans_eig(p.a, p.b, sigma, settings);
        } catch (const GuardError& e) {
            std::cerr << "error: " << e.what() << "\n";
            return kExitGuard;
        }
        const ShiftDiagnostics& d = *spectral.diagnostics;
        const PencilNorms norms{d.norm_a.value, d.norm_b.value};

        std::vector<ReportRow> rows =
            build_rows(p.a, p.b, spectral, norms, sigma, s.best_res, "spectral");

        int exit_code = kExitOk;
        try {
            const SpectralResult standard = standard_cholesky_eig(p.a, p.b);
            std::vector<ReportRow> std_rows =
                build_rows(p.a, p.b, standard, norms, std::nullopt, s.best_res, "standard");
            rows.insert(rows.end(), std_rows.begin(), std_rows.end());
        } catch (const NotPosDefError& e) {
            // Keep the spectral half of the report; flag the failure.
            std::cerr << "error: " << e.what() << "\n";
            exit_code = kExitNotPosDef;
        }

        const int rc = write_text_output(s.out, rows_to_csv(rows, true), "output");
        if (rc != kExitOk) return rc;
        if (!s.diagnostics.empty()) {
            const nlohmann::json j = diagnostics_json(d, spectral, s.best_res, {});
            const int rd = write_text_output(s.diagnostics, j.dump(2) + "\n", "diagnostics");
            if (rd != kExitOk) return rd;
        }
        return exit_code;
    } catch (const CommandFailure& f) {
        std::cerr << "error: " << f.message << "\n";
        return f.code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIoError;
    }
}

int cmd_modify(const ModifyArgs& args) {
    try {
        const SymMatrix b0 = read_matrix_market(args.in);
        const SymMatrix b = modify_mass_matrix(b0);
        if (args.out.empty()) {
            write_matrix_market(std::cout, b);
            return kExitOk;
        }
        write_matrix_market(args.out, b);
        return kExitOk;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIoError;
    }
}

} // namespace steig
