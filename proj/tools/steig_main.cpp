// steig: generalized symmetric (semi)definite eigensolver based on a
// shifted-and-inverted spectral transformation, with residual and
// backward-error reporting.

#include <iostream>

#include <CLI11.hpp>

#include "steig/commands.hpp"

namespace {

void add_best_res_option(CLI::App* cmd, std::string* text) {
    cmd->add_option("--best-residuals", *text,
                    "Compute the sigma_min residual floor: all | sample:K | none")
        ->default_val("none");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Symmetric (semi)definite generalized eigenvalue solver"};
    app.require_subcommand(1);

    steig::SolveArgs solve_args;
    std::string solve_best = "none";
    double solve_shift = 0.0, solve_scaled = 0.0;
    CLI::App* solve = app.add_subcommand(
        "solve", "Shifted-and-inverted spectral transformation eigensolver");
    solve->add_option("--matrix-a", solve_args.matrix_a, "Matrix Market file for A")->required();
    solve->add_option("--matrix-b", solve_args.matrix_b, "Matrix Market file for B")->required();
    CLI::Option* opt_shift = solve->add_option("--shift", solve_shift, "Shift sigma");
    CLI::Option* opt_scaled =
        solve->add_option("--scaled-shift", solve_scaled, "Scaled shift sigma0 = sigma*||B||/||A||");
    opt_shift->excludes(opt_scaled);
    opt_scaled->excludes(opt_shift);
    solve->add_option("--etax-max", solve_args.etax_max, "Guard bound on eta*||X||")
        ->default_val(1e4);
    solve->add_option("--out", solve_args.out, "CSV output path (default: stdout)");
    add_best_res_option(solve, &solve_best);
    solve->add_option("--diagnostics", solve_args.diagnostics, "Diagnostics JSON path");

    steig::StandardArgs std_args;
    std::string std_best = "none";
    CLI::App* standard =
        app.add_subcommand("standard", "Classic Cholesky-based method (reference)");
    standard->add_option("--matrix-a", std_args.matrix_a, "Matrix Market file for A")->required();
    standard->add_option("--matrix-b", std_args.matrix_b, "Matrix Market file for B")->required();
    standard->add_option("--out", std_args.out, "CSV output path (default: stdout)");
    add_best_res_option(standard, &std_best);
    standard->add_option("--diagnostics", std_args.diagnostics, "Diagnostics JSON path");

    steig::SolveArgs cmp_args;
    std::string cmp_best = "none";
    double cmp_shift = 0.0, cmp_scaled = 0.0;
    CLI::App* compare =
        app.add_subcommand("compare", "Run both methods and emit a joined report");
    compare->add_option("--matrix-a", cmp_args.matrix_a, "Matrix Market file for A")->required();
    compare->add_option("--matrix-b", cmp_args.matrix_b, "Matrix Market file for B")->required();
    CLI::Option* cmp_opt_shift = compare->add_option("--shift", cmp_shift, "Shift sigma");
    CLI::Option* cmp_opt_scaled =
        compare->add_option("--scaled-shift", cmp_scaled, "Scaled shift sigma0");
    cmp_opt_shift->excludes(cmp_opt_scaled);
    cmp_opt_scaled->excludes(cmp_opt_shift);
    compare->add_option("--etax-max", cmp_args.etax_max, "Guard bound on eta*||X||")
        ->default_val(1e4);
    compare->add_option("--out", cmp_args.out, "CSV output path (default: stdout)");
    add_best_res_option(compare, &cmp_best);
    compare->add_option("--diagnostics", cmp_args.diagnostics, "Diagnostics JSON path");

    steig::ModifyArgs mod_args;
    CLI::App* modify = app.add_subcommand(
        "modify", "Apply the exponential diagonal lift to a mass matrix");
    modify->add_option("--in", mod_args.in, "Matrix Market input")->required();
    modify->add_option("--out", mod_args.out, "Matrix Market output (default: stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) {
            if (opt_shift->count() != 0) solve_args.shift = solve_shift;
            if (opt_scaled->count() != 0) solve_args.scaled_shift = solve_scaled;
            solve_args.best_res = steig::BestResidualMode::parse(solve_best);
            return steig::cmd_solve(solve_args);
        }
        if (standard->parsed()) {
            std_args.best_res = steig::BestResidualMode::parse(std_best);
            return steig::cmd_standard(std_args);
        }
        if (compare->parsed()) {
            if (cmp_opt_shift->count() != 0) cmp_args.shift = cmp_shift;
            if (cmp_opt_scaled->count() != 0) cmp_args.scaled_shift = cmp_scaled;
            cmp_args.best_res = steig::BestResidualMode::parse(cmp_best);
            return steig::cmd_compare({cmp_args});
        }
        if (modify->parsed()) return steig::cmd_modify(mod_args);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return steig::kExitIoError;
    }
    return steig::kExitIoError;
}
