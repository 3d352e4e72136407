#pragma once

#include <optional>
#include <string>

#include "steig/matrix.hpp"

namespace steig {

// Exit codes shared by all commands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitIoError = 1;      // I/O, parse and other failures
inline constexpr int kExitGuard = 2;        // eta*||X|| guard tripped
inline constexpr int kExitNotPosDef = 3;    // standard method: Cholesky of B failed

// Which eigenpairs get the sigma_min-based residual floor.
struct BestResidualMode {
    enum class Kind { none, all, sample };
    Kind kind = Kind::none;
    int sample_count = 0;

    // Parses "none", "all" or "sample:K". Throws std::invalid_argument.
    static BestResidualMode parse(const std::string& text);
};

struct SolveArgs {
    std::string matrix_a;
    std::string matrix_b;
    std::optional<double> shift;
    std::optional<double> scaled_shift;
    double etax_max = 1e4;
    std::string out;            // empty = stdout
    BestResidualMode best_res;
    std::string diagnostics;    // empty = none
};

struct StandardArgs {
    std::string matrix_a;
    std::string matrix_b;
    std::string out;
    BestResidualMode best_res;
    std::string diagnostics;
};

struct CompareArgs {
    SolveArgs solve; // same flags; the standard run reuses matrices and outputs
};

struct ModifyArgs {
    std::string in;
    std::string out;
};

int cmd_solve(const SolveArgs& args);
int cmd_standard(const StandardArgs& args);
int cmd_compare(const CompareArgs& args);
int cmd_modify(const ModifyArgs& args);

// B(k,k) += exp(-0.02 * (n - k + 1)) * ||B0||_2 for k = 1..n (1-based), the
// diagonal lift that turns a singular mass matrix into a definite one with a
// spread of eigenvalues. Throws std::invalid_argument when B0 == 0.
SymMatrix modify_mass_matrix(const SymMatrix& b0, const NormOptions& opts = {});

} // namespace steig
