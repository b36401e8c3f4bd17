#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace stoch {

enum class Sense { Minimize, Maximize };
enum class Relation { LessEqual, GreaterEqual, Equal };
enum class VarKind { NonNegative, NonPositive, Free };
enum class SolveStatus { Optimal, Infeasible, Unbounded };

struct Row {
    std::vector<double> coeffs;
    Relation rel = Relation::LessEqual;
    double rhs = 0.0;
};

/// Dense LP in a normalized form; the common currency of every module.
struct LinearProgram {
    Sense sense = Sense::Minimize;
    int num_vars = 0;
    std::vector<double> objective;
    std::vector<Row> rows;
    std::vector<VarKind> var_kinds;
    std::vector<std::string> var_names;  // optional, empty when unnamed
    std::vector<std::string> row_names;

    LinearProgram() = default;
    LinearProgram(Sense s, int nvars)
        : sense(s),
          num_vars(nvars),
          objective(nvars, 0.0),
          var_kinds(nvars, VarKind::NonNegative) {}

    void add_row(std::vector<double> coeffs, Relation rel, double rhs,
                 std::string name = {});

    int num_rows() const { return static_cast<int>(rows.size()); }

    /// Returns an explanation of the first violated type invariant, or
    /// nullopt when the program is well formed.
    std::optional<std::string> invalid_reason() const;

    /// Objective value of a given point (no feasibility check).
    double objective_value(const std::vector<double>& x) const;

    /// Largest row violation and bound violation of a point.
    double max_violation(const std::vector<double>& x) const;
};

struct SimplexSolution {
    SolveStatus status = SolveStatus::Infeasible;
    std::vector<double> primal;  // present iff Optimal
    std::vector<double> duals;   // one per row, present iff Optimal
    double objective = 0.0;
    int iterations = 0;
};

/// Records how standardize() rewrote each original variable so that a
/// solution of the standardized program maps back to the original one.
struct StandardizationMap {
    struct Identity { int index; };
    struct Negated { int index; };
    struct Split { int pos_index; int neg_index; };
    using Entry = std::variant<Identity, Negated, Split>;

    std::vector<Entry> vars;  // one per original variable

    std::vector<double> restore_primal(const std::vector<double>& std_x) const;
    bool is_identity() const;
};

struct SimplexOptions {
    double feas_tol = 1e-7;
    double gap_tol = 1e-6;
    double pivot_tol = 1e-9;
    int max_iterations = 50000;
};

class IterationLimitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NotStandardizedError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class TooLargeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Rewrites the program so every variable is nonnegative: nonpositive
/// variables are negated, free variables are split into a difference of
/// two nonnegative parts. Rows and objective are adjusted to match.
std::pair<LinearProgram, StandardizationMap> standardize(const LinearProgram& p);

/// Two-phase dense primal simplex with Bland's rule. Reports row duals in
/// the convention where a maximization with <= rows has duals >= 0 and the
/// dual objective sum(dual_i * rhs_i) equals the primal objective.
SimplexSolution solve_lp(const LinearProgram& p, const SimplexOptions& opts = {});

/// Textbook dual former. Requires all variables nonnegative.
LinearProgram dual_of(const LinearProgram& p);

/// Brute-force enumeration of basic feasible points for small programs.
/// Intersects every size-n subset of row hyperplanes and coordinate planes.
std::vector<std::pair<std::vector<double>, double>> enumerate_cornerpoints(
    const LinearProgram& p, int max_dims = 4, const SimplexOptions& opts = {});

}  // namespace stoch
