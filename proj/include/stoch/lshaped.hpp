#pragma once

#include <map>

#include "stoch/scenario_tree.hpp"
#include "stoch/trace.hpp"

namespace stoch {

enum class CutMode { Unicut, Multicut };

/// Outcome of a full decomposition run.
enum class RunStatus { Optimal, Infeasible, Unbounded, IterationLimit };

const char* run_status_name(RunStatus s);

/// Parent-decision constraint D y >= d ensuring a child admits a feasible
/// recourse.
struct FeasibilityCut {
    std::vector<double> D;
    double d = 0.0;
    int source_node = -1;
    int iteration = 0;
};

/// Lower bound theta_target >= g - G y on the expected child objective.
struct OptimalityCut {
    std::vector<double> G;
    double g = 0.0;
    int target = -1;  // -1 for the aggregate theta, else the scenario node id
    int iteration = 0;
};

/// Cut storage with coefficient-level dedup (tolerance 1e-9).
struct CutPool {
    std::vector<FeasibilityCut> feasibility;
    std::vector<OptimalityCut> optimality;

    /// Returns true when the cut was new and stored.
    bool add(FeasibilityCut cut);
    bool add(OptimalityCut cut);
    bool has(const FeasibilityCut& cut) const;
    bool has(const OptimalityCut& cut) const;
};

struct LShapedOptions {
    CutMode mode = CutMode::Unicut;
    double feas_tol = 1e-7;
    double gap_tol = 1e-6;
    int max_iters = 500;
    bool parallel = true;  // intra-iteration scenario solves via OpenMP
};

class DegenerateCutError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Master problem: root rows plus stored cuts. A theta column exists only
/// once at least one optimality cut targets it.
LinearProgram build_master(const NodeProblem& root, const CutPool& pool,
                           CutMode mode);

struct FeasibilityCheck {
    bool feasible = true;
    double violation = 0.0;       // aux objective V
    std::vector<double> duals;    // sigma, present when violated
};

/// Always-feasible auxiliary problem: minimizes the 1-norm constraint
/// violation of a sub-problem at a fixed parent decision. Rows are
/// normalized to >= form so the reported duals are nonnegative on
/// inequality rows.
FeasibilityCheck solve_feasibility_problem(const NodeProblem& sub,
                                           const std::vector<double>& y,
                                           const SimplexOptions& opts = {});

FeasibilityCut make_feasibility_cut(const std::vector<double>& sigma,
                                    const NodeProblem& sub);

/// Unicut: one probability-weighted aggregate cut; multicut: one cut per
/// scenario. Duals must come from Optimal sub-problem solves at the
/// current parent decision.
std::vector<OptimalityCut> make_optimality_cut(
    const std::vector<std::vector<double>>& duals,
    const std::vector<double>& probs, const std::vector<const NodeProblem*>& subs,
    CutMode mode);

/// Terminate iff theta is defined for every fresh cut's target and the
/// fresh cuts are already satisfied at (y, theta) within gap_tol.
bool termination_check(const std::vector<double>& y,
                       const std::map<int, double>& theta,
                       const std::vector<OptimalityCut>& fresh_cuts,
                       double gap_tol);

struct LShapedResult {
    RunStatus status = RunStatus::IterationLimit;
    std::vector<double> root_decision;
    std::map<int, std::vector<double>> scenario_decisions;
    double objective = 0.0;
    int iterations = 0;
    CutPool pool;
    double lower_bound = 0.0;
    double upper_bound = 0.0;
    SolveTrace trace;
};

/// Two-stage Benders (the L-shaped method) over a two-stage tree.
LShapedResult run_lshaped(const ScenarioTree& tree, const LShapedOptions& opts = {});

}  // namespace stoch
