#pragma once

#include <map>

#include "stoch/lshaped.hpp"

namespace stoch {

enum class Protocol { FastForward, FastBack, FastForwardFastBack };

/// Per-node solver state during a nested run.
struct NodeState {
    enum class Status { Unsolved, Feasible, InfeasibleAtCurrentParent };

    CutPool pool;  // cuts received from children
    std::optional<std::vector<double>> parent_decision;
    std::vector<double> decision;
    std::map<int, double> theta;
    double objective = 0.0;  // node LP value including theta terms
    double own_cost = 0.0;   // q'v only
    std::vector<double> row_duals;  // duals of the node's own rows
    bool dirty = true;
    Status status = Status::Unsolved;
};

struct NestedOptions {
    Protocol protocol = Protocol::FastForwardFastBack;
    CutMode mode = CutMode::Unicut;
    double feas_tol = 1e-7;
    double gap_tol = 1e-6;
    int max_passes = 10000;
    bool parallel = true;
};

struct MoveSet {
    bool ascend = false;
    bool descend = false;
};

/// Which tree moves are available: no descending past the leaves or below
/// an all-infeasible stage, no ascending above the root.
MoveSet legal_moves(int stage, int num_stages, bool any_feasible_at_stage);

/// Optimal iff every non-leaf node's theta matches the probability
/// weighted sum of its children's current objectives within gap_tol.
/// Requires every node solved and currently feasible.
bool global_termination(const ScenarioTree& tree,
                        const std::map<int, NodeState>& states, double gap_tol);

struct NestedResult {
    RunStatus status = RunStatus::IterationLimit;
    std::map<int, std::vector<double>> decisions;
    double objective = 0.0;
    int passes = 0;
    std::map<int, CutPool> pools;  // by parent node id
    double lower_bound = 0.0;
    double upper_bound = 0.0;
    SolveTrace trace;
};

/// Nested Benders over a multi-stage tree: decisions flow down, cuts flow
/// up, the sequencing protocol picks the sweep direction.
NestedResult run_nested(const ScenarioTree& tree, const NestedOptions& opts = {});

}  // namespace stoch
