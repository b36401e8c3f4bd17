#include "stoch/nested.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "stoch/solver_detail.hpp"

namespace stoch {

namespace {

// Node rows plus its stored feasibility-cut rows (which constrain the
// node's own decision and carry no parent dependence), so the aux check
// sees the same feasible set as the node master.
NodeProblem extended_problem(const NodeProblem& n, const CutPool& pool) {
    NodeProblem ext = n;
    for (const auto& c : pool.feasibility) {
        ext.W.push_back(c.D);
        ext.h.push_back(c.d);
        ext.relations.push_back(Relation::GreaterEqual);
        if (ext.T)
            ext.T->push_back(std::vector<double>((*ext.T)[0].size(), 0.0));
    }
    return ext;
}

// Master LP of a non-root node: parent decision folded into the rhs.
LinearProgram node_master(const NodeProblem& n, const CutPool& pool,
                          const std::vector<double>& y, CutMode mode) {
    NodeProblem fixed = n;
    if (fixed.T) {
        for (int r = 0; r < fixed.num_rows(); ++r)
            for (size_t j = 0; j < y.size(); ++j)
                fixed.h[r] -= (*fixed.T)[r][j] * y[j];
        fixed.T.reset();
        fixed.parent.reset();
    }
    return build_master(fixed, pool, mode);
}

struct NodeSolveOutcome {
    bool feasible = false;
    bool unbounded = false;
    double violation = 0.0;
    std::vector<double> sigma;  // aux duals over the extended rows
    SimplexSolution sol;
};

NodeSolveOutcome solve_node(const NodeProblem& n, const NodeState& state,
                            CutMode mode, const SimplexOptions& lp_opts) {
    const std::vector<double> y =
        state.parent_decision ? *state.parent_decision : std::vector<double>{};
    NodeSolveOutcome out;

    NodeProblem ext = extended_problem(n, state.pool);
    FeasibilityCheck check = solve_feasibility_problem(ext, y, lp_opts);
    if (!check.feasible) {
        out.violation = check.violation;
        out.sigma = check.duals;
        return out;
    }
    out.sol = solve_lp(node_master(n, state.pool, y, mode), lp_opts);
    if (out.sol.status == SolveStatus::Unbounded) {
        out.unbounded = true;
        return out;
    }
    out.feasible = true;
    return out;
}

double policy_value(const ScenarioTree& tree,
                    const std::map<int, NodeState>& states, int id) {
    const NodeProblem& n = tree.node(id);
    double v = states.at(id).own_cost;
    for (int c : n.children)
        v += tree.node(c).prob * policy_value(tree, states, c);
    return v;
}

}  // namespace

MoveSet legal_moves(int stage, int num_stages, bool any_feasible_at_stage) {
    MoveSet m;
    m.ascend = stage > 0;
    m.descend = stage + 1 < num_stages && any_feasible_at_stage;
    return m;
}

bool global_termination(const ScenarioTree& tree,
                        const std::map<int, NodeState>& states, double gap_tol) {
    for (const auto& [id, n] : tree.nodes) {
        auto it = states.find(id);
        if (it == states.end() || it->second.status != NodeState::Status::Feasible)
            return false;
        // A pending cut or a stale parent decision means the cached
        // objective may still rise; the test would be against old numbers.
        if (it->second.dirty) return false;
        if (n.parent && (!it->second.parent_decision ||
                         *it->second.parent_decision !=
                             states.at(*n.parent).decision))
            return false;
    }
    for (const auto& [id, n] : tree.nodes) {
        if (n.children.empty()) continue;
        const NodeState& st = states.at(id);
        if (st.theta.empty()) return false;  // theta not yet defined
        double theta_total = 0.0;
        for (const auto& [target, v] : st.theta) theta_total += v;
        double expected = 0.0;
        for (int c : n.children)
            expected += tree.node(c).prob * states.at(c).objective;
        if (theta_total < expected - gap_tol) return false;
    }
    return true;
}

NestedResult run_nested(const ScenarioTree& tree, const NestedOptions& opts) {
    auto bad = validate(tree);
    if (!bad.empty()) throw InvalidTreeError("invalid tree: " + bad.front());

    SimplexOptions lp_opts;
    lp_opts.feas_tol = opts.feas_tol;
    lp_opts.gap_tol = opts.gap_tol;

    std::map<int, NodeState> states;
    for (const auto& [id, n] : tree.nodes) states[id];

    NestedResult res;
    double upper = std::numeric_limits<double>::infinity();

    int t = 0;
    bool fffb_descending = true;
    bool seeking_down = false;

    auto finish = [&](RunStatus status, const std::string& reason) {
        res.status = status;
        res.trace.terminate(reason);
        for (auto& [id, st] : states)
            if (!st.pool.feasibility.empty() || !st.pool.optimality.empty())
                res.pools[id] = std::move(st.pool);
        return res;
    };

    for (int pass = 1; pass <= opts.max_passes; ++pass) {
        res.passes = pass;
        std::vector<int> level = tree.nodes_at_stage(t);
        std::sort(level.begin(), level.end());

        std::vector<int> solvable;
        for (int id : level) {
            const NodeState& st = states.at(id);
            if (!st.dirty) continue;
            const NodeProblem& n = tree.node(id);
            if (n.parent &&
                states.at(*n.parent).status != NodeState::Status::Feasible)
                continue;
            solvable.push_back(id);
        }

        std::vector<NodeSolveOutcome> outcomes(solvable.size());
        detail::parallel_for(solvable.size(), opts.parallel, [&](size_t k) {
            outcomes[k] =
                solve_node(tree.node(solvable[k]), states.at(solvable[k]),
                           opts.mode, lp_opts);
        });

        bool new_cuts_up = false;
        bool feas_cut_added = false;
        for (size_t k = 0; k < solvable.size(); ++k) {
            int id = solvable[k];
            const NodeProblem& n = tree.node(id);
            NodeState& st = states.at(id);
            NodeSolveOutcome& out = outcomes[k];
            st.dirty = false;
            if (out.unbounded) {
                res.trace.solve(id, t, SolveStatus::Unbounded, 0.0);
                return finish(RunStatus::Unbounded, "sub-problem unbounded");
            }
            if (!out.feasible) {
                st.status = NodeState::Status::InfeasibleAtCurrentParent;
                res.trace.solve(id, t, SolveStatus::Infeasible, out.violation);
                if (t == 0)
                    return finish(RunStatus::Infeasible, "root infeasible");
                FeasibilityCut cut;
                try {
                    cut = make_feasibility_cut(out.sigma,
                                               extended_problem(n, st.pool));
                } catch (const DegenerateCutError&) {
                    return finish(RunStatus::Infeasible,
                                  "sub-problem infeasible for every decision");
                }
                cut.source_node = id;
                cut.iteration = pass;
                NodeState& parent = states.at(*n.parent);
                if (parent.pool.add(cut)) {
                    parent.dirty = true;
                    new_cuts_up = true;
                    feas_cut_added = true;
                    res.trace.cut("feas", id, *n.parent, cut.D, cut.d);
                }
                continue;
            }
            st.status = NodeState::Status::Feasible;
            const int nv = n.num_vars();
            st.decision.assign(out.sol.primal.begin(),
                               out.sol.primal.begin() + nv);
            auto targets = detail::theta_targets(st.pool, opts.mode);
            st.theta.clear();
            for (size_t i = 0; i < targets.size(); ++i)
                st.theta[targets[i]] = out.sol.primal[nv + i];
            st.objective = out.sol.objective;
            st.own_cost = 0.0;
            for (int j = 0; j < nv; ++j) st.own_cost += n.q[j] * st.decision[j];
            st.row_duals.assign(out.sol.duals.begin(),
                                out.sol.duals.begin() + n.num_rows());
            res.trace.solve(id, t, SolveStatus::Optimal, st.objective);
        }

        // Optimality cuts into stage t-1, one parent at a time; only when
        // every child is currently solved and clean at that parent's
        // decision.
        if (t > 0) {
            std::vector<int> parents;
            for (int id : level) {
                int p = *tree.node(id).parent;
                if (std::find(parents.begin(), parents.end(), p) == parents.end())
                    parents.push_back(p);
            }
            std::sort(parents.begin(), parents.end());
            for (int p : parents) {
                NodeState& pst = states.at(p);
                if (pst.status != NodeState::Status::Feasible) continue;
                const NodeProblem& pn = tree.node(p);
                bool ready = true;
                for (int c : pn.children) {
                    const NodeState& cst = states.at(c);
                    if (cst.status != NodeState::Status::Feasible || cst.dirty)
                        ready = false;
                }
                if (!ready) continue;

                std::vector<int> kids = pn.children;
                std::sort(kids.begin(), kids.end());
                std::vector<OptimalityCut> cuts;
                if (opts.mode == CutMode::Unicut) cuts.emplace_back();
                for (int c : kids) {
                    const NodeProblem& cn = tree.node(c);
                    const NodeState& cst = states.at(c);
                    const auto& y = *cst.parent_decision;
                    OptimalityCut piece;
                    piece.target = c;
                    piece.iteration = pass;
                    piece.G.assign(pn.num_vars(), 0.0);
                    for (int r = 0; r < cn.num_rows(); ++r)
                        for (int j = 0; j < pn.num_vars(); ++j)
                            piece.G[j] +=
                                cn.prob * cst.row_duals[r] * (*cn.T)[r][j];
                    // Dual identity: the child's optimal value already
                    // carries its own cut rows, so g follows from the
                    // objective rather than a separate h product.
                    piece.g = cn.prob * cst.objective;
                    for (size_t j = 0; j < y.size(); ++j)
                        piece.g += piece.G[j] * y[j];
                    if (opts.mode == CutMode::Unicut) {
                        OptimalityCut& agg = cuts.front();
                        if (agg.G.empty()) {
                            agg.G.assign(pn.num_vars(), 0.0);
                            agg.target = -1;
                            agg.iteration = pass;
                        }
                        agg.g += piece.g;
                        for (int j = 0; j < pn.num_vars(); ++j)
                            agg.G[j] += piece.G[j];
                    } else {
                        cuts.push_back(std::move(piece));
                    }
                }
                for (auto& c : cuts) {
                    if (pst.pool.add(c)) {
                        pst.dirty = true;
                        new_cuts_up = true;
                        res.trace.cut("opt",
                                      c.target == -1 ? kids.front() : c.target, p,
                                      c.G, c.g);
                    }
                }
            }
        }

        bool activity = !solvable.empty() || new_cuts_up;
        if (activity) seeking_down = false;

        if (t == 0 && !activity) {
            bool all_solved = true;
            for (const auto& [id, st] : states)
                if (st.status != NodeState::Status::Feasible) all_solved = false;
            if (all_solved) {
                double lower = states.at(tree.root_id).objective;
                upper = std::min(upper, policy_value(tree, states, tree.root_id));
                res.lower_bound = lower;
                res.upper_bound = upper;
                res.trace.bounds(lower, upper);
                if (global_termination(tree, states, opts.gap_tol)) {
                    res.objective = states.at(tree.root_id).objective;
                    for (const auto& [id, st] : states)
                        res.decisions[id] = st.decision;
                    return finish(RunStatus::Optimal, "optimal");
                }
            }
            seeking_down = true;
        }

        bool any_feasible = false;
        for (int id : level)
            if (states.at(id).status == NodeState::Status::Feasible)
                any_feasible = true;
        MoveSet moves = legal_moves(t, tree.num_stages, any_feasible);
        if (!moves.ascend && !moves.descend) continue;  // single-stage tree

        bool go_down;
        if (feas_cut_added && moves.ascend) {
            // Infeasible nodes at this stage sent cuts up; back off one
            // level before any protocol choice.
            go_down = false;
        } else if (!activity) {
            if (seeking_down && moves.descend)
                go_down = true;
            else
                go_down = !moves.ascend;
        } else {
            switch (opts.protocol) {
                case Protocol::FastForward:
                    go_down = moves.descend;
                    break;
                case Protocol::FastBack:
                    go_down = !(new_cuts_up && moves.ascend) && moves.descend;
                    break;
                case Protocol::FastForwardFastBack:
                default:
                    if (fffb_descending) {
                        if (moves.descend) {
                            go_down = true;
                        } else {
                            fffb_descending = false;
                            go_down = false;
                        }
                    } else {
                        if (moves.ascend) {
                            go_down = false;
                        } else {
                            fffb_descending = true;
                            go_down = true;
                        }
                    }
                    break;
            }
            if (go_down && !moves.descend) go_down = false;
            if (!go_down && !moves.ascend) go_down = true;
        }

        if (go_down) {
            for (int id : level) {
                const NodeState& st = states.at(id);
                if (st.status != NodeState::Status::Feasible) continue;
                for (int c : tree.node(id).children) {
                    NodeState& cst = states.at(c);
                    if (!cst.parent_decision ||
                        *cst.parent_decision != st.decision) {
                        cst.parent_decision = st.decision;
                        cst.dirty = true;
                    }
                }
            }
            res.trace.move("descend", t, t + 1);
            ++t;
        } else {
            res.trace.move("ascend", t, t - 1);
            --t;
        }
    }

    res.lower_bound = states.at(tree.root_id).status == NodeState::Status::Feasible
                          ? states.at(tree.root_id).objective
                          : -std::numeric_limits<double>::infinity();
    res.upper_bound = upper;
    return finish(RunStatus::IterationLimit, "pass limit");
}

}  // namespace stoch
