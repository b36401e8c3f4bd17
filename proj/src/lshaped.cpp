#include "stoch/lshaped.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "stoch/solver_detail.hpp"

namespace stoch {

const char* run_status_name(RunStatus s) {
    switch (s) {
        case RunStatus::Optimal: return "Optimal";
        case RunStatus::Infeasible: return "Infeasible";
        case RunStatus::Unbounded: return "Unbounded";
        case RunStatus::IterationLimit: return "IterationLimit";
    }
    return "Unknown";
}

namespace {

constexpr double kCutDedupTol = 1e-9;

bool same_coeffs(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i)
        if (std::abs(a[i] - b[i]) > kCutDedupTol) return false;
    return true;
}

}  // namespace

bool CutPool::has(const FeasibilityCut& cut) const {
    for (const auto& c : feasibility)
        if (std::abs(c.d - cut.d) <= kCutDedupTol && same_coeffs(c.D, cut.D))
            return true;
    return false;
}

bool CutPool::has(const OptimalityCut& cut) const {
    for (const auto& c : optimality)
        if (c.target == cut.target && std::abs(c.g - cut.g) <= kCutDedupTol &&
            same_coeffs(c.G, cut.G))
            return true;
    return false;
}

bool CutPool::add(FeasibilityCut cut) {
    if (has(cut)) return false;
    feasibility.push_back(std::move(cut));
    return true;
}

bool CutPool::add(OptimalityCut cut) {
    if (has(cut)) return false;
    optimality.push_back(std::move(cut));
    return true;
}

namespace detail {

std::vector<int> theta_targets(const CutPool& pool, CutMode mode) {
    std::vector<int> targets;
    for (const auto& c : pool.optimality)
        if (std::find(targets.begin(), targets.end(), c.target) == targets.end())
            targets.push_back(c.target);
    std::sort(targets.begin(), targets.end());
    (void)mode;
    return targets;
}

LinearProgram node_lp(const NodeProblem& n, const std::vector<double>& y) {
    LinearProgram lp(Sense::Minimize, n.num_vars());
    lp.objective = n.q;
    for (int r = 0; r < n.num_rows(); ++r) {
        double rhs = n.h[r];
        if (n.T)
            for (size_t j = 0; j < y.size(); ++j) rhs -= (*n.T)[r][j] * y[j];
        lp.add_row(n.W[r], n.relations[r], rhs);
    }
    return lp;
}

}  // namespace detail

LinearProgram build_master(const NodeProblem& root, const CutPool& pool,
                           CutMode mode) {
    auto targets = detail::theta_targets(pool, mode);
    const int ny = root.num_vars();
    const int nt = static_cast<int>(targets.size());

    LinearProgram lp(Sense::Minimize, ny + nt);
    for (int j = 0; j < ny; ++j) lp.objective[j] = root.q[j];
    for (int t = 0; t < nt; ++t) {
        lp.objective[ny + t] = 1.0;
        lp.var_kinds[ny + t] = VarKind::Free;
    }
    for (int r = 0; r < root.num_rows(); ++r) {
        std::vector<double> coeffs(ny + nt, 0.0);
        std::copy(root.W[r].begin(), root.W[r].end(), coeffs.begin());
        lp.add_row(std::move(coeffs), root.relations[r], root.h[r]);
    }
    for (const auto& c : pool.feasibility) {
        std::vector<double> coeffs(ny + nt, 0.0);
        std::copy(c.D.begin(), c.D.end(), coeffs.begin());
        lp.add_row(std::move(coeffs), Relation::GreaterEqual, c.d);
    }
    for (const auto& c : pool.optimality) {
        std::vector<double> coeffs(ny + nt, 0.0);
        std::copy(c.G.begin(), c.G.end(), coeffs.begin());
        int slot = static_cast<int>(
            std::find(targets.begin(), targets.end(), c.target) - targets.begin());
        coeffs[ny + slot] = 1.0;  // theta + G y >= g
        lp.add_row(std::move(coeffs), Relation::GreaterEqual, c.g);
    }
    return lp;
}

FeasibilityCheck solve_feasibility_problem(const NodeProblem& sub,
                                           const std::vector<double>& y,
                                           const SimplexOptions& opts) {
    const int nv = sub.num_vars();
    const int m = sub.num_rows();

    // One slack pair per row; rows normalized to >= orientation so the
    // inequality duals come out nonnegative.
    LinearProgram aux(Sense::Minimize, nv + 2 * m);
    for (int i = 0; i < 2 * m; ++i) aux.objective[nv + i] = 1.0;
    for (int r = 0; r < m; ++r) {
        double mult = sub.relations[r] == Relation::LessEqual ? -1.0 : 1.0;
        std::vector<double> coeffs(nv + 2 * m, 0.0);
        for (int j = 0; j < nv; ++j) coeffs[j] = mult * sub.W[r][j];
        coeffs[nv + 2 * r] = mult;
        coeffs[nv + 2 * r + 1] = -mult;
        double rhs = sub.h[r];
        if (sub.T)
            for (size_t j = 0; j < y.size(); ++j) rhs -= (*sub.T)[r][j] * y[j];
        aux.add_row(std::move(coeffs),
                    sub.relations[r] == Relation::Equal ? Relation::Equal
                                                        : Relation::GreaterEqual,
                    mult * rhs);
    }

    SimplexSolution sol = solve_lp(aux, opts);
    // The slack pair makes every row satisfiable, so the aux problem is
    // always Optimal.
    FeasibilityCheck out;
    out.violation = sol.objective;
    out.feasible = sol.objective <= opts.feas_tol;
    if (!out.feasible) out.duals = sol.duals;
    return out;
}

FeasibilityCut make_feasibility_cut(const std::vector<double>& sigma,
                                    const NodeProblem& sub) {
    if (!sub.T)
        throw std::invalid_argument("make_feasibility_cut: node has no parent");
    const int pv = static_cast<int>((*sub.T)[0].size());
    FeasibilityCut cut;
    cut.D.assign(pv, 0.0);
    cut.d = 0.0;
    cut.source_node = sub.id;
    for (int r = 0; r < sub.num_rows(); ++r) {
        double mult = sub.relations[r] == Relation::LessEqual ? -1.0 : 1.0;
        for (int j = 0; j < pv; ++j) cut.D[j] += sigma[r] * mult * (*sub.T)[r][j];
        cut.d += sigma[r] * mult * sub.h[r];
    }
    double norm = 0.0;
    for (double v : cut.D) norm = std::max(norm, std::abs(v));
    if (norm <= 1e-12)
        throw DegenerateCutError(
            "feasibility cut has no parent dependence; sub-problem " +
            std::to_string(sub.id) + " is infeasible for every parent decision");
    return cut;
}

std::vector<OptimalityCut> make_optimality_cut(
    const std::vector<std::vector<double>>& duals,
    const std::vector<double>& probs, const std::vector<const NodeProblem*>& subs,
    CutMode mode) {
    const size_t ns = subs.size();
    const int pv = static_cast<int>((*subs[0]->T)[0].size());

    std::vector<OptimalityCut> out;
    if (mode == CutMode::Unicut) out.emplace_back();
    for (size_t w = 0; w < ns; ++w) {
        const NodeProblem& sub = *subs[w];
        OptimalityCut piece;
        piece.target = sub.id;
        piece.G.assign(pv, 0.0);
        for (int r = 0; r < sub.num_rows(); ++r) {
            piece.g += probs[w] * duals[w][r] * sub.h[r];
            for (int j = 0; j < pv; ++j)
                piece.G[j] += probs[w] * duals[w][r] * (*sub.T)[r][j];
        }
        if (mode == CutMode::Unicut) {
            OptimalityCut& agg = out.front();
            if (agg.G.empty()) agg.G.assign(pv, 0.0);
            agg.target = -1;
            agg.g += piece.g;
            for (int j = 0; j < pv; ++j) agg.G[j] += piece.G[j];
        } else {
            out.push_back(std::move(piece));
        }
    }
    return out;
}

bool termination_check(const std::vector<double>& y,
                       const std::map<int, double>& theta,
                       const std::vector<OptimalityCut>& fresh_cuts,
                       double gap_tol) {
    for (const auto& c : fresh_cuts) {
        auto it = theta.find(c.target);
        if (it == theta.end()) return false;  // theta not yet defined
        double bound = c.g;
        for (size_t j = 0; j < c.G.size(); ++j) bound -= c.G[j] * y[j];
        if (it->second < bound - gap_tol) return false;
    }
    return true;
}

LShapedResult run_lshaped(const ScenarioTree& tree, const LShapedOptions& opts) {
    if (tree.num_stages != 2)
        throw std::invalid_argument("run_lshaped requires a two-stage tree");
    auto bad = validate(tree);
    if (!bad.empty()) throw InvalidTreeError("invalid tree: " + bad.front());

    const NodeProblem& root = tree.node(tree.root_id);
    std::vector<int> scen_ids = root.children;
    std::sort(scen_ids.begin(), scen_ids.end());
    const size_t ns = scen_ids.size();
    const int ny = root.num_vars();

    SimplexOptions lp_opts;
    lp_opts.feas_tol = opts.feas_tol;
    lp_opts.gap_tol = opts.gap_tol;

    LShapedResult res;
    double lower = -std::numeric_limits<double>::infinity();
    double upper = std::numeric_limits<double>::infinity();

    for (int iter = 0; iter < opts.max_iters; ++iter) {
        res.iterations = iter + 1;
        LinearProgram master = build_master(root, res.pool, opts.mode);
        SimplexSolution msol = solve_lp(master, lp_opts);
        res.trace.solve(root.id, 0, msol.status, msol.objective);
        if (msol.status == SolveStatus::Infeasible) {
            res.status = RunStatus::Infeasible;
            res.trace.terminate("master infeasible");
            return res;
        }
        if (msol.status == SolveStatus::Unbounded) {
            res.status = RunStatus::Unbounded;
            res.trace.terminate("master unbounded");
            return res;
        }

        std::vector<double> y(msol.primal.begin(), msol.primal.begin() + ny);
        auto targets = detail::theta_targets(res.pool, opts.mode);
        std::map<int, double> theta;
        for (size_t t = 0; t < targets.size(); ++t)
            theta[targets[t]] = msol.primal[ny + t];
        bool theta_complete =
            opts.mode == CutMode::Unicut
                ? theta.count(-1) > 0
                : theta.size() == ns;
        if (theta_complete) lower = msol.objective;

        // Feasibility scan across all scenarios; cuts folded in node order.
        std::vector<FeasibilityCheck> checks(ns);
        detail::parallel_for(ns, opts.parallel, [&](size_t k) {
            checks[k] = solve_feasibility_problem(tree.node(scen_ids[k]), y, lp_opts);
        });
        bool any_violated = false;
        bool any_new_cut = false;
        for (size_t k = 0; k < ns; ++k) {
            if (checks[k].feasible) continue;
            any_violated = true;
            const NodeProblem& sub = tree.node(scen_ids[k]);
            res.trace.solve(sub.id, 1, SolveStatus::Infeasible, checks[k].violation);
            FeasibilityCut cut;
            try {
                cut = make_feasibility_cut(checks[k].duals, sub);
            } catch (const DegenerateCutError&) {
                res.status = RunStatus::Infeasible;
                res.trace.terminate("sub-problem infeasible for every decision");
                return res;
            }
            cut.iteration = iter;
            if (res.pool.add(cut)) {
                any_new_cut = true;
                res.trace.cut("feas", sub.id, root.id, cut.D, cut.d);
            }
        }
        if (any_violated) {
            if (!any_new_cut) {
                // The master keeps returning a point the existing cuts were
                // meant to exclude; numerically stuck, report infeasible.
                res.status = RunStatus::Infeasible;
                res.trace.terminate("feasibility cuts stalled");
                return res;
            }
            continue;
        }

        // All scenarios feasible: solve them for duals.
        std::vector<SimplexSolution> subsol(ns);
        detail::parallel_for(ns, opts.parallel, [&](size_t k) {
            subsol[k] = solve_lp(detail::node_lp(tree.node(scen_ids[k]), y), lp_opts);
        });
        std::vector<std::vector<double>> duals(ns);
        std::vector<double> probs(ns);
        std::vector<const NodeProblem*> subs(ns);
        double expected_recourse = 0.0;
        for (size_t k = 0; k < ns; ++k) {
            const NodeProblem& sub = tree.node(scen_ids[k]);
            if (subsol[k].status == SolveStatus::Unbounded) {
                res.status = RunStatus::Unbounded;
                res.trace.solve(sub.id, 1, SolveStatus::Unbounded, 0.0);
                res.trace.terminate("sub-problem unbounded");
                return res;
            }
            res.trace.solve(sub.id, 1, subsol[k].status, subsol[k].objective);
            duals[k] = subsol[k].duals;
            probs[k] = sub.prob;
            subs[k] = &sub;
            expected_recourse += sub.prob * subsol[k].objective;
        }
        double true_value = expected_recourse;
        for (int j = 0; j < ny; ++j) true_value += root.q[j] * y[j];
        upper = std::min(upper, true_value);
        if (theta_complete) res.trace.bounds(lower, upper);

        auto cuts = make_optimality_cut(duals, probs, subs, opts.mode);
        for (auto& c : cuts) c.iteration = iter;

        if (termination_check(y, theta, cuts, opts.gap_tol)) {
            res.status = RunStatus::Optimal;
            res.root_decision = y;
            for (size_t k = 0; k < ns; ++k)
                res.scenario_decisions[scen_ids[k]] = subsol[k].primal;
            res.objective = true_value;
            res.lower_bound = lower;
            res.upper_bound = upper;
            res.trace.terminate("optimal");
            return res;
        }
        for (auto& c : cuts) {
            if (res.pool.add(c))
                res.trace.cut("opt", c.target == -1 ? scen_ids.front() : c.target,
                              root.id, c.G, c.g);
        }
    }

    res.status = RunStatus::IterationLimit;
    res.lower_bound = lower;
    res.upper_bound = upper;
    res.trace.terminate("iteration limit");
    return res;
}

}  // namespace stoch
