#include "stoch/det_equiv.hpp"

#include <algorithm>

namespace stoch {

DetEquiv build_deterministic_equivalent(const ScenarioTree& tree) {
    auto bad = validate(tree);
    if (!bad.empty()) throw InvalidTreeError("invalid tree: " + bad.front());

    auto order = tree.bfs_order();
    DetEquiv out;
    int total_vars = 0;
    int total_rows = 0;
    for (int id : order) {
        const NodeProblem& n = tree.node(id);
        out.var_map[id] = {total_vars, total_vars + n.num_vars()};
        total_vars += n.num_vars();
        total_rows += n.num_rows();
    }

    LinearProgram lp(Sense::Minimize, total_vars);
    lp.rows.reserve(total_rows);
    for (int id : order) {
        const NodeProblem& n = tree.node(id);
        const auto [col0, col1] = out.var_map[id];
        double w = tree.path_prob(id);
        for (int j = 0; j < n.num_vars(); ++j) lp.objective[col0 + j] = w * n.q[j];

        for (int r = 0; r < n.num_rows(); ++r) {
            std::vector<double> coeffs(total_vars, 0.0);
            for (int j = 0; j < n.num_vars(); ++j) coeffs[col0 + j] = n.W[r][j];
            if (n.parent) {
                const auto [p0, p1] = out.var_map[*n.parent];
                for (int j = 0; j < p1 - p0; ++j) coeffs[p0 + j] = (*n.T)[r][j];
            }
            lp.rows.push_back(Row{std::move(coeffs), n.relations[r], n.h[r]});
        }
    }
    out.lp = std::move(lp);
    return out;
}

namespace {

// Subtree nodes with stage in [root.stage .. last], breadth-first.
std::vector<int> collect_block(const ScenarioTree& tree, int root, int last) {
    std::vector<int> out{root};
    for (size_t i = 0; i < out.size(); ++i) {
        const NodeProblem& n = tree.node(out[i]);
        if (n.stage >= last) continue;
        for (int c : n.children) out.push_back(c);
    }
    std::stable_sort(out.begin(), out.end(), [&](int a, int b) {
        return std::make_pair(tree.node(a).stage, a) <
               std::make_pair(tree.node(b).stage, b);
    });
    return out;
}

}  // namespace

ScenarioTree aggregate_stages(const ScenarioTree& tree, int first, int last) {
    if (first < 0 || last < first || last >= tree.num_stages)
        throw BadRangeError("aggregate_stages: bad stage range");
    auto bad = validate(tree);
    if (!bad.empty()) throw InvalidTreeError("invalid tree: " + bad.front());
    if (first == last) return tree;

    const int shrink = last - first;
    ScenarioTree out;
    out.root_id = tree.root_id;
    out.num_stages = tree.num_stages - shrink;

    // Stages above the range are copied untouched.
    for (const auto& [id, n] : tree.nodes)
        if (n.stage < first) out.nodes.emplace(id, n);

    for (int rid : tree.nodes_at_stage(first)) {
        const NodeProblem& r = tree.node(rid);
        auto block = collect_block(tree, rid, last);

        std::map<int, std::pair<int, int>> cols;
        std::map<int, double> cond;  // within-block path prob relative to rid
        int total_vars = 0;
        int total_rows = 0;
        for (int id : block) {
            const NodeProblem& n = tree.node(id);
            cols[id] = {total_vars, total_vars + n.num_vars()};
            total_vars += n.num_vars();
            total_rows += n.num_rows();
            cond[id] = id == rid ? 1.0 : cond.at(*n.parent) * n.prob;
        }

        NodeProblem super;
        super.id = rid;
        super.stage = first;
        super.parent = r.parent;
        super.prob = r.prob;
        super.q.assign(total_vars, 0.0);
        super.W.reserve(total_rows);
        if (r.T) {
            int pv = static_cast<int>((*r.T)[0].size());
            super.T = Matrix(total_rows, std::vector<double>(pv, 0.0));
        } else if (r.parent) {
            super.T = Matrix(total_rows, std::vector<double>(
                                             tree.node(*r.parent).num_vars(), 0.0));
        }
        int row_at = 0;
        for (int id : block) {
            const NodeProblem& n = tree.node(id);
            const auto [c0, c1] = cols[id];
            for (int j = 0; j < n.num_vars(); ++j)
                super.q[c0 + j] = cond[id] * n.q[j];
            for (int rr = 0; rr < n.num_rows(); ++rr) {
                std::vector<double> row(total_vars, 0.0);
                for (int j = 0; j < n.num_vars(); ++j) row[c0 + j] = n.W[rr][j];
                if (id != rid) {
                    const auto [p0, p1] = cols[*n.parent];
                    for (int j = 0; j < p1 - p0; ++j) row[p0 + j] = (*n.T)[rr][j];
                } else if (super.T) {
                    (*super.T)[row_at] = (*r.T)[rr];
                }
                super.W.push_back(std::move(row));
                super.h.push_back(n.h[rr]);
                super.relations.push_back(n.relations[rr]);
                ++row_at;
            }
        }

        // Children are the original stage last+1 nodes hanging off the
        // block; their T is re-targeted at the stacked columns and the
        // interior conditional probabilities fold into theirs so path
        // probabilities are preserved.
        for (int id : block) {
            const NodeProblem& n = tree.node(id);
            if (n.stage != last) continue;
            for (int cid : n.children) {
                NodeProblem child = tree.node(cid);
                child.parent = rid;
                child.prob = cond[id] * child.prob;
                child.stage = first + 1;
                const auto [p0, p1] = cols[id];
                Matrix newT(child.num_rows(), std::vector<double>(total_vars, 0.0));
                for (int rr = 0; rr < child.num_rows(); ++rr)
                    for (int j = 0; j < p1 - p0; ++j)
                        newT[rr][p0 + j] = (*child.T)[rr][j];
                child.T = std::move(newT);
                super.children.push_back(cid);
                out.nodes.emplace(cid, std::move(child));
            }
        }
        out.nodes.emplace(rid, std::move(super));
    }

    // Stages below the range: only the stage number changes.
    for (const auto& [id, n] : tree.nodes) {
        if (n.stage <= last + 1) continue;
        NodeProblem copy = n;
        copy.stage -= shrink;
        out.nodes.emplace(id, std::move(copy));
    }
    return out;
}

}  // namespace stoch
