#include "stoch/scenario_tree.hpp"

#include <random>

namespace stoch {

ScenarioTree generate_random_tree(const RandomTreeSpec& spec) {
    if (spec.stages < 1) throw BadTreeSpecError("stages must be >= 1");
    if (spec.vars_per_node < 1) throw BadTreeSpecError("vars must be >= 1");
    if (spec.rows_per_node < 1) throw BadTreeSpecError("rows must be >= 1");
    if (static_cast<int>(spec.branching.size()) != spec.stages - 1)
        throw BadTreeSpecError("branching must list one factor per transition");
    for (int b : spec.branching)
        if (b < 1) throw BadTreeSpecError("branching factors must be >= 1");

    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> signed_unit(-1.0, 1.0);

    ScenarioTree tree;
    tree.num_stages = spec.stages;
    tree.root_id = 0;
    int next_id = 0;

    // Witness decisions back every generated row so the tree stays
    // feasible; q >= 0 with min sense keeps it bounded below.
    std::map<int, std::vector<double>> witness;

    struct Pending {
        int parent;  // -1 for the root
        int stage;
        double prob;
    };
    std::vector<Pending> frontier{{-1, 0, 1.0}};
    while (!frontier.empty()) {
        std::vector<Pending> next_frontier;
        for (const Pending& pd : frontier) {
            NodeProblem n;
            n.id = next_id++;
            n.stage = pd.stage;
            n.prob = pd.prob;
            if (pd.parent >= 0) n.parent = pd.parent;

            const int nv = spec.vars_per_node;
            std::vector<double> wit(nv);
            for (double& w : wit) w = 2.0 * unit(rng);

            n.q.resize(nv);
            for (double& c : n.q) c = unit(rng);
            n.W.assign(spec.rows_per_node, std::vector<double>(nv));
            for (auto& row : n.W)
                for (double& a : row) a = signed_unit(rng);
            if (pd.parent >= 0) {
                int pv = static_cast<int>(witness.at(pd.parent).size());
                Matrix T(spec.rows_per_node, std::vector<double>(pv));
                for (auto& row : T)
                    for (double& a : row) a = signed_unit(rng);
                n.T = std::move(T);
            }
            for (int r = 0; r < spec.rows_per_node; ++r) {
                double lhs = 0.0;
                for (int j = 0; j < nv; ++j) lhs += n.W[r][j] * wit[j];
                if (n.T) {
                    const auto& pw = witness.at(pd.parent);
                    for (size_t j = 0; j < pw.size(); ++j)
                        lhs += (*n.T)[r][j] * pw[j];
                }
                n.h.push_back(lhs - unit(rng));
                n.relations.push_back(Relation::GreaterEqual);
            }

            // Box row keeping every node's own region bounded, so master
            // relaxations during decomposition stay bounded as well. The
            // witness (each entry <= 2) satisfies it with slack.
            n.W.push_back(std::vector<double>(nv, 1.0));
            if (n.T)
                n.T->push_back(
                    std::vector<double>(witness.at(pd.parent).size(), 0.0));
            n.h.push_back(2.5 * nv);
            n.relations.push_back(Relation::LessEqual);

            // Optional parent-decision bound: satisfied by the witness but
            // violated by the cost-minimal parent choice, forcing a
            // feasibility cut during decomposition.
            if (pd.parent >= 0 && spec.infeasibility_fraction > 0.0 &&
                unit(rng) < spec.infeasibility_fraction) {
                const auto& pw = witness.at(pd.parent);
                Matrix& T = *n.T;
                n.W.push_back(std::vector<double>(nv, 0.0));
                T.push_back(std::vector<double>(pw.size(), 0.0));
                T.back()[0] = 1.0;
                n.h.push_back(0.9 * pw[0]);
                n.relations.push_back(Relation::GreaterEqual);
            }

            witness[n.id] = std::move(wit);
            if (pd.stage + 1 < spec.stages) {
                int b = spec.branching[pd.stage];
                for (int k = 0; k < b; ++k)
                    next_frontier.push_back({n.id, pd.stage + 1, 1.0 / b});
            }
            tree.nodes.emplace(n.id, std::move(n));
        }
        frontier = std::move(next_frontier);
    }

    // Children were assigned ids after their parents; fill in the links.
    for (auto& [id, n] : tree.nodes)
        if (n.parent) tree.nodes.at(*n.parent).children.push_back(id);
    return tree;
}

}  // namespace stoch
