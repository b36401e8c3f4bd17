#include "stoch/scenario_tree.hpp"

#include <algorithm>
#include <cmath>

namespace stoch {

double ScenarioTree::path_prob(int id) const {
    double p = 1.0;
    const NodeProblem* n = &nodes.at(id);
    while (true) {
        p *= n->prob;
        if (!n->parent) break;
        n = &nodes.at(*n->parent);
    }
    return p;
}

std::vector<int> ScenarioTree::nodes_at_stage(int stage) const {
    std::vector<int> out;
    for (const auto& [id, n] : nodes)
        if (n.stage == stage) out.push_back(id);
    return out;
}

std::vector<int> ScenarioTree::bfs_order() const {
    std::vector<int> out;
    for (int s = 0; s < num_stages; ++s) {
        auto level = nodes_at_stage(s);
        std::sort(level.begin(), level.end());
        out.insert(out.end(), level.begin(), level.end());
    }
    return out;
}

std::vector<std::string> validate(const ScenarioTree& tree) {
    std::vector<std::string> bad;
    auto flag = [&](int id, const std::string& why) {
        bad.push_back("node " + std::to_string(id) + ": " + why);
    };

    if (!tree.nodes.count(tree.root_id)) {
        bad.push_back("root id " + std::to_string(tree.root_id) + " not present");
        return bad;
    }
    const NodeProblem& root = tree.node(tree.root_id);
    if (root.parent) flag(root.id, "root must have no parent");
    if (root.T) flag(root.id, "root must have no T matrix");
    if (std::abs(root.prob - 1.0) > 1e-9) flag(root.id, "root prob must be 1");
    if (root.stage != 0) flag(root.id, "root stage must be 0");

    int max_stage = 0;
    for (const auto& [id, n] : tree.nodes) {
        max_stage = std::max(max_stage, n.stage);
        if (n.prob <= 0.0 || n.prob > 1.0 + 1e-9)
            flag(id, "prob must lie in (0,1]");
        if (static_cast<int>(n.W.size()) != n.num_rows() ||
            static_cast<int>(n.relations.size()) != n.num_rows())
            flag(id, "W row count and relations must match h length");
        for (const auto& row : n.W)
            if (static_cast<int>(row.size()) != n.num_vars())
                flag(id, "W column count must match q length");
        if (id != tree.root_id) {
            if (!n.parent) {
                flag(id, "non-root node missing parent");
                continue;
            }
            auto pit = tree.nodes.find(*n.parent);
            if (pit == tree.nodes.end()) {
                flag(id, "parent " + std::to_string(*n.parent) + " not present");
                continue;
            }
            const NodeProblem& par = pit->second;
            if (n.stage != par.stage + 1)
                flag(id, "stage must be parent stage + 1");
            if (std::find(par.children.begin(), par.children.end(), id) ==
                par.children.end())
                flag(id, "not listed among parent's children");
            if (!n.T) {
                flag(id, "non-root node missing T matrix");
            } else {
                if (static_cast<int>(n.T->size()) != n.num_rows())
                    flag(id, "T row count must match h length");
                for (const auto& row : *n.T)
                    if (static_cast<int>(row.size()) != par.num_vars())
                        flag(id, "T column count " + std::to_string(row.size()) +
                                     " must match parent " +
                                     std::to_string(*n.parent) + " var count " +
                                     std::to_string(par.num_vars()));
            }
        }
    }

    for (const auto& [id, n] : tree.nodes) {
        if (n.children.empty()) {
            if (n.stage != max_stage)
                flag(id, "leaf not at final stage (ragged trees rejected)");
            continue;
        }
        double sum = 0.0;
        for (int c : n.children) {
            auto it = tree.nodes.find(c);
            if (it == tree.nodes.end()) {
                flag(id, "child " + std::to_string(c) + " not present");
                continue;
            }
            if (!it->second.parent || *it->second.parent != id)
                flag(c, "child does not point back at parent " + std::to_string(id));
            sum += it->second.prob;
        }
        if (std::abs(sum - 1.0) > 1e-9)
            flag(id, "children probabilities sum " + std::to_string(sum));
    }

    if (tree.num_stages != max_stage + 1)
        bad.push_back("num_stages " + std::to_string(tree.num_stages) +
                      " does not match deepest stage " + std::to_string(max_stage));

    // Reachability: all nodes must hang off the root.
    std::vector<int> stack{tree.root_id};
    std::map<int, bool> seen;
    while (!stack.empty()) {
        int id = stack.back();
        stack.pop_back();
        if (seen[id]) continue;
        seen[id] = true;
        auto it = tree.nodes.find(id);
        if (it == tree.nodes.end()) continue;
        for (int c : it->second.children) stack.push_back(c);
    }
    for (const auto& [id, n] : tree.nodes)
        if (!seen[id]) flag(id, "unreachable from root");

    return bad;
}

}  // namespace stoch
