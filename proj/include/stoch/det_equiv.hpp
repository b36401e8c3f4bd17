#pragma once

#include <map>

#include "stoch/scenario_tree.hpp"

namespace stoch {

struct DetEquiv {
    LinearProgram lp;
    /// node id -> [first column, first column + num_vars) in the flat LP.
    std::map<int, std::pair<int, int>> var_map;
};

/// Flattens the tree into one minimization LP: a column block per node
/// (breadth-first by stage then id), objective weighted by path
/// probability, and a row block per node carrying W on the node's columns
/// and T on the parent's.
DetEquiv build_deterministic_equivalent(const ScenarioTree& tree);

class BadRangeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Collapses stages [first..last] into super-nodes holding the
/// deterministic-equivalent blocks of each spanned subtree. Children of a
/// super-node are the original stage last+1 nodes with T re-targeted at
/// the stacked columns and probability re-weighted so path probabilities
/// are preserved.
ScenarioTree aggregate_stages(const ScenarioTree& tree, int first, int last);

}  // namespace stoch
