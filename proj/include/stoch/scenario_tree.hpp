#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stoch/linear_program.hpp"

namespace stoch {

using Matrix = std::vector<std::vector<double>>;

/// One decision point of the stage tree: min q'v subject to
/// W v (rel) h - T y_parent, v >= 0. The root carries no T.
struct NodeProblem {
    int id = 0;
    int stage = 0;
    std::optional<int> parent;
    double prob = 1.0;  // conditional on the parent being reached
    std::vector<double> q;
    Matrix W;
    std::optional<Matrix> T;
    std::vector<double> h;
    std::vector<Relation> relations;
    std::vector<int> children;

    int num_vars() const { return static_cast<int>(q.size()); }
    int num_rows() const { return static_cast<int>(h.size()); }
};

struct ScenarioTree {
    std::map<int, NodeProblem> nodes;
    int root_id = 0;
    int num_stages = 1;

    const NodeProblem& node(int id) const { return nodes.at(id); }
    bool is_leaf(int id) const { return nodes.at(id).children.empty(); }

    /// Product of conditional probabilities along the root path.
    double path_prob(int id) const;

    std::vector<int> nodes_at_stage(int stage) const;

    /// Node ids in breadth-first order, sorted by (stage, id).
    std::vector<int> bfs_order() const;
};

/// Every invariant violation with the offending node and reason; empty
/// means the tree is well formed.
std::vector<std::string> validate(const ScenarioTree& tree);

// JSON wire format (exact field names per the file schema).
std::string serialize_tree(const ScenarioTree& tree);
ScenarioTree parse_tree(const std::string& json_text);

struct DiscretePoint {
    double value;
    double prob;
};

/// Discretizes N(mean, std^2) into n equiprobable scenarios. Stratified
/// places points at the quantile midpoints; monte_carlo draws seeded
/// samples. The last probability absorbs any rounding so the sum is 1.
std::vector<DiscretePoint> discretize_normal(double mean, double stddev, int n,
                                             bool monte_carlo = false,
                                             unsigned long long seed = 0);

/// Inverse standard normal CDF (rational approximation, refined to full
/// double precision with erfc).
double inverse_normal_cdf(double p);

struct RandomTreeSpec {
    int stages = 2;
    std::vector<int> branching;  // per stage transition, length stages - 1
    int vars_per_node = 2;
    int rows_per_node = 2;
    unsigned long long seed = 0;
    double infeasibility_fraction = 0.0;
};

/// Deterministic seeded generator. Instances are feasible and bounded by
/// construction (a nonnegative witness decision per node backs every row,
/// objectives are nonnegative). A positive infeasibility_fraction injects
/// parent-decision bounds at child nodes to exercise feasibility cuts.
ScenarioTree generate_random_tree(const RandomTreeSpec& spec);

class BadTreeSpecError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class BadParamError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidTreeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace stoch
