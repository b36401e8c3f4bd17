#include "stoch/scenario_tree.hpp"

#include <json.hpp>

namespace stoch {

namespace {

using nlohmann::json;

std::string relation_tag(Relation r) {
    switch (r) {
        case Relation::LessEqual: return "le";
        case Relation::GreaterEqual: return "ge";
        case Relation::Equal: return "eq";
    }
    return "le";
}

Relation relation_from_tag(const std::string& s) {
    if (s == "le") return Relation::LessEqual;
    if (s == "ge") return Relation::GreaterEqual;
    if (s == "eq") return Relation::Equal;
    throw InvalidTreeError("unknown relation tag: " + s);
}

}  // namespace

std::string serialize_tree(const ScenarioTree& tree) {
    json out;
    out["nodes"] = json::array();
    for (int id : tree.bfs_order()) {
        const NodeProblem& n = tree.node(id);
        json jn;
        jn["id"] = n.id;
        jn["stage"] = n.stage;
        jn["parent"] = n.parent ? json(*n.parent) : json(nullptr);
        jn["prob"] = n.prob;
        jn["q"] = n.q;
        jn["W"] = n.W;
        jn["T"] = n.T ? json(*n.T) : json(nullptr);
        jn["h"] = n.h;
        json rels = json::array();
        for (Relation r : n.relations) rels.push_back(relation_tag(r));
        jn["relations"] = rels;
        jn["children"] = n.children;
        out["nodes"].push_back(std::move(jn));
    }
    out["root"] = tree.root_id;
    return out.dump();
}

ScenarioTree parse_tree(const std::string& json_text) {
    json in;
    try {
        in = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw InvalidTreeError(std::string("bad tree JSON: ") + e.what());
    }
    ScenarioTree tree;
    try {
        tree.root_id = in.at("root").get<int>();
        int max_stage = 0;
        for (const auto& jn : in.at("nodes")) {
            NodeProblem n;
            n.id = jn.at("id").get<int>();
            n.stage = jn.at("stage").get<int>();
            if (!jn.at("parent").is_null()) n.parent = jn.at("parent").get<int>();
            n.prob = jn.at("prob").get<double>();
            n.q = jn.at("q").get<std::vector<double>>();
            n.W = jn.at("W").get<Matrix>();
            if (!jn.at("T").is_null()) n.T = jn.at("T").get<Matrix>();
            n.h = jn.at("h").get<std::vector<double>>();
            for (const auto& r : jn.at("relations"))
                n.relations.push_back(relation_from_tag(r.get<std::string>()));
            n.children = jn.at("children").get<std::vector<int>>();
            max_stage = std::max(max_stage, n.stage);
            int id = n.id;
            if (tree.nodes.count(id))
                throw InvalidTreeError("duplicate node id " + std::to_string(id));
            tree.nodes.emplace(id, std::move(n));
        }
        tree.num_stages = max_stage + 1;
    } catch (const json::exception& e) {
        throw InvalidTreeError(std::string("bad tree JSON: ") + e.what());
    }
    return tree;
}

}  // namespace stoch
