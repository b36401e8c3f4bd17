// sptool: solve, generate, and discretize stage-tree stochastic programs.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "stoch/det_equiv.hpp"
#include "stoch/lshaped.hpp"
#include "stoch/nested.hpp"

using nlohmann::json;

namespace {

struct SolveReport {
    std::string status;
    double objective = 0.0;
    std::map<int, std::vector<double>> decisions;
    int iterations = 0;
    int feas_cuts = 0;
    int opt_cuts = 0;
    double lower = 0.0;
    double upper = 0.0;
    int exit_code = 0;
};

int exit_code_of(stoch::RunStatus s) {
    switch (s) {
        case stoch::RunStatus::Optimal: return 0;
        case stoch::RunStatus::Infeasible: return 2;
        case stoch::RunStatus::Unbounded: return 3;
        default: return 4;
    }
}

void emit(const SolveReport& rep, const std::string& output_path,
          const stoch::SolveTrace& trace, const std::string& trace_path) {
    json decisions = json::object();
    for (const auto& [id, v] : rep.decisions)
        decisions[std::to_string(id)] = v;
    json report = {
        {"status", rep.status},
        {"objective", rep.objective},
        {"decisions", decisions},
        {"iterations", rep.iterations},
        {"cuts", {{"feasibility", rep.feas_cuts}, {"optimality", rep.opt_cuts}}},
        {"bounds", {{"lower", rep.lower}, {"upper", rep.upper}}},
    };
    if (output_path.empty()) {
        std::cout << report.dump(2) << "\n";
    } else {
        std::ofstream os(output_path);
        os << report.dump(2) << "\n";
    }
    if (!trace_path.empty()) {
        std::ofstream os(trace_path);
        trace.write_jsonl(os);
    }
}

int cmd_solve(const std::string& input, const std::string& method,
              const std::string& protocol, const std::string& cuts, double tol,
              int max_iters, const std::string& trace_path,
              const std::string& output_path) {
    std::ifstream is(input);
    if (!is) {
        std::cerr << "sptool: cannot open " << input << "\n";
        return 1;
    }
    std::stringstream buf;
    buf << is.rdbuf();
    stoch::ScenarioTree tree = stoch::parse_tree(buf.str());
    auto problems = stoch::validate(tree);
    if (!problems.empty()) {
        for (const auto& p : problems) std::cerr << "sptool: " << p << "\n";
        return 1;
    }

    const stoch::CutMode mode =
        cuts == "multi" ? stoch::CutMode::Multicut : stoch::CutMode::Unicut;

    SolveReport rep;
    stoch::SolveTrace trace;
    if (method == "detequiv") {
        stoch::DetEquiv de = stoch::build_deterministic_equivalent(tree);
        stoch::SimplexOptions opts;
        opts.gap_tol = tol;
        stoch::SimplexSolution sol = stoch::solve_lp(de.lp, opts);
        rep.iterations = sol.iterations;
        trace.solve(tree.root_id, 0, sol.status, sol.objective);
        switch (sol.status) {
            case stoch::SolveStatus::Optimal:
                rep.status = "Optimal";
                rep.objective = sol.objective;
                rep.lower = rep.upper = sol.objective;
                for (const auto& [id, span] : de.var_map)
                    rep.decisions[id] = std::vector<double>(
                        sol.primal.begin() + span.first,
                        sol.primal.begin() + span.second);
                rep.exit_code = 0;
                trace.terminate("optimal");
                break;
            case stoch::SolveStatus::Infeasible:
                rep.status = "Infeasible";
                rep.exit_code = 2;
                trace.terminate("infeasible");
                break;
            default:
                rep.status = "Unbounded";
                rep.exit_code = 3;
                trace.terminate("unbounded");
                break;
        }
    } else if (method == "lshaped") {
        stoch::LShapedOptions opts;
        opts.mode = mode;
        opts.gap_tol = tol;
        opts.max_iters = max_iters;
        stoch::LShapedResult res = stoch::run_lshaped(tree, opts);
        rep.status = stoch::run_status_name(res.status);
        rep.objective = res.objective;
        rep.iterations = res.iterations;
        rep.feas_cuts = static_cast<int>(res.pool.feasibility.size());
        rep.opt_cuts = static_cast<int>(res.pool.optimality.size());
        rep.lower = res.lower_bound;
        rep.upper = res.upper_bound;
        rep.decisions[tree.root_id] = res.root_decision;
        for (const auto& [id, v] : res.scenario_decisions) rep.decisions[id] = v;
        rep.exit_code = exit_code_of(res.status);
        trace = std::move(res.trace);
    } else {  // nested
        stoch::NestedOptions opts;
        opts.mode = mode;
        opts.gap_tol = tol;
        opts.max_passes = max_iters;
        opts.protocol = protocol == "ff"   ? stoch::Protocol::FastForward
                        : protocol == "fb" ? stoch::Protocol::FastBack
                                           : stoch::Protocol::FastForwardFastBack;
        stoch::NestedResult res = stoch::run_nested(tree, opts);
        rep.status = stoch::run_status_name(res.status);
        rep.objective = res.objective;
        rep.iterations = res.passes;
        for (const auto& [id, pool] : res.pools) {
            rep.feas_cuts += static_cast<int>(pool.feasibility.size());
            rep.opt_cuts += static_cast<int>(pool.optimality.size());
        }
        rep.lower = res.lower_bound;
        rep.upper = res.upper_bound;
        rep.decisions = res.decisions;
        rep.exit_code = exit_code_of(res.status);
        trace = std::move(res.trace);
    }
    emit(rep, output_path, trace, trace_path);
    return rep.exit_code;
}

int cmd_generate(int stages, const std::vector<int>& branching, int vars,
                 int rows, unsigned long long seed, double infeas_frac) {
    stoch::RandomTreeSpec spec;
    spec.stages = stages;
    spec.branching = branching;
    if (stages == 1)
        spec.branching.clear();
    else if (spec.branching.size() == 1 && stages > 2)
        spec.branching.assign(stages - 1, branching.front());
    spec.vars_per_node = vars;
    spec.rows_per_node = rows;
    spec.seed = seed;
    spec.infeasibility_fraction = infeas_frac;
    stoch::ScenarioTree tree = stoch::generate_random_tree(spec);
    std::cout << stoch::serialize_tree(tree) << "\n";
    return 0;
}

int cmd_discretize(double mean, double stddev, int n, bool monte_carlo,
                   unsigned long long seed) {
    auto points = stoch::discretize_normal(mean, stddev, n, monte_carlo, seed);
    json out = json::array();
    for (const auto& p : points)
        out.push_back({{"value", p.value}, {"prob", p.prob}});
    std::cout << out.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stage-tree stochastic linear program toolkit"};
    app.require_subcommand(1);

    // solve
    std::string input, method = "lshaped", protocol = "fffb", cuts = "uni";
    std::string trace_path, output_path;
    double tol = 1e-6;
    int max_iters = 500;
    auto* solve = app.add_subcommand("solve", "Solve a tree file");
    solve->add_option("--input", input, "Tree JSON file")->required();
    solve->add_option("--method", method, "Solution method")
        ->check(CLI::IsMember({"detequiv", "lshaped", "nested"}));
    solve->add_option("--protocol", protocol, "Nested sequencing protocol")
        ->check(CLI::IsMember({"ff", "fb", "fffb"}));
    solve->add_option("--cuts", cuts, "Optimality cut mode")
        ->check(CLI::IsMember({"uni", "multi"}));
    solve->add_option("--tol", tol, "Termination gap tolerance");
    solve->add_option("--max-iters", max_iters, "Iteration / pass limit");
    solve->add_option("--trace", trace_path, "Write a JSON-lines event trace");
    solve->add_option("--output", output_path, "Report path (default stdout)");

    // generate
    int stages = 2, vars = 2, rows = 2;
    std::vector<int> branching;
    unsigned long long seed = 0;
    double infeas_frac = 0.0;
    auto* gen = app.add_subcommand("generate", "Emit a random tree");
    gen->add_option("--stages", stages, "Number of stages")->required();
    gen->add_option("--branching", branching, "Children per node, per stage")
        ->required();
    gen->add_option("--vars", vars, "Variables per node")->required();
    gen->add_option("--rows", rows, "Rows per node")->required();
    gen->add_option("--seed", seed, "Generator seed")->required();
    gen->add_option("--infeas-frac", infeas_frac,
                    "Fraction of nodes given a parent-decision bound");

    // discretize
    double mean = 0.0, stddev = 1.0;
    int n = 1;
    unsigned long long dseed = 0;
    auto* disc = app.add_subcommand("discretize", "Discretize a normal");
    disc->add_option("--mean", mean, "Mean")->required();
    disc->add_option("--std", stddev, "Standard deviation")->required();
    disc->add_option("--n", n, "Number of scenarios")->required();
    auto* seed_opt =
        disc->add_option("--seed", dseed, "Monte Carlo sampling seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (app.got_subcommand(solve))
            return cmd_solve(input, method, protocol, cuts, tol, max_iters,
                             trace_path, output_path);
        if (app.got_subcommand(gen))
            return cmd_generate(stages, branching, vars, rows, seed,
                                infeas_frac);
        return cmd_discretize(mean, stddev, n, seed_opt->count() > 0, dseed);
    } catch (const std::exception& e) {
        std::cerr << "sptool: " << e.what() << "\n";
        return 1;
    }
}
