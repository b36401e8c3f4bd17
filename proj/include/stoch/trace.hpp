#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "stoch/linear_program.hpp"

namespace stoch {

/// Ordered event log of a decomposition run, serializable as JSON-lines.
struct TraceEvent {
    enum class Kind { Solve, Cut, Move, Bounds, Terminate };
    Kind kind;

    // SOLVE
    int node = -1;
    int stage = -1;
    SolveStatus status = SolveStatus::Optimal;
    double objective = 0.0;
    // CUT
    std::string cut_kind;  // "feas" | "opt"
    int from_node = -1;
    int to_node = -1;
    std::vector<double> coefficients;
    double rhs = 0.0;
    // MOVE
    std::string direction;  // "ascend" | "descend"
    int from_stage = -1;
    int to_stage = -1;
    // BOUNDS
    double lower = 0.0;
    double upper = 0.0;
    // TERMINATE
    std::string reason;
};

struct SolveTrace {
    std::vector<TraceEvent> events;

    void solve(int node, int stage, SolveStatus status, double objective);
    void cut(const std::string& kind, int from, int to,
             std::vector<double> coefficients, double rhs);
    void move(const std::string& direction, int from_stage, int to_stage);
    void bounds(double lower, double upper);
    void terminate(const std::string& reason);

    void write_jsonl(std::ostream& os) const;
    std::string to_jsonl() const;
};

const char* status_name(SolveStatus s);

}  // namespace stoch
