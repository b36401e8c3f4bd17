#include "stoch/trace.hpp"

#include <sstream>

#include <json.hpp>

namespace stoch {

const char* status_name(SolveStatus s) {
    switch (s) {
        case SolveStatus::Optimal: return "Optimal";
        case SolveStatus::Infeasible: return "Infeasible";
        case SolveStatus::Unbounded: return "Unbounded";
    }
    return "Unknown";
}

void SolveTrace::solve(int node, int stage, SolveStatus status, double objective) {
    TraceEvent e;
    e.kind = TraceEvent::Kind::Solve;
    e.node = node;
    e.stage = stage;
    e.status = status;
    e.objective = objective;
    events.push_back(std::move(e));
}

void SolveTrace::cut(const std::string& kind, int from, int to,
                     std::vector<double> coefficients, double rhs) {
    TraceEvent e;
    e.kind = TraceEvent::Kind::Cut;
    e.cut_kind = kind;
    e.from_node = from;
    e.to_node = to;
    e.coefficients = std::move(coefficients);
    e.rhs = rhs;
    events.push_back(std::move(e));
}

void SolveTrace::move(const std::string& direction, int from_stage, int to_stage) {
    TraceEvent e;
    e.kind = TraceEvent::Kind::Move;
    e.direction = direction;
    e.from_stage = from_stage;
    e.to_stage = to_stage;
    events.push_back(std::move(e));
}

void SolveTrace::bounds(double lower, double upper) {
    TraceEvent e;
    e.kind = TraceEvent::Kind::Bounds;
    e.lower = lower;
    e.upper = upper;
    events.push_back(std::move(e));
}

void SolveTrace::terminate(const std::string& reason) {
    TraceEvent e;
    e.kind = TraceEvent::Kind::Terminate;
    e.reason = reason;
    events.push_back(std::move(e));
}

void SolveTrace::write_jsonl(std::ostream& os) const {
    using nlohmann::json;
    for (const TraceEvent& e : events) {
        json j;
        switch (e.kind) {
            case TraceEvent::Kind::Solve:
                j["event"] = "SOLVE";
                j["node"] = e.node;
                j["stage"] = e.stage;
                j["status"] = status_name(e.status);
                j["objective"] = e.objective;
                break;
            case TraceEvent::Kind::Cut:
                j["event"] = "CUT";
                j["kind"] = e.cut_kind;
                j["from"] = e.from_node;
                j["to"] = e.to_node;
                j["coefficients"] = e.coefficients;
                j["rhs"] = e.rhs;
                break;
            case TraceEvent::Kind::Move:
                j["event"] = "MOVE";
                j["direction"] = e.direction;
                j["from_stage"] = e.from_stage;
                j["to_stage"] = e.to_stage;
                break;
            case TraceEvent::Kind::Bounds:
                j["event"] = "BOUNDS";
                j["lower"] = e.lower;
                j["upper"] = e.upper;
                break;
            case TraceEvent::Kind::Terminate:
                j["event"] = "TERMINATE";
                j["reason"] = e.reason;
                break;
        }
        os << j.dump() << "\n";
    }
}

std::string SolveTrace::to_jsonl() const {
    std::ostringstream oss;
    write_jsonl(oss);
    return oss.str();
}

}  // namespace stoch
