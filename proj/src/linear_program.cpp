#include "stoch/linear_program.hpp"

#include <cmath>
#include <utility>

namespace stoch {

void LinearProgram::add_row(std::vector<double> coeffs, Relation rel, double rhs,
                            std::string name) {
    rows.push_back(Row{std::move(coeffs), rel, rhs});
    if (!name.empty()) {
        row_names.resize(rows.size());
        row_names.back() = std::move(name);
    }
}

std::optional<std::string> LinearProgram::invalid_reason() const {
    if (num_vars < 1) return "num_vars must be >= 1";
    if (static_cast<int>(objective.size()) != num_vars)
        return "objective length does not match num_vars";
    if (static_cast<int>(var_kinds.size()) != num_vars)
        return "var_kinds length does not match num_vars";
    for (double c : objective)
        if (!std::isfinite(c)) return "non-finite objective coefficient";
    for (size_t i = 0; i < rows.size(); ++i) {
        const Row& r = rows[i];
        if (static_cast<int>(r.coeffs.size()) != num_vars)
            return "row " + std::to_string(i) + " has wrong coefficient count";
        for (double a : r.coeffs)
            if (!std::isfinite(a))
                return "row " + std::to_string(i) + " has non-finite coefficient";
        if (!std::isfinite(r.rhs))
            return "row " + std::to_string(i) + " has non-finite rhs";
    }
    return std::nullopt;
}

double LinearProgram::objective_value(const std::vector<double>& x) const {
    double v = 0.0;
    for (int j = 0; j < num_vars; ++j) v += objective[j] * x[j];
    return v;
}

double LinearProgram::max_violation(const std::vector<double>& x) const {
    double worst = 0.0;
    for (const Row& r : rows) {
        double lhs = 0.0;
        for (int j = 0; j < num_vars; ++j) lhs += r.coeffs[j] * x[j];
        double v = 0.0;
        switch (r.rel) {
            case Relation::LessEqual: v = lhs - r.rhs; break;
            case Relation::GreaterEqual: v = r.rhs - lhs; break;
            case Relation::Equal: v = std::abs(lhs - r.rhs); break;
        }
        worst = std::max(worst, v);
    }
    for (int j = 0; j < num_vars; ++j) {
        if (var_kinds[j] == VarKind::NonNegative) worst = std::max(worst, -x[j]);
        if (var_kinds[j] == VarKind::NonPositive) worst = std::max(worst, x[j]);
    }
    return worst;
}

std::vector<double> StandardizationMap::restore_primal(
    const std::vector<double>& std_x) const {
    std::vector<double> x(vars.size(), 0.0);
    for (size_t j = 0; j < vars.size(); ++j) {
        if (auto* id = std::get_if<Identity>(&vars[j])) {
            x[j] = std_x[id->index];
        } else if (auto* neg = std::get_if<Negated>(&vars[j])) {
            x[j] = -std_x[neg->index];
        } else {
            auto& sp = std::get<Split>(vars[j]);
            x[j] = std_x[sp.pos_index] - std_x[sp.neg_index];
        }
    }
    return x;
}

bool StandardizationMap::is_identity() const {
    for (size_t j = 0; j < vars.size(); ++j) {
        auto* id = std::get_if<Identity>(&vars[j]);
        if (!id || id->index != static_cast<int>(j)) return false;
    }
    return true;
}

std::pair<LinearProgram, StandardizationMap> standardize(const LinearProgram& p) {
    if (auto why = p.invalid_reason()) throw std::invalid_argument(*why);

    StandardizationMap map;
    map.vars.reserve(p.num_vars);
    int next = 0;
    for (int j = 0; j < p.num_vars; ++j) {
        switch (p.var_kinds[j]) {
            case VarKind::NonNegative:
                map.vars.push_back(StandardizationMap::Identity{next++});
                break;
            case VarKind::NonPositive:
                map.vars.push_back(StandardizationMap::Negated{next++});
                break;
            case VarKind::Free: {
                int pos = next++;
                int neg = next++;
                map.vars.push_back(StandardizationMap::Split{pos, neg});
                break;
            }
        }
    }

    LinearProgram out(p.sense, next);
    for (int j = 0; j < p.num_vars; ++j) {
        double c = p.objective[j];
        if (auto* id = std::get_if<StandardizationMap::Identity>(&map.vars[j])) {
            out.objective[id->index] = c;
        } else if (auto* neg = std::get_if<StandardizationMap::Negated>(&map.vars[j])) {
            out.objective[neg->index] = -c;
        } else {
            auto& sp = std::get<StandardizationMap::Split>(map.vars[j]);
            out.objective[sp.pos_index] = c;
            out.objective[sp.neg_index] = -c;
        }
    }
    for (const Row& r : p.rows) {
        std::vector<double> coeffs(next, 0.0);
        for (int j = 0; j < p.num_vars; ++j) {
            double a = r.coeffs[j];
            if (a == 0.0) continue;
            if (auto* id = std::get_if<StandardizationMap::Identity>(&map.vars[j])) {
                coeffs[id->index] = a;
            } else if (auto* neg =
                           std::get_if<StandardizationMap::Negated>(&map.vars[j])) {
                coeffs[neg->index] = -a;
            } else {
                auto& sp = std::get<StandardizationMap::Split>(map.vars[j]);
                coeffs[sp.pos_index] = a;
                coeffs[sp.neg_index] = -a;
            }
        }
        out.rows.push_back(Row{std::move(coeffs), r.rel, r.rhs});
    }
    return {std::move(out), std::move(map)};
}

}  // namespace stoch
