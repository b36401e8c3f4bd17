#include "stoch/linear_program.hpp"

namespace stoch {

LinearProgram dual_of(const LinearProgram& p) {
    if (auto why = p.invalid_reason()) throw std::invalid_argument(*why);
    for (VarKind k : p.var_kinds)
        if (k != VarKind::NonNegative)
            throw NotStandardizedError(
                "dual_of requires a standardized program (all vars nonneg)");

    const int m = p.num_rows();
    const int n = p.num_vars;
    const bool primal_max = p.sense == Sense::Maximize;

    // max primal: dual is min b'y with A'y >= c; <= rows give y >= 0,
    // >= rows give y <= 0, = rows give free y. Mirrored for a min primal.
    LinearProgram d(primal_max ? Sense::Minimize : Sense::Maximize, m);
    for (int i = 0; i < m; ++i) {
        d.objective[i] = p.rows[i].rhs;
        switch (p.rows[i].rel) {
            case Relation::LessEqual:
                d.var_kinds[i] =
                    primal_max ? VarKind::NonNegative : VarKind::NonPositive;
                break;
            case Relation::GreaterEqual:
                d.var_kinds[i] =
                    primal_max ? VarKind::NonPositive : VarKind::NonNegative;
                break;
            case Relation::Equal:
                d.var_kinds[i] = VarKind::Free;
                break;
        }
    }
    for (int j = 0; j < n; ++j) {
        std::vector<double> coeffs(m);
        for (int i = 0; i < m; ++i) coeffs[i] = p.rows[i].coeffs[j];
        d.add_row(std::move(coeffs),
                  primal_max ? Relation::GreaterEqual : Relation::LessEqual,
                  p.objective[j]);
    }
    return d;
}

}  // namespace stoch
