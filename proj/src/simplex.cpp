#include "stoch/linear_program.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace stoch {

namespace {

// Internal canonical form: minimize over nonnegative variables with every
// row rewritten as a <= inequality. Equality rows become a pair of
// opposing inequalities; >= rows are negated. Each canonical row keeps its
// source row index and cumulative sign so duals map back to the original
// relation and sense.
struct CanonicalRow {
    std::vector<double> coeffs;
    double rhs;
    int source_row;
    double mult;
};

// Dense tableau with a full artificial basis. Column layout:
// [0, n) structurals, [n, n+m) slacks, [n+m, n+2m) artificials.
// Rows are pre-negated so the initial rhs is nonnegative; the slack
// coefficient records the flip. The matrix always holds B^-1 A.
struct Tableau {
    int n = 0;
    int m = 0;
    std::vector<std::vector<double>> a;
    std::vector<double> b;
    std::vector<int> basis;
    int iterations = 0;

    int cols() const { return n + 2 * m; }

    void pivot(int row, int col) {
        double piv = a[row][col];
        for (double& v : a[row]) v /= piv;
        b[row] /= piv;
        for (int i = 0; i < m; ++i) {
            if (i == row) continue;
            double f = a[i][col];
            if (f == 0.0) continue;
            for (int j = 0; j < cols(); ++j) a[i][j] -= f * a[row][j];
            b[i] -= f * b[row];
        }
        basis[row] = col;
    }

    // c_B' B^-1, recovered from the artificial columns (initially identity).
    std::vector<double> multipliers(const std::vector<double>& cost) const {
        std::vector<double> y(m, 0.0);
        for (int i = 0; i < m; ++i) {
            double v = 0.0;
            for (int r = 0; r < m; ++r) v += cost[basis[r]] * a[r][n + m + i];
            y[i] = v;
        }
        return y;
    }

    double reduced_cost(int j, const std::vector<double>& cost) const {
        double r = cost[j];
        for (int i = 0; i < m; ++i) r -= cost[basis[i]] * a[i][j];
        return r;
    }
};

// One simplex phase with Bland's smallest-index rule.
SolveStatus run_phase(Tableau& t, const std::vector<double>& cost,
                      bool block_artificials, const SimplexOptions& opts) {
    while (true) {
        if (++t.iterations > opts.max_iterations)
            throw IterationLimitError("simplex iteration limit exceeded");

        int enter = -1;
        int limit = block_artificials ? t.n + t.m : t.cols();
        for (int j = 0; j < limit; ++j) {
            if (t.reduced_cost(j, cost) < -opts.pivot_tol) {
                enter = j;
                break;
            }
        }
        if (enter < 0) return SolveStatus::Optimal;

        int leave = -1;
        double best_ratio = std::numeric_limits<double>::infinity();
        for (int i = 0; i < t.m; ++i) {
            if (t.a[i][enter] > opts.pivot_tol) {
                double ratio = t.b[i] / t.a[i][enter];
                if (ratio < best_ratio - opts.pivot_tol ||
                    (ratio < best_ratio + opts.pivot_tol &&
                     (leave < 0 || t.basis[i] < t.basis[leave]))) {
                    best_ratio = ratio;
                    leave = i;
                }
            }
        }
        if (leave < 0) return SolveStatus::Unbounded;
        t.pivot(leave, enter);
    }
}

}  // namespace

SimplexSolution solve_lp(const LinearProgram& p, const SimplexOptions& opts) {
    if (auto why = p.invalid_reason()) throw std::invalid_argument(*why);

    auto [std_lp, map] = standardize(p);
    const int n = std_lp.num_vars;
    const double sense_mult = std_lp.sense == Sense::Maximize ? -1.0 : 1.0;

    std::vector<CanonicalRow> canon;
    for (int r = 0; r < std_lp.num_rows(); ++r) {
        const Row& row = std_lp.rows[r];
        auto push = [&](double mult) {
            CanonicalRow cr;
            cr.coeffs.resize(n);
            for (int j = 0; j < n; ++j) cr.coeffs[j] = mult * row.coeffs[j];
            cr.rhs = mult * row.rhs;
            cr.source_row = r;
            cr.mult = mult;
            canon.push_back(std::move(cr));
        };
        switch (row.rel) {
            case Relation::LessEqual: push(1.0); break;
            case Relation::GreaterEqual: push(-1.0); break;
            case Relation::Equal:
                push(1.0);
                push(-1.0);
                break;
        }
    }
    const int m = static_cast<int>(canon.size());

    Tableau t;
    t.n = n;
    t.m = m;
    t.a.assign(m, std::vector<double>(n + 2 * m, 0.0));
    t.b.resize(m);
    t.basis.resize(m);
    for (int i = 0; i < m; ++i) {
        double flip = canon[i].rhs < 0.0 ? -1.0 : 1.0;
        canon[i].mult *= flip;
        for (int j = 0; j < n; ++j) t.a[i][j] = flip * canon[i].coeffs[j];
        t.b[i] = flip * canon[i].rhs;
        t.a[i][n + i] = flip;      // slack
        t.a[i][n + m + i] = 1.0;   // artificial, initial basis
        t.basis[i] = n + m + i;
    }

    SimplexSolution sol;

    // Phase 1: drive the artificial sum to zero.
    std::vector<double> phase1_cost(t.cols(), 0.0);
    for (int i = 0; i < m; ++i) phase1_cost[n + m + i] = 1.0;
    run_phase(t, phase1_cost, false, opts);
    double infeas = 0.0;
    for (int i = 0; i < m; ++i)
        if (t.basis[i] >= n + m) infeas += t.b[i];
    if (infeas > opts.feas_tol) {
        sol.status = SolveStatus::Infeasible;
        sol.iterations = t.iterations;
        return sol;
    }
    // Purge basic artificials; a row with no nonzero non-artificial entry
    // is redundant and keeps its artificial pinned at zero.
    for (int i = 0; i < m; ++i) {
        if (t.basis[i] < n + m) continue;
        for (int j = 0; j < n + m; ++j) {
            if (std::abs(t.a[i][j]) > opts.pivot_tol) {
                t.pivot(i, j);
                break;
            }
        }
    }

    // Phase 2 on the real objective (internally minimized).
    std::vector<double> cost(t.cols(), 0.0);
    for (int j = 0; j < n; ++j) cost[j] = sense_mult * std_lp.objective[j];
    SolveStatus st = run_phase(t, cost, true, opts);
    sol.iterations = t.iterations;
    if (st == SolveStatus::Unbounded) {
        sol.status = SolveStatus::Unbounded;
        return sol;
    }

    std::vector<double> x_std(n, 0.0);
    for (int i = 0; i < m; ++i)
        if (t.basis[i] < n) x_std[t.basis[i]] = t.b[i];

    sol.status = SolveStatus::Optimal;
    sol.primal = map.restore_primal(x_std);
    sol.objective = p.objective_value(sol.primal);

    // Duals: y = c_B' B^-1 on the canonical system; fold the split /
    // negated canonical rows back onto their source rows and undo the
    // sense flip so that sum(dual_i * rhs_i) equals the primal objective.
    std::vector<double> y = t.multipliers(cost);
    sol.duals.assign(p.num_rows(), 0.0);
    for (int i = 0; i < m; ++i)
        sol.duals[canon[i].source_row] += sense_mult * canon[i].mult * y[i];
    return sol;
}

}  // namespace stoch
