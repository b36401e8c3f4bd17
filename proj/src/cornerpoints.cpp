#include "stoch/linear_program.hpp"

#include <algorithm>
#include <cmath>

namespace stoch {

namespace {

// Solves the n x n system A x = b by Gaussian elimination with partial
// pivoting. Returns false when (numerically) singular.
bool solve_square(std::vector<std::vector<double>> a, std::vector<double> b,
                  std::vector<double>& x, double tol) {
    const int n = static_cast<int>(b.size());
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        if (std::abs(a[piv][col]) < tol) return false;
        std::swap(a[piv], a[col]);
        std::swap(b[piv], b[col]);
        for (int r = col + 1; r < n; ++r) {
            double f = a[r][col] / a[col][col];
            if (f == 0.0) continue;
            for (int c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    x.assign(n, 0.0);
    for (int r = n - 1; r >= 0; --r) {
        double v = b[r];
        for (int c = r + 1; c < n; ++c) v -= a[r][c] * x[c];
        x[r] = v / a[r][r];
    }
    return true;
}

}  // namespace

std::vector<std::pair<std::vector<double>, double>> enumerate_cornerpoints(
    const LinearProgram& p, int max_dims, const SimplexOptions& opts) {
    if (auto why = p.invalid_reason()) throw std::invalid_argument(*why);
    if (p.num_vars > max_dims)
        throw TooLargeError("enumerate_cornerpoints: too many variables");
    for (VarKind k : p.var_kinds)
        if (k != VarKind::NonNegative)
            throw NotStandardizedError(
                "enumerate_cornerpoints requires a standardized program");

    const int n = p.num_vars;
    const int m = p.num_rows();

    // Hyperplanes: every row taken with equality plus every x_j = 0 bound.
    std::vector<std::vector<double>> planes;
    std::vector<double> plane_rhs;
    for (const Row& r : p.rows) {
        planes.push_back(r.coeffs);
        plane_rhs.push_back(r.rhs);
    }
    for (int j = 0; j < n; ++j) {
        std::vector<double> e(n, 0.0);
        e[j] = 1.0;
        planes.push_back(std::move(e));
        plane_rhs.push_back(0.0);
    }
    const int total = m + n;

    std::vector<std::pair<std::vector<double>, double>> points;
    auto already_have = [&](const std::vector<double>& x) {
        for (auto& [pt, obj] : points) {
            double d = 0.0;
            for (int j = 0; j < n; ++j) d = std::max(d, std::abs(pt[j] - x[j]));
            if (d <= 1e-9) return true;
        }
        return false;
    };

    std::vector<int> pick(n);
    // Enumerate all size-n subsets of the hyperplanes.
    auto recurse = [&](auto&& self, int depth, int start) -> void {
        if (depth == n) {
            std::vector<std::vector<double>> a(n);
            std::vector<double> b(n);
            for (int k = 0; k < n; ++k) {
                a[k] = planes[pick[k]];
                b[k] = plane_rhs[pick[k]];
            }
            std::vector<double> x;
            if (!solve_square(std::move(a), std::move(b), x, 1e-12)) return;
            if (p.max_violation(x) > opts.feas_tol) return;
            if (already_have(x)) return;
            points.emplace_back(x, p.objective_value(x));
            return;
        }
        for (int c = start; c <= total - (n - depth); ++c) {
            pick[depth] = c;
            self(self, depth + 1, c + 1);
        }
    };
    recurse(recurse, 0, 0);
    return points;
}

}  // namespace stoch
