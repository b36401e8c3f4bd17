#include "stoch/scenario_tree.hpp"

#include <cmath>
#include <random>

namespace stoch {

double inverse_normal_cdf(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw BadParamError("inverse_normal_cdf: p must lie in (0,1)");

    // Acklam's rational approximation, then one Halley refinement against
    // erfc to reach full double precision.
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;

    double x;
    if (p < plow) {
        double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - plow) {
        double q = p - 0.5;
        double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
            q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }

    double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
    double u = e * std::sqrt(2.0 * M_PI) * std::exp(x * x / 2.0);
    return x - u / (1.0 + x * u / 2.0);
}

std::vector<DiscretePoint> discretize_normal(double mean, double stddev, int n,
                                             bool monte_carlo,
                                             unsigned long long seed) {
    if (stddev <= 0.0) throw BadParamError("discretize_normal: std must be > 0");
    if (n < 1) throw BadParamError("discretize_normal: n must be >= 1");

    std::vector<DiscretePoint> out;
    out.reserve(n);
    double p = 1.0 / n;
    if (monte_carlo) {
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> dist(mean, stddev);
        for (int k = 0; k < n; ++k) out.push_back({dist(rng), p});
    } else {
        for (int k = 1; k <= n; ++k) {
            double v = n == 1 ? mean
                              : mean + stddev * inverse_normal_cdf((k - 0.5) / n);
            out.push_back({v, p});
        }
    }
    // Last entry absorbs rounding so the probabilities sum to 1 exactly.
    double sum_rest = 0.0;
    for (int k = 0; k + 1 < n; ++k) sum_rest += out[k].prob;
    out.back().prob = 1.0 - sum_rest;
    return out;
}

}  // namespace stoch
