// Compares wall time of the OpenMP scenario solves against the serial
// path on generated instances, and checks the results agree bit-for-bit.

#include <chrono>
#include <cstdio>

#include "stoch/lshaped.hpp"
#include "stoch/nested.hpp"

using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

template <typename Run>
void bench(const char* label, Run run) {
    auto t0 = Clock::now();
    double obj_par = run(true);
    double par = seconds_since(t0);

    t0 = Clock::now();
    double obj_ser = run(false);
    double ser = seconds_since(t0);

    std::printf("%-28s parallel %8.3fs   serial %8.3fs   speedup %5.2fx   %s\n",
                label, par, ser, ser / par,
                obj_par == obj_ser ? "identical" : "MISMATCH");
}

}  // namespace

int main() {
    stoch::RandomTreeSpec two;
    two.stages = 2;
    two.branching = {400};
    two.vars_per_node = 6;
    two.rows_per_node = 6;
    two.seed = 11;
    auto wide = stoch::generate_random_tree(two);

    stoch::RandomTreeSpec four;
    four.stages = 4;
    four.branching = {8, 6, 5};
    four.vars_per_node = 3;
    four.rows_per_node = 3;
    four.seed = 23;
    auto deep = stoch::generate_random_tree(four);

    bench("lshaped 400 scenarios", [&](bool parallel) {
        stoch::LShapedOptions opts;
        opts.parallel = parallel;
        return stoch::run_lshaped(wide, opts).objective;
    });
    bench("nested 4-stage 240 leaves", [&](bool parallel) {
        stoch::NestedOptions opts;
        opts.parallel = parallel;
        return stoch::run_nested(deep, opts).objective;
    });
    return 0;
}
