#pragma once

#include <cstddef>
#include <exception>
#include <vector>

#include "stoch/lshaped.hpp"

namespace stoch::detail {

/// OpenMP loop over independent scenario solves. Results are written into
/// caller-owned slots, so the outcome is identical with or without
/// threads; any exception is rethrown on the calling thread.
template <typename Fn>
void parallel_for(std::size_t count, bool parallel, Fn&& fn) {
    std::vector<std::exception_ptr> errors(count);
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (long long k = 0; k < static_cast<long long>(count); ++k) {
        try {
            fn(static_cast<std::size_t>(k));
        } catch (...) {
            errors[k] = std::current_exception();
        }
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

/// Sub-problem LP at a fixed parent decision.
LinearProgram node_lp(const NodeProblem& n, const std::vector<double>& y);

std::vector<int> theta_targets(const CutPool& pool, CutMode mode);

}  // namespace stoch::detail
