/// @file parallel.hpp
/// @brief Thread-count control and deterministic parallel loops.
///
/// Reductions are always split into a fixed set of blocks chosen by the
/// caller (never by the thread count), summed per block with Neumaier
/// compensation, and combined in block order. Results are therefore bitwise
/// identical for any number of threads.

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace relaxlbm {

/// Caps the worker count. n <= 0 restores the runtime default.
void set_thread_count(int n);
int thread_count();

/// Applies RELAXLBM_THREADS if set. Returns the resulting worker count.
int apply_thread_env();

class CompensatedSum {
public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

template <class F>
void parallel_for(std::size_t n, F&& body) {
#if defined(RELAXLBM_HAVE_OPENMP)
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) body(static_cast<std::size_t>(i));
#else
    for (std::size_t i = 0; i < n; ++i) body(i);
#endif
}

/// Sums block_sum(b) for b in [0, blocks) deterministically.
template <class F>
double deterministic_sum(std::size_t blocks, F&& block_sum) {
    std::vector<double> partial(blocks, 0.0);
    parallel_for(blocks, [&](std::size_t b) { partial[b] = block_sum(b); });
    CompensatedSum total;
    for (double v : partial) total.add(v);
    return total.value();
}

}  // namespace relaxlbm
