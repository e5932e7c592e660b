#ifndef ALDAG_SRC_PARALLEL_HPP
#define ALDAG_SRC_PARALLEL_HPP

#include <atomic>
#include <exception>
#include <thread>
#include <vector>

namespace aldag::detail {

// Runs fn(0..n-1) on up to `jobs` threads. Each index is processed exactly
// once; callers must write results into per-index slots so that the outcome
// is independent of the scheduling. The lowest-index exception wins.
template <typename Fn>
void parallel_for(std::size_t n, int jobs, Fn&& fn) {
    if (jobs <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(jobs), n);
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(n);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
                try {
                    fn(i);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace aldag::detail

#endif  // ALDAG_SRC_PARALLEL_HPP
