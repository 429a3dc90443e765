#include "eduseg/parallel.hpp"

#include <algorithm>
#include <thread>
#include <vector>

#include "eduseg/errors.hpp"

namespace eduseg {

int effective_workers(int requested) {
    if (requested < 0) throw ArgumentError("worker count may not be negative");
    if (requested == 0) {
        const unsigned hw = std::thread::hardware_concurrency();
        return hw == 0 ? 1 : static_cast<int>(hw);
    }
    return requested;
}

void run_blocks(int count, int workers, const std::function<void(int, int, int)>& fn) {
    if (count < 0) throw ArgumentError("count may not be negative");
    workers = std::max(1, std::min(workers, count));
    if (workers <= 1) {
        if (count > 0) fn(0, 0, count);
        return;
    }
    std::vector<std::thread> threads;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    threads.reserve(static_cast<std::size_t>(workers));
    for (int b = 0; b < workers; ++b) {
        const int begin = static_cast<int>(static_cast<long long>(count) * b / workers);
        const int end = static_cast<int>(static_cast<long long>(count) * (b + 1) / workers);
        threads.emplace_back([&fn, &errors, b, begin, end] {
            try {
                fn(b, begin, end);
            } catch (...) {
                errors[static_cast<std::size_t>(b)] = std::current_exception();
            }
        });
    }
    for (std::thread& t : threads) t.join();
    for (const std::exception_ptr& e : errors)  // first block's failure wins
        if (e) std::rethrow_exception(e);
}

}  // namespace eduseg
