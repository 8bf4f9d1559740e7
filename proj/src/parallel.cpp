#include "fopkit/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace fopkit {

std::optional<std::uint64_t> first_index(std::uint64_t count, unsigned workers,
                                         const std::function<bool(std::uint64_t)>& pred,
                                         std::uint64_t chunk) {
    if (workers <= 1 || count <= chunk) {
        for (std::uint64_t i = 0; i < count; ++i)
            if (pred(i)) return i;
        return std::nullopt;
    }
    constexpr std::uint64_t kNone = UINT64_MAX;
    std::atomic<std::uint64_t> next{0};
    std::atomic<std::uint64_t> best{kNone};
    std::mutex error_mutex;
    std::exception_ptr error;
    std::uint64_t error_index = kNone;

    auto lower_best = [&best](std::uint64_t i) {
        std::uint64_t cur = best.load();
        while (i < cur && !best.compare_exchange_weak(cur, i)) {
        }
    };
    auto worker = [&] {
        for (;;) {
            std::uint64_t start = next.fetch_add(1) * chunk;
            if (start >= count || start >= best.load()) return;
            std::uint64_t stop = std::min(count, start + chunk);
            for (std::uint64_t i = start; i < stop && i < best.load(); ++i) {
                try {
                    if (pred(i)) {
                        lower_best(i);
                        break;
                    }
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (i < error_index) {
                        error_index = i;
                        error = std::current_exception();
                    }
                    lower_best(i);
                    break;
                }
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    std::uint64_t b = best.load();
    if (error && error_index == b) std::rethrow_exception(error);
    if (b == kNone) return std::nullopt;
    return b;
}

void for_each_index(std::uint64_t count, unsigned workers,
                    const std::function<void(std::uint64_t)>& fn, std::uint64_t chunk) {
    if (workers <= 1 || count <= chunk) {
        for (std::uint64_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::uint64_t> next{0};
    std::mutex error_mutex;
    std::exception_ptr error;
    std::uint64_t error_index = UINT64_MAX;
    auto worker = [&] {
        for (;;) {
            std::uint64_t start = next.fetch_add(1) * chunk;
            if (start >= count) return;
            std::uint64_t stop = std::min(count, start + chunk);
            for (std::uint64_t i = start; i < stop; ++i) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (i < error_index) {
                        error_index = i;
                        error = std::current_exception();
                    }
                }
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace fopkit
