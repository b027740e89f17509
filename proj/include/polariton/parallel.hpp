#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace polariton {

// Worker count from POLARITON_LAB_THREADS, falling back to hardware concurrency.
inline unsigned thread_budget()
{
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("POLARITON_LAB_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v >= 1) return static_cast<unsigned>(std::min<long>(v, 1024));
        } catch (const std::exception&) {
        }
    }
    return hw;
}

// out[i] = fn(in[i]); results are index-ordered regardless of scheduling.
// The first exception thrown by any worker is rethrown.
template <class In, class Fn>
auto parallel_map(const std::vector<In>& in, Fn fn, unsigned threads = thread_budget())
{
    using Out = decltype(fn(in.front()));
    std::vector<Out> out(in.size());
    const unsigned n = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(in.size())));
    if (n <= 1) {
        for (std::size_t i = 0; i < in.size(); ++i) out[i] = fn(in[i]);
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr err;
    std::mutex err_mu;
    auto work = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= in.size()) return;
            try {
                out[i] = fn(in[i]);
            } catch (...) {
                std::lock_guard lk(err_mu);
                if (!err) err = std::current_exception();
                next = in.size();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < n; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
    return out;
}

} // namespace polariton
