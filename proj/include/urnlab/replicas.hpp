#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

#include "urnlab/rng.hpp"

namespace urnlab {

// Runs fn(index, rng) for index in [0, count), each on the stream
// Rng::stream(master_seed, index). Results are stored by index, so the output
// does not depend on how replicas are spread over threads.
template <class Result, class Fn>
std::vector<Result> run_replicas(std::size_t count, std::uint64_t master_seed, Fn&& fn, unsigned threads = 0) {
    std::vector<Result> results(count);
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));

    auto work = [&](unsigned worker, std::exception_ptr& error) {
        try {
            for (std::size_t i = worker; i < count; i += threads) {
                Rng rng = Rng::stream(master_seed, i);
                results[i] = fn(i, rng);
            }
        } catch (...) {
            error = std::current_exception();
        }
    };

    std::vector<std::exception_ptr> errors(threads);
    if (threads == 1) {
        work(0, errors[0]);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w, std::ref(errors[w]));
        for (auto& th : pool) th.join();
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return results;
}

}  // namespace urnlab
