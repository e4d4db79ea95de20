#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace dloc::cli {

template <class T>
struct SeedOutcome {
    std::uint64_t seed = 0;
    std::optional<T> value;
    std::string error;  // set when the task threw
};

// Runs task(seed) for every seed on up to `workers` threads. Results come back in
// the order of `seeds` whatever the scheduling; a throwing seed is recorded and the
// others still run.
template <class T, class Task>
std::vector<SeedOutcome<T>> parallel_seed_map(const Task& task, const std::vector<std::uint64_t>& seeds, int workers) {
    std::vector<SeedOutcome<T>> out(seeds.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < seeds.size();) {
            out[i].seed = seeds[i];
            try {
                out[i].value.emplace(task(seeds[i]));
            } catch (const std::exception& e) {
                out[i].error = e.what();
            } catch (...) {
                out[i].error = "unknown exception";
            }
        }
    };
    const int n = std::max(1, std::min<int>(workers, int(seeds.size())));
    if (n == 1) {
        worker();
        return out;
    }
    std::vector<std::thread> pool;
    for (int w = 0; w < n; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    return out;
}

}  // namespace dloc::cli
