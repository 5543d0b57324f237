#pragma once

#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace mbounds {

// Compensated (Kahan) accumulator for long sums.
class KahanSum {
  public:
    void add(double x) {
        const double y = x - comp_;
        const double t = sum_ + y;
        comp_ = (t - sum_) - y;
        sum_ = t;
    }
    void add(const KahanSum& other) {
        add(other.sum_);
        add(-other.comp_);
    }
    double value() const { return sum_; }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

inline std::size_t thread_count(std::size_t requested = 0) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("MB_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<std::size_t>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

// Runs fn(chunk_index) for chunk_index in [0, n_chunks). Each chunk writes
// only its own output slot, so results are independent of the thread count;
// callers combine the slots in chunk order.
inline void parallel_for_chunks(std::size_t n_chunks, const std::function<void(std::size_t)>& fn,
                                std::size_t threads = 0) {
    const std::size_t nt = std::min(thread_count(threads), n_chunks == 0 ? std::size_t{1} : n_chunks);
    if (n_chunks == 0) return;
    if (nt <= 1) {
        for (std::size_t c = 0; c < n_chunks; ++c) fn(c);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(nt);
    for (std::size_t t = 0; t < nt; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t c = next.fetch_add(1);
                if (c >= n_chunks) break;
                fn(c);
            }
        });
    }
    for (auto& th : pool) th.join();
}

// SplitMix64: tiny deterministic generator used for seed-splitting so that
// per-sample streams do not depend on thread scheduling.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1)
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    static std::uint64_t mix(std::uint64_t seed, std::uint64_t index) {
        SplitMix64 g(seed ^ (0x9e3779b97f4a7c15ull * (index + 1)));
        g.next();
        return g.next();
    }

  private:
    std::uint64_t state_;
};

} // namespace mbounds
