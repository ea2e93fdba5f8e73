#pragma once

#include <atomic>
#include <cmath>
#include <cstddef>
#include <thread>
#include <vector>

namespace levymmm {

inline int resolve_workers(int requested) {
    if (requested > 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Evaluates fn(i) for i in [0, n). Result i always lands in slot i, so any
// sequential reduction of the output is identical for every worker count.
template <typename T, typename Fn>
std::vector<T> parallel_map(std::size_t n, int workers, Fn fn) {
    std::vector<T> out(n);
    workers = resolve_workers(workers);
    if (workers <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
        return out;
    }
    std::atomic<std::size_t> next{0};
    auto run = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= n) break;
            out[i] = fn(i);
        }
    };
    std::vector<std::thread> pool;
    std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(workers), n);
    pool.reserve(k);
    for (std::size_t w = 0; w < k; ++w) pool.emplace_back(run);
    for (auto& t : pool) t.join();
    return out;
}

// Compensated sequential summation; a fixed reduction order keeps merges
// bit-reproducible.
class KahanSum {
public:
    void add(double x) {
        double y = x - c_;
        double t = s_ + y;
        c_ = (t - s_) - y;
        s_ = t;
    }
    double value() const { return s_; }

private:
    double s_ = 0.0;
    double c_ = 0.0;
};

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
    long n = 0;
};

inline MeanSe mean_se(const std::vector<double>& xs) {
    MeanSe r;
    r.n = static_cast<long>(xs.size());
    if (r.n == 0) return r;
    KahanSum s;
    for (double x : xs) s.add(x);
    r.mean = s.value() / static_cast<double>(r.n);
    if (r.n < 2) return r;
    KahanSum q;
    for (double x : xs) q.add((x - r.mean) * (x - r.mean));
    double var = q.value() / static_cast<double>(r.n - 1);
    r.se = std::sqrt(var / static_cast<double>(r.n));
    return r;
}

}  // namespace levymmm
