#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace levymmm {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace detail

// A seeded random stream addressable as (root key, label, index). Substreams are
// derived from the key, never from consumed state, so replicate k always sees the
// same draws no matter which worker runs it or what ran before.
class RngStream {
public:
    explicit RngStream(std::uint64_t key) : key_(key) {
        std::uint64_t s = key;
        std::seed_seq seq{detail::splitmix64(s), detail::splitmix64(s), detail::splitmix64(s),
                          detail::splitmix64(s)};
        eng_.seed(seq);
    }

    RngStream substream(std::string_view label, std::uint64_t index) const {
        std::uint64_t s = key_ ^ detail::fnv1a64(label);
        std::uint64_t a = detail::splitmix64(s);
        s += index * 0x9e3779b97f4a7c15ULL;
        return RngStream(a ^ detail::splitmix64(s));
    }

    std::uint64_t key() const { return key_; }

    // Uniform on the open interval (0,1).
    double uniform() {
        return (static_cast<double>(eng_() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
    }

    // Standard normal, Marsaglia polar method with a cached spare.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        has_spare_ = true;
        return u * f;
    }

    double exponential(double rate) { return -std::log(uniform()) / rate; }

    // Poisson by multiplication; fine for the small means used per grid cell.
    std::uint64_t poisson(double mean) {
        if (mean <= 0.0) return 0;
        const double limit = std::exp(-mean);
        std::uint64_t k = 0;
        double p = 1.0;
        do {
            p *= uniform();
            ++k;
        } while (p > limit);
        return k - 1;
    }

private:
    std::uint64_t key_;
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace levymmm
