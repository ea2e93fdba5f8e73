#include <doctest.h>

#include <cmath>

#include "levymmm/rng.hpp"

using namespace levymmm;

TEST_CASE("substreams are deterministic and label-separated") {
    RngStream root(12345);
    auto a1 = root.substream("op", 3);
    auto a2 = root.substream("op", 3);
    for (int i = 0; i < 100; ++i) CHECK(a1.uniform() == a2.uniform());

    auto b = root.substream("op", 4);
    auto c = root.substream("other", 3);
    auto fresh = root.substream("op", 3);
    bool differs_b = false, differs_c = false;
    for (int i = 0; i < 10; ++i) {
        double x = fresh.uniform();
        if (x != b.uniform()) differs_b = true;
        if (x != c.uniform()) differs_c = true;
    }
    CHECK(differs_b);
    CHECK(differs_c);
}

TEST_CASE("distribution moments") {
    RngStream rng(987);
    const int n = 200000;
    double s = 0, s2 = 0;
    for (int i = 0; i < n; ++i) {
        double x = rng.normal();
        s += x;
        s2 += x * x;
    }
    CHECK(std::fabs(s / n) < 3.0 / std::sqrt(double(n)));
    CHECK(std::fabs(s2 / n - 1.0) < 3.0 * std::sqrt(2.0 / n));

    double se = 0;
    for (int i = 0; i < n; ++i) se += rng.exponential(2.0);
    CHECK(std::fabs(se / n - 0.5) < 3.0 * 0.5 / std::sqrt(double(n)));

    double sp = 0;
    for (int i = 0; i < n; ++i) sp += static_cast<double>(rng.poisson(0.03));
    CHECK(std::fabs(sp / n - 0.03) < 3.0 * std::sqrt(0.03 / n));

    double lo = 1.0, hi = 0.0;
    for (int i = 0; i < 10000; ++i) {
        double u = rng.uniform();
        lo = std::min(lo, u);
        hi = std::max(hi, u);
    }
    CHECK(lo > 0.0);
    CHECK(hi < 1.0);
}
