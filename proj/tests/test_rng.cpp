#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "frbe/rng.hpp"

using namespace frbe;

namespace {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace

TEST_CASE("splitmix64 produces its published reference stream") {
    std::uint64_t state = 0;
    CHECK(splitmix64(state) == UINT64_C(0xe220a8397b1dcdaf));
    CHECK(splitmix64(state) == UINT64_C(0x6e789e6aa1b965f4));
    CHECK(splitmix64(state) == UINT64_C(0x06c45d188009454f));
    CHECK(splitmix64(state) == UINT64_C(0xf88bb8a8724c81ec));
}

TEST_CASE("xoshiro256++ is deterministic and seed-sensitive") {
    Xoshiro256pp a(42), b(42), c(43);
    bool all_equal = true, any_diff = false;
    for (int i = 0; i < 64; ++i) {
        std::uint64_t va = a.next(), vb = b.next(), vc = c.next();
        all_equal = all_equal && (va == vb);
        any_diff = any_diff || (va != vc);
    }
    CHECK(all_equal);
    CHECK(any_diff);
}

TEST_CASE("uniform draws stay inside the open unit interval") {
    Xoshiro256pp g(7);
    double lo = 1.0, hi = 0.0, sum = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        double u = g.next_uniform();
        lo = std::min(lo, u);
        hi = std::max(hi, u);
        sum += u;
    }
    CHECK(lo > 0.0);
    CHECK(hi < 1.0);
    CHECK(sum / n == doctest::Approx(0.5).epsilon(5e-3));
}

TEST_CASE("normal quantile inverts the error-function CDF to near precision") {
    for (double p :
         {1e-300, 1e-12, 1e-4, 0.01, 0.2, 0.425, 0.5, 0.6, 0.975, 0.999, 1.0 - 1e-10}) {
        double x = normal_icdf(p);
        CHECK(normal_cdf(x) == doctest::Approx(p).epsilon(5e-14));
    }
    CHECK(normal_icdf(0.5) == 0.0);
    CHECK(normal_icdf(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-13));
    CHECK(normal_icdf(0.25) == -normal_icdf(0.75));
}

TEST_CASE("node streams are reproducible and uncorrelated across nodes") {
    CHECK(standard_normal_for_node(11, 5) == standard_normal_for_node(11, 5));
    CHECK(standard_normal_for_node(11, 5) != standard_normal_for_node(11, 6));
    CHECK(standard_normal_for_node(11, 5) != standard_normal_for_node(12, 5));

    const int n = 50000;
    double sum = 0.0, sum2 = 0.0, cross = 0.0;
    for (int i = 0; i < n; ++i) {
        double z = standard_normal_for_node(123, static_cast<std::uint64_t>(i));
        double z2 = standard_normal_for_node(123, static_cast<std::uint64_t>(i) + 1);
        sum += z;
        sum2 += z * z;
        cross += z * z2;
    }
    CHECK(sum / n == doctest::Approx(0.0).epsilon(1.0).scale(0.02));
    CHECK(sum2 / n == doctest::Approx(1.0).epsilon(0.02));
    CHECK(cross / n == doctest::Approx(0.0).epsilon(1.0).scale(0.02));
}

TEST_CASE("node-stream normals follow the standard normal law") {
    const int n = 100000;
    int below_m1 = 0, below_0 = 0, below_1 = 0;
    for (int i = 0; i < n; ++i) {
        double z = standard_normal_for_node(2024, static_cast<std::uint64_t>(i));
        below_m1 += z < -1.0;
        below_0 += z < 0.0;
        below_1 += z < 1.0;
    }
    CHECK(below_m1 / double(n) == doctest::Approx(normal_cdf(-1.0)).epsilon(0.03));
    CHECK(below_0 / double(n) == doctest::Approx(0.5).epsilon(0.02));
    CHECK(below_1 / double(n) == doctest::Approx(normal_cdf(1.0)).epsilon(0.01));
}
