#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "wlanfair/metrics.hpp"
#include "wlanfair/rng.hpp"

using namespace wlanfair;

TEST_CASE("jain index on known allocations") {
    std::vector<double> even{2.0, 2.0, 2.0, 2.0};
    CHECK(jain_index(even) == doctest::Approx(1.0));

    std::vector<double> starved{1.0, 0.0, 0.0, 0.0};
    CHECK(jain_index(starved) == doctest::Approx(0.25));

    std::vector<double> skewed{4.0, 1.0};
    CHECK(jain_index(skewed) == doctest::Approx(25.0 / 34.0));
}

TEST_CASE("jain index properties") {
    Xorshift64Star rng(5150);
    for (int iter = 0; iter < 100; ++iter) {
        int n = 1 + rng.pick(8);
        std::vector<double> x(static_cast<std::size_t>(n));
        double total = 0.0;
        for (double& v : x) {
            v = rng.uniform() * 10.0;
            total += v;
        }
        if (total == 0.0) x[0] = 1.0;

        double j = jain_index(x);
        CHECK(j >= 1.0 / n - 1e-12);
        CHECK(j <= 1.0 + 1e-12);

        std::vector<double> scaled = x;
        for (double& v : scaled) v *= 37.5;
        CHECK(jain_index(scaled) == doctest::Approx(j).epsilon(1e-12));

        std::vector<double> rotated(x.begin() + 1, x.end());
        rotated.push_back(x.front());
        CHECK(jain_index(rotated) == doctest::Approx(j).epsilon(1e-12));
    }
}

TEST_CASE("jain index rejects unusable input") {
    CHECK_THROWS_AS(jain_index(std::vector<double>{}), std::invalid_argument);
    CHECK_THROWS_AS(jain_index(std::vector<double>{0.0, 0.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(jain_index(std::vector<double>{1.0, -0.5}),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        jain_index(std::vector<double>{1.0,
                                       std::numeric_limits<double>::infinity()}),
        std::invalid_argument);
}

TEST_CASE("throughput ratio markers") {
    CHECK(throughput_ratio(10.0, 4.0) == doctest::Approx(2.5));
    CHECK(std::isinf(throughput_ratio(3.0, 0.0)));
    CHECK(throughput_ratio(3.0, 0.0) > 0.0);
    CHECK(std::isnan(throughput_ratio(0.0, 0.0)));
    CHECK(throughput_ratio(0.0, 5.0) == 0.0);
    CHECK_THROWS_AS(throughput_ratio(-1.0, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(throughput_ratio(1.0, -2.0), std::invalid_argument);
}
