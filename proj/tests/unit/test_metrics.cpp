#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "optday/error.hpp"
#include "optday/metrics.hpp"

using namespace optday;

TEST_SUITE("metrics") {
    TEST_CASE("worked example") {
        const std::vector<double> a{100, 200}, p{110, 190};
        const MetricsBundle m = compute_metrics(a, p);
        CHECK(m.rmse == doctest::Approx(10.0).epsilon(1e-12));
        CHECK(m.mae == doctest::Approx(10.0).epsilon(1e-12));
        REQUIRE(m.r2);
        CHECK(*m.r2 == doctest::Approx(0.96).epsilon(1e-12));
        CHECK(m.mape_percent == doctest::Approx(50.0 * (10 / 100.00001 + 10 / 200.00001)));
        CHECK(m.mape_percent == doctest::Approx(7.5).epsilon(1e-6));
        CHECK(m.n == 2);
    }

    TEST_CASE("perfect fit") {
        const std::vector<double> a{1, 5, 9};
        const MetricsBundle m = compute_metrics(a, a);
        CHECK(m.rmse == 0.0);
        CHECK(m.mae == 0.0);
        CHECK(*m.r2 == 1.0);
        CHECK(m.mape_percent == 0.0);
    }

    TEST_CASE("constant actuals flag R2 as undefined") {
        const std::vector<double> a{5, 5, 5}, p{4, 5, 6};
        const MetricsBundle m = compute_metrics(a, p);
        CHECK_FALSE(m.r2.has_value());
        CHECK(std::isfinite(m.rmse));
    }

    TEST_CASE("input validation") {
        const std::vector<double> one{1}, two{1, 2}, three{1, 2, 3};
        CHECK_THROWS_AS(compute_metrics(two, three), InvalidArgument);
        CHECK_THROWS_AS(compute_metrics(one, one), InvalidArgument);
        const std::vector<double> negative{-1, 2};
        CHECK_THROWS_AS(compute_metrics(negative, two), InvalidArgument);
        const std::vector<double> nan{1, std::nan("")};
        CHECK_THROWS_AS(compute_metrics(two, nan), InvalidArgument);
    }

    TEST_CASE("random vectors match the direct formulas") {
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> u(0.0, 1e5);
        for (int t = 0; t < 100; ++t) {
            const std::size_t n = 2 + static_cast<std::size_t>(t % 50);
            std::vector<double> a(n), p(n);
            for (std::size_t i = 0; i < n; ++i) {
                a[i] = u(rng);
                p[i] = u(rng);
            }
            double se = 0, ae = 0, ape = 0, mean = 0;
            for (std::size_t i = 0; i < n; ++i) mean += a[i] / static_cast<double>(n);
            double sst = 0;
            for (std::size_t i = 0; i < n; ++i) {
                se += (a[i] - p[i]) * (a[i] - p[i]);
                ae += std::abs(a[i] - p[i]);
                ape += std::abs((a[i] - p[i]) / (a[i] + 1e-5));
                sst += (a[i] - mean) * (a[i] - mean);
            }
            const double dn = static_cast<double>(n);
            const MetricsBundle m = compute_metrics(a, p);
            CHECK(m.rmse == doctest::Approx(std::sqrt(se / dn)).epsilon(1e-9));
            CHECK(m.mae == doctest::Approx(ae / dn).epsilon(1e-9));
            CHECK(*m.r2 == doctest::Approx(1.0 - se / sst).epsilon(1e-9));
            CHECK(m.mape_percent == doctest::Approx(100.0 * ape / dn).epsilon(1e-9));
        }
    }
}
