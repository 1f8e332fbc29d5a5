#include <catch2/catch_amalgamated.hpp>

#include <qkd/entropy.hpp>
#include <qkd/random.hpp>

using namespace qkd;
using Catch::Approx;

TEST_CASE("binary entropy", "[entropy]") {
    SECTION("named values") {
        REQUIRE(binary_entropy(0.5) == Approx(1.0).margin(1e-15));
        REQUIRE(binary_entropy(0.0) == 0.0);
        REQUIRE(binary_entropy(1.0) == 0.0);
        REQUIRE(binary_entropy(0.11) == Approx(0.4999159582).margin(1e-9));
        REQUIRE(binary_entropy(0.25) == Approx(0.8112781245).margin(1e-9));
    }
    SECTION("symmetry h(x) = h(1-x)") {
        for (int i = 0; i <= 100; ++i) {
            const double x = i / 100.0;
            REQUIRE(binary_entropy(x) == Approx(binary_entropy(1.0 - x)).margin(1e-14));
        }
    }
    SECTION("round-off excursions are clamped") {
        REQUIRE(binary_entropy(-1e-13) == 0.0);
        REQUIRE(binary_entropy(1.0 + 1e-13) == 0.0);
    }
    SECTION("domain errors") {
        REQUIRE_THROWS_AS(binary_entropy(-0.01), domain_error);
        REQUIRE_THROWS_AS(binary_entropy(1.01), domain_error);
    }
}

TEST_CASE("shannon entropy", "[entropy]") {
    SECTION("degenerate and uniform") {
        REQUIRE(shannon_entropy({1.0, 0.0, 0.0, 0.0}) == 0.0);
        REQUIRE(shannon_entropy({0.25, 0.25, 0.25, 0.25}) == Approx(2.0).margin(1e-14));
    }
    SECTION("permutation invariance and uniform maximum") {
        Rng rng(42);
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<double> p(5);
            double sum = 0.0;
            for (auto& x : p) sum += (x = rng.uniform() + 1e-3);
            for (auto& x : p) x /= sum;
            const double h = shannon_entropy(p);
            std::vector<double> q = {p[3], p[0], p[4], p[2], p[1]};
            REQUIRE(shannon_entropy(q) == Approx(h).margin(1e-12));
            REQUIRE(h <= std::log2(5.0) + 1e-12);
        }
    }
    SECTION("non-normalized input is rejected") {
        REQUIRE_THROWS_AS(shannon_entropy({0.5, 0.4}), domain_error);
        REQUIRE_THROWS_AS(shannon_entropy({0.5, 0.7}), domain_error);
    }
    SECTION("conclusive-event joint reproduces the conditional entropy chain") {
        // H(joint) - h(marginal) for the four-outcome distribution with
        // weights (.835, .816, .132, .024)/1.807 comes out near 0.393.
        const double n = 1.807;
        const std::vector<double> joint = {.835 / n, .816 / n, .132 / n, .024 / n};
        const double cond =
            shannon_entropy(joint) - binary_entropy((.835 + .024) / n);
        REQUIRE(cond == Approx(0.393).margin(1e-3));
    }
}
