#include <cmath>
#include <sstream>

#include "doctest.h"
#include "plir/portfolio.hpp"

using namespace plir;

TEST_CASE("sweep anchors") {
    const GaussianPair fig1(0.0, 0.0, 0.1, 0.1, 0.5);
    SweepSpec spec(fig1, Level(0.95),
                   {UncertaintyLevel(0.0), UncertaintyLevel(0.5), UncertaintyLevel(0.95)});
    spec.grid = 11;
    const std::vector<SweepRow> rows = sweep(spec);
    REQUIRE(rows.size() == 33);

    SUBCASE("beta = 0 endpoint matches the closed form") {
        const SweepRow& last = rows[10];
        CHECK(last.beta == 0.0);
        CHECK(last.pi1 == 1.0);
        CHECK(last.rho == doctest::Approx(0.1 * 2.06271281).epsilon(1e-5));
    }
    SUBCASE("all betas agree at pi1 = 1") {
        const double anchor = rows[10].rho;
        CHECK(rows[21].rho == doctest::Approx(anchor).epsilon(1e-8));
        CHECK(rows[32].rho == doctest::Approx(anchor).epsilon(1e-8));
    }
    SUBCASE("beta = 0 with m2 = 0 is symmetric in pi1") {
        for (int i = 0; i <= 10; ++i)
            CHECK(rows[i].rho == doctest::Approx(rows[10 - i].rho).epsilon(1e-6));
    }
    SUBCASE("rho is nondecreasing in beta pointwise") {
        for (int i = 0; i <= 10; ++i) {
            CHECK(rows[i + 11].rho >= rows[i].rho - 1e-8);
            CHECK(rows[i + 22].rho >= rows[i + 11].rho - 1e-8);
        }
    }
    SUBCASE("beta = 0 column equals the closed-form portfolio ES everywhere") {
        for (int i = 0; i <= 10; ++i) {
            const double pi1 = rows[i].pi1;
            const double sp = 0.1 * std::sqrt(pi1 * pi1 + (1 - pi1) * (1 - pi1) +
                                              pi1 * (1 - pi1));
            CHECK(rows[i].rho == doctest::Approx(es_gaussian(0.0, sp, Level(0.95)))
                                     .epsilon(1e-4));
        }
    }
}

TEST_CASE("argmin_weight") {
    const RiskConfig cfg;
    SUBCASE("symmetric model at beta = 0 picks the equal allocation") {
        const GaussianPair fig1(0.0, 0.0, 0.1, 0.1, 0.5);
        const double star =
            argmin_weight(fig1, Level(0.95), UncertaintyLevel(0.0), 1e-3, 21, cfg);
        CHECK(std::abs(star - 0.5) <= 0.02);
    }
    SUBCASE("tiny sigma2 at beta = 0.95 allocates fully to the uncertain asset") {
        const GaussianPair tiny(0.0, 0.0, 0.1, 0.005, 0.5);
        const double star =
            argmin_weight(tiny, Level(0.95), UncertaintyLevel(0.95), 1e-3, 21, cfg);
        CHECK(star <= 0.05);
    }
    SUBCASE("high beta pushes toward the certain asset") {
        const GaussianPair fig1(0.0, 0.0, 0.1, 0.1, 0.5);
        const double star =
            argmin_weight(fig1, Level(0.95), UncertaintyLevel(0.95), 1e-3, 21, cfg);
        CHECK(star >= 0.9);
    }
}

TEST_CASE("csv format") {
    std::ostringstream os;
    write_sweep_csv(os, {{0.5, 0.25, 0.123456789012345}});
    CHECK(os.str() == "beta,pi1,rho\n0.5,0.25,0.123456789012\n");

    std::ostringstream opt;
    write_optimizer_csv(opt, {{0.95, 1.0, 0.20627128}}, "sigma2");
    CHECK(opt.str() == "sigma2,pi1_star,rho_star\n0.95,1,0.20627128\n");
}
