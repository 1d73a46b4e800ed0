#include <stdexcept>
#include <cmath>
#include <random>

#include "doctest.h"
#include "plir/measure.hpp"

using namespace plir;

namespace {

FieldRV random_field(std::mt19937_64& rng, int rows, int cols) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    FieldRV x(rows, cols);
    for (double& v : x.v) v = gauss(rng);
    return x;
}

}  // namespace

TEST_CASE("FiniteSpace validates its invariants") {
    CHECK_NOTHROW(FiniteSpace::uniform(2, 3));
    CHECK_THROWS_AS(FiniteSpace(2, 2, {0.5, 0.25, 0.25, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(FiniteSpace(2, 2, {0.5, 0.25, 0.25, 0.25}), std::invalid_argument);
    // positive, sums to one, but the second marginal is not uniform
    CHECK_THROWS_AS(FiniteSpace(2, 2, {0.4, 0.1, 0.3, 0.2}), std::invalid_argument);
    // degenerate partitions are allowed
    CHECK_NOTHROW(FiniteSpace::uniform(1, 4));
    CHECK_NOTHROW(FiniteSpace::uniform(4, 1));
}

TEST_CASE("cond_expectation on the 2x2 fixture") {
    const FiniteSpace space = FiniteSpace::uniform(2, 2);
    const FieldRV x = FieldRV::from_rows({{1, 3}, {5, 7}});
    const FieldRV ce = cond_expectation(x, space);
    CHECK(ce(0, 0) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(ce(1, 0) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(ce(0, 1) == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(ce(1, 1) == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("cond_expectation fixes constants and column-constant fields") {
    const FiniteSpace space = FiniteSpace::uniform(3, 4);
    const FieldRV constant(3, 4, 2.5);
    CHECK(cond_expectation(constant, space).v == constant.v);

    FieldRV colconst(3, 4);
    for (int m = 0; m < 3; ++m)
        for (int n = 0; n < 4; ++n) colconst(m, n) = 1.0 + n;
    const FieldRV ce = cond_expectation(colconst, space);
    for (std::size_t i = 0; i < ce.v.size(); ++i)
        CHECK(ce.v[i] == doctest::Approx(colconst.v[i]).epsilon(1e-14));
}

TEST_CASE("cond_expectation: tower, projection, linearity on random fields") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        std::uniform_int_distribution<int> dim(1, 6);
        const FiniteSpace space = FiniteSpace::uniform(dim(rng), dim(rng));
        const FieldRV x = random_field(rng, space.rows(), space.cols());
        const FieldRV y = random_field(rng, space.rows(), space.cols());

        const FieldRV cx = cond_expectation(x, space);
        CHECK(space.expectation(cx) == doctest::Approx(space.expectation(x)).epsilon(1e-10));

        const FieldRV ccx = cond_expectation(cx, space);
        for (std::size_t i = 0; i < cx.v.size(); ++i)
            CHECK(std::abs(ccx.v[i] - cx.v[i]) <= 1e-12);

        const FieldRV lin = cond_expectation(2.0 * x + (-3.0) * y, space);
        const FieldRV expect = 2.0 * cx + (-3.0) * cond_expectation(y, space);
        for (std::size_t i = 0; i < lin.v.size(); ++i)
            CHECK(std::abs(lin.v[i] - expect.v[i]) <= 1e-10);
    }
}

TEST_CASE("distribution_of aggregates atoms") {
    const FiniteSpace space = FiniteSpace::uniform(2, 2);
    SUBCASE("constant field is a point mass") {
        const DiscreteDist d = distribution_of(FieldRV(2, 2, 2.0), space);
        REQUIRE(d.atoms().size() == 1);
        CHECK(d.atoms()[0].value == 2.0);
        CHECK(d.atoms()[0].prob == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("four distinct values give four atoms") {
        const DiscreteDist d = distribution_of(FieldRV::from_rows({{1, 2}, {3, 4}}), space);
        REQUIRE(d.atoms().size() == 4);
        for (const Atom& a : d.atoms()) CHECK(a.prob == doctest::Approx(0.25).epsilon(1e-14));
    }
    SUBCASE("row permutation within columns preserves the distribution") {
        const FieldRV x = FieldRV::from_rows({{1, 2}, {3, 4}});
        const FieldRV y = FieldRV::from_rows({{3, 4}, {1, 2}});
        CHECK(same_distribution(x, y, space));
    }
}

TEST_CASE("same_distribution distinguishes different laws") {
    const FiniteSpace space(3, 1, {0.5, 0.1, 0.4});
    const FieldRV x = FieldRV::from_rows({{0.0}, {1.0}, {1.0}});  // P(0) = 0.5
    const FieldRV y = FieldRV::from_rows({{1.0}, {1.0}, {0.0}});  // P(0) = 0.4
    CHECK_FALSE(same_distribution(x, y, space));
    CHECK(same_distribution(x, x, space));
}

TEST_CASE("same_distribution holds for column swaps of G-measurable fields") {
    const FiniteSpace space = FiniteSpace::uniform(2, 3);
    FieldRV x(2, 3), y(2, 3);
    const double vals[3] = {-1.0, 0.5, 2.0};
    for (int m = 0; m < 2; ++m)
        for (int n = 0; n < 3; ++n) {
            x(m, n) = vals[n];
            y(m, n) = vals[(n + 1) % 3];
        }
    CHECK(same_distribution(x, y, space));
}

TEST_CASE("same_distribution is an equivalence relation on random fixtures") {
    std::mt19937_64 rng(11);
    const FiniteSpace space = FiniteSpace::uniform(3, 3);
    std::vector<FieldRV> fields;
    for (int i = 0; i < 8; ++i) fields.push_back(random_field(rng, 3, 3));
    for (const auto& a : fields) CHECK(same_distribution(a, a, space));
    for (const auto& a : fields)
        for (const auto& b : fields) {
            const bool ab = same_distribution(a, b, space);
            CHECK(ab == same_distribution(b, a, space));
            if (!ab) continue;
            for (const auto& c : fields)
                if (same_distribution(b, c, space)) CHECK(same_distribution(a, c, space));
        }
}

TEST_CASE("in_kernel") {
    const FiniteSpace space = FiniteSpace::uniform(3, 2);
    CHECK(in_kernel(FieldRV(3, 2, 0.0), space));
    CHECK_FALSE(in_kernel(FieldRV(3, 2, 1.0), space));

    std::mt19937_64 rng(3);
    for (int i = 0; i < 20; ++i) {
        const FieldRV x = random_field(rng, 3, 2);
        CHECK(in_kernel(x - cond_expectation(x, space), space));
    }
}

TEST_CASE("make_density validates") {
    const FiniteSpace space = FiniteSpace::uniform(2, 2);
    CHECK_NOTHROW(make_density(space, FieldRV(2, 2, 1.0)));
    CHECK_THROWS_AS(make_density(space, FieldRV(2, 2, 1.1)), std::invalid_argument);
    FieldRV neg(2, 2, 1.0);
    neg(0, 0) = -0.5;
    neg(1, 0) = 2.5;
    CHECK_THROWS_AS(make_density(space, neg), std::invalid_argument);
}

TEST_CASE("degenerate partitions: N=1 averages, M=1 is the identity") {
    const FiniteSpace column(3, 1, {0.2, 0.3, 0.5});
    const FieldRV x = FieldRV::from_rows({{1.0}, {2.0}, {4.0}});
    const FieldRV ce = cond_expectation(x, column);
    for (int m = 0; m < 3; ++m)
        CHECK(ce(m, 0) == doctest::Approx(0.2 + 0.6 + 2.0).epsilon(1e-12));

    const FiniteSpace row = FiniteSpace::uniform(1, 3);
    const FieldRV y = FieldRV::from_rows({{1.0, 2.0, 4.0}});
    CHECK(cond_expectation(y, row).v == y.v);
}

TEST_CASE("row-axis conditional expectation matches direct averages") {
    const FiniteSpace space = FiniteSpace::uniform(2, 2);
    const FieldRV x = FieldRV::from_rows({{1, 3}, {5, 7}});
    const FieldRV ce = cond_expectation(x, space, Axis::Rows);
    CHECK(ce(0, 0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(ce(1, 1) == doctest::Approx(6.0).epsilon(1e-12));
}
