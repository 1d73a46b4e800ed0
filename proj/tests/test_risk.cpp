#include <stdexcept>
#include <cmath>
#include <random>

#include "doctest.h"
#include "plir/normal.hpp"
#include "plir/risk.hpp"

using namespace plir;

namespace {

DiscreteDist uniform_dist(std::initializer_list<double> values) {
    std::vector<Atom> atoms;
    const double p = 1.0 / values.size();
    for (double v : values) atoms.push_back({v, p});
    return DiscreteDist(std::move(atoms));
}

DiscreteDist random_dist(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> natoms(1, 9);
    std::normal_distribution<double> value(0.0, 2.0);
    std::uniform_real_distribution<double> mass(0.05, 1.0);
    const int k = natoms(rng);
    std::vector<Atom> atoms(k);
    double total = 0.0;
    for (Atom& a : atoms) {
        a.value = value(rng);
        total += (a.prob = mass(rng));
    }
    for (Atom& a : atoms) a.prob /= total;
    return DiscreteDist(std::move(atoms));
}

}  // namespace

TEST_CASE("var_discrete is the left quantile") {
    const DiscreteDist point({{5.0, 1.0}});
    CHECK(var_discrete(point, Level(0.0)) == 5.0);
    CHECK(var_discrete(point, Level(0.9)) == 5.0);

    const DiscreteDist quarters = uniform_dist({1, 2, 3, 4});
    CHECK(var_discrete(quarters, Level(0.5)) == 2.0);
    CHECK(var_discrete(quarters, Level(0.75)) == 3.0);
    CHECK(var_discrete(quarters, Level(0.76)) == 4.0);
}

TEST_CASE("es_discrete: frozen values") {
    CHECK(es_discrete(DiscreteDist({{3.5, 1.0}}), Level(0.4)) == doctest::Approx(3.5));
    const DiscreteDist quarters = uniform_dist({1, 2, 3, 4});
    CHECK(es_discrete(quarters, Level(0.5)) == doctest::Approx(3.5).epsilon(1e-12));
    CHECK(es_discrete(quarters, Level(0.0)) == doctest::Approx(2.5).epsilon(1e-12));
}

TEST_CASE("es_quantile_avg: exact partial sums") {
    const DiscreteDist coin = uniform_dist({0, 1});
    CHECK(es_quantile_avg(coin, Level(0.5)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(es_quantile_avg(coin, Level(0.25)) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    const DiscreteDist quarters = uniform_dist({1, 2, 3, 4});
    CHECK(es_quantile_avg(quarters, Level(0.5)) == doctest::Approx(3.5).epsilon(1e-12));
}

TEST_CASE("es_discrete agrees with the quantile-average route") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 1000; ++trial) {
        const DiscreteDist d = random_dist(rng);
        for (double a = 0.0; a < 0.96; a += 0.05)
            CHECK(std::abs(es_discrete(d, Level(a)) - es_quantile_avg(d, Level(a))) <= 1e-10);
    }
}

TEST_CASE("es_discrete coherence axioms on random distributions") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int trial = 0; trial < 300; ++trial) {
        // share one space so X and X+Y are defined pointwise
        const int k = 6;
        std::vector<double> xs(k), ys(k), probs(k);
        double total = 0.0;
        for (int i = 0; i < k; ++i) {
            xs[i] = 4.0 * unif(rng) - 2.0;
            ys[i] = 4.0 * unif(rng) - 2.0;
            total += (probs[i] = 0.1 + unif(rng));
        }
        for (double& p : probs) p /= total;
        auto dist_of = [&](const std::vector<double>& vals) {
            std::vector<Atom> atoms;
            for (int i = 0; i < k; ++i) atoms.push_back({vals[i], probs[i]});
            return DiscreteDist(std::move(atoms));
        };
        const Level a(0.8 * unif(rng));
        const double c = 4.0 * unif(rng) - 2.0;
        const double lambda = 2.0 * unif(rng) + 0.1;

        std::vector<double> shifted(xs), scaled(xs), sum(xs), dominating(xs);
        for (int i = 0; i < k; ++i) {
            shifted[i] += c;
            scaled[i] *= lambda;
            sum[i] += ys[i];
            dominating[i] += unif(rng);
        }
        const double base = es_discrete(dist_of(xs), a);
        CHECK(std::abs(es_discrete(dist_of(shifted), a) - base - c) <= 1e-9);
        CHECK(std::abs(es_discrete(dist_of(scaled), a) - lambda * base) <= 1e-9);
        CHECK(base <= es_discrete(dist_of(dominating), a) + 1e-9);
        CHECK(es_discrete(dist_of(sum), a) <= base + es_discrete(dist_of(ys), a) + 1e-9);
        // coherent + law invariant dominates the mean
        CHECK(base >= dist_of(xs).mean() - 1e-10);
    }
}

TEST_CASE("es_gaussian against a quantile-average oracle") {
    // midpoint average of the normal quantile over [alpha, 1)
    auto oracle = [](double alpha) {
        const int K = 2000000;
        double sum = 0.0;
        for (int i = 0; i < K; ++i)
            sum += norm_quantile(alpha + (1.0 - alpha) * (i + 0.5) / K);
        return sum / K;
    };
    CHECK(es_gaussian(0.0, 1.0, Level(0.95)) == doctest::Approx(oracle(0.95)).epsilon(1e-6));
    CHECK(es_gaussian(0.0, 1.0, Level(0.975)) == doctest::Approx(oracle(0.975)).epsilon(1e-6));
    CHECK(es_gaussian(0.0, 1.0, Level(0.95)) == doctest::Approx(2.06271280750743).epsilon(1e-9));
    CHECK(es_gaussian(0.0, 1.0, Level(0.975)) == doctest::Approx(2.33780279220141).epsilon(1e-9));
    CHECK(es_gaussian(3.0, 0.0, Level(0.9)) == 3.0);
    CHECK(es_gaussian(1.0, 2.0, Level(0.0)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("entropic risk") {
    const FiniteSpace space = FiniteSpace::uniform(2, 1);
    const FieldRV coin = FieldRV::from_rows({{0.0}, {1.0}});
    CHECK(er(coin, space, EntropicParam(1.0)) ==
          doctest::Approx(std::log(0.5 * (1.0 + std::exp(1.0)))).epsilon(1e-12));
    CHECK(er(coin, space, EntropicParam(0.0)) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(er(FieldRV(2, 1, 3.25), space, EntropicParam(2.0)) ==
          doctest::Approx(3.25).epsilon(1e-12));
    // overflow safety at large beta: ER tends to the maximum
    CHECK(er(coin, space, EntropicParam(1000.0)) == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(std::isfinite(er(coin, space, EntropicParam(1000.0))));
}

TEST_CASE("er is nondecreasing in beta") {
    std::mt19937_64 rng(31);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const FiniteSpace space = FiniteSpace::uniform(4, 3);
    for (int trial = 0; trial < 40; ++trial) {
        FieldRV x(4, 3);
        for (double& v : x.v) v = gauss(rng);
        double prev = er(x, space, EntropicParam(0.0));
        for (double b : {0.1, 0.5, 1.0, 2.0, 5.0}) {
            const double cur = er(x, space, EntropicParam(b));
            CHECK(cur >= prev - 1e-12);
            prev = cur;
        }
    }
}

TEST_CASE("er_conditional: fixed points and time consistency") {
    const FiniteSpace space = FiniteSpace::uniform(3, 3);
    const EntropicParam beta(1.5);

    const FieldRV constant(3, 3, -0.75);
    CHECK(er_conditional(constant, space, beta).v == constant.v);

    FieldRV colconst(3, 3);
    for (int m = 0; m < 3; ++m)
        for (int n = 0; n < 3; ++n) colconst(m, n) = 0.5 * n;
    const FieldRV fixed = er_conditional(colconst, space, beta);
    for (std::size_t i = 0; i < fixed.v.size(); ++i)
        CHECK(fixed.v[i] == doctest::Approx(colconst.v[i]).epsilon(1e-12));

    std::mt19937_64 rng(37);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int trial = 0; trial < 30; ++trial) {
        FieldRV x(3, 3);
        for (double& v : x.v) v = gauss(rng);
        const double direct = er(x, space, beta);
        const double nested = er(er_conditional(x, space, beta), space, beta);
        CHECK(std::abs(direct - nested) <= 1e-10);
    }
}

TEST_CASE("conditional ER variants on measurable and independent inputs") {
    const FiniteSpace space = FiniteSpace::uniform(3, 3);
    const EntropicParam beta(2.0);
    const double a[3] = {0.0, 1.0, 2.0};
    FieldRV x(3, 3), y(3, 3);  // x column-constant, y row-constant
    for (int m = 0; m < 3; ++m)
        for (int n = 0; n < 3; ++n) {
            x(m, n) = a[n];
            y(m, n) = a[m];
        }
    CHECK(same_distribution(x, y, space));

    const double ex = space.expectation(x);
    const double er_x = er(x, space, beta);
    CHECK(er_mean_of_cond(x, space, beta) == doctest::Approx(ex).epsilon(1e-12));
    CHECK(er_of_cond_mean(x, space, beta) == doctest::Approx(er_x).epsilon(1e-12));
    CHECK(er_mean_of_cond(y, space, beta) == doctest::Approx(er(y, space, beta)).epsilon(1e-12));
    CHECK(er_of_cond_mean(y, space, beta) ==
          doctest::Approx(space.expectation(y)).epsilon(1e-12));

    // identically distributed, non-degenerate: mutual non-domination
    CHECK(er_mean_of_cond(x, space, beta) < er_mean_of_cond(y, space, beta) - 1e-6);
    CHECK(er_of_cond_mean(x, space, beta) > er_of_cond_mean(y, space, beta) + 1e-6);

    const FieldRV constant(3, 3, 1.5);
    CHECK(er_mean_of_cond(constant, space, beta) == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(er_of_cond_mean(constant, space, beta) == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("kusuoka_eval") {
    const FiniteSpace space = FiniteSpace::uniform(2, 2);
    const FieldRV x = FieldRV::from_rows({{1, 3}, {5, 7}});  // conditional means {3, 5}

    CHECK(kusuoka_eval(x, space, KusuokaMixture({{Level(0.0), 1.0}})) ==
          doctest::Approx(space.expectation(x)).epsilon(1e-12));
    CHECK(kusuoka_eval(x, space, KusuokaMixture({{Level(0.5), 1.0}})) ==
          doctest::Approx(5.0).epsilon(1e-12));
    CHECK(kusuoka_eval(x, space, KusuokaMixture({{Level(0.0), 0.5}, {Level(0.5), 0.5}})) ==
          doctest::Approx(0.5 * 4.0 + 0.5 * 5.0).epsilon(1e-12));
    CHECK(kusuoka_eval(x, space, KusuokaMixture({{Level(0.5), 1.0}}), 0.25) ==
          doctest::Approx(5.25).epsilon(1e-12));

    CHECK_THROWS_AS(KusuokaMixture({{Level(0.5), 0.5}}), std::invalid_argument);
    CHECK_THROWS_AS(KusuokaMixture({{Level(0.5), 0.5}, {Level(0.5), 0.5}}),
                    std::invalid_argument);
}

TEST_CASE("lift_conditional") {
    const FiniteSpace space = FiniteSpace::uniform(2, 2);
    const FieldRV x = FieldRV::from_rows({{1, 3}, {5, 7}});

    CHECK(lift_conditional(make_scalar_risk("mean"), x, space) ==
          doctest::Approx(space.expectation(x)).epsilon(1e-12));
    CHECK(lift_conditional(make_scalar_risk("es:0.5"), x, space) ==
          doctest::Approx(5.0).epsilon(1e-12));

    // column-constant inputs are fixed points
    FieldRV colconst(2, 2);
    for (int m = 0; m < 2; ++m)
        for (int n = 0; n < 2; ++n) colconst(m, n) = n == 0 ? -1.0 : 4.0;
    const ScalarRisk es9 = make_scalar_risk("es:0.9");
    CHECK(lift_conditional(es9, colconst, space) ==
          doctest::Approx(es9(distribution_of(colconst, space))).epsilon(1e-12));

    // the lift is G-law invariant: distribution-matched column-constant pairs agree
    FieldRV swapped(2, 2);
    for (int m = 0; m < 2; ++m)
        for (int n = 0; n < 2; ++n) swapped(m, n) = n == 0 ? 4.0 : -1.0;
    CHECK(same_distribution(colconst, swapped, space));
    CHECK(lift_conditional(es9, colconst, space) ==
          doctest::Approx(lift_conditional(es9, swapped, space)).epsilon(1e-12));
}

TEST_CASE("max_combine over column and row lifts") {
    CHECK(max_combine(3.0, 5.0) == 5.0);
    CHECK(max_combine(2.5, 2.5) == 2.5);
    const FiniteSpace space = FiniteSpace::uniform(2, 2);
    const FieldRV x = FieldRV::from_rows({{1, 3}, {5, 7}});
    const double rho1 = es_discrete(distribution_of(cond_expectation(x, space), space),
                                    Level(0.5));
    const double rho2 =
        distribution_of(cond_expectation(x, space, Axis::Rows), space).mean();
    CHECK(max_combine(rho1, rho2) == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("multi_source_er") {
    const FiniteSpace space = FiniteSpace::uniform(3, 3);
    const LossMap id = make_loss("id");
    std::mt19937_64 rng(41);
    std::normal_distribution<double> gauss(0.0, 1.0);
    FieldRV x(3, 3);
    for (double& v : x.v) v = gauss(rng);

    SUBCASE("single partition reduces to the composed term") {
        const double direct =
            er(cond_expectation(x, space), space, EntropicParam(1.0));
        CHECK(multi_source_er(x, space, {Axis::Columns}, {EntropicParam(1.0)}, id) ==
              doctest::Approx(direct).epsilon(1e-12));
    }
    SUBCASE("measurable inputs recover their own entropic risk") {
        FieldRV colconst(3, 3);
        for (int m = 0; m < 3; ++m)
            for (int n = 0; n < 3; ++n) colconst(m, n) = 0.7 * n - 0.4;
        const double both = multi_source_er(colconst, space, {Axis::Columns, Axis::Rows},
                                            {EntropicParam(2.0), EntropicParam(2.0)}, id);
        CHECK(both == doctest::Approx(er(colconst, space, EntropicParam(2.0))).epsilon(1e-12));
        CHECK(both >= space.expectation(colconst) - 1e-12);
    }
    SUBCASE("constants pass through") {
        CHECK(multi_source_er(FieldRV(3, 3, 0.9), space, {Axis::Columns, Axis::Rows},
                              {EntropicParam(1.0), EntropicParam(3.0)}, id) ==
              doctest::Approx(0.9).epsilon(1e-12));
    }
    SUBCASE("dependent partitions are rejected") {
        // positive, uniform column marginal, but rows depend on columns
        const FiniteSpace skew(2, 2, {0.3, 0.2, 0.2, 0.3});
        CHECK_THROWS_AS(multi_source_er(FieldRV(2, 2, 0.0), skew, {Axis::Columns, Axis::Rows},
                                        {EntropicParam(1.0), EntropicParam(1.0)}, id),
                        std::invalid_argument);
    }
    SUBCASE("loss registry") {
        const LossMap exp_loss = make_loss("exp:1.0");
        CHECK(exp_loss(0.0) == doctest::Approx(0.0));
        CHECK(exp_loss(1.0) == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-12));
        const LossMap pwl = make_loss("pwl:0.5:2.0");
        CHECK(pwl(-2.0) == doctest::Approx(-1.0));
        CHECK(pwl(3.0) == doctest::Approx(6.0));
        CHECK_THROWS_AS(make_loss("cubic"), std::invalid_argument);
        // monotone outputs on a monotone grid
        double prev = exp_loss(-3.0);
        for (double t = -2.5; t <= 3.0; t += 0.5) {
            CHECK(exp_loss(t) >= prev);
            prev = exp_loss(t);
        }
    }
}

TEST_CASE("scalar risk registry") {
    CHECK_THROWS_AS(make_scalar_risk("var:0.5"), std::invalid_argument);
    const DiscreteDist quarters = uniform_dist({1, 2, 3, 4});
    CHECK(make_scalar_risk("es:0.5")(quarters) == doctest::Approx(3.5).epsilon(1e-12));
    CHECK(make_scalar_risk("mean")(quarters) == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(make_scalar_risk("er:1.0")(quarters) ==
          doctest::Approx(er(quarters, EntropicParam(1.0))).epsilon(1e-12));
}
