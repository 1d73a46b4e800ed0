#include "plir/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "plir/partial_es.hpp"
#include "plir/risk.hpp"

namespace plir {

FiniteSpace random_space(std::mt19937_64& rng, int max_rows, int max_cols, bool force_uniform) {
    std::uniform_int_distribution<int> rdim(1, max_rows), cdim(1, max_cols);
    const int rows = rdim(rng);
    const int cols = cdim(rng);
    if (force_uniform) return FiniteSpace::uniform(rows, cols);
    std::uniform_real_distribution<double> mass(0.2, 1.0);
    std::vector<double> p(static_cast<std::size_t>(rows) * cols);
    for (int n = 0; n < cols; ++n) {
        double total = 0.0;
        for (int m = 0; m < rows; ++m) total += (p[static_cast<std::size_t>(m) * cols + n] = mass(rng));
        for (int m = 0; m < rows; ++m) p[static_cast<std::size_t>(m) * cols + n] /= total * cols;
    }
    return FiniteSpace(rows, cols, std::move(p));
}

FieldRV random_field(std::mt19937_64& rng, int rows, int cols, double scale) {
    std::normal_distribution<double> gauss(0.0, scale);
    FieldRV x(rows, cols);
    for (double& v : x.v) v = gauss(rng);
    return x;
}

SupportSet random_support_set(std::mt19937_64& rng, const FiniteSpace& space, int count) {
    std::uniform_real_distribution<double> mass(0.05, 1.0);
    std::vector<FieldRV> vertices;
    for (int k = 0; k < count; ++k) {
        FieldRV d(space.rows(), space.cols());
        for (double& v : d.v) v = mass(rng);
        const double mean = space.expectation(d);
        for (double& v : d.v) v /= mean;
        vertices.push_back(std::move(d));
    }
    return make_support_set(space, std::move(vertices));
}

SupportSet symmetrize_columns(const FiniteSpace& space, const SupportSet& s) {
    std::vector<int> sigma(space.cols());
    std::vector<FieldRV> vertices;
    for (const Density& d : s.vertices) {
        std::iota(sigma.begin(), sigma.end(), 0);
        do {
            FieldRV perm(d.d.rows, d.d.cols);
            for (int m = 0; m < d.d.rows; ++m)
                for (int n = 0; n < d.d.cols; ++n) perm(m, n) = d.d(m, sigma[n]);
            vertices.push_back(std::move(perm));
        } while (std::next_permutation(sigma.begin(), sigma.end()));
    }
    return make_support_set(space, std::move(vertices));
}

SupportSet lifted_es_dual(const FiniteSpace& space, int tail_cols) {
    const int cols = space.cols();
    if (tail_cols < 1 || tail_cols > cols)
        throw std::invalid_argument("lifted_es_dual: tail_cols out of range");
    const double weight = static_cast<double>(cols) / tail_cols;
    std::vector<FieldRV> vertices;
    std::vector<int> pick(cols, 0);
    std::fill(pick.end() - tail_cols, pick.end(), 1);
    std::sort(pick.begin(), pick.end());
    do {
        FieldRV d(space.rows(), cols);
        for (int m = 0; m < space.rows(); ++m)
            for (int n = 0; n < cols; ++n) d(m, n) = pick[n] ? weight : 0.0;
        vertices.push_back(std::move(d));
    } while (std::next_permutation(pick.begin(), pick.end()));
    return make_support_set(space, std::move(vertices));
}

std::pair<FiniteSpace, SupportSet> make_skewed_union_support(int rows, int cols) {
    if (cols % 2 != 0) throw std::invalid_argument("make_skewed_union_support: cols must be even");
    FiniteSpace space = FiniteSpace::uniform(rows, cols);
    SupportSet s = lifted_es_dual(space, cols / 2);
    FieldRV product(rows, cols);
    for (int m = 0; m < rows; ++m)
        for (int n = 0; n < cols; ++n)
            product(m, n) = 4.0 * ((n + 0.5) / cols) * ((m + 0.5) / rows);
    std::vector<FieldRV> vertices;
    vertices.reserve(s.vertices.size() + 1);
    for (Density& d : s.vertices) vertices.push_back(std::move(d.d));
    vertices.push_back(std::move(product));
    return {space, make_support_set(space, std::move(vertices))};
}

// ---------------------------------------------------------------------------

namespace {

struct Recorder {
    SuiteResult& result;
    void check(bool ok, const std::string& message) {
        ++result.checks;
        if (!ok) {
            ++result.failures;
            result.notes.push_back(message);
        }
    }
};

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

SuiteResult suite_oracle(std::uint64_t seed, int instances) {
    SuiteResult result;
    result.name = "oracle";
    Recorder rec{result};
    std::mt19937_64 rng(seed);
    const double levels[] = {0.0, 0.5, 0.9};
    for (int i = 0; i < instances; ++i) {
        const FiniteSpace space = random_space(rng, 8, 8);
        const FieldRV x = random_field(rng, space.rows(), space.cols());
        for (double a : levels)
            for (double b : levels) {
                const double direct = rho_beta_discrete(x, space, Level(a), UncertaintyLevel(b));
                const double lp = rho_beta_lp(x, space, Level(a), UncertaintyLevel(b));
                rec.check(std::abs(direct - lp) <= 1e-8,
                          "oracle mismatch at alpha=" + fmt(a) + " beta=" + fmt(b) +
                              ": min-formula " + fmt(direct) + " vs lp " + fmt(lp));
            }
    }
    return result;
}

SuiteResult suite_invariance(std::uint64_t seed, int instances) {
    SuiteResult result;
    result.name = "invariance";
    Recorder rec{result};
    std::mt19937_64 rng(seed);

    auto check_agreement = [&](const SupportSet& s, const FiniteSpace& space,
                               const std::string& label) {
        const InvarianceReport rep = check_g_law_invariance(s, space, seed);
        rec.check(rep.structural == rep.behavioral,
                  label + ": structural=" + (rep.structural ? "true" : "false") +
                      " behavioral=" + (rep.behavioral ? "true" : "false"));
        return rep;
    };

    {  // hand-built positives and negatives
        const FiniteSpace space = FiniteSpace::uniform(3, 4);
        check_agreement(make_support_set(space, {FieldRV(3, 4, 1.0)}), space, "constant density");
        check_agreement(lifted_es_dual(space, 2), space, "conditional-ES dual");
        FieldRV lopsided(3, 4, 0.0);
        for (int m = 0; m < 3; ++m) lopsided(m, 0) = 4.0;
        check_agreement(make_support_set(space, {std::move(lopsided)}), space,
                        "single-column density");
        auto [grid, skewed] = make_skewed_union_support(4, 4);
        check_agreement(skewed, grid, "skewed union");
    }

    for (int i = 0; i < instances; ++i) {
        const bool symmetric = i % 2 == 0;
        const FiniteSpace space = random_space(rng, 4, 4, symmetric);
        std::uniform_int_distribution<int> nverts(1, 4);
        SupportSet s = random_support_set(rng, space, nverts(rng));
        if (symmetric) s = symmetrize_columns(space, s);
        check_agreement(s, space, "random set " + std::to_string(i));
    }
    return result;
}

SuiteResult suite_adjustments(std::uint64_t seed, int instances) {
    SuiteResult result;
    result.name = "adjustments";
    Recorder rec{result};
    std::mt19937_64 rng(seed);
    for (int i = 0; i < instances; ++i) {
        const FiniteSpace space = random_space(rng, 4, 4);
        std::uniform_int_distribution<int> nverts(1, 5);
        const SupportSet s = random_support_set(rng, space, nverts(rng));
        const ProjectedSet proj = l_map(s, space);
        const FieldRV x = random_field(rng, space.rows(), space.cols());
        const FieldRV y = random_field(rng, space.rows(), space.cols());

        double reconstructed = -1e300;
        for (const auto& mu : proj.vertices) {
            const double tau_x = coherent_adjustment(s, space, mu, x);
            // E^mu[X] through the column-constant density
            FieldRV mu_field(space.rows(), space.cols());
            for (int m = 0; m < space.rows(); ++m)
                for (int n = 0; n < space.cols(); ++n) mu_field(m, n) = mu[n];
            double e_mu_x = 0.0, e_mu_y = 0.0;
            for (std::size_t k = 0; k < x.v.size(); ++k) {
                e_mu_x += space.probs()[k] * mu_field.v[k] * x.v[k];
                e_mu_y += space.probs()[k] * mu_field.v[k] * y.v[k];
            }
            reconstructed = std::max(reconstructed, e_mu_x + tau_x);

            // G-invariance against a column-constant shift
            std::uniform_real_distribution<double> shift(-2.0, 2.0);
            FieldRV g_shift(space.rows(), space.cols());
            for (int n = 0; n < space.cols(); ++n) {
                const double c = shift(rng);
                for (int m = 0; m < space.rows(); ++m) g_shift(m, n) = c;
            }
            rec.check(std::abs(coherent_adjustment(s, space, mu, x + g_shift) - tau_x) <= 1e-9,
                      "adjustment not invariant to G-measurable shifts");
            rec.check(std::abs(coherent_adjustment(s, space, mu, 2.5 * x) - 2.5 * tau_x) <= 1e-9,
                      "adjustment not positively homogeneous");
            const double tau_y = coherent_adjustment(s, space, mu, y);
            const double tau_mix = coherent_adjustment(s, space, mu, 0.5 * (x + y));
            rec.check(tau_mix <= 0.5 * tau_x + 0.5 * tau_y + 1e-9, "adjustment not convex");

            // mu-monotonicity: compare against a dominating field
            FieldRV upper = x;
            std::uniform_real_distribution<double> bump(0.0, 1.0);
            for (double& v : upper.v) v += bump(rng);
            const double tau_upper = coherent_adjustment(s, space, mu, upper);
            double e_mu_upper = 0.0;
            for (std::size_t k = 0; k < x.v.size(); ++k)
                e_mu_upper += space.probs()[k] * mu_field.v[k] * upper.v[k];
            rec.check(e_mu_x + tau_x <= e_mu_upper + tau_upper + 1e-9,
                      "adjustment violates mu-monotonicity");
        }
        const double direct = support_eval(s, space, x);
        rec.check(std::abs(reconstructed - direct) <= 1e-9,
                  "reconstruction identity off: " + fmt(reconstructed) + " vs " + fmt(direct));
    }
    return result;
}

SuiteResult suite_strong(std::uint64_t seed, int instances) {
    SuiteResult result;
    result.name = "strong";
    Recorder rec{result};
    std::mt19937_64 rng(seed);

    {
        const FiniteSpace space = FiniteSpace::uniform(3, 4);
        rec.check(check_strong_invariance(lifted_es_dual(space, 2), space, 10000, seed).invariant,
                  "conditional-ES lift flagged non-strong");
        rec.check(check_strong_invariance(make_support_set(space, {FieldRV(3, 4, 1.0)}), space,
                                          10000, seed)
                      .invariant,
                  "expectation flagged non-strong");
        auto [grid, skewed] = make_skewed_union_support(4, 4);
        const StrongReport rep = check_strong_invariance(skewed, grid, 10000, seed);
        rec.check(!rep.invariant && rep.witness.has_value(),
                  "skewed union not flagged: the product vertex must react to kernel noise");
        rec.check(check_g_law_invariance(skewed, grid, seed).structural,
                  "skewed union lost partial invariance");
    }

    for (int i = 0; i < instances; ++i) {
        const FiniteSpace space = random_space(rng, 4, 4, true);
        std::uniform_int_distribution<int> nverts(1, 3);
        SupportSet s = random_support_set(rng, space, nverts(rng));
        if (i % 2 == 0) s = symmetrize_columns(space, s);
        const StrongReport rep = check_strong_invariance(s, space, 500, seed + i);
        if (rep.invariant)
            rec.check(check_g_law_invariance(s, space, seed + i).structural,
                      "strong invariance without partial invariance on random set " +
                          std::to_string(i));
    }
    return result;
}

SuiteResult suite_coherence(std::uint64_t seed, int instances) {
    SuiteResult result;
    result.name = "coherence";
    Recorder rec{result};
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> cash(-2.0, 2.0);
    std::uniform_real_distribution<double> lam(0.1, 3.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double tol = 1e-8;

    for (int i = 0; i < instances; ++i) {
        const FiniteSpace space = random_space(rng, 5, 5);
        const FieldRV x = random_field(rng, space.rows(), space.cols());
        const FieldRV y = random_field(rng, space.rows(), space.cols());
        FieldRV upper = x;
        for (double& v : upper.v) v += unit(rng);
        const double c = cash(rng);
        const double lambda = lam(rng);

        // rotate through the four functionals so the instance budget is shared
        const int which = i % 4;
        std::function<double(const FieldRV&)> rho;
        std::string label;
        switch (which) {
            case 0: {
                const Level a(0.1 + 0.8 * unit(rng));
                rho = [&space, a](const FieldRV& f) {
                    return es_discrete(distribution_of(f, space), a);
                };
                label = "es_discrete";
                break;
            }
            case 1: {
                std::uniform_int_distribution<int> nverts(1, 4);
                const auto s = std::make_shared<SupportSet>(
                    random_support_set(rng, space, nverts(rng)));
                rho = [&space, s](const FieldRV& f) { return support_eval(*s, space, f); };
                label = "support_eval";
                break;
            }
            case 2: {
                const Level a(0.1 + 0.8 * unit(rng));
                const UncertaintyLevel b(0.9 * unit(rng));
                rho = [&space, a, b](const FieldRV& f) {
                    return rho_beta_discrete(f, space, a, b);
                };
                label = "rho_beta_discrete";
                break;
            }
            default: {
                const double a1 = 0.4 * unit(rng);
                const double a2 = 0.5 + 0.4 * unit(rng);
                const double w = 0.2 + 0.6 * unit(rng);
                const KusuokaMixture mix({{Level(a1), w}, {Level(a2), 1.0 - w}});
                rho = [&space, mix](const FieldRV& f) { return kusuoka_eval(f, space, mix); };
                label = "kusuoka_eval";
                break;
            }
        }

        const double base = rho(x);
        rec.check(std::abs(rho(x + c) - base - c) <= tol, label + ": cash invariance");
        rec.check(std::abs(rho(lambda * x) - lambda * base) <= tol,
                  label + ": positive homogeneity");
        rec.check(base <= rho(upper) + tol, label + ": monotonicity");
        rec.check(rho(x + y) <= base + rho(y) + tol, label + ": subadditivity");
    }
    return result;
}

}  // namespace

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = {"coherence", "invariance", "oracle",
                                                   "adjustments", "strong"};
    return names;
}

SuiteResult run_suite(const std::string& name, std::uint64_t seed, int instances) {
    if (name == "oracle") return suite_oracle(seed, instances > 0 ? instances : 50);
    if (name == "invariance") return suite_invariance(seed, instances > 0 ? instances : 200);
    if (name == "adjustments") return suite_adjustments(seed, instances > 0 ? instances : 50);
    if (name == "strong") return suite_strong(seed, instances > 0 ? instances : 20);
    if (name == "coherence") return suite_coherence(seed, instances > 0 ? instances : 1000);
    throw std::invalid_argument("unknown suite: " + name);
}

}  // namespace plir
