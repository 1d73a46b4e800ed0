#include "plir/risk.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "plir/normal.hpp"

namespace plir {

Level::Level(double a) : alpha(a) {
    if (!(a >= 0.0 && a < 1.0)) throw std::invalid_argument("Level: alpha must be in [0,1)");
}

EntropicParam::EntropicParam(double b) : beta(b) {
    if (!(b >= 0.0)) throw std::invalid_argument("EntropicParam: beta must be >= 0");
}

KusuokaMixture::KusuokaMixture(std::vector<std::pair<Level, double>> t) : terms(std::move(t)) {
    if (terms.empty()) throw std::invalid_argument("KusuokaMixture: empty");
    double total = 0.0;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        if (!(terms[i].second > 0.0))
            throw std::invalid_argument("KusuokaMixture: weights must be positive");
        total += terms[i].second;
        for (std::size_t j = 0; j < i; ++j)
            if (terms[i].first.alpha == terms[j].first.alpha)
                throw std::invalid_argument("KusuokaMixture: duplicate level");
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw std::invalid_argument("KusuokaMixture: weights must sum to 1");
}

double var_discrete(const DiscreteDist& dist, Level alpha) {
    double cum = 0.0;
    for (const Atom& a : dist.atoms()) {
        cum += a.prob;
        if (cum >= alpha.alpha) return a.value;
    }
    return dist.max_value();  // cumulative rounding; alpha < 1 always lands inside
}

double es_discrete(const DiscreteDist& dist, Level alpha) {
    const double x = var_discrete(dist, alpha);
    double tail = 0.0;
    for (const Atom& a : dist.atoms())
        if (a.value > x) tail += a.prob * (a.value - x);
    return x + tail / (1.0 - alpha.alpha);
}

double es_quantile_avg(const DiscreteDist& dist, Level alpha) {
    double integral = 0.0;
    double cum = 0.0;
    for (const Atom& a : dist.atoms()) {
        const double lo = std::max(cum, alpha.alpha);
        cum += a.prob;
        const double hi = std::min(cum, 1.0);
        if (hi > lo) integral += a.value * (hi - lo);
    }
    return integral / (1.0 - alpha.alpha);
}

double es_gaussian(double m, double sd, Level alpha) {
    if (!(sd >= 0.0)) throw std::invalid_argument("es_gaussian: sd must be >= 0");
    if (sd == 0.0) return m;
    return m + sd * norm_pdf(norm_quantile(alpha.alpha)) / (1.0 - alpha.alpha);
}

namespace {

// log E[e^{b V}] / b over atoms (value,weight), shifted by max(bV) so that
// beta up to ~1e3 stays finite.
double log_moment_risk(const std::vector<Atom>& atoms, double b) {
    double vmax = -std::numeric_limits<double>::infinity();
    for (const Atom& a : atoms) vmax = std::max(vmax, a.value);
    double s = 0.0;
    for (const Atom& a : atoms) s += a.prob * std::exp(b * (a.value - vmax));
    return vmax + std::log(s) / b;
}

}  // namespace

double er(const DiscreteDist& dist, EntropicParam beta) {
    if (beta.beta == 0.0) return dist.mean();
    return log_moment_risk(dist.atoms(), beta.beta);
}

double er(const FieldRV& x, const FiniteSpace& space, EntropicParam beta) {
    if (beta.beta == 0.0) return space.expectation(x);
    return er(distribution_of(x, space), beta);
}

FieldRV er_conditional(const FieldRV& x, const FiniteSpace& space, EntropicParam beta) {
    if (x.rows != space.rows() || x.cols != space.cols())
        throw std::invalid_argument("er_conditional: shape mismatch");
    if (beta.beta == 0.0) return cond_expectation(x, space);
    FieldRV out(x.rows, x.cols);
    const double col_mass = 1.0 / space.cols();
    for (int n = 0; n < x.cols; ++n) {
        std::vector<Atom> atoms;
        atoms.reserve(x.rows);
        for (int m = 0; m < x.rows; ++m) atoms.push_back({x(m, n), space.p(m, n) / col_mass});
        const double value = log_moment_risk(atoms, beta.beta);
        for (int m = 0; m < x.rows; ++m) out(m, n) = value;
    }
    return out;
}

double er_mean_of_cond(const FieldRV& x, const FiniteSpace& space, EntropicParam beta) {
    return space.expectation(er_conditional(x, space, beta));
}

double er_of_cond_mean(const FieldRV& x, const FiniteSpace& space, EntropicParam beta) {
    return er(cond_expectation(x, space), space, beta);
}

double kusuoka_eval(const FieldRV& x, const FiniteSpace& space, const KusuokaMixture& mix,
                    double tau_shift) {
    const DiscreteDist cond = distribution_of(cond_expectation(x, space), space);
    double s = 0.0;
    for (const auto& [level, weight] : mix.terms) s += weight * es_discrete(cond, level);
    return s + tau_shift;
}

ScalarRisk make_scalar_risk(const std::string& name) {
    if (name == "mean") return [](const DiscreteDist& d) { return d.mean(); };
    if (name.rfind("es:", 0) == 0) {
        const Level a(std::stod(name.substr(3)));
        return [a](const DiscreteDist& d) { return es_discrete(d, a); };
    }
    if (name.rfind("er:", 0) == 0) {
        const EntropicParam b(std::stod(name.substr(3)));
        return [b](const DiscreteDist& d) { return er(d, b); };
    }
    throw std::invalid_argument("unknown risk functional: " + name);
}

double lift_conditional(const ScalarRisk& rho_tilde, const FieldRV& x, const FiniteSpace& space) {
    return rho_tilde(distribution_of(cond_expectation(x, space), space));
}

double max_combine(double rho1, double rho2) { return std::max(rho1, rho2); }

LossMap make_loss(const std::string& name) {
    if (name == "id") return [](double x) { return x; };
    if (name.rfind("exp:", 0) == 0) {
        const double a = std::stod(name.substr(4));
        if (!(a > 0.0)) throw std::invalid_argument("make_loss: exp parameter must be > 0");
        return [a](double x) { return std::expm1(a * x) / a; };
    }
    if (name.rfind("pwl:", 0) == 0) {
        const auto sep = name.find(':', 4);
        if (sep == std::string::npos) throw std::invalid_argument("make_loss: pwl needs k1:k2");
        const double k1 = std::stod(name.substr(4, sep - 4));
        const double k2 = std::stod(name.substr(sep + 1));
        if (!(k1 >= 0.0 && k2 >= 0.0))
            throw std::invalid_argument("make_loss: pwl slopes must be >= 0");
        return [k1, k2](double x) { return k1 * std::min(x, 0.0) + k2 * std::max(x, 0.0); };
    }
    throw std::invalid_argument("unknown loss map: " + name);
}

namespace {

// Pairwise independence of the row and column partitions: the probability
// matrix must factor into its marginals.
void require_independent(const FiniteSpace& space, Axis a, Axis b) {
    if (a == b) throw std::invalid_argument("multi_source_er: duplicate partition");
    for (int m = 0; m < space.rows(); ++m) {
        const double pr = space.row_prob(m);
        for (int n = 0; n < space.cols(); ++n) {
            const double pc = 1.0 / space.cols();
            if (std::abs(space.p(m, n) - pr * pc) > 1e-10)
                throw std::invalid_argument("multi_source_er: partitions are not independent");
        }
    }
}

}  // namespace

double multi_source_er(const FieldRV& x, const FiniteSpace& space,
                       const std::vector<Axis>& partitions,
                       const std::vector<EntropicParam>& theta, const LossMap& loss) {
    if (partitions.empty()) throw std::invalid_argument("multi_source_er: no partitions");
    if (partitions.size() != theta.size())
        throw std::invalid_argument("multi_source_er: theta/partition count mismatch");
    for (std::size_t i = 0; i < partitions.size(); ++i)
        for (std::size_t j = i + 1; j < partitions.size(); ++j)
            require_independent(space, partitions[i], partitions[j]);

    FieldRV lx = x;
    for (double& v : lx.v) v = loss(v);
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < partitions.size(); ++i) {
        const FieldRV ce = cond_expectation(lx, space, partitions[i]);
        best = std::max(best, er(ce, space, theta[i]));
    }
    return best;
}

}  // namespace plir
