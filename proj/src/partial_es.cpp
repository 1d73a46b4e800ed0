#include "plir/partial_es.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "plir/errors.hpp"
#include "plir/minimize.hpp"
#include "plir/normal.hpp"
#include "plir/quadrature.hpp"
#include "plir/simplex.hpp"

namespace plir {

GaussianPair::GaussianPair(double m1_, double m2_, double s1_, double s2_, double c_)
    : m1(m1_), m2(m2_), s1(s1_), s2(s2_), corr(c_) {
    if (!(s1 > 0.0 && s2 > 0.0))
        throw std::invalid_argument("GaussianPair: standard deviations must be > 0");
    if (!(corr > -1.0 && corr < 1.0))
        throw std::invalid_argument("GaussianPair: correlation must be in (-1,1)");
}

Weights::Weights(double w1_, double w2_) : w1(w1_), w2(w2_) {
    if (!(w1 >= 0.0 && w2 >= 0.0)) throw std::invalid_argument("Weights: must be nonnegative");
    if (std::abs(w1 + w2 - 1.0) > 1e-12)
        throw std::invalid_argument("Weights: must sum to 1");
}

UncertaintyLevel::UncertaintyLevel(double b) : beta(b) {
    if (!(b >= 0.0 && b < 1.0))
        throw std::invalid_argument("UncertaintyLevel: beta must be in [0,1)");
    if (b > 0.999)
        throw std::invalid_argument("UncertaintyLevel: beta capped at 0.999");
}

double g_beta(double r, double sigma, double x, UncertaintyLevel beta) {
    if (!(sigma >= 0.0)) throw std::invalid_argument("g_beta: sigma must be >= 0");
    if (sigma == 0.0) return std::max(r - x, 0.0);
    const double b = beta.beta;
    const double qb = norm_quantile(b);  // -inf at b = 0, which forces the tail branch
    if (x <= r + sigma * qb) return r - x + sigma * norm_pdf(qb) / (1.0 - b);
    const double t = (x - r) / sigma;
    return ((r - x) * norm_sf(t) + sigma * norm_pdf(t)) / (1.0 - b);
}

namespace {

// Conditional mean of w1 X1 + w2 X2 given X1 = z.
double cond_mean(const GaussianPair& g, const Weights& w, double z) {
    return w.w1 * z + w.w2 * g.m2 + g.corr * w.w2 * (g.s2 / g.s1) * (z - g.m1);
}

double cond_sd(const GaussianPair& g, const Weights& w) {
    return w.w2 * std::sqrt(1.0 - g.corr * g.corr) * g.s2;
}

}  // namespace

double f_beta(const GaussianPair& model, const Weights& w, double x, UncertaintyLevel beta,
              double quad_tol) {
    if (!(quad_tol > 0.0)) throw std::invalid_argument("f_beta: quad_tol must be > 0");
    const double sc = cond_sd(model, w);
    auto integrand = [&](double z) {
        return g_beta(cond_mean(model, w, z), sc, x, beta) *
               norm_pdf((z - model.m1) / model.s1) / model.s1;
    };
    // 10-sigma truncation: the discarded tail mass is < 8e-24 times the
    // bounded growth of g_beta, far below the quadrature tolerance. 40
    // initial panels put the panel width at sigma1/2, below the scale of
    // any feature of g_beta against the X1 density.
    return integrate_adaptive(integrand, model.m1 - 10.0 * model.s1, model.m1 + 10.0 * model.s1,
                              quad_tol, 48, 40);
}

RhoResult rho_beta_gaussian(const GaussianPair& model, const Weights& w, Level alpha,
                            UncertaintyLevel beta, const RiskConfig& cfg) {
    const double mp = w.w1 * model.m1 + w.w2 * model.m2;
    const double varp = w.w1 * w.w1 * model.s1 * model.s1 + w.w2 * w.w2 * model.s2 * model.s2 +
                        2.0 * model.corr * w.w1 * w.w2 * model.s1 * model.s2;
    const double sp = std::sqrt(std::max(varp, 0.0));
    if (!(sp > 0.0)) throw NumericalError("rho_beta_gaussian: degenerate portfolio");
    const double a = mp - 12.0 * sp;
    const double b = mp + 12.0 * sp;
    auto objective = [&](double x) {
        return x + f_beta(model, w, x, beta, cfg.quad_tol) / (1.0 - alpha.alpha);
    };
    const MinimizeResult res = golden_section(objective, a, b, cfg.x_tol);
    const double margin = 1e-3 * (b - a);
    if (res.x - a < margin || b - res.x < margin)
        throw NumericalError("rho_beta_gaussian: minimizer at bracket edge");
    return {res.value, res.x};
}

namespace {

// Per-column sorted view with cumulative and suffix partial sums, so that
// ES_beta((V - x)^+) of the conditional distribution is O(log M) per query.
struct ColumnTail {
    std::vector<double> value;  // ascending
    std::vector<double> cum;    // cumulative conditional probability
    std::vector<double> suf;    // suffix sums of q_i * v_i

    void build(const FieldRV& x, const FiniteSpace& space, int n) {
        const int rows = x.rows;
        std::vector<int> order(rows);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(),
                  [&](int i, int j) { return x(i, n) < x(j, n); });
        value.resize(rows);
        cum.resize(rows);
        suf.assign(rows + 1, 0.0);
        const double col_mass = 1.0 / space.cols();
        double running = 0.0;
        for (int k = 0; k < rows; ++k) {
            value[k] = x(order[k], n);
            running += space.p(order[k], n) / col_mass;
            cum[k] = running;
        }
        cum[rows - 1] = 1.0;  // clamp accumulated rounding
        for (int k = rows - 1; k >= 0; --k) {
            const double q = cum[k] - (k > 0 ? cum[k - 1] : 0.0);
            suf[k] = suf[k + 1] + q * value[k];
        }
    }

    // ES_beta((V - x)^+) = (1/(1-beta)) * Integral_{max(beta,F(x))}^{1} (q_V(u) - x) du
    double es_plus(double x, double beta) const {
        const auto it = std::upper_bound(value.begin(), value.end(), x);
        const std::size_t at_or_below = static_cast<std::size_t>(it - value.begin());
        if (at_or_below == value.size()) return 0.0;  // all values <= x
        const double fx = at_or_below == 0 ? 0.0 : cum[at_or_below - 1];
        const double s = std::max(beta, fx);
        if (s >= 1.0) return 0.0;
        const auto cit = std::lower_bound(cum.begin(), cum.end(), s);
        const std::size_t i = static_cast<std::size_t>(cit - cum.begin());
        const double integral = (cum[i] - s) * value[i] + suf[i + 1];
        return (integral - x * (1.0 - s)) / (1.0 - beta);
    }

    // ES_beta of the conditional distribution itself.
    double es(double beta) const {
        const auto cit = std::lower_bound(cum.begin(), cum.end(), beta);
        const std::size_t i = static_cast<std::size_t>(cit - cum.begin());
        return ((cum[i] - beta) * value[i] + suf[i + 1]) / (1.0 - beta);
    }
};

std::vector<ColumnTail> build_columns(const FieldRV& x, const FiniteSpace& space) {
    if (x.rows != space.rows() || x.cols != space.cols())
        throw std::invalid_argument("partial_es: shape mismatch");
    std::vector<ColumnTail> cols(x.cols);
    for (int n = 0; n < x.cols; ++n) cols[n].build(x, space, n);
    return cols;
}

}  // namespace

FieldRV cond_es_discrete(const FieldRV& x, const FiniteSpace& space, UncertaintyLevel beta) {
    const std::vector<ColumnTail> cols = build_columns(x, space);
    FieldRV out(x.rows, x.cols);
    for (int n = 0; n < x.cols; ++n) {
        const double value = cols[n].es(beta.beta);
        for (int m = 0; m < x.rows; ++m) out(m, n) = value;
    }
    return out;
}

RhoResult rho_beta_discrete_detail(const FieldRV& x, const FiniteSpace& space, Level alpha,
                                   UncertaintyLevel beta) {
    const std::vector<ColumnTail> cols = build_columns(x, space);
    std::vector<double> breakpoints = x.v;
    std::sort(breakpoints.begin(), breakpoints.end());
    breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()), breakpoints.end());

    const double col_mass = 1.0 / space.cols();
    auto objective = [&](double t) {
        double mean_cond_es = 0.0;
        for (const ColumnTail& col : cols) mean_cond_es += col.es_plus(t, beta.beta) * col_mass;
        return t + mean_cond_es / (1.0 - alpha.alpha);
    };
    RhoResult best{objective(breakpoints.front()), breakpoints.front()};
    for (std::size_t i = 1; i < breakpoints.size(); ++i) {
        const double v = objective(breakpoints[i]);
        if (v < best.value) best = {v, breakpoints[i]};
    }
    return best;
}

double rho_beta_discrete(const FieldRV& x, const FiniteSpace& space, Level alpha,
                         UncertaintyLevel beta) {
    return rho_beta_discrete_detail(x, space, alpha, beta).value;
}

double rho_beta_lp(const FieldRV& x, const FiniteSpace& space, Level alpha,
                   UncertaintyLevel beta) {
    const int rows = space.rows();
    const int cols = space.cols();
    const int cells = rows * cols;
    if (cells > 400) throw std::invalid_argument("rho_beta_lp: M*N must be <= 400");
    if (x.rows != rows || x.cols != cols)
        throw std::invalid_argument("rho_beta_lp: shape mismatch");

    // Variables: d_nu in [0, cells), d_mu in [cells, 2*cells).
    const int nv = 2 * cells;
    std::vector<std::vector<double>> A;
    std::vector<double> b;
    auto row = [&]() -> std::vector<double>& {
        A.emplace_back(nv, 0.0);
        return A.back();
    };
    auto cell = [&](int m, int n) { return m * cols + n; };

    for (int m = 0; m < rows; ++m)
        for (int n = 0; n < cols; ++n) {
            auto& r = row();  // (1-alpha) d_nu <= d_mu
            r[cell(m, n)] = 1.0 - alpha.alpha;
            r[cells + cell(m, n)] = -1.0;
            b.push_back(0.0);
        }
    for (int k = 0; k < cells; ++k) {
        auto& r = row();  // d_mu <= 1/(1-beta)
        r[cells + k] = 1.0;
        b.push_back(1.0 / (1.0 - beta.beta));
    }
    {
        auto& r1 = row();  // E[d_nu] = 1 as a <= / >= pair
        for (int m = 0; m < rows; ++m)
            for (int n = 0; n < cols; ++n) r1[cell(m, n)] = space.p(m, n);
        b.push_back(1.0);
        auto& r2 = row();
        for (int m = 0; m < rows; ++m)
            for (int n = 0; n < cols; ++n) r2[cell(m, n)] = -space.p(m, n);
        b.push_back(-1.0);
    }
    for (int n = 0; n < cols; ++n) {  // E[d_mu | column n] = 1
        auto& r1 = row();
        for (int m = 0; m < rows; ++m) r1[cells + cell(m, n)] = space.p(m, n) * cols;
        b.push_back(1.0);
        auto& r2 = row();
        for (int m = 0; m < rows; ++m) r2[cells + cell(m, n)] = -space.p(m, n) * cols;
        b.push_back(-1.0);
    }

    std::vector<double> c(nv, 0.0);
    for (int m = 0; m < rows; ++m)
        for (int n = 0; n < cols; ++n) c[cell(m, n)] = space.p(m, n) * x(m, n);

    const LpResult res = solve_lp(A, b, c);
    if (res.status != LpStatus::Optimal)
        throw NumericalError("rho_beta_lp: solver failed on a feasible bounded program");
    return res.value;
}

namespace {

// Means of a standard normal over k equiprobable bins:
// k * (pdf(q_i) - pdf(q_{i+1})) on the i-th quantile bin. Bin means keep the
// discrete tail expectations exact at bin-boundary levels, where quantile
// midpoints systematically understate them.
std::vector<double> normal_bin_means(int k) {
    std::vector<double> means(k);
    double prev_pdf = 0.0;  // pdf at the -inf boundary
    for (int i = 0; i < k; ++i) {
        const double next_pdf = i + 1 == k ? 0.0 : norm_pdf(norm_quantile((i + 1.0) / k));
        means[i] = k * (prev_pdf - next_pdf);
        prev_pdf = next_pdf;
    }
    return means;
}

}  // namespace

std::pair<FiniteSpace, FieldRV> discretize_gaussian(const GaussianPair& model, const Weights& w,
                                                    int rows, int cols) {
    if (rows < 1 || cols < 1)
        throw std::invalid_argument("discretize_gaussian: dimensions must be >= 1");
    const double sc = cond_sd(model, w);
    const std::vector<double> row_means = normal_bin_means(rows);
    const std::vector<double> col_means = normal_bin_means(cols);
    FieldRV x(rows, cols);
    for (int n = 0; n < cols; ++n) {
        const double z1 = model.m1 + model.s1 * col_means[n];
        const double mu = cond_mean(model, w, z1);
        for (int m = 0; m < rows; ++m) x(m, n) = mu + sc * row_means[m];
    }
    return {FiniteSpace::uniform(rows, cols), std::move(x)};
}

}  // namespace plir
