#include "plir/portfolio.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "plir/minimize.hpp"

namespace plir {

namespace {

// Index-sharded parallel map with deterministic output placement.
template <class F>
void parallel_for(std::size_t count, F&& body) {
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(hw, count));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t)
        pool.emplace_back([&]() {
            for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) body(i);
        });
    for (auto& th : pool) th.join();
}

double format_double_guard(double v) {
    if (!std::isfinite(v)) throw std::invalid_argument("csv: non-finite value");
    return v;
}

void print_csv_value(std::ostream& os, double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", format_double_guard(v));
    os << buf;
}

}  // namespace

SweepSpec::SweepSpec(GaussianPair m, Level a, std::vector<UncertaintyLevel> b)
    : model(m), alpha(a), betas(std::move(b)) {
    if (betas.empty()) throw std::invalid_argument("SweepSpec: empty beta list");
    if (grid < 11) throw std::invalid_argument("SweepSpec: grid must be >= 11");
}

std::vector<SweepRow> sweep(const SweepSpec& spec) {
    if (spec.grid < 11) throw std::invalid_argument("sweep: grid must be >= 11");
    if (spec.betas.empty()) throw std::invalid_argument("sweep: empty beta list");
    const std::size_t per_beta = static_cast<std::size_t>(spec.grid);
    std::vector<SweepRow> rows(spec.betas.size() * per_beta);
    parallel_for(rows.size(), [&](std::size_t i) {
        const std::size_t bi = i / per_beta;
        const std::size_t gi = i % per_beta;
        const double pi1 = static_cast<double>(gi) / (per_beta - 1);
        const Weights w(pi1, 1.0 - pi1);
        const RhoResult r = rho_beta_gaussian(spec.model, w, spec.alpha, spec.betas[bi], spec.cfg);
        rows[i] = {spec.betas[bi].beta, pi1, r.value};
    });
    return rows;
}

namespace {

double rho_at(const GaussianPair& model, Level alpha, UncertaintyLevel beta, double pi1,
              const RiskConfig& cfg) {
    return rho_beta_gaussian(model, Weights(pi1, 1.0 - pi1), alpha, beta, cfg).value;
}

double grid_argmin(const GaussianPair& model, Level alpha, UncertaintyLevel beta, int grid,
                   const RiskConfig& cfg) {
    std::vector<double> values(grid);
    parallel_for(static_cast<std::size_t>(grid), [&](std::size_t i) {
        values[i] = rho_at(model, alpha, beta, static_cast<double>(i) / (grid - 1), cfg);
    });
    const auto best = std::min_element(values.begin(), values.end());
    return static_cast<double>(best - values.begin()) / (grid - 1);
}

}  // namespace

double argmin_weight(const GaussianPair& model, Level alpha, UncertaintyLevel beta,
                     double refine_tol, int grid, const RiskConfig& cfg) {
    if (!(refine_tol > 0.0)) throw std::invalid_argument("argmin_weight: refine_tol must be > 0");
    if (grid < 11) throw std::invalid_argument("argmin_weight: grid must be >= 11");
    auto objective = [&](double pi1) { return rho_at(model, alpha, beta, pi1, cfg); };

    double coarse = grid_argmin(model, alpha, beta, grid, cfg);
    double step = 1.0 / (grid - 1);
    const MinimizeResult full = golden_section(objective, 0.0, 1.0, refine_tol);

    // Unimodality is observed in this family, not proven; when the
    // golden-section and grid winners disagree by more than two grid steps,
    // re-scan on a 10x finer grid before refining.
    if (std::abs(full.x - coarse) > 2.0 * step) {
        const int fine = (grid - 1) * 10 + 1;
        coarse = grid_argmin(model, alpha, beta, fine, cfg);
        step = 1.0 / (fine - 1);
    }
    const double lo = std::max(0.0, coarse - step);
    const double hi = std::min(1.0, coarse + step);
    const MinimizeResult refined = golden_section(objective, lo, hi, refine_tol);

    // Keep endpoint optima honest: golden section cannot land exactly on a
    // boundary it brackets.
    MinimizeResult best = refined.value < full.value ? refined : full;
    const double at_zero = objective(0.0);
    const double at_one = objective(1.0);
    if (at_zero < best.value) best = {0.0, at_zero};
    if (at_one < best.value) best = {1.0, at_one};
    return best.x;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows, const char* key_name) {
    os << key_name << ",pi1,rho\n";
    for (const SweepRow& r : rows) {
        print_csv_value(os, r.beta);
        os << ',';
        print_csv_value(os, r.pi1);
        os << ',';
        print_csv_value(os, r.rho);
        os << '\n';
    }
}

void write_optimizer_csv(std::ostream& os, const std::vector<OptimizerRow>& rows,
                         const char* key_name) {
    os << key_name << ",pi1_star,rho_star\n";
    for (const OptimizerRow& r : rows) {
        print_csv_value(os, r.key);
        os << ',';
        print_csv_value(os, r.pi1_star);
        os << ',';
        print_csv_value(os, r.rho_star);
        os << '\n';
    }
}

}  // namespace plir
