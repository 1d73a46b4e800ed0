#pragma once

#include <iosfwd>
#include <vector>

#include "plir/partial_es.hpp"

namespace plir {

/// Frontier sweep request: rho_beta over a pi1 grid covering [0,1] for each
/// beta in the list.
struct SweepSpec {
    GaussianPair model;
    Level alpha;
    std::vector<UncertaintyLevel> betas;
    int grid = 41;  // number of pi1 points, endpoints included
    double refine_tol = 1e-4;
    RiskConfig cfg;
    SweepSpec(GaussianPair m, Level a, std::vector<UncertaintyLevel> b);
};

struct SweepRow {
    double beta;
    double pi1;
    double rho;
};

/// One row per (beta, grid point); grid points evaluated in parallel,
/// ordered deterministically by grid index.
std::vector<SweepRow> sweep(const SweepSpec& spec);

/// Risk-minimizing pi1 at fixed (alpha, beta): grid scan over [0,1] followed
/// by golden-section refinement to refine_tol. If the refined and grid
/// argmins disagree by more than two grid steps, the scan is repeated on a
/// 10x finer grid.
double argmin_weight(const GaussianPair& model, Level alpha, UncertaintyLevel beta,
                     double refine_tol, int grid = 41, const RiskConfig& cfg = {});

/// CSV emitters: 12-significant-digit shortest representation.
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows,
                     const char* key_name = "beta");
struct OptimizerRow {
    double key;
    double pi1_star;
    double rho_star;
};
void write_optimizer_csv(std::ostream& os, const std::vector<OptimizerRow>& rows,
                         const char* key_name = "beta");

}  // namespace plir
