#pragma once

#include <utility>

#include "plir/measure.hpp"
#include "plir/risk.hpp"

namespace plir {

/// Bivariate Gaussian loss pair with equicorrelation parameter c; the first
/// coordinate is the model-certain source.
struct GaussianPair {
    double m1, m2;
    double s1, s2;
    double corr;
    GaussianPair(double m1_, double m2_, double s1_, double s2_, double c_);
};

/// Portfolio weights on the unit simplex of R^2.
struct Weights {
    double w1, w2;
    Weights(double w1_, double w2_);
};

/// Distrust level outside the certain source: the density bound is
/// 1/(1-beta). beta is capped at 0.999 to keep the bound finite.
struct UncertaintyLevel {
    double beta;
    explicit UncertaintyLevel(double b);
};

struct RiskConfig {
    double quad_tol = 1e-9;  // adaptive Simpson absolute tolerance
    double x_tol = 1e-8;     // golden-section bracket width target
};

/// ES_beta((Z - x)^+) for Z ~ Normal(r, sigma^2), closed form. sigma = 0
/// degenerates to (r - x)^+.
double g_beta(double r, double sigma, double x, UncertaintyLevel beta);

/// E[ ES_beta((w1 X1 + w2 X2 - x)^+ | X1) ], by quadrature of g_beta against
/// the X1 density over [m1 - 10 s1, m1 + 10 s1].
double f_beta(const GaussianPair& model, const Weights& w, double x, UncertaintyLevel beta,
              double quad_tol = 1e-9);

struct RhoResult {
    double value = 0.0;
    double argmin_x = 0.0;
};

/// Worst-case ES over Q_beta of the Gaussian portfolio: scalar convex
/// minimization of x + f_beta(w, x)/(1 - alpha) by golden section on
/// [m_p - 12 s_p, m_p + 12 s_p].
RhoResult rho_beta_gaussian(const GaussianPair& model, const Weights& w, Level alpha,
                            UncertaintyLevel beta, const RiskConfig& cfg = {});

/// Conditional ES at level beta: per column, ES of the conditional
/// distribution; returned column-constant.
FieldRV cond_es_discrete(const FieldRV& x, const FiniteSpace& space, UncertaintyLevel beta);

/// Worst-case ES over Q_beta on a finite space. The objective is piecewise
/// linear and convex, so it is minimized exactly over the breakpoints
/// {values of X}.
double rho_beta_discrete(const FieldRV& x, const FiniteSpace& space, Level alpha,
                         UncertaintyLevel beta);
RhoResult rho_beta_discrete_detail(const FieldRV& x, const FiniteSpace& space, Level alpha,
                                   UncertaintyLevel beta);

/// Independent LP oracle for rho_beta_discrete: maximizes E[d_nu X] over the
/// joint dual densities (d_nu, d_mu) with (1-alpha) d_nu <= d_mu,
/// E[d_nu] = 1, 0 <= d_mu <= 1/(1-beta), E[d_mu | columns] = 1.
/// Dense-simplex scale: requires M*N <= 400.
double rho_beta_lp(const FieldRV& x, const FiniteSpace& space, Level alpha,
                   UncertaintyLevel beta);

/// Equiprobable bin-mean discretization of the portfolio loss: column n
/// carries the n-th X1 bin mean, rows the conditional bin means. The
/// resulting space is uniform.
std::pair<FiniteSpace, FieldRV> discretize_gaussian(const GaussianPair& model, const Weights& w,
                                                    int rows, int cols);

}  // namespace plir
