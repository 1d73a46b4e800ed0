#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "plir/measure.hpp"

namespace plir {

/// Confidence level for ES / VaR, alpha in [0,1).
struct Level {
    double alpha;
    explicit Level(double a);
};

/// Entropic risk parameter; beta = 0 degenerates to the expectation.
struct EntropicParam {
    double beta;
    explicit EntropicParam(double b);
};

/// Finite mixture of ES levels applied to the conditional mean: weights sum
/// to 1, levels pairwise distinct.
struct KusuokaMixture {
    std::vector<std::pair<Level, double>> terms;
    explicit KusuokaMixture(std::vector<std::pair<Level, double>> t);
};

/// Left-continuous quantile of a discrete distribution at level alpha.
double var_discrete(const DiscreteDist& dist, Level alpha);

/// ES via the scalar minimization formula, evaluated exactly at the left
/// quantile (which attains the minimum). Agrees with es_quantile_avg.
double es_discrete(const DiscreteDist& dist, Level alpha);

/// ES as the exact average of the left quantile over [alpha, 1); the
/// independent second route for es_discrete.
double es_quantile_avg(const DiscreteDist& dist, Level alpha);

/// Closed-form ES of Normal(m, sd^2); sd = 0 returns m.
double es_gaussian(double m, double sd, Level alpha);

/// Entropic risk of a discrete distribution (log-moment with max shift).
double er(const DiscreteDist& dist, EntropicParam beta);
double er(const FieldRV& x, const FiniteSpace& space, EntropicParam beta);

/// Column-constant field holding the per-column entropic risk of X.
FieldRV er_conditional(const FieldRV& x, const FiniteSpace& space, EntropicParam beta);

/// Mean of the conditional entropic risk.
double er_mean_of_cond(const FieldRV& x, const FiniteSpace& space, EntropicParam beta);

/// Entropic risk of the conditional mean.
double er_of_cond_mean(const FieldRV& x, const FiniteSpace& space, EntropicParam beta);

/// Sum_i w_i ES_{a_i}(distribution of E[X|columns]) + tau_shift.
double kusuoka_eval(const FieldRV& x, const FiniteSpace& space, const KusuokaMixture& mix,
                    double tau_shift = 0.0);

/// Law-invariant scalar risk functional on discrete distributions.
using ScalarRisk = std::function<double(const DiscreteDist&)>;

/// Registry lookup: "mean", "es:<alpha>", "er:<beta>". Unknown names throw.
ScalarRisk make_scalar_risk(const std::string& name);

/// rho(X) = rho_tilde(law of E[X|columns]); fixes rho on G-measurable inputs.
double lift_conditional(const ScalarRisk& rho_tilde, const FieldRV& x, const FiniteSpace& space);

double max_combine(double rho1, double rho2);

/// Pointwise monotone loss transform applied entrywise before conditioning.
using LossMap = std::function<double(double)>;

/// Registry lookup: "id", "exp:<a>" for (e^{ax}-1)/a, "pwl:<k1>:<k2>" for
/// k1*min(x,0)+k2*max(x,0) with k1,k2 >= 0.
LossMap make_loss(const std::string& name);

/// max_i ER_{theta_i}( E[loss(X) | partition_i] ). Partitions must be
/// pairwise independent under the space's measure.
double multi_source_er(const FieldRV& x, const FiniteSpace& space,
                       const std::vector<Axis>& partitions,
                       const std::vector<EntropicParam>& theta, const LossMap& loss);

}  // namespace plir
