#pragma once

#include <vector>

namespace plir {

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
    LpStatus status = LpStatus::Infeasible;
    double value = 0.0;        // objective at the optimum, recomputed as c.x
    std::vector<double> x;     // primal solution (empty unless Optimal)
};

/// Dense two-phase simplex for small linear programs:
///
///     max c.x   s.t.   A x <= b,   x >= 0.
///
/// Equality rows are expressed by the caller as a <= / >= pair. Intended for
/// instances up to a few hundred rows/columns; everything is kept dense and
/// no external solver is involved.
LpResult solve_lp(const std::vector<std::vector<double>>& A, const std::vector<double>& b,
                  const std::vector<double>& c);

}  // namespace plir
