#pragma once

#include <cmath>

#include "plir/errors.hpp"

namespace plir {

namespace detail {

template <class F>
double simpson_adapt(F& f, double a, double fa, double m, double fm, double b, double fb,
                     double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    if (depth <= 0) throw NumericalError("adaptive Simpson: recursion depth exhausted");
    return simpson_adapt(f, a, fa, lm, flm, m, fm, left, 0.5 * tol, depth - 1) +
           simpson_adapt(f, m, fm, rm, frm, b, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson quadrature of f over [a,b] to absolute tolerance abs_tol.
/// The domain is pre-split into `initial_panels` uniform panels before
/// refinement: the error estimate of a single coarse panel can accept a
/// spurious near-zero value when a narrow feature falls between its five
/// sample points, so callers integrating localized integrands should pass a
/// panel count that resolves the feature scale.
template <class F>
double integrate_adaptive(F&& f, double a, double b, double abs_tol, int max_depth = 48,
                          int initial_panels = 1) {
    if (!(abs_tol > 0.0)) throw std::invalid_argument("integrate_adaptive: abs_tol must be > 0");
    if (initial_panels < 1)
        throw std::invalid_argument("integrate_adaptive: need at least one panel");
    if (a == b) return 0.0;
    const double panel_tol = abs_tol / initial_panels;
    const double width = (b - a) / initial_panels;
    double total = 0.0;
    double right_value = f(a);
    for (int k = 0; k < initial_panels; ++k) {
        const double pa = a + k * width;
        const double pb = k + 1 == initial_panels ? b : pa + width;
        const double m = 0.5 * (pa + pb);
        const double fa = right_value;
        const double fm = f(m);
        const double fb = f(pb);
        right_value = fb;
        const double whole = (pb - pa) / 6.0 * (fa + 4.0 * fm + fb);
        total += detail::simpson_adapt(f, pa, fa, m, fm, pb, fb, whole, panel_tol, max_depth);
    }
    return total;
}

}  // namespace plir
