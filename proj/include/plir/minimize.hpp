#pragma once

#include <cmath>
#include <stdexcept>

namespace plir {

struct MinimizeResult {
    double x = 0.0;
    double value = 0.0;
};

/// Golden-section search for the minimum of a unimodal f on [a,b].
/// Stops when the bracket width falls below x_tol.
template <class F>
MinimizeResult golden_section(F&& f, double a, double b, double x_tol, int max_iter = 256) {
    if (!(a < b)) throw std::invalid_argument("golden_section: need a < b");
    if (!(x_tol > 0.0)) throw std::invalid_argument("golden_section: x_tol must be > 0");
    const double invphi = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c);
    double fd = f(d);
    for (int it = 0; it < max_iter && (b - a) > x_tol; ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    return fc < fd ? MinimizeResult{c, fc} : MinimizeResult{d, fd};
}

}  // namespace plir
