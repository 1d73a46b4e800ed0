#pragma once

namespace plir {

/// Standard normal density.
double norm_pdf(double x);

/// Standard normal cdf, computed via erfc for tail accuracy.
double norm_cdf(double x);

/// Survival function 1 - cdf, accurate in the right tail.
double norm_sf(double x);

/// Left quantile of the standard normal. norm_quantile(0) = -inf,
/// norm_quantile(1) = +inf; arguments outside [0,1] throw.
double norm_quantile(double p);

}  // namespace plir
