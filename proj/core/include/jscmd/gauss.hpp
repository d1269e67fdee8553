// Standard normal helpers: densities, tail-safe cell probabilities,
// truncated means, and bivariate rectangle probabilities.
#pragma once

#include <vector>

namespace jscmd {

double norm_pdf(double x);

/// Phi(x), evaluated through erfc so deep tails keep relative accuracy.
double norm_cdf(double x);

/// P(a <= X < b) for X ~ N(0,1). Accepts infinite endpoints and avoids
/// the catastrophic cancellation of Phi(b) - Phi(a) far out in a tail.
double norm_cell_prob(double a, double b);

/// E[X | a <= X < b] for X ~ N(0,1); falls back to the midpoint when the
/// cell probability underflows.
double norm_cell_mean(double a, double b);

/// P(ax <= X < bx, ay <= Y < by) for (X,Y) jointly standard normal with
/// correlation rho in [0,1). Deterministic panelized Gauss-Legendre
/// quadrature on the conditional form; absolute error well below 1e-10.
double bvn_rect_prob(double ax, double bx, double ay, double by, double rho);

} // namespace jscmd
