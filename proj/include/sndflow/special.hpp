#pragma once

#include <functional>
#include <span>

namespace sndflow {

/// Complete Beta function B(a, b) through log-Gamma.
double beta(double a, double b);

/// Unnormalised incomplete Beta function B_x(a, b) = int_0^x t^{a-1} (1-t)^{b-1} dt.
///
/// Continued fraction (modified Lentz) on whichever side of
/// x = (a+1)/(a+b+2) converges fastest; the other side is obtained from
/// B_x(a,b) = B(a,b) - B_{1-x}(b,a). Throws std::domain_error for x outside
/// [0, 1] or non-positive parameters.
double incomplete_beta(double x, double a, double b);

/// Binomial coefficient as a double (exact for the small orders used here).
double binomial(int n, int k);

double factorial(int n);

/// Adaptive Gauss-Legendre integration of f over [a, b].
///
/// Each panel is integrated with a 20-point rule and compared with the sum
/// over its two halves; panels are bisected until the difference falls
/// below max(abs_tol, rel_tol * |panel|). Optional interior breakpoints
/// split the domain before refinement starts.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-14, double rel_tol = 1e-13,
                 std::span<const double> breakpoints = {});

}  // namespace sndflow
