#pragma once

#include <span>

namespace gtours {

// Complete elliptic integral of the first kind in the modulus convention:
// K(xi) = integral over [0, pi/2] of dt / sqrt(1 - xi^2 sin^2 t).
// Requires 0 <= xi < 1.
double elliptic_k(double modulus);

// Complete elliptic integral of the second kind in the modulus convention:
// E(xi) = integral over [0, pi/2] of sqrt(1 - xi^2 sin^2 t) dt.
// Requires 0 <= xi <= 1; E(1) = 1.
double elliptic_e(double modulus);

// Fills out[k] with exp(-x) * I_k(x) for k = 0 .. out.size()-1, where I_k is
// the modified Bessel function of the first kind.  Requires x >= 0.  The
// scaled values stay bounded for all x, so the whole array is representable
// even when I_k(x) itself would overflow.
void bessel_i_scaled_all(double x, std::span<double> out);

// Convenience wrapper returning a single scaled order.
double bessel_i_scaled(int order, double x);

// Mean length of one tour step in dimension d: the step is a d-dimensional
// Gaussian vector with independent N(0, 2) coordinates, and the mean of its
// Euclidean norm is 2 * Gamma((d+1)/2) / Gamma(d/2).  Requires d >= 1.
double gaussian_step_mean(int dimension);

}  // namespace gtours
