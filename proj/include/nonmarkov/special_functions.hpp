#pragma once

#include <complex>
#include <vector>

namespace nonmarkov {

/// Generalized Laguerre polynomial L_n^(alpha)(x) by the three-term recurrence.
double laguerre(int n, double alpha, double x);

/// ln I_0(z) for z >= 0. Direct evaluation up to z = 30, asymptotic series above.
double log_bessel_i0(double z);

/// <n| exp(-i x p) |n> = exp(-x^2/4) L_n(x^2/2), the diagonal overlap of a
/// Fock state with its displaced copy (p the momentum quadrature).
double displaced_fock_overlap(int n, double x);

/// <m| D(alpha) |n> with D(alpha) = exp(alpha b^dagger - alpha^* b).
std::complex<double> displacement_element(int m, int n, std::complex<double> alpha);

/// Gauss rule for the weight x^alpha e^{-x} on (0, inf) (Golub-Welsch).
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussRule gauss_laguerre(int n, double alpha);

}  // namespace nonmarkov
