#include "nonmarkov/special_functions.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

#include "nonmarkov/errors.hpp"

namespace nonmarkov {

double laguerre(int n, double alpha, double x) {
  if (n < 0) throw InvalidArgument("Laguerre degree must be nonnegative");
  if (n == 0) return 1.0;
  double prev = 1.0;
  double curr = 1.0 + alpha - x;
  for (int k = 1; k < n; ++k) {
    const double next = ((2.0 * k + 1.0 + alpha - x) * curr - (k + alpha) * prev) / (k + 1.0);
    prev = curr;
    curr = next;
  }
  return curr;
}

double log_bessel_i0(double z) {
  if (z < 0.0) z = -z;
  if (z <= 30.0) return std::log(std::cyl_bessel_i(0.0, z));
  // I0(z) ~ e^z / sqrt(2 pi z) * sum_k ((2k-1)!!)^2 / (k! (8z)^k)
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double next = term * (2.0 * k - 1.0) * (2.0 * k - 1.0) / (8.0 * k * z);
    if (next >= term) break;  // asymptotic series starts to diverge
    term = next;
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return z - 0.5 * std::log(2.0 * M_PI * z) + std::log(sum);
}

double displaced_fock_overlap(int n, double x) {
  if (n < 0 || n > 10000) throw InvalidArgument("Fock index out of range");
  const double half_x2 = 0.5 * x * x;
  return std::exp(-0.5 * half_x2) * laguerre(n, 0.0, half_x2);
}

std::complex<double> displacement_element(int m, int n, std::complex<double> alpha) {
  const double a2 = std::norm(alpha);
  const double gauss = std::exp(-0.5 * a2);
  const int lo = std::min(m, n);
  const int k = std::abs(m - n);
  const std::complex<double> base = m >= n ? alpha : -std::conj(alpha);
  std::complex<double> power = 1.0;
  for (int i = 0; i < k; ++i) power *= base;
  const double ratio = std::exp(0.5 * (std::lgamma(lo + 1.0) - std::lgamma(lo + k + 1.0)));
  return ratio * power * gauss * laguerre(lo, static_cast<double>(k), a2);
}

GaussRule gauss_laguerre(int n, double alpha) {
  if (n < 1) throw InvalidArgument("Gauss rule needs at least one node");
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    jacobi(k, k) = 2.0 * k + alpha + 1.0;
    if (k > 0) {
      const double b = std::sqrt(k * (k + alpha));
      jacobi(k, k - 1) = b;
      jacobi(k - 1, k) = b;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
  const double mu0 = std::tgamma(alpha + 1.0);
  GaussRule rule;
  for (int k = 0; k < n; ++k) {
    rule.nodes.push_back(solver.eigenvalues()(k));
    const double v0 = solver.eigenvectors()(0, k);
    rule.weights.push_back(mu0 * v0 * v0);
  }
  return rule;
}

}  // namespace nonmarkov
