#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nonmarkov/dephasing.hpp"
#include "nonmarkov/qstate.hpp"

namespace nonmarkov {

struct CheckResult {
  std::string name;
  int samples = 0;
  double max_violation = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct SuiteReport {
  std::vector<CheckResult> checks;
  std::uint64_t seed = 0;

  bool all_pass() const;
  const CheckResult& check(const std::string& name) const;
};

inline constexpr double kIdentityTol = 1e-8;

struct IdentityOptions {
  /// Negative control: let the "system-environment" unitary of check (a)
  /// act on the ancilla too. The check must then fail.
  bool entangle_ancilla = false;
};

/// Random-instance identity checks on 3-5 qubit states:
///   a_conservation    I(A:SE) = I(A:E|S) + I(S:A), conserved under U_SE
///   b_subenvironment  delta I(A:E1E2|S) = delta I(A:E1|S) under U_{SE1}
///   c_chain_rule      I(E1E2:A|S) = I(E1:A|S) + I(E2:A|SE1)
///   d_interaction     I(A:E1|S) + I(A:E2|S) - I(A:E1E2|S) = interaction information
///   e_broadcast       copying E1 into fresh registers keeps I(A:E|S); classical
///                     copies carry equal shares and nonnegative interaction information
///   f_initial_markov  product rho_AS (x) rho_E stays at nonnegative CMI after a short step
///   g_optimal_pair    S(rho_SA || rho_S (x) rho_A) = ln2 * D_tele for the optimal pair state
///   h_cptp_monotone   S and S_a do not increase under a random channel
/// Violations are reported, never thrown.
SuiteReport identity_suite(std::uint64_t seed, int samples, const IdentityOptions& options = {});

/// Truncated-Fock checks of the closed-form special functions.
SuiteReport special_function_suite(std::uint64_t seed);

/// Explicit state-vector evolution of the discrete model, compared against
/// the branch Gram method and the phase factors.
struct DenseCheckOptions {
  /// Extra Fock levels beyond n_max that hold the displaced states.
  int fock_padding = 10;
  std::size_t max_dimension = 16384;
  double tolerance = 1e-7;
  /// Agreement with the continuum (quadrature) phase factors.
  double quadrature_tolerance = 5e-2;
};

SuiteReport dense_dephasing_check(const DiscreteDephasingModel& model, const DensityMatrix& initial,
                                  const std::vector<double>& times,
                                  const DenseCheckOptions& options = {});

/// <m|D(gamma)|n> for m, n < dim by exponentiating the ladder generator in a
/// larger truncated space and cropping.
Matrix truncated_displacement(Complex gamma, int dim, int work_dim);

}  // namespace nonmarkov
