#pragma once

#include <cmath>
#include <limits>

#include "nonmarkov/qstate.hpp"

namespace nonmarkov {

/// Nonnegative real in nats, or +infinity.
class ExtendedReal {
 public:
  static constexpr double kClampTol = 1e-9;

  explicit ExtendedReal(double value);
  static ExtendedReal infinity() { return ExtendedReal(std::numeric_limits<double>::infinity()); }

  bool is_infinite() const { return std::isinf(value_); }
  double value() const { return value_; }

 private:
  double value_ = 0.0;
};

/// Entropy of a spectrum, -sum p ln p with 0 ln 0 = 0. Entries must already
/// be clamped (>= 0).
double shannon_entropy(const RealVector& probabilities);

double von_neumann_entropy(const DensityMatrix& rho);

/// Entropy of the marginal on `labels` (empty set gives 0).
double marginal_entropy(const DensityMatrix& rho, const LabelSet& labels);

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma);

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

/// S(rho || sigma) in nats; +infinity on support violation (a sigma
/// eigenvalue below 1e-12 carrying rho-weight above 1e-10).
ExtendedReal relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma);

/// S(rho || a rho + (1-a) sigma) / (-ln a), a in (0,1); lies in [0,1].
double telescopic_relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma,
                                   double a);

/// Quantum Jensen-Shannon divergence (S_1/2(rho||sigma) + S_1/2(sigma||rho)) / 2.
double jensen_shannon_telescopic(const DensityMatrix& rho, const DensityMatrix& sigma);

/// I(A:B). The two label sets must be disjoint and cover the partition.
double mutual_information(const DensityMatrix& rho, const LabelSet& part_a,
                          const LabelSet& part_b);

/// I(A:B|C) = S(AC) + S(CB) - S(C) - S(ACB). The three label sets must be
/// disjoint and cover the partition; values within -1e-9 are clamped to 0.
double conditional_mutual_information(const DensityMatrix& rho, const LabelSet& part_a,
                                      const LabelSet& part_b, const LabelSet& part_c);

/// I(A:B|C) on the marginal over A u B u C; the remaining factors are traced
/// out first. Empty C gives the plain mutual information.
double marginal_cmi(const DensityMatrix& rho, const LabelSet& part_a, const LabelSet& part_b,
                    const LabelSet& part_c);

/// I(E1:E2|S) - I(E1:E2|SA). May be negative.
double interaction_information(const DensityMatrix& rho, const LabelSet& part_e1,
                               const LabelSet& part_e2, const LabelSet& part_a,
                               const LabelSet& part_s);

/// (I_A (x) R_{B->BC})(rho_AB) with the Petz transpose channel of Tr_C:
/// X -> rho_BC^1/2 (rho_B^-1/2 X rho_B^-1/2 (x) I_C) rho_BC^1/2.
/// Returned in the partition order of `rho_full`.
DensityMatrix petz_recovery(const DensityMatrix& rho_full, const LabelSet& part_a,
                            const LabelSet& part_b, const LabelSet& part_c);

/// Recovery bounds evaluated on the Petz output.
struct RecoveryReport {
  double cmi = 0.0;                  // I(A:C|B), nats
  double trace_distance = 0.0;       // (1/2)||rho - sigma||_1
  double fidelity = 0.0;             // F(rho, sigma)
  double racmi_rhs = 0.0;            // 7 log2(dim A) sqrt(D)
  bool racmi_holds = false;          // I(A:C|B) <= racmi_rhs
  bool squared_distance_bound_half_norm = false;  // D^2 <= ln2 I(A:C|B), D with the 1/2
  bool squared_distance_bound_full_norm = false;  // same with ||rho - sigma||_1
};

RecoveryReport recovery_report(const DensityMatrix& rho_full, const LabelSet& part_a,
                               const LabelSet& part_b, const LabelSet& part_c);

/// Function of a Hermitian PSD matrix through its clamped eigendecomposition.
Matrix psd_power(const Matrix& m, double exponent, double zero_tol = 1e-12);

}  // namespace nonmarkov
