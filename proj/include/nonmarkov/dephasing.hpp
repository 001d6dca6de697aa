#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "nonmarkov/nm_measures.hpp"
#include "nonmarkov/qstate.hpp"

namespace nonmarkov {

// Two qubits S1, S2, each coupled through sigma_z to its own bosonic bath
// during a switching window:
//   H = sum_i eps_i sz_i + sum_k w_k b_ik^+ b_ik + chi_i(t) sum_k (g_ik sz_i b_ik^+ + h.c.)
// with chi_i(t) = 1 on [start_i, finish_i]. Ohmic spectral densities
// J_i(w) = alpha_i w exp(-w / omega_c).

enum class EnvKind { Entangled, Classical };

std::string to_string(EnvKind kind);
EnvKind env_kind_from_string(const std::string& text);

struct InteractionWindow {
  double start = 0.0;
  double finish = 0.0;
};

struct QuadratureConfig {
  int abscissae = 31;  // Gauss-Kronrod points per panel: 15, 21, 31, 41, 51 or 61
  double cutoff_multiplier = 60.0;
  double rel_tol = 1e-8;
  int max_depth = 20;
};

struct DephasingParams {
  double eps1 = 0.0;
  double eps2 = 0.0;
  double alpha1 = 1.0;
  double alpha2 = 1.0;
  double omega_c = 1e-2;
  double r = 3.0;
  /// Correlation parameter of the classical environment; tanh(r) when unset.
  std::optional<double> u;
  InteractionWindow window1{0.0, 2.5};
  InteractionWindow window2{2.5, 5.0};
  EnvKind env_kind = EnvKind::Entangled;
  QuadratureConfig quad;

  void validate() const;
  double classical_u() const;
  /// Squeezing parameter whose tanh is classical_u().
  double classical_r() const;
  /// J_bath(omega) for bath 1 or 2.
  double spectral_density(int bath, double omega) const;
};

/// beta(omega, t) = (1/omega) e^{i omega start} (1 - e^{i omega tau}),
/// tau = clamp(t, start, finish) - start. The coupling g is carried separately.
Complex beta(double omega, double t, const InteractionWindow& window);

/// ln of sum_n P_n <n|D(g1)|n><n|D(g2)|n> for the classically correlated pair
/// state with P_n = (1-u^2) u^{2n}, u = tanh r:
///   -cosh(2r)/2 (g1^2 + g2^2) + ln I0(sinh(2r) g1 g2).
double classical_char_factor(double g1abs, double g2abs, double r);

/// ln <TMSV| D1(gamma1) D2(gamma2) |TMSV> for the two-mode squeezed vacuum
/// sqrt(1-u^2) sum_n u^n |n,n>, u = tanh r.
double entangled_char_factor(Complex gamma1, Complex gamma2, double r);

enum class Coherence { k1, k2, k1t, k2t, k12, lam12 };
inline constexpr std::array<Coherence, 6> kAllCoherences{Coherence::k1,  Coherence::k2,
                                                         Coherence::k1t, Coherence::k2t,
                                                         Coherence::k12, Coherence::lam12};
std::string to_string(Coherence c);

/// Element <ket|rho_S|bra> of the two-qubit state (index = 2*bit1 + bit2) and
/// the displacement multipliers z_ket - z_bra per bath, z = (-1)^bit.
struct CoherenceIndex {
  int ket = 0;
  int bra = 0;
  int mult1 = 0;
  int mult2 = 0;
};
CoherenceIndex coherence_index(Coherence c);

struct PhaseFactors {
  Complex k1{1.0}, k2{1.0}, k1t{1.0}, k2t{1.0}, k12{1.0}, lam12{1.0};

  Complex get(Coherence c) const;
  Complex& get(Coherence c);
  std::array<double, 6> magnitudes() const;
  /// 4x4 multiplier F with rho_S(t) = F .* rho_S(0) (unit diagonal).
  Matrix multiplier_matrix() const;
};

/// Continuum phase factors by adaptive quadrature of the spectral density.
/// Throws ConvergenceError when the target tolerance is not reached.
PhaseFactors phase_factors(const DephasingParams& params, double t);

/// Applies the reduced two-qubit dephasing map to every factor pair S1, S2 of
/// `rho` (other factors are untouched).
DensityMatrix evolve_system(const PhaseFactors& factors, const DensityMatrix& rho,
                            const std::string& s1 = "S1", const std::string& s2 = "S2");

/// rho_S(t) for the pure initial state sum a_ij |ij>.
DensityMatrix system_state(const DephasingParams& params, const Eigen::Matrix2cd& amplitudes,
                           double t);

struct ModePair {
  double omega = 0.0;
  double g1 = 0.0;
  double g2 = 0.0;
};

/// Finite-mode version of the model: n_modes frequency nodes, one mode per
/// bath at each node, Fock truncation n_max.
struct DiscreteDephasingModel {
  std::vector<ModePair> mode_pairs;
  int n_max = 0;
  EnvKind env_kind = EnvKind::Entangled;
  double r = 0.0;
  DephasingParams params;
  /// Renormalized sqrt of the truncated pair weights; index n.
  std::vector<double> schmidt;
  double captured_trace_per_pair = 1.0;
  double captured_trace = 1.0;
};

inline constexpr double kMinCapturedTrace = 0.999;

DiscreteDephasingModel build_discrete_model(const DephasingParams& params, int n_modes, int n_max);

/// Smallest n_max whose truncation keeps at least `threshold` of the trace.
int minimal_n_max(const DephasingParams& params, int n_modes, double threshold = kMinCapturedTrace);

/// Displacement amplitudes of every mode at time t: delta_{bath,m} = g * beta.
struct ModeDisplacements {
  std::vector<Complex> bath1;
  std::vector<Complex> bath2;
};
ModeDisplacements mode_displacements(const DiscreteDephasingModel& model, double t);

/// Exact phase factors of the truncated finite-mode environment.
PhaseFactors discrete_phase_factors(const DiscreteDephasingModel& model, double t);

/// Free-evolution phase of system basis state s (index 2*bit1 + bit2).
Complex system_phase(const DephasingParams& params, int s, double t);

/// The global pure state at time t written as a superposition of product
/// branches over sites (ancilla labels, "S", one site per bath mode, and
/// purifying references). Entropies of any group of sites follow from Gram
/// matrices of per-site overlaps.
class BranchState {
 public:
  static constexpr std::size_t kDefaultMaxBranches = 4096;

  /// `initial` lives on S1, S2 plus any ancilla labels.
  BranchState(const DiscreteDephasingModel& model, const DensityMatrix& initial, double t,
              std::size_t max_branches = kDefaultMaxBranches);

  /// Entropy (nats) of a group given by names: ancilla labels, "S", "E1", "E2".
  double entropy(const LabelSet& groups) const;
  /// Values below 1e-12 nats are returned as exactly 0.
  double cmi(const LabelSet& a, const LabelSet& b, const LabelSet& c) const;
  double mutual_information(const LabelSet& a, const LabelSet& b) const;

  std::size_t branch_count() const { return amplitudes_.size(); }
  const LabelSet& ancilla_labels() const { return ancillas_; }
  /// rho_{S1 S2} as a 4x4 matrix.
  Matrix system_marginal() const;

 private:
  struct Site {
    std::string group;
    bool discrete = true;
    std::vector<int> local;  // per-branch local state id
    Matrix overlap;          // <local a | local b>
  };

  Matrix gram(const std::vector<std::size_t>& sites) const;
  double discrete_entropy(const std::vector<std::size_t>& kept,
                          const std::vector<std::size_t>& rest) const;

  std::vector<Site> sites_;
  std::vector<Complex> amplitudes_;
  LabelSet ancillas_;
};

struct LeakedInformation {
  double a_e1_s = 0.0;    // I(A:E1|S)
  double a_e2_s = 0.0;    // I(A:E2|S)
  double a_e1e2_s = 0.0;  // I(A:E1E2|S)
  double s_a = 0.0;       // I(S:A)
};

/// Information quantities for the given ancilla group (default: every
/// ancilla label of the initial state).
LeakedInformation leaked_information(const BranchState& state, LabelSet ancilla = {});

struct LeakedSeries {
  ScalarSeries a_e1_s;
  ScalarSeries a_e2_s;
  ScalarSeries a_e1e2_s;
  ScalarSeries s_a;
};

LeakedSeries leaked_information_trajectory(const DiscreteDephasingModel& model,
                                           const DensityMatrix& initial,
                                           const std::vector<double>& times);

enum class EnvPart { E1, E2, E1E2 };

/// I(A:env_part|S1S2)(t) by the branch Gram method.
ScalarSeries cmi_trajectory(const DiscreteDephasingModel& model, const DensityMatrix& initial,
                            const std::vector<double>& times, EnvPart env_part);

/// Uniform grid start, start+dt, ... up to end (inclusive within dt/2).
std::vector<double> uniform_grid(double start, double end, double dt);

}  // namespace nonmarkov
