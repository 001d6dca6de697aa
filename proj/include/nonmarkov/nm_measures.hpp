#pragma once

#include <string>
#include <utility>
#include <vector>

#include "nonmarkov/qstate.hpp"

namespace nonmarkov {

/// Real values sampled on a strictly increasing time grid.
class ScalarSeries {
 public:
  ScalarSeries() = default;
  ScalarSeries(std::vector<double> times, std::vector<double> values);

  const std::vector<double>& times() const { return times_; }
  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return times_.size(); }

 private:
  std::vector<double> times_;
  std::vector<double> values_;
};

/// States sampled on a time grid, all on one partition.
class StateTrajectory {
 public:
  StateTrajectory(std::vector<double> times, std::vector<DensityMatrix> states);

  const std::vector<double>& times() const { return times_; }
  const std::vector<DensityMatrix>& states() const { return states_; }
  const SystemPartition& partition() const { return states_.front().partition(); }
  std::size_t size() const { return times_.size(); }

 private:
  std::vector<double> times_;
  std::vector<DensityMatrix> states_;
};

enum class MeasureName { BLP, tBLP, LFS, N1, N2 };

std::string to_string(MeasureName name);

struct MeasureResult {
  MeasureName measure_name = MeasureName::LFS;
  double value = 0.0;
  int best_candidate_index = 0;
  ScalarSeries increments;  // contributions of the best candidate, one per step
};

/// Default threshold below which a per-step change counts as solver noise.
inline constexpr double kDefaultNoiseTol = 1e-10;

struct IncrementIntegral {
  double value = 0.0;
  ScalarSeries increments;
};

/// Sum over steps of max(delta, 0), ignoring steps with |delta| <= noise_tol.
/// The increment series is stamped with the right end of each step.
IncrementIntegral positive_increment_integral(const ScalarSeries& series,
                                              double noise_tol = kDefaultNoiseTol);

/// Same on the negated series: the integrated decrease.
IncrementIntegral negative_increment_integral(const ScalarSeries& series,
                                              double noise_tol = kDefaultNoiseTol);

/// Maximizes the rise (or fall, with `count_decrease`) integral over a list
/// of candidate series. Shared back end of every measure below.
MeasureResult measure_from_series(MeasureName name, const std::vector<ScalarSeries>& candidates,
                                  bool count_decrease, double noise_tol = kDefaultNoiseTol);

enum class DistanceKind { Trace, Telescopic };

using TrajectoryPair = std::pair<StateTrajectory, StateTrajectory>;

/// BLP (trace distance) or tBLP (quantum Jensen-Shannon) revivals, maximized
/// over candidate pairs.
MeasureResult measure_distance_blp(const std::vector<TrajectoryPair>& pairs,
                                   DistanceKind distance, double noise_tol = kDefaultNoiseTol);

/// Integrated rise of I(S:A)(t); other factors (if any) are traced out.
MeasureResult measure_lfs(const std::vector<StateTrajectory>& trajectories,
                          const LabelSet& system = {"S"}, const LabelSet& ancilla = {"A"},
                          double noise_tol = kDefaultNoiseTol);

/// Integrated decrease of I(A:env|S)(t).
MeasureResult measure_n1(const std::vector<StateTrajectory>& trajectories,
                         const LabelSet& env_labels, const LabelSet& system = {"S"},
                         const LabelSet& ancilla = {"A"}, double noise_tol = kDefaultNoiseTol);

inline const std::string kExtensionLabel = "A'";

/// Integrated decrease of I(A:env|S A')(t). A' must have dim(S)+1 and a
/// constant marginal along every trajectory. `env_labels` empty means every
/// label outside A, S and A'.
MeasureResult measure_n2(const std::vector<StateTrajectory>& trajectories,
                         const LabelSet& env_labels = {}, const LabelSet& system = {"S"},
                         const LabelSet& ancilla = {"A"}, double noise_tol = kDefaultNoiseTol);

/// (rho1 (x) |0><0|_A + rho2 (x) |1><1|_A) / 2 on the partition of rho1 plus A.
DensityMatrix optimal_pair_state(const DensityMatrix& rho1, const DensityMatrix& rho2,
                                 const std::string& ancilla_label = "A");

struct FlaggedBranch {
  Complex amplitude;
  Vector system_state;  // on the system partition
  Vector flag;          // ancilla vector
};

/// Pure state sum_i a_i |s_i>_S (x) |f_i>_A on [A, system factors...].
DensityMatrix flagged_ancilla_state(const std::vector<FlaggedBranch>& branches,
                                    const SystemPartition& system,
                                    const std::string& ancilla_label = "A");

/// (|01>_S |0>_A + |10>_S |1>_A) / sqrt(2) on [A, S1, S2].
DensityMatrix default_flagged_state();

}  // namespace nonmarkov
