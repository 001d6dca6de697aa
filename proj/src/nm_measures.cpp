#include "nonmarkov/nm_measures.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "nonmarkov/info_measures.hpp"
#include "nonmarkov/parallel.hpp"

namespace nonmarkov {

ScalarSeries::ScalarSeries(std::vector<double> times, std::vector<double> values)
    : times_(std::move(times)), values_(std::move(values)) {
  if (times_.size() != values_.size()) throw InvalidArgument("series length mismatch");
  for (std::size_t i = 1; i < times_.size(); ++i)
    if (!(times_[i] > times_[i - 1])) throw InvalidArgument("time grid is not strictly increasing");
}

StateTrajectory::StateTrajectory(std::vector<double> times, std::vector<DensityMatrix> states)
    : times_(std::move(times)), states_(std::move(states)) {
  if (times_.size() != states_.size()) throw InvalidArgument("trajectory length mismatch");
  if (states_.empty()) throw InvalidArgument("trajectory is empty");
  for (std::size_t i = 1; i < times_.size(); ++i) {
    if (!(times_[i] > times_[i - 1])) throw InvalidArgument("time grid is not strictly increasing");
    if (!(states_[i].partition() == states_.front().partition()))
      throw InvalidArgument("trajectory states do not share one partition");
  }
}

std::string to_string(MeasureName name) {
  switch (name) {
    case MeasureName::BLP: return "BLP";
    case MeasureName::tBLP: return "tBLP";
    case MeasureName::LFS: return "LFS";
    case MeasureName::N1: return "N1";
    case MeasureName::N2: return "N2";
  }
  return "?";
}

namespace {

IncrementIntegral increment_integral(const ScalarSeries& series, double noise_tol, double sign) {
  if (noise_tol < 0.0) throw InvalidArgument("noise tolerance must be nonnegative");
  if (series.size() < 2) throw InvalidArgument("need at least two samples");
  const auto& t = series.times();
  const auto& v = series.values();
  std::vector<double> stamps;
  std::vector<double> contributions;
  double total = 0.0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    const double delta = sign * (v[i] - v[i - 1]);
    const double c = (std::abs(delta) <= noise_tol || delta < 0.0) ? 0.0 : delta;
    total += c;
    stamps.push_back(t[i]);
    contributions.push_back(c);
  }
  return {total, ScalarSeries(std::move(stamps), std::move(contributions))};
}

ScalarSeries series_of(const std::vector<double>& times, std::vector<double> values) {
  return ScalarSeries(times, std::move(values));
}

LabelSet complement_of(const SystemPartition& partition, std::initializer_list<const LabelSet*> used) {
  std::set<std::string> taken;
  for (const auto* set : used) taken.insert(set->begin(), set->end());
  LabelSet out;
  for (const auto& l : partition.labels())
    if (!taken.count(l)) out.push_back(l);
  return out;
}

void require_labels(const SystemPartition& partition, const LabelSet& labels) {
  for (const auto& l : labels)
    if (!partition.contains(l)) throw InvalidArgument("trajectory is missing label '" + l + "'");
}

}  // namespace

IncrementIntegral positive_increment_integral(const ScalarSeries& series, double noise_tol) {
  return increment_integral(series, noise_tol, 1.0);
}

IncrementIntegral negative_increment_integral(const ScalarSeries& series, double noise_tol) {
  return increment_integral(series, noise_tol, -1.0);
}

MeasureResult measure_from_series(MeasureName name, const std::vector<ScalarSeries>& candidates,
                                  bool count_decrease, double noise_tol) {
  if (candidates.empty()) throw InvalidArgument("candidate list is empty");
  MeasureResult best;
  best.measure_name = name;
  best.value = -1.0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    IncrementIntegral integral;
    if (candidates[i].size() < 2) {
      integral.value = 0.0;
    } else {
      integral = count_decrease ? negative_increment_integral(candidates[i], noise_tol)
                                : positive_increment_integral(candidates[i], noise_tol);
    }
    if (integral.value > best.value) {
      best.value = integral.value;
      best.best_candidate_index = static_cast<int>(i);
      best.increments = std::move(integral.increments);
    }
  }
  return best;
}

MeasureResult measure_distance_blp(const std::vector<TrajectoryPair>& pairs,
                                   DistanceKind distance, double noise_tol) {
  if (pairs.empty()) throw InvalidArgument("candidate list is empty");
  auto series = parallel_map(pairs.size(), [&](std::size_t i) {
    const auto& [first, second] = pairs[i];
    if (first.times() != second.times()) throw InvalidArgument("pair time grids differ");
    std::vector<double> values;
    for (std::size_t k = 0; k < first.size(); ++k) {
      const auto& a = first.states()[k];
      const auto& b = second.states()[k];
      values.push_back(distance == DistanceKind::Trace ? trace_distance(a, b)
                                                       : jensen_shannon_telescopic(a, b));
    }
    return series_of(first.times(), std::move(values));
  });
  return measure_from_series(distance == DistanceKind::Trace ? MeasureName::BLP : MeasureName::tBLP,
                             series, false, noise_tol);
}

MeasureResult measure_lfs(const std::vector<StateTrajectory>& trajectories, const LabelSet& system,
                          const LabelSet& ancilla, double noise_tol) {
  if (trajectories.empty()) throw InvalidArgument("candidate list is empty");
  auto series = parallel_map(trajectories.size(), [&](std::size_t i) {
    const auto& traj = trajectories[i];
    require_labels(traj.partition(), system);
    require_labels(traj.partition(), ancilla);
    std::vector<double> values;
    for (const auto& state : traj.states()) values.push_back(marginal_cmi(state, system, ancilla, {}));
    return series_of(traj.times(), std::move(values));
  });
  return measure_from_series(MeasureName::LFS, series, false, noise_tol);
}

MeasureResult measure_n1(const std::vector<StateTrajectory>& trajectories,
                         const LabelSet& env_labels, const LabelSet& system,
                         const LabelSet& ancilla, double noise_tol) {
  if (trajectories.empty()) throw InvalidArgument("candidate list is empty");
  if (env_labels.empty()) throw InvalidArgument("environment label set is empty");
  auto series = parallel_map(trajectories.size(), [&](std::size_t i) {
    const auto& traj = trajectories[i];
    for (const auto* set : {&env_labels, &system, &ancilla}) require_labels(traj.partition(), *set);
    std::vector<double> values;
    for (const auto& state : traj.states())
      values.push_back(marginal_cmi(state, ancilla, env_labels, system));
    return series_of(traj.times(), std::move(values));
  });
  return measure_from_series(MeasureName::N1, series, true, noise_tol);
}

MeasureResult measure_n2(const std::vector<StateTrajectory>& trajectories,
                         const LabelSet& env_labels, const LabelSet& system,
                         const LabelSet& ancilla, double noise_tol) {
  if (trajectories.empty()) throw InvalidArgument("candidate list is empty");
  const LabelSet extension{kExtensionLabel};
  auto series = parallel_map(trajectories.size(), [&](std::size_t i) {
    const auto& traj = trajectories[i];
    const auto& partition = traj.partition();
    for (const auto* set : {&system, &ancilla, &extension}) require_labels(partition, *set);
    if (partition.dim_of(kExtensionLabel) != partition.dim_of(system) + 1)
      throw InvalidArgument("extension A' must have dimension dim(S)+1");
    LabelSet env = env_labels.empty() ? complement_of(partition, {&system, &ancilla, &extension})
                                      : env_labels;
    if (env.empty()) throw InvalidArgument("no environment labels");
    require_labels(partition, env);

    const Matrix reference = partial_trace(traj.states().front(), extension).matrix();
    LabelSet conditioning = system;
    conditioning.push_back(kExtensionLabel);
    std::vector<double> values;
    for (const auto& state : traj.states()) {
      const double drift =
          (partial_trace(state, extension).matrix() - reference).cwiseAbs().maxCoeff();
      if (drift > 1e-8) throw InvalidArgument("A' marginal is not constant along the trajectory");
      values.push_back(marginal_cmi(state, ancilla, env, conditioning));
    }
    return series_of(traj.times(), std::move(values));
  });
  return measure_from_series(MeasureName::N2, series, true, noise_tol);
}

DensityMatrix optimal_pair_state(const DensityMatrix& rho1, const DensityMatrix& rho2,
                                 const std::string& ancilla_label) {
  if (!(rho1.partition() == rho2.partition()))
    throw InvalidArgument("pair states live on different partitions");
  const SystemPartition ancilla({{ancilla_label, 2}});
  const auto partition = rho1.partition().concat(ancilla);
  Matrix p0 = Matrix::Zero(2, 2);
  Matrix p1 = Matrix::Zero(2, 2);
  p0(0, 0) = 1.0;
  p1(1, 1) = 1.0;
  Matrix m = 0.5 * (kron(rho1.matrix(), p0) + kron(rho2.matrix(), p1));
  return DensityMatrix(std::move(m), partition);
}

DensityMatrix flagged_ancilla_state(const std::vector<FlaggedBranch>& branches,
                                    const SystemPartition& system,
                                    const std::string& ancilla_label) {
  if (branches.empty()) throw InvalidArgument("need at least one branch");
  const auto flag_dim = branches.front().flag.size();
  double norm2 = 0.0;
  for (const auto& b : branches) {
    if (b.flag.size() != flag_dim || b.system_state.size() != system.total_dim())
      throw InvalidArgument("branch vector dimensions are inconsistent");
    norm2 += std::norm(b.amplitude);
  }
  if (std::abs(norm2 - 1.0) > 1e-12) throw ValidityError("branch amplitudes are not normalized");
  for (std::size_t i = 0; i < branches.size(); ++i)
    for (std::size_t j = 0; j < branches.size(); ++j) {
      const Complex ov = branches[i].flag.dot(branches[j].flag);
      if (std::abs(ov - (i == j ? Complex(1.0) : Complex(0.0))) > 1e-12)
        throw ValidityError("ancilla flags are not orthonormal");
    }
  const SystemPartition ancilla({{ancilla_label, static_cast<int>(flag_dim)}});
  Vector psi = Vector::Zero(static_cast<Eigen::Index>(flag_dim) * system.total_dim());
  for (const auto& b : branches) {
    Vector sys = b.system_state / b.system_state.norm();
    psi += b.amplitude * kron(b.flag, sys).col(0);
  }
  return DensityMatrix::pure(psi, ancilla.concat(system));
}

DensityMatrix default_flagged_state() {
  const SystemPartition system({{"S1", 2}, {"S2", 2}});
  Vector s01 = Vector::Zero(4);
  Vector s10 = Vector::Zero(4);
  s01(1) = 1.0;
  s10(2) = 1.0;
  Vector f0 = Vector::Zero(2);
  Vector f1 = Vector::Zero(2);
  f0(0) = 1.0;
  f1(1) = 1.0;
  const double a = 1.0 / std::sqrt(2.0);
  return flagged_ancilla_state({{a, s01, f0}, {a, s10, f1}}, system);
}

}  // namespace nonmarkov
