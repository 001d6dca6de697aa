#include "nonmarkov/info_measures.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <set>

namespace nonmarkov {

namespace {

constexpr double kSupportEigenTol = 1e-12;
constexpr double kSupportWeightTol = 1e-10;

void require_same_partition(const DensityMatrix& a, const DensityMatrix& b) {
  if (!(a.partition() == b.partition())) throw InvalidArgument("partition mismatch");
}

// Label sets must be pairwise disjoint; with `cover`, their union must be the
// whole partition.
void check_label_sets(const SystemPartition& partition, const std::vector<LabelSet>& sets,
                      bool cover) {
  std::set<std::string> seen;
  for (const auto& set : sets)
    for (const auto& l : set) {
      partition.index_of(l);
      if (!seen.insert(l).second) throw InvalidArgument("label '" + l + "' used twice");
    }
  if (cover && seen.size() != partition.size())
    throw InvalidArgument("label sets do not cover the partition");
}

LabelSet unite(std::initializer_list<const LabelSet*> parts) {
  LabelSet out;
  for (const auto* p : parts) out.insert(out.end(), p->begin(), p->end());
  return out;
}

double clamp_nonnegative(double value) {
  if (value < 0.0 && value >= -ExtendedReal::kClampTol) return 0.0;
  return value;
}

}  // namespace

ExtendedReal::ExtendedReal(double value) : value_(value) {
  if (std::isnan(value)) throw ValidityError("extended real cannot be NaN");
  if (value < -kClampTol) throw ValidityError("negative value " + std::to_string(value));
  if (value < 0.0) value_ = 0.0;
}

double shannon_entropy(const RealVector& probabilities) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < probabilities.size(); ++i) {
    const double p = probabilities(i);
    if (p > 0.0) s -= p * std::log(p);
  }
  return std::max(s, 0.0);
}

double von_neumann_entropy(const DensityMatrix& rho) { return shannon_entropy(rho.eigenvalues()); }

double marginal_entropy(const DensityMatrix& rho, const LabelSet& labels) {
  if (labels.empty()) return 0.0;
  if (labels.size() == rho.partition().size()) {
    rho.partition().restrict_to(labels);
    return von_neumann_entropy(rho);
  }
  return von_neumann_entropy(partial_trace(rho, labels));
}

Matrix psd_power(const Matrix& m, double exponent, double zero_tol) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
  RealVector values = solver.eigenvalues();
  for (Eigen::Index i = 0; i < values.size(); ++i)
    values(i) = values(i) > zero_tol ? std::pow(values(i), exponent) : 0.0;
  return solver.eigenvectors() * values.asDiagonal() * solver.eigenvectors().adjoint();
}

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
  require_same_partition(rho, sigma);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(rho.matrix() - sigma.matrix(),
                                               Eigen::EigenvaluesOnly);
  return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  require_same_partition(rho, sigma);
  const Matrix sqrt_rho = psd_power(rho.matrix(), 0.5);
  Matrix inner = sqrt_rho * sigma.matrix() * sqrt_rho;
  inner = 0.5 * (inner + inner.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(inner, Eigen::EigenvaluesOnly);
  double root_sum = 0.0;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i)
    root_sum += std::sqrt(std::max(solver.eigenvalues()(i), 0.0));
  return std::clamp(root_sum * root_sum, 0.0, 1.0);
}

ExtendedReal relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma) {
  require_same_partition(rho, sigma);
  const RealVector& q = sigma.eigenvalues();
  const Matrix& v = sigma.eigenvectors();
  double cross = 0.0;
  for (Eigen::Index j = 0; j < q.size(); ++j) {
    const double weight = (v.col(j).adjoint() * rho.matrix() * v.col(j))(0, 0).real();
    if (q(j) < kSupportEigenTol) {
      if (weight > kSupportWeightTol) return ExtendedReal::infinity();
      continue;
    }
    cross += weight * std::log(q(j));
  }
  const double neg_entropy = -von_neumann_entropy(rho);
  return ExtendedReal(clamp_nonnegative(neg_entropy - cross));
}

double telescopic_relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma,
                                   double a) {
  if (!(a > 0.0 && a < 1.0)) throw InvalidArgument("telescopic parameter must lie in (0,1)");
  require_same_partition(rho, sigma);
  const DensityMatrix mixture(a * rho.matrix() + (1.0 - a) * sigma.matrix(), rho.partition());
  const ExtendedReal s = relative_entropy(rho, mixture);
  if (s.is_infinite()) throw ValidityError("telescopic mixture lost the support of rho");
  return s.value() / -std::log(a);
}

double jensen_shannon_telescopic(const DensityMatrix& rho, const DensityMatrix& sigma) {
  return 0.5 * (telescopic_relative_entropy(rho, sigma, 0.5) +
                telescopic_relative_entropy(sigma, rho, 0.5));
}

double mutual_information(const DensityMatrix& rho, const LabelSet& part_a,
                          const LabelSet& part_b) {
  check_label_sets(rho.partition(), {part_a, part_b}, true);
  const double value = marginal_entropy(rho, part_a) + marginal_entropy(rho, part_b) -
                       von_neumann_entropy(rho);
  if (value < -ExtendedReal::kClampTol)
    throw ValidityError("subadditivity violated by " + std::to_string(value));
  return clamp_nonnegative(value);
}

double conditional_mutual_information(const DensityMatrix& rho, const LabelSet& part_a,
                                      const LabelSet& part_b, const LabelSet& part_c) {
  check_label_sets(rho.partition(), {part_a, part_b, part_c}, true);
  return marginal_cmi(rho, part_a, part_b, part_c);
}

double marginal_cmi(const DensityMatrix& rho, const LabelSet& part_a, const LabelSet& part_b,
                    const LabelSet& part_c) {
  check_label_sets(rho.partition(), {part_a, part_b, part_c}, false);
  const double value = marginal_entropy(rho, unite({&part_a, &part_c})) +
                       marginal_entropy(rho, unite({&part_c, &part_b})) -
                       marginal_entropy(rho, part_c) -
                       marginal_entropy(rho, unite({&part_a, &part_c, &part_b}));
  if (value < -ExtendedReal::kClampTol)
    throw ValidityError("strong subadditivity violated by " + std::to_string(value));
  return clamp_nonnegative(value);
}

double interaction_information(const DensityMatrix& rho, const LabelSet& part_e1,
                               const LabelSet& part_e2, const LabelSet& part_a,
                               const LabelSet& part_s) {
  check_label_sets(rho.partition(), {part_e1, part_e2, part_a, part_s}, true);
  const LabelSet sa = unite({&part_s, &part_a});
  return marginal_cmi(rho, part_e1, part_e2, part_s) - marginal_cmi(rho, part_e1, part_e2, sa);
}

DensityMatrix petz_recovery(const DensityMatrix& rho_full, const LabelSet& part_a,
                            const LabelSet& part_b, const LabelSet& part_c) {
  check_label_sets(rho_full.partition(), {part_a, part_b, part_c}, true);
  const LabelSet abc = unite({&part_a, &part_b, &part_c});
  const DensityMatrix ordered = reorder(rho_full, abc);
  const auto& partition = ordered.partition();
  const int da = partition.dim_of(part_a);
  const int dc = partition.dim_of(part_c);

  const Matrix rho_ab = partial_trace(ordered, unite({&part_a, &part_b})).matrix();
  const Matrix rho_b = partial_trace(ordered, part_b).matrix();
  const Matrix rho_bc = partial_trace(ordered, unite({&part_b, &part_c})).matrix();

  const Matrix id_a = Matrix::Identity(da, da);
  const Matrix inv_sqrt_b = kron(id_a, psd_power(rho_b, -0.5));
  const Matrix sqrt_bc = kron(id_a, psd_power(rho_bc, 0.5));
  const Matrix conditioned = inv_sqrt_b * rho_ab * inv_sqrt_b;
  const Matrix lifted = kron(conditioned, Matrix::Identity(dc, dc));
  Matrix sigma = sqrt_bc * lifted * sqrt_bc;
  sigma = 0.5 * (sigma + sigma.adjoint());
  const double tr = sigma.trace().real();
  if (std::abs(tr - 1.0) < 1e-9) sigma /= tr;

  const DensityMatrix recovered(std::move(sigma), partition);
  return reorder(recovered, rho_full.partition().labels());
}

RecoveryReport recovery_report(const DensityMatrix& rho_full, const LabelSet& part_a,
                               const LabelSet& part_b, const LabelSet& part_c) {
  const DensityMatrix sigma = petz_recovery(rho_full, part_a, part_b, part_c);
  RecoveryReport report;
  report.cmi = conditional_mutual_information(rho_full, part_a, part_c, part_b);
  report.trace_distance = trace_distance(rho_full, sigma);
  report.fidelity = fidelity(rho_full, sigma);
  const int da = rho_full.partition().dim_of(part_a);
  report.racmi_rhs = 7.0 * std::log2(static_cast<double>(da)) * std::sqrt(report.trace_distance);
  report.racmi_holds = report.cmi <= report.racmi_rhs + 1e-12;
  const double d_half = report.trace_distance;
  const double d_full = 2.0 * report.trace_distance;
  report.squared_distance_bound_half_norm = d_half * d_half <= std::log(2.0) * report.cmi + 1e-12;
  report.squared_distance_bound_full_norm = d_full * d_full <= std::log(2.0) * report.cmi + 1e-12;
  return report;
}

}  // namespace nonmarkov
