#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "nonmarkov/errors.hpp"

namespace nonmarkov {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using LabelSet = std::vector<std::string>;

struct Factor {
  std::string label;
  int dim = 1;

  bool operator==(const Factor&) const = default;
};

/// Ordered tensor factorization of a Hilbert space. Index convention is
/// row-major over factors: the last factor varies fastest.
class SystemPartition {
 public:
  SystemPartition() = default;
  explicit SystemPartition(std::vector<Factor> factors);

  const std::vector<Factor>& factors() const { return factors_; }
  std::size_t size() const { return factors_.size(); }
  Eigen::Index total_dim() const { return total_dim_; }

  bool contains(const std::string& label) const;
  std::size_t index_of(const std::string& label) const;
  int dim_of(const std::string& label) const;
  int dim_of(const LabelSet& labels) const;
  LabelSet labels() const;

  /// Factors of `other` appended after ours; labels must not collide.
  SystemPartition concat(const SystemPartition& other) const;
  /// Kept factors in this partition's order.
  SystemPartition restrict_to(const LabelSet& keep) const;
  /// Same factor with a new dimension (channels with different output dim).
  SystemPartition with_dim(const std::string& label, int dim) const;

  bool operator==(const SystemPartition& other) const { return factors_ == other.factors_; }

 private:
  std::vector<Factor> factors_;
  Eigen::Index total_dim_ = 1;
};

/// Index bookkeeping for splitting a partition into a kept block (in the
/// caller's label order) and the rest (in partition order).
/// full_index(k, r) is the flat index of kept multi-index k and rest index r.
class IndexSplit {
 public:
  IndexSplit(const SystemPartition& partition, const LabelSet& kept);

  Eigen::Index kept_dim() const { return kept_dim_; }
  Eigen::Index rest_dim() const { return rest_dim_; }
  Eigen::Index full_index(Eigen::Index kept, Eigen::Index rest) const {
    return perm_[static_cast<std::size_t>(kept * rest_dim_ + rest)];
  }

 private:
  Eigen::Index kept_dim_ = 1;
  Eigen::Index rest_dim_ = 1;
  std::vector<Eigen::Index> perm_;
};

/// Dense Hermitian, PSD, unit-trace operator tied to a SystemPartition.
/// Immutable; the clamped spectrum is computed once at construction.
class DensityMatrix {
 public:
  static constexpr double kHermitianTol = 1e-10;
  static constexpr double kTraceTol = 1e-9;
  static constexpr double kPsdTol = 1e-10;

  DensityMatrix(Matrix data, SystemPartition partition);

  static DensityMatrix pure(const Vector& psi, SystemPartition partition);
  static DensityMatrix maximally_mixed(SystemPartition partition);
  static DensityMatrix basis_state(SystemPartition partition, Eigen::Index index);

  const Matrix& matrix() const { return data_; }
  const SystemPartition& partition() const { return partition_; }
  Eigen::Index dim() const { return data_.rows(); }

  /// Ascending eigenvalues, entries in [-kPsdTol, 0) clamped to 0.
  const RealVector& eigenvalues() const { return spectrum_->values; }
  /// Eigenvectors matching eigenvalues(), as columns.
  const Matrix& eigenvectors() const { return spectrum_->vectors; }
  double purity() const;

 private:
  struct Spectrum {
    RealVector values;
    Matrix vectors;
  };

  Matrix data_;
  SystemPartition partition_;
  std::shared_ptr<const Spectrum> spectrum_;
};

/// Kraus representation; every operator maps an in_dim space to out_dim.
class QuantumChannel {
 public:
  static constexpr double kCompletenessTol = 1e-10;

  explicit QuantumChannel(std::vector<Matrix> kraus_operators);

  static QuantumChannel identity(int dim);
  static QuantumChannel unitary(const Matrix& u);
  static QuantumChannel fully_depolarizing(int dim);

  const std::vector<Matrix>& kraus_operators() const { return kraus_; }
  int in_dim() const { return in_dim_; }
  int out_dim() const { return out_dim_; }

 private:
  std::vector<Matrix> kraus_;
  int in_dim_ = 0;
  int out_dim_ = 0;
};

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);

DensityMatrix partial_trace(const DensityMatrix& rho, const LabelSet& keep);

/// Reduced state on `keep` of the pure state `psi` living on `partition`.
DensityMatrix reduced_from_pure(const Vector& psi, const SystemPartition& partition,
                                const LabelSet& keep);

/// Same state with factors listed in `order` (a permutation of the labels).
DensityMatrix reorder(const DensityMatrix& rho, const LabelSet& order);

DensityMatrix apply_channel(const DensityMatrix& rho, const QuantumChannel& channel,
                            const std::string& target);

/// U rho U^dagger with U acting on `targets` (in the listed order).
DensityMatrix apply_unitary(const DensityMatrix& rho, const Matrix& u,
                            const LabelSet& targets);

/// Full-space operator equal to `op` on `targets` and identity elsewhere.
Matrix embed_operator(const Matrix& op, const SystemPartition& partition,
                      const LabelSet& targets);

/// Kronecker product of two dense matrices.
Matrix kron(const Matrix& a, const Matrix& b);

/// Maximum entrywise |U^dagger U - I|.
double unitarity_defect(const Matrix& u);

/// Haar-distributed unitary (QR of a Ginibre matrix with phase correction).
Matrix haar_random_unitary(int dim, std::uint64_t seed);

/// Random state of the given rank: partial trace of a Haar-random pure state
/// on dim x rank.
DensityMatrix random_density_matrix(const SystemPartition& partition, int rank,
                                    std::uint64_t seed);

/// Random pure state vector of unit norm.
Vector random_pure_vector(int dim, std::uint64_t seed);

/// Random channel with `n_kraus` operators from a Haar isometry.
QuantumChannel random_channel(int dim, int n_kraus, std::uint64_t seed);

/// Random Hermitian matrix with Gaussian entries (GUE-like normalization).
Matrix random_hermitian(int dim, std::uint64_t seed);

/// Deterministic 64-bit mixing (splitmix64) used to derive per-sample seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace nonmarkov
