#include "nonmarkov/qstate.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>
#include <unsupported/Eigen/KroneckerProduct>

namespace nonmarkov {

namespace {

std::string join(const LabelSet& labels) {
  std::ostringstream out;
  for (std::size_t i = 0; i < labels.size(); ++i) out << (i ? "," : "") << labels[i];
  return out.str();
}

Matrix hermitize(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

}  // namespace

// ---------------------------------------------------------------------------
// SystemPartition

SystemPartition::SystemPartition(std::vector<Factor> factors) : factors_(std::move(factors)) {
  std::set<std::string> seen;
  total_dim_ = 1;
  for (const auto& f : factors_) {
    if (f.dim < 1) throw InvalidArgument("factor '" + f.label + "' has non-positive dimension");
    if (!seen.insert(f.label).second) throw InvalidArgument("duplicate label '" + f.label + "'");
    total_dim_ *= f.dim;
  }
}

bool SystemPartition::contains(const std::string& label) const {
  return std::any_of(factors_.begin(), factors_.end(),
                     [&](const Factor& f) { return f.label == label; });
}

std::size_t SystemPartition::index_of(const std::string& label) const {
  for (std::size_t i = 0; i < factors_.size(); ++i)
    if (factors_[i].label == label) return i;
  throw InvalidArgument("unknown label '" + label + "'");
}

int SystemPartition::dim_of(const std::string& label) const {
  return factors_[index_of(label)].dim;
}

int SystemPartition::dim_of(const LabelSet& labels) const {
  int d = 1;
  for (const auto& l : labels) d *= dim_of(l);
  return d;
}

LabelSet SystemPartition::labels() const {
  LabelSet out;
  out.reserve(factors_.size());
  for (const auto& f : factors_) out.push_back(f.label);
  return out;
}

SystemPartition SystemPartition::concat(const SystemPartition& other) const {
  std::vector<Factor> joined = factors_;
  for (const auto& f : other.factors_) {
    if (contains(f.label)) throw InvalidArgument("label collision on '" + f.label + "'");
    joined.push_back(f);
  }
  return SystemPartition(std::move(joined));
}

SystemPartition SystemPartition::restrict_to(const LabelSet& keep) const {
  std::set<std::string> wanted;
  for (const auto& l : keep) {
    index_of(l);
    if (!wanted.insert(l).second) throw InvalidArgument("label '" + l + "' listed twice");
  }
  std::vector<Factor> kept;
  for (const auto& f : factors_)
    if (wanted.count(f.label)) kept.push_back(f);
  return SystemPartition(std::move(kept));
}

SystemPartition SystemPartition::with_dim(const std::string& label, int dim) const {
  std::vector<Factor> out = factors_;
  out[index_of(label)].dim = dim;
  return SystemPartition(std::move(out));
}

// ---------------------------------------------------------------------------
// IndexSplit

IndexSplit::IndexSplit(const SystemPartition& partition, const LabelSet& kept) {
  const auto& factors = partition.factors();
  const std::size_t nf = factors.size();
  std::vector<int> kept_pos;
  std::vector<bool> is_kept(nf, false);
  for (const auto& l : kept) {
    const std::size_t idx = partition.index_of(l);
    if (is_kept[idx]) throw InvalidArgument("label '" + l + "' listed twice");
    is_kept[idx] = true;
    kept_pos.push_back(static_cast<int>(idx));
  }
  std::vector<int> rest_pos;
  for (std::size_t i = 0; i < nf; ++i)
    if (!is_kept[i]) rest_pos.push_back(static_cast<int>(i));

  for (int p : kept_pos) kept_dim_ *= factors[p].dim;
  for (int p : rest_pos) rest_dim_ *= factors[p].dim;

  std::vector<Eigen::Index> stride(nf, 1);
  for (std::size_t i = nf; i-- > 1;) stride[i - 1] = stride[i] * factors[i].dim;

  const Eigen::Index total = partition.total_dim();
  perm_.assign(static_cast<std::size_t>(total), 0);
  for (Eigen::Index i = 0; i < total; ++i) {
    Eigen::Index k = 0;
    Eigen::Index r = 0;
    for (int p : kept_pos) k = k * factors[p].dim + (i / stride[p]) % factors[p].dim;
    for (int p : rest_pos) r = r * factors[p].dim + (i / stride[p]) % factors[p].dim;
    perm_[static_cast<std::size_t>(k * rest_dim_ + r)] = i;
  }
}

// ---------------------------------------------------------------------------
// DensityMatrix

DensityMatrix::DensityMatrix(Matrix data, SystemPartition partition)
    : partition_(std::move(partition)) {
  if (data.rows() != data.cols()) throw ValidityError("density matrix must be square");
  if (data.rows() != partition_.total_dim())
    throw ValidityError("matrix size " + std::to_string(data.rows()) +
                        " does not match partition dimension " +
                        std::to_string(partition_.total_dim()));
  const double herm = (data - data.adjoint()).cwiseAbs().maxCoeff();
  if (herm > kHermitianTol)
    throw ValidityError("matrix is not Hermitian (defect " + std::to_string(herm) + ")");
  const double tr = data.trace().real();
  if (std::abs(tr - 1.0) > kTraceTol)
    throw ValidityError("trace " + std::to_string(tr) + " differs from 1");
  data_ = hermitize(data);

  Eigen::SelfAdjointEigenSolver<Matrix> solver(data_);
  if (solver.info() != Eigen::Success) throw ValidityError("eigendecomposition failed");
  auto spectrum = std::make_shared<Spectrum>();
  spectrum->values = solver.eigenvalues();
  spectrum->vectors = solver.eigenvectors();
  if (spectrum->values.size() > 0 && spectrum->values.minCoeff() < -kPsdTol)
    throw ValidityError("matrix is not positive semidefinite (min eigenvalue " +
                        std::to_string(spectrum->values.minCoeff()) + ")");
  spectrum->values = spectrum->values.cwiseMax(0.0);
  spectrum_ = std::move(spectrum);
}

DensityMatrix DensityMatrix::pure(const Vector& psi, SystemPartition partition) {
  const double norm = psi.norm();
  if (std::abs(norm - 1.0) > 1e-9) throw ValidityError("state vector is not normalized");
  return DensityMatrix(psi * psi.adjoint(), std::move(partition));
}

DensityMatrix DensityMatrix::maximally_mixed(SystemPartition partition) {
  const auto d = partition.total_dim();
  return DensityMatrix(Matrix::Identity(d, d) / static_cast<double>(d), std::move(partition));
}

DensityMatrix DensityMatrix::basis_state(SystemPartition partition, Eigen::Index index) {
  Vector psi = Vector::Zero(partition.total_dim());
  if (index < 0 || index >= psi.size()) throw InvalidArgument("basis index out of range");
  psi(index) = 1.0;
  return pure(psi, std::move(partition));
}

double DensityMatrix::purity() const { return eigenvalues().squaredNorm(); }

// ---------------------------------------------------------------------------
// QuantumChannel

QuantumChannel::QuantumChannel(std::vector<Matrix> kraus_operators)
    : kraus_(std::move(kraus_operators)) {
  if (kraus_.empty()) throw ValidityError("channel needs at least one Kraus operator");
  out_dim_ = static_cast<int>(kraus_.front().rows());
  in_dim_ = static_cast<int>(kraus_.front().cols());
  Matrix sum = Matrix::Zero(in_dim_, in_dim_);
  for (const auto& k : kraus_) {
    if (k.rows() != out_dim_ || k.cols() != in_dim_)
      throw ValidityError("Kraus operators have inconsistent shapes");
    sum += k.adjoint() * k;
  }
  const double defect = (sum - Matrix::Identity(in_dim_, in_dim_)).cwiseAbs().maxCoeff();
  if (defect > kCompletenessTol)
    throw ValidityError("Kraus set is not complete (defect " + std::to_string(defect) + ")");
}

QuantumChannel QuantumChannel::identity(int dim) {
  return QuantumChannel({Matrix::Identity(dim, dim)});
}

QuantumChannel QuantumChannel::unitary(const Matrix& u) { return QuantumChannel({u}); }

QuantumChannel QuantumChannel::fully_depolarizing(int dim) {
  // K_ij = |i><j| / sqrt(d) maps everything to I/d.
  std::vector<Matrix> ks;
  const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      Matrix k = Matrix::Zero(dim, dim);
      k(i, j) = scale;
      ks.push_back(std::move(k));
    }
  return QuantumChannel(std::move(ks));
}

// ---------------------------------------------------------------------------
// Operations

Matrix kron(const Matrix& a, const Matrix& b) {
  return Eigen::kroneckerProduct(a, b).eval();
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  auto partition = a.partition().concat(b.partition());
  return DensityMatrix(kron(a.matrix(), b.matrix()), std::move(partition));
}

DensityMatrix partial_trace(const DensityMatrix& rho, const LabelSet& keep) {
  auto reduced_partition = rho.partition().restrict_to(keep);
  const IndexSplit split(rho.partition(), reduced_partition.labels());
  const auto dk = split.kept_dim();
  const auto dr = split.rest_dim();
  const Matrix& m = rho.matrix();
  Matrix out = Matrix::Zero(dk, dk);
  for (Eigen::Index a = 0; a < dk; ++a)
    for (Eigen::Index b = 0; b < dk; ++b) {
      Complex acc = 0.0;
      for (Eigen::Index r = 0; r < dr; ++r) acc += m(split.full_index(a, r), split.full_index(b, r));
      out(a, b) = acc;
    }
  return DensityMatrix(std::move(out), std::move(reduced_partition));
}

DensityMatrix reduced_from_pure(const Vector& psi, const SystemPartition& partition,
                                const LabelSet& keep) {
  if (psi.size() != partition.total_dim())
    throw InvalidArgument("state vector does not match partition dimension");
  auto reduced_partition = partition.restrict_to(keep);
  const IndexSplit split(partition, reduced_partition.labels());
  Matrix block(split.kept_dim(), split.rest_dim());
  for (Eigen::Index a = 0; a < block.rows(); ++a)
    for (Eigen::Index r = 0; r < block.cols(); ++r) block(a, r) = psi(split.full_index(a, r));
  Matrix rho = block * block.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix(std::move(rho), std::move(reduced_partition));
}

DensityMatrix reorder(const DensityMatrix& rho, const LabelSet& order) {
  if (order.size() != rho.partition().size())
    throw InvalidArgument("reorder needs every label exactly once");
  std::vector<Factor> factors;
  for (const auto& l : order) factors.push_back({l, rho.partition().dim_of(l)});
  SystemPartition target(std::move(factors));
  const IndexSplit split(rho.partition(), order);
  const auto d = split.kept_dim();
  Matrix out(d, d);
  for (Eigen::Index a = 0; a < d; ++a)
    for (Eigen::Index b = 0; b < d; ++b)
      out(a, b) = rho.matrix()(split.full_index(a, 0), split.full_index(b, 0));
  return DensityMatrix(std::move(out), std::move(target));
}

Matrix embed_operator(const Matrix& op, const SystemPartition& partition,
                      const LabelSet& targets) {
  const IndexSplit split(partition, targets);
  if (op.rows() != split.kept_dim() || op.cols() != split.kept_dim())
    throw InvalidArgument("operator dimension does not match targets {" + join(targets) + "}");
  const auto d = partition.total_dim();
  Matrix full = Matrix::Zero(d, d);
  for (Eigen::Index r = 0; r < split.rest_dim(); ++r)
    for (Eigen::Index a = 0; a < op.rows(); ++a)
      for (Eigen::Index b = 0; b < op.cols(); ++b)
        if (op(a, b) != Complex(0.0)) full(split.full_index(a, r), split.full_index(b, r)) = op(a, b);
  return full;
}

DensityMatrix apply_unitary(const DensityMatrix& rho, const Matrix& u, const LabelSet& targets) {
  const Matrix full = embed_operator(u, rho.partition(), targets);
  return DensityMatrix(hermitize(full * rho.matrix() * full.adjoint()), rho.partition());
}

DensityMatrix apply_channel(const DensityMatrix& rho, const QuantumChannel& channel,
                            const std::string& target) {
  const auto& in_partition = rho.partition();
  if (in_partition.dim_of(target) != channel.in_dim())
    throw InvalidArgument("channel input dimension " + std::to_string(channel.in_dim()) +
                          " does not match factor '" + target + "'");
  const auto out_partition = in_partition.with_dim(target, channel.out_dim());
  const IndexSplit in_split(in_partition, {target});
  const IndexSplit out_split(out_partition, {target});
  const auto d_out = out_partition.total_dim();
  const auto d_in = in_partition.total_dim();
  Matrix out = Matrix::Zero(d_out, d_out);
  for (const auto& k : channel.kraus_operators()) {
    Matrix full = Matrix::Zero(d_out, d_in);
    for (Eigen::Index r = 0; r < in_split.rest_dim(); ++r)
      for (Eigen::Index a = 0; a < k.rows(); ++a)
        for (Eigen::Index b = 0; b < k.cols(); ++b)
          full(out_split.full_index(a, r), in_split.full_index(b, r)) = k(a, b);
    out += full * rho.matrix() * full.adjoint();
  }
  return DensityMatrix(hermitize(out), out_partition);
}

double unitarity_defect(const Matrix& u) {
  return (u.adjoint() * u - Matrix::Identity(u.cols(), u.cols())).cwiseAbs().maxCoeff();
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

Matrix ginibre(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix g(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = Complex(re, im) / std::sqrt(2.0);
    }
  return g;
}

}  // namespace

Matrix haar_random_unitary(int dim, std::uint64_t seed) {
  if (dim < 1) throw InvalidArgument("unitary dimension must be positive");
  std::mt19937_64 rng(seed);
  const Matrix z = ginibre(dim, dim, rng);
  Eigen::HouseholderQR<Matrix> qr(z);
  Matrix q = qr.householderQ() * Matrix::Identity(dim, dim);
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < dim; ++j) {
    const Complex d = r(j, j);
    const double mag = std::abs(d);
    q.col(j) *= (mag > 0.0 ? d / mag : Complex(1.0));
  }
  return q;
}

Vector random_pure_vector(int dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Vector v = ginibre(dim, 1, rng).col(0);
  return v / v.norm();
}

DensityMatrix random_density_matrix(const SystemPartition& partition, int rank,
                                    std::uint64_t seed) {
  const auto d = static_cast<int>(partition.total_dim());
  if (rank < 1 || rank > d) throw InvalidArgument("rank must lie in [1, dim]");
  std::mt19937_64 rng(seed);
  const Matrix g = ginibre(d, rank, rng);
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix(hermitize(rho), partition);
}

QuantumChannel random_channel(int dim, int n_kraus, std::uint64_t seed) {
  if (n_kraus < 1) throw InvalidArgument("need at least one Kraus operator");
  const Matrix u = haar_random_unitary(dim * n_kraus, seed);
  // The first `dim` columns form an isometry V; its row blocks are Kraus operators.
  std::vector<Matrix> ks;
  for (int k = 0; k < n_kraus; ++k) ks.push_back(u.block(k * dim, 0, dim, dim));
  return QuantumChannel(std::move(ks));
}

Matrix random_hermitian(int dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const Matrix g = ginibre(dim, dim, rng);
  return hermitize(g);
}

}  // namespace nonmarkov
