#pragma once

#include <cmath>
#include <algorithm>
#include <initializer_list>
#include <vector>

#include <Eigen/Eigenvalues>

#include "nonmarkov/nm_measures.hpp"
#include "nonmarkov/qstate.hpp"

namespace testing {

using namespace nonmarkov;

inline SystemPartition parts(std::initializer_list<std::pair<const char*, int>> factors) {
  std::vector<Factor> out;
  for (const auto& [label, dim] : factors) out.push_back({label, dim});
  return SystemPartition(std::move(out));
}

inline Vector basis(int dim, int index) {
  Vector v = Vector::Zero(dim);
  v(index) = 1.0;
  return v;
}

/// (|0...0> + |1...1>) / sqrt 2 on n qubits.
inline Vector ghz(int qubits) {
  const int dim = 1 << qubits;
  Vector v = Vector::Zero(dim);
  v(0) = v(dim - 1) = 1.0 / std::sqrt(2.0);
  return v;
}

inline double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace testing

namespace testing {

/// Brute-force partial trace over an explicit dimension list (first factor
/// most significant); independent of the library's index bookkeeping.
inline Matrix brute_partial_trace(const Matrix& rho, const std::vector<int>& dims,
                                  const std::vector<int>& keep) {
  const int n = static_cast<int>(dims.size());
  std::vector<bool> kept(n, false);
  for (int k : keep) kept[k] = true;
  int dim_keep = 1;
  for (int k = 0; k < n; ++k)
    if (kept[k]) dim_keep *= dims[k];
  Matrix out = Matrix::Zero(dim_keep, dim_keep);
  const int total = static_cast<int>(rho.rows());
  auto digits = [&](int index) {
    std::vector<int> d(n);
    for (int k = n - 1; k >= 0; --k) {
      d[k] = index % dims[k];
      index /= dims[k];
    }
    return d;
  };
  auto kept_index = [&](const std::vector<int>& d) {
    int idx = 0;
    for (int k = 0; k < n; ++k)
      if (kept[k]) idx = idx * dims[k] + d[k];
    return idx;
  };
  for (int i = 0; i < total; ++i) {
    const auto di = digits(i);
    for (int j = 0; j < total; ++j) {
      const auto dj = digits(j);
      bool diagonal = true;
      for (int k = 0; k < n && diagonal; ++k)
        if (!kept[k] && di[k] != dj[k]) diagonal = false;
      if (diagonal) out(kept_index(di), kept_index(dj)) += rho(i, j);
    }
  }
  return out;
}

inline double brute_entropy(const Matrix& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho);
  double s = 0.0;
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    const double p = es.eigenvalues()(i);
    if (p > 1e-300) s -= p * std::log(p);
  }
  return s;
}

inline double brute_marginal_entropy(const Matrix& rho, const std::vector<int>& dims,
                                     const std::vector<int>& keep) {
  if (keep.empty()) return 0.0;
  return brute_entropy(brute_partial_trace(rho, dims, keep));
}

/// I(a:b|c) from four brute-force marginal entropies.
inline double brute_cmi(const Matrix& rho, const std::vector<int>& dims, std::vector<int> a,
                        std::vector<int> b, std::vector<int> c) {
  auto join = [](std::vector<int> x, const std::vector<int>& y) {
    x.insert(x.end(), y.begin(), y.end());
    std::sort(x.begin(), x.end());
    return x;
  };
  return brute_marginal_entropy(rho, dims, join(a, c)) + brute_marginal_entropy(rho, dims, join(b, c)) -
         brute_marginal_entropy(rho, dims, join({}, c)) -
         brute_marginal_entropy(rho, dims, join(join(a, b), c));
}

}  // namespace testing

namespace testing {

inline Matrix expi(const Matrix& h, double t) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  Vector phases(es.eigenvalues().size());
  for (int i = 0; i < phases.size(); ++i) phases(i) = std::exp(Complex(0.0, -es.eigenvalues()(i) * t));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

/// rho(t) = U(t) rho U(t)^dagger with U(t) = exp(-i h t) acting on `targets`.
inline StateTrajectory unitary_trajectory(const DensityMatrix& rho, const Matrix& h, const LabelSet& targets,
                                          const std::vector<double>& times) {
  std::vector<DensityMatrix> states;
  for (double t : times) states.push_back(apply_unitary(rho, expi(h, t), targets));
  return StateTrajectory(times, states);
}

}  // namespace testing
