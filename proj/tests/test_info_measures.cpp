#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "nonmarkov/info_measures.hpp"

using namespace testing;

namespace {

const double kLn2 = std::log(2.0);

DensityMatrix qubit(const char* label, int index) {
  return DensityMatrix::basis_state(parts({{label, 2}}), index);
}

DensityMatrix plus(const char* label) {
  Vector v(2);
  v << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  return DensityMatrix::pure(v, parts({{label, 2}}));
}

DensityMatrix diagonal(const SystemPartition& p, std::vector<double> probs) {
  Matrix m = Matrix::Zero(p.total_dim(), p.total_dim());
  for (std::size_t i = 0; i < probs.size(); ++i) m(i, i) = probs[i];
  return DensityMatrix(m, p);
}

DensityMatrix random_qubits(std::vector<const char*> labels, int rank, std::uint64_t seed) {
  std::vector<Factor> f;
  for (auto* l : labels) f.push_back({l, 2});
  return random_density_matrix(SystemPartition(f), rank, seed);
}

}  // namespace

TEST_CASE("von Neumann entropy") {
  CHECK(von_neumann_entropy(qubit("S", 0)) < 1e-15);
  CHECK(von_neumann_entropy(DensityMatrix::maximally_mixed(parts({{"S", 2}}))) ==
        doctest::Approx(kLn2).epsilon(1e-14));
  const double expected = -0.25 * std::log(0.25) - 0.75 * std::log(0.75);
  CHECK(std::abs(von_neumann_entropy(diagonal(parts({{"S", 2}}), {0.25, 0.75})) - expected) < 1e-14);
}

TEST_CASE("trace distance") {
  const auto rho = random_qubits({"S"}, 2, 3);
  CHECK(trace_distance(rho, rho) < 1e-15);
  CHECK(trace_distance(qubit("S", 0), qubit("S", 1)) == doctest::Approx(1.0));
  // |0><0| - |+><+| = [[1/2, -1/2], [-1/2, -1/2]] has eigenvalues +-1/sqrt2.
  CHECK(std::abs(trace_distance(qubit("S", 0), plus("S")) - 1.0 / std::sqrt(2.0)) < 1e-14);
  CHECK_THROWS_AS(trace_distance(qubit("S", 0), qubit("A", 0)), InvalidArgument);
}

TEST_CASE("fidelity") {
  const auto rho = random_qubits({"S", "A"}, 3, 4);
  CHECK(std::abs(fidelity(rho, rho) - 1.0) < 1e-10);
  CHECK(fidelity(qubit("S", 0), qubit("S", 1)) < 1e-14);
  CHECK(std::abs(fidelity(qubit("S", 0), DensityMatrix::maximally_mixed(parts({{"S", 2}}))) - 0.5) < 1e-12);
  CHECK_THROWS_AS(fidelity(qubit("S", 0), qubit("A", 0)), InvalidArgument);
}

TEST_CASE("relative entropy") {
  const auto rho = random_qubits({"S"}, 2, 5);
  CHECK(relative_entropy(rho, rho).value() < 1e-12);
  CHECK(relative_entropy(qubit("S", 0), qubit("S", 1)).is_infinite());
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto sa = random_qubits({"S", "A"}, 1 + seed % 4, mix_seed(seed, 3));
    const auto product = tensor(partial_trace(sa, {"S"}), partial_trace(sa, {"A"}));
    const double mi = mutual_information(sa, {"S"}, {"A"});
    const auto re = relative_entropy(sa, product);
    REQUIRE_FALSE(re.is_infinite());
    CHECK(std::abs(re.value() - mi) < 1e-9);
  }
  CHECK_THROWS_AS(relative_entropy(qubit("S", 0), qubit("A", 0)), InvalidArgument);
}

TEST_CASE("extended reals clamp small negatives") {
  CHECK(ExtendedReal(-1e-12).value() == 0.0);
  CHECK_THROWS(ExtendedReal(-1e-6));
  CHECK(ExtendedReal::infinity().is_infinite());
}

TEST_CASE("telescopic relative entropy") {
  const auto rho = random_qubits({"S"}, 2, 6);
  for (double a : {0.1, 0.5, 0.9}) CHECK(telescopic_relative_entropy(rho, rho, a) < 1e-12);
  CHECK(std::abs(telescopic_relative_entropy(qubit("S", 0), qubit("S", 1), 0.5) - 1.0) < 1e-12);
  // rho = |0><0|, sigma = I/2: the mixture is diag(3/4, 1/4).
  const double direct = -std::log(0.75) / kLn2;
  CHECK(std::abs(telescopic_relative_entropy(qubit("S", 0), DensityMatrix::maximally_mixed(parts({{"S", 2}})),
                                             0.5) -
                 direct) < 1e-10);
  CHECK_THROWS_AS(telescopic_relative_entropy(rho, rho, 0.0), InvalidArgument);
  CHECK_THROWS_AS(telescopic_relative_entropy(rho, rho, 1.0), InvalidArgument);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto r = random_qubits({"S", "T"}, 1 + seed % 4, mix_seed(seed, 1));
    const auto s = random_qubits({"S", "T"}, 1 + seed % 4, mix_seed(seed, 2));
    const double v = telescopic_relative_entropy(r, s, 0.05 + 0.03 * static_cast<double>(seed));
    CHECK(v >= -1e-12);
    CHECK(v <= 1.0 + 1e-12);
  }
}

TEST_CASE("Jensen-Shannon telescopic divergence") {
  const auto rho = random_qubits({"S"}, 2, 7);
  const auto sigma = random_qubits({"S"}, 2, 8);
  CHECK(jensen_shannon_telescopic(rho, rho) < 1e-12);
  CHECK(std::abs(jensen_shannon_telescopic(qubit("S", 0), qubit("S", 1)) - 1.0) < 1e-12);
  CHECK(jensen_shannon_telescopic(rho, sigma) == jensen_shannon_telescopic(sigma, rho));
  // Equals the entropy of the midpoint minus the mean entropy, in bits.
  const DensityMatrix mid((rho.matrix() + sigma.matrix()) / 2.0, rho.partition());
  const double expected = (brute_entropy(mid.matrix()) -
                           0.5 * (brute_entropy(rho.matrix()) + brute_entropy(sigma.matrix()))) /
                          kLn2;
  CHECK(std::abs(jensen_shannon_telescopic(rho, sigma) - expected) < 1e-10);
}

TEST_CASE("mutual information") {
  CHECK(mutual_information(tensor(random_qubits({"S"}, 2, 1), random_qubits({"A"}, 2, 2)), {"S"}, {"A"}) <
        1e-12);
  Vector bell = Vector::Zero(4);
  bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
  const auto phi = DensityMatrix::pure(bell, parts({{"S", 2}, {"A", 2}}));
  CHECK(std::abs(mutual_information(phi, {"S"}, {"A"}) - 2.0 * kLn2) < 1e-12);
  const auto classical = diagonal(parts({{"S", 2}, {"A", 2}}), {0.5, 0.0, 0.0, 0.5});
  CHECK(std::abs(mutual_information(classical, {"S"}, {"A"}) - kLn2) < 1e-12);
  CHECK_THROWS_AS(mutual_information(phi, {"S"}, {"S"}), InvalidArgument);
  CHECK_THROWS_AS(mutual_information(phi, {"S"}, {}), InvalidArgument);
}

TEST_CASE("conditional mutual information examples") {
  const auto product = tensor(tensor(random_qubits({"A"}, 2, 1), random_qubits({"S"}, 2, 2)),
                              random_qubits({"E"}, 2, 3));
  CHECK(conditional_mutual_information(product, {"A"}, {"E"}, {"S"}) < 1e-12);
  const auto g = DensityMatrix::pure(ghz(3), parts({{"A", 2}, {"S", 2}, {"E", 2}}));
  CHECK(std::abs(conditional_mutual_information(g, {"A"}, {"E"}, {"S"}) - kLn2) < 1e-12);
  Vector bell = Vector::Zero(4);
  bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
  const auto as = tensor(DensityMatrix::pure(bell, parts({{"A", 2}, {"S", 2}})), random_qubits({"E"}, 2, 4));
  CHECK(conditional_mutual_information(as, {"A"}, {"E"}, {"S"}) < 1e-12);
  CHECK_THROWS_AS(conditional_mutual_information(g, {"A"}, {"E"}, {"A"}), InvalidArgument);
  CHECK_THROWS_AS(conditional_mutual_information(g, {"A"}, {"E"}, {}), InvalidArgument);
}

TEST_CASE("conditional mutual information agrees with a brute-force oracle") {
  const std::vector<int> dims{2, 3, 2};
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto rho = random_density_matrix(parts({{"A", 2}, {"S", 3}, {"E", 2}}), 1 + seed % 12, seed);
    const double lib = conditional_mutual_information(rho, {"A"}, {"E"}, {"S"});
    CHECK(std::abs(lib - brute_cmi(rho.matrix(), dims, {0}, {2}, {1})) < 1e-10);
    CHECK(std::abs(marginal_entropy(rho, {"E", "A"}) - brute_marginal_entropy(rho.matrix(), dims, {0, 2})) <
          1e-11);
  }
}

TEST_CASE("strong subadditivity on random three-qubit states") {
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const auto rho = random_qubits({"A", "S", "E"}, 1 + seed % 8, mix_seed(seed, 99));
    const double raw = marginal_entropy(rho, {"A", "S"}) + marginal_entropy(rho, {"S", "E"}) -
                       marginal_entropy(rho, {"S"}) - von_neumann_entropy(rho);
    worst = std::min(worst, raw);
  }
  CHECK(worst >= -1e-9);
}

TEST_CASE("local unitary and tensor-extension invariance") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto rho = random_qubits({"A", "S", "E"}, 1 + seed % 8, mix_seed(seed, 4));
    const double base = conditional_mutual_information(rho, {"A"}, {"E"}, {"S"});
    auto rotated = apply_unitary(rho, haar_random_unitary(2, mix_seed(seed, 5)), {"S"});
    rotated = apply_unitary(rotated, haar_random_unitary(2, mix_seed(seed, 6)), {"E"});
    CHECK(std::abs(conditional_mutual_information(rotated, {"A"}, {"E"}, {"S"}) - base) < 1e-9);
    const auto extended = tensor(rho, random_density_matrix(parts({{"F", 3}}), 2, mix_seed(seed, 7)));
    CHECK(std::abs(conditional_mutual_information(extended, {"A"}, {"E", "F"}, {"S"}) - base) < 1e-9);
  }
}

TEST_CASE("data processing") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto rho = random_qubits({"S", "A"}, 1 + seed % 4, mix_seed(seed, 10));
    const auto sigma = random_qubits({"S", "A"}, 4, mix_seed(seed, 11));
    const auto ch = random_channel(2, 1 + seed % 4, mix_seed(seed, 12));
    const auto rho2 = apply_channel(rho, ch, "S");
    const auto sigma2 = apply_channel(sigma, ch, "S");
    const auto before = relative_entropy(rho, sigma);
    const auto after = relative_entropy(rho2, sigma2);
    if (!before.is_infinite()) {
      REQUIRE_FALSE(after.is_infinite());
      CHECK(after.value() <= before.value() + 1e-9);
    }
    const double a = 0.2 + 0.015 * static_cast<double>(seed);
    CHECK(telescopic_relative_entropy(rho2, sigma2, a) <= telescopic_relative_entropy(rho, sigma, a) + 1e-9);
  }
}

TEST_CASE("chain rule and interaction information") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto rho = random_qubits({"A", "S", "E1", "E2"}, 1 + seed % 16, mix_seed(seed, 20));
    const double whole = conditional_mutual_information(rho, {"E1", "E2"}, {"A"}, {"S"});
    const double first = marginal_cmi(rho, {"E1"}, {"A"}, {"S"});
    const double second = conditional_mutual_information(rho, {"E2"}, {"A"}, {"S", "E1"});
    CHECK(std::abs(whole - first - second) < 1e-9);

    const std::vector<int> dims{2, 2, 2, 2};
    const double i1 = brute_cmi(rho.matrix(), dims, {0}, {2}, {1});
    const double i2 = brute_cmi(rho.matrix(), dims, {0}, {3}, {1});
    const double i12 = brute_cmi(rho.matrix(), dims, {0}, {2, 3}, {1});
    CHECK(std::abs(interaction_information(rho, {"E1"}, {"E2"}, {"A"}, {"S"}) - (i1 + i2 - i12)) < 1e-9);
  }
  const auto product = tensor(tensor(random_qubits({"A", "S"}, 2, 1), random_qubits({"E1"}, 2, 2)),
                              random_qubits({"E2"}, 2, 3));
  CHECK(std::abs(interaction_information(product, {"E1"}, {"E2"}, {"A"}, {"S"})) < 1e-12);
  const auto g = tensor(DensityMatrix::pure(ghz(3), parts({{"A", 2}, {"E1", 2}, {"E2", 2}})), qubit("S", 0));
  CHECK(std::abs(interaction_information(g, {"E1"}, {"E2"}, {"A"}, {"S"})) < 1e-12);
}

TEST_CASE("Petz recovery") {
  const auto product = tensor(tensor(random_qubits({"A"}, 2, 1), random_qubits({"B"}, 2, 2)),
                              random_qubits({"C"}, 2, 3));
  CHECK(trace_distance(petz_recovery(product, {"A"}, {"B"}, {"C"}), product) < 1e-10);

  const auto chain = diagonal(parts({{"A", 2}, {"B", 2}, {"C", 2}}), {0.5, 0, 0, 0, 0, 0, 0, 0.5});
  CHECK(conditional_mutual_information(chain, {"A"}, {"C"}, {"B"}) < 1e-12);
  const auto recovered = petz_recovery(chain, {"A"}, {"B"}, {"C"});
  CHECK(trace_distance(recovered, chain) < 1e-10);
  CHECK(recovered.partition() == chain.partition());

  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto rho = random_qubits({"A", "B", "C"}, 1 + seed % 8, mix_seed(seed, 30));
    const auto report = recovery_report(rho, {"A"}, {"B"}, {"C"});
    const auto sigma = petz_recovery(rho, {"A"}, {"B"}, {"C"});
    CHECK(std::abs(sigma.matrix().trace() - 1.0) < 1e-9);
    CHECK(std::abs(report.trace_distance - trace_distance(rho, sigma)) < 1e-12);
    CHECK(std::abs(report.racmi_rhs - 7.0 * std::sqrt(report.trace_distance)) < 1e-12);
    CHECK(report.racmi_holds);
    CHECK(report.cmi <= report.racmi_rhs);
  }
}

TEST_CASE("PSD powers") {
  const auto rho = random_density_matrix(parts({{"X", 3}}), 3, 40);
  const Matrix root = psd_power(rho.matrix(), 0.5);
  CHECK(max_abs(root * root - rho.matrix()) < 1e-13);
  const Matrix inv = psd_power(rho.matrix(), -1.0);
  CHECK(max_abs(inv * rho.matrix() - Matrix::Identity(3, 3)) < 1e-9);
}
