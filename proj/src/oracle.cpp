#include "nonmarkov/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <random>

#include "nonmarkov/info_measures.hpp"
#include "nonmarkov/nm_measures.hpp"
#include "nonmarkov/parallel.hpp"
#include "nonmarkov/special_functions.hpp"

namespace nonmarkov {

bool SuiteReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

const CheckResult& SuiteReport::check(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return c;
  throw InvalidArgument("no check named '" + name + "'");
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// NaN counts as the worst possible outcome.
double worse(double a, double b) {
  if (std::isnan(a) || std::isnan(b)) return kInf;
  return std::max(a, b);
}

CheckResult make_check(std::string name, int samples, double violation, double tol) {
  return {std::move(name), samples, violation, tol, violation <= tol};
}

// S(AC) + S(CB) - S(C) - S(ACB) without clamping.
double raw_cmi(const DensityMatrix& rho, const LabelSet& a, const LabelSet& b, const LabelSet& c) {
  auto join = [](std::initializer_list<const LabelSet*> parts) {
    LabelSet out;
    for (const auto* p : parts) out.insert(out.end(), p->begin(), p->end());
    return out;
  };
  return marginal_entropy(rho, join({&a, &c})) + marginal_entropy(rho, join({&c, &b})) -
         marginal_entropy(rho, c) - marginal_entropy(rho, join({&a, &c, &b}));
}

double mi(const DensityMatrix& rho, const LabelSet& a, const LabelSet& b) {
  return raw_cmi(rho, a, b, {});
}

Matrix hermitian_exp(const Matrix& h, double t) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  const Vector phases = (Complex(0.0, -t) * solver.eigenvalues().cast<Complex>()).array().exp();
  return solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
}

SystemPartition qubits(std::initializer_list<std::pair<const char*, int>> factors) {
  std::vector<Factor> out;
  for (const auto& [label, dim] : factors) out.push_back({label, dim});
  return SystemPartition(std::move(out));
}

int random_rank(std::mt19937_64& rng, Eigen::Index dim) {
  return std::uniform_int_distribution<int>(1, static_cast<int>(dim))(rng);
}

DensityMatrix random_state(const SystemPartition& p, std::mt19937_64& rng) {
  const int rank = random_rank(rng, p.total_dim());
  return random_density_matrix(p, rank, rng());
}

using Violations = std::array<double, 8>;

double check_conservation(std::mt19937_64& rng, bool entangle_ancilla) {
  const int env = std::uniform_int_distribution<int>(1, 2)(rng) == 1 ? 2 : 4;
  const auto p = qubits({{"A", 2}, {"S", 2}, {"E", env}});
  const auto rho = random_state(p, rng);
  const LabelSet targets = entangle_ancilla ? LabelSet{"A", "S", "E"} : LabelSet{"S", "E"};
  const auto u = haar_random_unitary(p.dim_of(targets), rng());
  const auto after = apply_unitary(rho, u, targets);
  double v = 0.0;
  for (const auto* state : {&rho, &after}) {
    const double total = mi(*state, {"A"}, {"S", "E"});
    const double split = raw_cmi(*state, {"A"}, {"E"}, {"S"}) + mi(*state, {"S"}, {"A"});
    v = worse(v, std::abs(total - split));
  }
  return worse(v, std::abs(mi(after, {"A"}, {"S", "E"}) - mi(rho, {"A"}, {"S", "E"})));
}

double check_subenvironment(std::mt19937_64& rng) {
  const int e2 = std::uniform_int_distribution<int>(1, 2)(rng) == 1 ? 2 : 4;
  const auto p = qubits({{"A", 2}, {"S", 2}, {"E1", 2}, {"E2", e2}});
  const auto rho = random_state(p, rng);
  const auto after = apply_unitary(rho, haar_random_unitary(4, rng()), {"S", "E1"});
  const double full = raw_cmi(after, {"A"}, {"E1", "E2"}, {"S"}) - raw_cmi(rho, {"A"}, {"E1", "E2"}, {"S"});
  const double part = raw_cmi(after, {"A"}, {"E1"}, {"S"}) - raw_cmi(rho, {"A"}, {"E1"}, {"S"});
  return std::abs(full - part);
}

DensityMatrix random_four_party(std::mt19937_64& rng) {
  const int e2 = std::uniform_int_distribution<int>(1, 2)(rng) == 1 ? 2 : 4;
  return random_state(qubits({{"A", 2}, {"S", 2}, {"E1", 2}, {"E2", e2}}), rng);
}

double check_chain_rule(std::mt19937_64& rng) {
  const auto rho = random_four_party(rng);
  const double lhs = raw_cmi(rho, {"E1", "E2"}, {"A"}, {"S"});
  const double rhs = raw_cmi(rho, {"E1"}, {"A"}, {"S"}) + raw_cmi(rho, {"E2"}, {"A"}, {"S", "E1"});
  return std::abs(lhs - rhs);
}

double check_interaction(std::mt19937_64& rng) {
  const auto rho = random_four_party(rng);
  const double lhs = raw_cmi(rho, {"A"}, {"E1"}, {"S"}) + raw_cmi(rho, {"A"}, {"E2"}, {"S"}) -
                     raw_cmi(rho, {"A"}, {"E1", "E2"}, {"S"});
  return std::abs(lhs - interaction_information(rho, {"E1"}, {"E2"}, {"A"}, {"S"}));
}

// |k,a,b> -> |k, a xor k, b xor k> on three qubits.
Matrix copy_unitary() {
  Matrix u = Matrix::Zero(8, 8);
  for (int k = 0; k < 2; ++k)
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) u(4 * k + 2 * (a ^ k) + (b ^ k), 4 * k + 2 * a + b) = 1.0;
  return u;
}

DensityMatrix broadcast(const DensityMatrix& rho) {
  const auto fresh = DensityMatrix::basis_state(qubits({{"E2", 2}, {"E3", 2}}), 0);
  return apply_unitary(tensor(rho, fresh), copy_unitary(), {"E1", "E2", "E3"});
}

double check_broadcast(std::mt19937_64& rng) {
  const auto rho = random_state(qubits({{"A", 2}, {"S", 2}, {"E1", 2}}), rng);
  const double before = raw_cmi(rho, {"A"}, {"E1"}, {"S"});
  double v = std::abs(raw_cmi(broadcast(rho), {"A"}, {"E1", "E2", "E3"}, {"S"}) - before);

  Matrix p0 = Matrix::Zero(2, 2);
  Matrix p1 = Matrix::Zero(2, 2);
  p0(0, 0) = 1.0;
  p1(1, 1) = 1.0;
  const auto classical = apply_channel(rho, QuantumChannel({p0, p1}), "E1");
  const auto copies = broadcast(classical);
  const double share = raw_cmi(classical, {"A"}, {"E1"}, {"S"});
  v = worse(v, std::abs(raw_cmi(copies, {"A"}, {"E1", "E2", "E3"}, {"S"}) - share));
  for (const char* e : {"E1", "E2", "E3"}) v = worse(v, std::abs(raw_cmi(copies, {"A"}, {e}, {"S"}) - share));
  const double redundancy = raw_cmi(copies, {"E1"}, {"E2"}, {"S"}) - raw_cmi(copies, {"E1"}, {"E2"}, {"S", "A"});
  return worse(v, std::max(0.0, -redundancy));
}

double check_initial_markov(std::mt19937_64& rng) {
  const int env = std::uniform_int_distribution<int>(1, 2)(rng) == 1 ? 2 : 4;
  const auto rho_as = random_state(qubits({{"A", 2}, {"S", 2}}), rng);
  const auto rho_e = random_state(qubits({{"E", env}}), rng);
  const auto rho = tensor(rho_as, rho_e);
  const double delta = std::uniform_real_distribution<double>(1e-4, 1e-2)(rng);
  const auto u = hermitian_exp(random_hermitian(2 * env, rng()), delta);
  const auto after = apply_unitary(rho, u, {"S", "E"});
  return worse(std::abs(raw_cmi(rho, {"A"}, {"E"}, {"S"})),
               std::max(0.0, -raw_cmi(after, {"A"}, {"E"}, {"S"})));
}

double check_optimal_pair(std::mt19937_64& rng) {
  const int dim = std::uniform_int_distribution<int>(1, 2)(rng) == 1 ? 2 : 4;
  const auto p = qubits({{"S", dim}});
  const auto rho1 = random_state(p, rng);
  const auto rho2 = random_state(p, rng);
  const auto joint = optimal_pair_state(rho1, rho2, "A");
  const auto product = tensor(partial_trace(joint, {"S"}), partial_trace(joint, {"A"}));
  const auto lhs = relative_entropy(joint, product);
  if (lhs.is_infinite()) return kInf;
  return std::abs(lhs.value() - std::log(2.0) * jensen_shannon_telescopic(rho1, rho2));
}

double check_cptp_monotone(std::mt19937_64& rng) {
  const int dim = std::uniform_int_distribution<int>(1, 2)(rng) == 1 ? 4 : 8;
  const auto p = qubits({{"X", dim}});
  const auto rho = random_state(p, rng);
  const auto sigma = random_density_matrix(p, dim, rng());
  const int n_kraus = std::uniform_int_distribution<int>(1, 4)(rng);
  const auto channel = random_channel(dim, n_kraus, rng());
  const double a = std::uniform_real_distribution<double>(0.05, 0.95)(rng);
  const auto rho_out = apply_channel(rho, channel, "X");
  const auto sigma_out = apply_channel(sigma, channel, "X");
  const auto before = relative_entropy(rho, sigma);
  const auto after = relative_entropy(rho_out, sigma_out);
  double v = 0.0;
  if (!before.is_infinite()) v = after.is_infinite() ? kInf : std::max(0.0, after.value() - before.value());
  const double tele = telescopic_relative_entropy(rho_out, sigma_out, a) -
                      telescopic_relative_entropy(rho, sigma, a);
  return worse(v, std::max(0.0, tele));
}

double guarded(const std::function<double()>& fn) {
  try {
    return fn();
  } catch (const std::exception&) {
    return kInf;
  }
}

}  // namespace

SuiteReport identity_suite(std::uint64_t seed, int samples, const IdentityOptions& options) {
  if (samples < 1) throw InvalidArgument("need at least one sample");
  const auto per_sample = parallel_map(static_cast<std::size_t>(samples), [&](std::size_t i) {
    Violations v{};
    // One generator per check keeps each check's instances independent of
    // the others (and of the negative-control switch).
    auto rng = [&](std::uint64_t check) { return std::mt19937_64(mix_seed(mix_seed(seed, i), check)); };
    auto r0 = rng(0), r1 = rng(1), r2 = rng(2), r3 = rng(3), r4 = rng(4), r5 = rng(5), r6 = rng(6), r7 = rng(7);
    v[0] = guarded([&] { return check_conservation(r0, options.entangle_ancilla); });
    v[1] = guarded([&] { return check_subenvironment(r1); });
    v[2] = guarded([&] { return check_chain_rule(r2); });
    v[3] = guarded([&] { return check_interaction(r3); });
    v[4] = guarded([&] { return check_broadcast(r4); });
    v[5] = guarded([&] { return check_initial_markov(r5); });
    v[6] = guarded([&] { return check_optimal_pair(r6); });
    v[7] = guarded([&] { return check_cptp_monotone(r7); });
    return v;
  });
  static const std::array<const char*, 8> names{
      "a_conservation", "b_subenvironment", "c_chain_rule",   "d_interaction",
      "e_broadcast",    "f_initial_markov", "g_optimal_pair", "h_cptp_monotone"};
  SuiteReport report;
  report.seed = seed;
  for (std::size_t c = 0; c < names.size(); ++c) {
    double worst = 0.0;
    for (const auto& v : per_sample) worst = worse(worst, v[c]);
    report.checks.push_back(make_check(names[c], samples, worst, kIdentityTol));
  }
  return report;
}

Matrix truncated_displacement(Complex gamma, int dim, int work_dim) {
  if (dim < 1 || work_dim < dim) throw InvalidArgument("invalid truncation for displacement");
  Matrix lower = Matrix::Zero(work_dim, work_dim);  // b^dagger
  for (int n = 0; n + 1 < work_dim; ++n) lower(n + 1, n) = std::sqrt(n + 1.0);
  // D = exp(G), G = gamma b^+ - gamma^* b anti-Hermitian; iG is Hermitian.
  const Matrix generator = gamma * lower - std::conj(gamma) * lower.adjoint();
  const Matrix h = Complex(0.0, 1.0) * generator;
  return hermitian_exp(0.5 * (h + h.adjoint()), 1.0).topLeftCorner(dim, dim);
}

SuiteReport special_function_suite(std::uint64_t seed) {
  std::mt19937_64 rng(mix_seed(seed, 0));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  SuiteReport report;
  report.seed = seed;

  // <n| exp(-i x p) |n> = <n| D(x / sqrt 2) |n>, n_max = 60.
  std::vector<double> xs;
  for (int k = -8; k <= 8; ++k) xs.push_back(0.25 * k);
  for (int k = 0; k < 16; ++k) xs.push_back(-2.0 + 4.0 * unit(rng));
  double v = 0.0;
  for (double x : xs) {
    const Matrix d = truncated_displacement(x / std::sqrt(2.0), 11, 61);
    for (int n = 0; n <= 10; ++n) v = worse(v, std::abs(d(n, n) - displaced_fock_overlap(n, x)));
  }
  report.checks.push_back(make_check("pmofh_displaced_fock", static_cast<int>(xs.size()) * 11, v, 1e-8));

  // Classical pair state: Hardy-Hille closed form vs the explicit Laguerre sum.
  const double r = 0.8;
  const double u2 = std::tanh(r) * std::tanh(r);
  std::vector<std::pair<double, double>> points;
  for (double a : {0.0, 0.5, 1.0, 1.5, 2.0})
    for (double b : {0.0, 0.5, 1.0, 1.5, 2.0}) points.emplace_back(a, b);
  for (int k = 0; k < 16; ++k) points.emplace_back(2.0 * unit(rng), 2.0 * unit(rng));
  v = 0.0;
  for (const auto& [x1, x2] : points) {
    double sum = 0.0;
    for (unsigned n = 0; n <= 200; ++n)
      sum += (1.0 - u2) * std::pow(u2, n) * std::laguerre(n, x1 * x1 / 2.0) * std::laguerre(n, x2 * x2 / 2.0);
    sum *= std::exp(-(x1 * x1 + x2 * x2) / 4.0);
    const double closed = std::exp(classical_char_factor(x1 / std::sqrt(2.0), x2 / std::sqrt(2.0), r));
    v = worse(v, std::abs(sum - closed));
  }
  report.checks.push_back(make_check("lphh_classical_pair", static_cast<int>(points.size()), v, 1e-6));

  // Two-mode squeezed vacuum: closed form vs brute force with n_max = 40.
  std::vector<std::pair<Complex, Complex>> gammas{{0.3, 0.3}, {0.0, 0.0}, {Complex(0.0, 0.4), 0.0}};
  for (int k = 0; k < 12; ++k) {
    auto draw = [&] { return std::polar(unit(rng), 2.0 * M_PI * unit(rng)); };
    gammas.emplace_back(draw(), draw());
  }
  v = 0.0;
  const int levels = 41;
  for (double rr : {0.0, r}) {
    const double u = std::tanh(rr);
    for (const auto& [g1, g2] : gammas) {
      const Matrix d1 = truncated_displacement(g1, levels, 120);
      const Matrix d2 = truncated_displacement(g2, levels, 120);
      Complex expectation = 0.0;
      for (int n = 0; n < levels; ++n)
        for (int m = 0; m < levels; ++m)
          expectation += (1.0 - u * u) * std::pow(u, n + m) * d1(n, m) * d2(n, m);
      v = worse(v, std::abs(expectation - std::exp(entangled_char_factor(g1, g2, rr))));
    }
  }
  report.checks.push_back(make_check("tmsv_cross_term", static_cast<int>(2 * gammas.size()), v, 1e-6));

  // log I0 against direct evaluation where I0 itself is still finite.
  v = 0.0;
  int count = 0;
  for (double z = 0.0; z <= 600.0; z += 7.5, ++count)
    v = worse(v, std::abs(log_bessel_i0(z) - std::log(std::cyl_bessel_i(0.0, z))) /
                     std::max(1.0, std::abs(std::log(std::cyl_bessel_i(0.0, z)))));
  report.checks.push_back(make_check("log_bessel_i0", count, v, 1e-12));
  return report;
}

namespace {

// Applies a dim x dim operator to factor `factor` of a vector laid out
// row-major over `dims`.
void apply_factor(Eigen::Ref<Vector> psi, const std::vector<int>& dims, std::size_t factor,
                  const Matrix& op) {
  Eigen::Index inner = 1;
  for (std::size_t k = factor + 1; k < dims.size(); ++k) inner *= dims[k];
  const Eigen::Index d = dims[factor];
  const Eigen::Index outer = psi.size() / (inner * d);
  Vector column(d);
  for (Eigen::Index o = 0; o < outer; ++o)
    for (Eigen::Index i = 0; i < inner; ++i) {
      for (Eigen::Index k = 0; k < d; ++k) column(k) = psi(o * d * inner + k * inner + i);
      column = op * column;
      for (Eigen::Index k = 0; k < d; ++k) psi(o * d * inner + k * inner + i) = column(k);
    }
}

}  // namespace

SuiteReport dense_dephasing_check(const DiscreteDephasingModel& model, const DensityMatrix& initial,
                                  const std::vector<double>& times, const DenseCheckOptions& options) {
  const auto& partition = initial.partition();
  LabelSet ancillas;
  for (const auto& l : partition.labels())
    if (l != "S1" && l != "S2") ancillas.push_back(l);
  LabelSet order = ancillas;
  order.push_back("S1");
  order.push_back("S2");
  const DensityMatrix ordered = reorder(initial, order);
  std::vector<Eigen::Index> kept;
  for (Eigen::Index i = 0; i < ordered.eigenvalues().size(); ++i)
    if (ordered.eigenvalues()(i) > 1e-14) kept.push_back(i);
  const int rank = static_cast<int>(kept.size());

  const bool classical = model.env_kind == EnvKind::Classical;
  const int levels = model.n_max + 1;
  const int fock = levels + options.fock_padding;
  const std::size_t pairs = model.mode_pairs.size();

  std::vector<Factor> factors;
  for (const auto& l : ancillas) factors.push_back({l, partition.dim_of(l)});
  factors.push_back({"S1", 2});
  factors.push_back({"S2", 2});
  factors.push_back({"#R0", rank});
  const std::size_t env_first = factors.size();
  LabelSet e1_labels, e2_labels;
  for (std::size_t m = 0; m < pairs; ++m) {
    e1_labels.push_back("E1_" + std::to_string(m));
    e2_labels.push_back("E2_" + std::to_string(m));
    factors.push_back({e1_labels.back(), fock});
    factors.push_back({e2_labels.back(), fock});
    if (classical) factors.push_back({"#R" + std::to_string(m + 1), levels});
  }
  double total = 1.0;
  for (const auto& f : factors) total *= f.dim;
  if (total > static_cast<double>(options.max_dimension))
    throw BudgetError("dense check needs dimension " + std::to_string(static_cast<long long>(total)));
  const SystemPartition dense(factors);

  std::vector<int> env_dims;
  for (std::size_t k = env_first; k < factors.size(); ++k) env_dims.push_back(factors[k].dim);
  Eigen::Index env_dim = 1;
  for (int d : env_dims) env_dim *= d;

  // Truncated pair state per mode pair, then the product over pairs.
  const int per_pair = classical ? fock * fock * levels : fock * fock;
  Vector pair = Vector::Zero(per_pair);
  for (int n = 0; n < levels; ++n) {
    const Eigen::Index idx = classical ? (static_cast<Eigen::Index>(n) * fock + n) * levels + n
                                       : static_cast<Eigen::Index>(n) * fock + n;
    pair(idx) = model.schmidt[n];
  }
  Vector env0 = Vector::Ones(1);
  for (std::size_t m = 0; m < pairs; ++m) env0 = kron(env0, pair).col(0);

  const Eigen::Index system_dim = ordered.dim();
  Vector psi0 = Vector::Zero(dense.total_dim());
  for (Eigen::Index x = 0; x < system_dim; ++x)
    for (int j = 0; j < rank; ++j) {
      const Complex amp = std::sqrt(ordered.eigenvalues()(kept[j])) * ordered.eigenvectors()(x, kept[j]);
      psi0.segment((x * rank + j) * env_dim, env_dim) = amp * env0;
    }

  LabelSet system_labels{"S1", "S2"};
  LabelSet groups_all[4] = {ancillas, system_labels, e1_labels, e2_labels};
  const char* group_names[4] = {"A", "S", "E1", "E2"};
  const Matrix rho_s0 = partial_trace(initial, system_labels).matrix();

  double entropy_err = 0.0, cmi_err = 0.0, branch_err = 0.0, discrete_err = 0.0, quad_err = 0.0;
  double symmetry_err = 0.0;
  for (double t : times) {
    const auto disp = mode_displacements(model, t);
    Vector psi = psi0;
    std::array<std::vector<Matrix>, 4> env_ops;  // per system basis state
    for (int s = 0; s < 4; ++s) {
      const double z1 = (s >> 1) ? -1.0 : 1.0;
      const double z2 = (s & 1) ? -1.0 : 1.0;
      for (std::size_t m = 0; m < pairs; ++m) {
        env_ops[s].push_back(truncated_displacement(z1 * disp.bath1[m], fock, fock + 40));
        env_ops[s].push_back(truncated_displacement(z2 * disp.bath2[m], fock, fock + 40));
        if (classical) env_ops[s].push_back(Matrix::Identity(levels, levels));
      }
    }
    for (Eigen::Index x = 0; x < system_dim; ++x) {
      const int s = static_cast<int>(x % 4);
      const Complex phase = system_phase(model.params, s, t);
      for (int j = 0; j < rank; ++j) {
        auto block = psi.segment((x * rank + j) * env_dim, env_dim);
        block *= phase;
        for (std::size_t k = 0; k < env_ops[s].size(); ++k) apply_factor(block, env_dims, k, env_ops[s][k]);
      }
    }

    const BranchState branch(model, initial, t);
    // Entropy of every union of the groups A, S, E1, E2 from the smaller side.
    std::array<double, 16> dense_entropy{};
    for (int mask = 1; mask < 16; ++mask) {
      LabelSet labels, branch_groups;
      for (int g = 0; g < 4; ++g)
        if (mask & (1 << g)) {
          labels.insert(labels.end(), groups_all[g].begin(), groups_all[g].end());
          if (g == 0) branch_groups.insert(branch_groups.end(), ancillas.begin(), ancillas.end());
          else branch_groups.push_back(group_names[g]);
        }
      if (labels.empty()) continue;
      LabelSet complement;
      for (const auto& f : factors)
        if (std::find(labels.begin(), labels.end(), f.label) == labels.end()) complement.push_back(f.label);
      const bool small = dense.dim_of(labels) <= dense.dim_of(complement);
      dense_entropy[mask] = von_neumann_entropy(reduced_from_pure(psi, dense, small ? labels : complement));
      entropy_err = worse(entropy_err, std::abs(dense_entropy[mask] - branch.entropy(branch_groups)));
    }
    if (!ancillas.empty()) {
      auto h = [&](int mask) { return dense_entropy[mask]; };
      const int a = 1, s = 2, e1 = 4, e2 = 8;
      const auto leaked = leaked_information(branch);
      auto cmi = [&](int env) { return h(a | s) + h(s | env) - h(s) - h(a | s | env); };
      cmi_err = worse(cmi_err, std::abs(cmi(e1) - leaked.a_e1_s));
      cmi_err = worse(cmi_err, std::abs(cmi(e2) - leaked.a_e2_s));
      cmi_err = worse(cmi_err, std::abs(cmi(e1 | e2) - leaked.a_e1e2_s));
      cmi_err = worse(cmi_err, std::abs(h(s) + h(a) - h(a | s) - leaked.s_a));
    }

    const Matrix rho_s = reduced_from_pure(psi, dense, system_labels).matrix();
    branch_err = worse(branch_err, (rho_s - branch.system_marginal()).cwiseAbs().maxCoeff());
    const Matrix discrete = discrete_phase_factors(model, t).multiplier_matrix().cwiseProduct(rho_s0);
    discrete_err = worse(discrete_err, (rho_s - discrete).cwiseAbs().maxCoeff());
    const Matrix continuum = phase_factors(model.params, t).multiplier_matrix().cwiseProduct(rho_s0);
    quad_err = worse(quad_err, (rho_s - continuum).cwiseAbs().maxCoeff());
    if (classical) {
      // |k12| = |Lambda12| wherever both coherences are populated initially.
      const auto k12 = coherence_index(Coherence::k12);
      const auto lam = coherence_index(Coherence::lam12);
      const double w1 = std::abs(rho_s0(k12.ket, k12.bra));
      const double w2 = std::abs(rho_s0(lam.ket, lam.bra));
      if (w1 > 1e-6 && w2 > 1e-6)
        symmetry_err = worse(symmetry_err, std::abs(std::abs(rho_s(k12.ket, k12.bra)) / w1 -
                                                    std::abs(rho_s(lam.ket, lam.bra)) / w2));
    }
  }

  const int n = static_cast<int>(times.size());
  SuiteReport report;
  report.checks.push_back(make_check("entropies", n, entropy_err, options.tolerance));
  if (!ancillas.empty())
    report.checks.push_back(make_check("conditional_mutual_information", n, cmi_err, options.tolerance));
  report.checks.push_back(make_check("system_state_branch", n, branch_err, options.tolerance));
  report.checks.push_back(make_check("system_state_discrete", n, discrete_err, options.tolerance));
  report.checks.push_back(make_check("system_state_quadrature", n, quad_err, options.quadrature_tolerance));
  if (classical) report.checks.push_back(make_check("classical_modulus_symmetry", n, symmetry_err, options.tolerance));
  return report;
}

}  // namespace nonmarkov
