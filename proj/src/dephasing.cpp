#include "nonmarkov/dephasing.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <cstdio>
#include <map>

#include "nonmarkov/info_measures.hpp"
#include "nonmarkov/parallel.hpp"
#include "nonmarkov/special_functions.hpp"

namespace nonmarkov {

std::string to_string(EnvKind kind) {
  return kind == EnvKind::Entangled ? "Entangled" : "Classical";
}

EnvKind env_kind_from_string(const std::string& text) {
  if (text == "Entangled" || text == "entangled" || text == "E") return EnvKind::Entangled;
  if (text == "Classical" || text == "classical" || text == "C") return EnvKind::Classical;
  throw InvalidArgument("unknown environment kind '" + text + "'");
}

void DephasingParams::validate() const {
  if (!(omega_c > 0.0)) throw InvalidArgument("omega_c must be positive");
  if (alpha1 < 0.0 || alpha2 < 0.0) throw InvalidArgument("coupling strengths must be nonnegative");
  if (r < 0.0) throw InvalidArgument("squeezing parameter must be nonnegative");
  if (u && !(*u >= 0.0 && *u < 1.0)) throw InvalidArgument("u must lie in [0, 1)");
  if (!(window1.start <= window1.finish && window1.finish <= window2.start &&
        window2.start <= window2.finish))
    throw InvalidArgument("interaction windows must satisfy t1s <= t1f <= t2s <= t2f");
  if (quad.cutoff_multiplier <= 0.0 || quad.rel_tol <= 0.0)
    throw InvalidArgument("quadrature settings must be positive");
}

double DephasingParams::classical_u() const { return u ? *u : std::tanh(r); }

double DephasingParams::classical_r() const { return std::atanh(classical_u()); }

double DephasingParams::spectral_density(int bath, double omega) const {
  const double alpha = bath == 1 ? alpha1 : alpha2;
  return alpha * omega * std::exp(-omega / omega_c);
}

Complex beta(double omega, double t, const InteractionWindow& window) {
  if (t <= window.start) return 0.0;
  const double tau = std::min(t, window.finish) - window.start;
  const Complex i(0.0, 1.0);
  return std::exp(i * omega * window.start) * (1.0 - std::exp(i * omega * tau)) / omega;
}

double classical_char_factor(double g1abs, double g2abs, double r) {
  const double f = 2.0 * (g1abs * g1abs + g2abs * g2abs);
  const double g = 2.0 * g1abs * g2abs;
  return -std::cosh(2.0 * r) / 4.0 * f + log_bessel_i0(g * std::sinh(2.0 * r) / 2.0);
}

double entangled_char_factor(Complex gamma1, Complex gamma2, double r) {
  return -std::cosh(2.0 * r) * (std::norm(gamma1) + std::norm(gamma2)) / 2.0 +
         std::sinh(2.0 * r) * (gamma1 * gamma2).real();
}

std::string to_string(Coherence c) {
  switch (c) {
    case Coherence::k1: return "k1";
    case Coherence::k2: return "k2";
    case Coherence::k1t: return "k1t";
    case Coherence::k2t: return "k2t";
    case Coherence::k12: return "k12";
    case Coherence::lam12: return "lam12";
  }
  return "?";
}

CoherenceIndex coherence_index(Coherence c) {
  // Rows of the 4x4 state in the order |11>,|10>,|01>,|00>:
  //   k2t=(11,10) k1t=(11,01) k12=(11,00) lam12=(10,01) k1=(10,00) k2=(01,00)
  int ket = 0;
  int bra = 0;
  switch (c) {
    case Coherence::k2t: ket = 3; bra = 2; break;
    case Coherence::k1t: ket = 3; bra = 1; break;
    case Coherence::k12: ket = 3; bra = 0; break;
    case Coherence::lam12: ket = 2; bra = 1; break;
    case Coherence::k1: ket = 2; bra = 0; break;
    case Coherence::k2: ket = 1; bra = 0; break;
  }
  auto z = [](int bit) { return bit ? -1 : 1; };
  return {ket, bra, z(ket >> 1) - z(bra >> 1), z(ket & 1) - z(bra & 1)};
}

Complex PhaseFactors::get(Coherence c) const {
  return const_cast<PhaseFactors*>(this)->get(c);
}

Complex& PhaseFactors::get(Coherence c) {
  switch (c) {
    case Coherence::k1: return k1;
    case Coherence::k2: return k2;
    case Coherence::k1t: return k1t;
    case Coherence::k2t: return k2t;
    case Coherence::k12: return k12;
    case Coherence::lam12: return lam12;
  }
  return k1;
}

std::array<double, 6> PhaseFactors::magnitudes() const {
  return {std::abs(k1), std::abs(k2), std::abs(k1t), std::abs(k2t), std::abs(k12), std::abs(lam12)};
}

Matrix PhaseFactors::multiplier_matrix() const {
  Matrix f = Matrix::Ones(4, 4);
  for (Coherence c : kAllCoherences) {
    const auto idx = coherence_index(c);
    f(idx.ket, idx.bra) = get(c);
    f(idx.bra, idx.ket) = std::conj(get(c));
  }
  return f;
}

Complex system_phase(const DephasingParams& params, int s, double t) {
  const double z1 = (s >> 1) ? -1.0 : 1.0;
  const double z2 = (s & 1) ? -1.0 : 1.0;
  return std::exp(Complex(0.0, (params.eps1 * z1 + params.eps2 * z2) * t));
}

namespace {

template <unsigned N, typename F>
double kronrod(F&& f, double a, double b, const QuadratureConfig& q) {
  double error = 0.0;
  double l1 = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, N>::integrate(
      f, a, b, static_cast<unsigned>(q.max_depth), q.rel_tol, &error, &l1);
  if (!std::isfinite(value) || (error > q.rel_tol * l1 && error > 1e-15))
  {
    char msg[160];
    std::snprintf(msg, sizeof msg, "phase-factor quadrature stalled: error %.3g, L1 norm %.3g, target %.3g",
                  error, l1, q.rel_tol * l1);
    throw ConvergenceError(msg);
  }
  return value;
}

template <typename F>
double integrate(F&& f, double a, double b, const QuadratureConfig& q) {
  switch (q.abscissae) {
    case 15: return kronrod<15>(f, a, b, q);
    case 21: return kronrod<21>(f, a, b, q);
    case 31: return kronrod<31>(f, a, b, q);
    case 41: return kronrod<41>(f, a, b, q);
    case 51: return kronrod<51>(f, a, b, q);
    case 61: return kronrod<61>(f, a, b, q);
    default: throw InvalidArgument("unsupported Gauss-Kronrod abscissa count");
  }
}

}  // namespace

PhaseFactors phase_factors(const DephasingParams& params, double t) {
  params.validate();
  if (t < 0.0) throw InvalidArgument("time must be nonnegative");
  PhaseFactors out;
  const double upper = params.quad.cutoff_multiplier * params.omega_c;
  const double r_classical = params.classical_r();
  for (Coherence c : kAllCoherences) {
    const auto idx = coherence_index(c);
    // Log-magnitude density per unit frequency. In the classical case only the
    // part linear in J survives the continuum limit: the ln I0 cross term is
    // second order in the mode weight.
    auto density = [&](double omega) {
      const Complex g1 = static_cast<double>(idx.mult1) *
                         std::sqrt(params.spectral_density(1, omega)) * beta(omega, t, params.window1);
      const Complex g2 = static_cast<double>(idx.mult2) *
                         std::sqrt(params.spectral_density(2, omega)) * beta(omega, t, params.window2);
      if (params.env_kind == EnvKind::Entangled) return entangled_char_factor(g1, g2, params.r);
      return -std::cosh(2.0 * r_classical) / 2.0 * (std::norm(g1) + std::norm(g2));
    };
    const double log_mag = integrate(density, 0.0, upper, params.quad);
    const Complex phase = std::exp(Complex(0.0, (params.eps1 * idx.mult1 + params.eps2 * idx.mult2) * t));
    out.get(c) = phase * std::exp(log_mag);
  }
  return out;
}

DensityMatrix evolve_system(const PhaseFactors& factors, const DensityMatrix& rho,
                            const std::string& s1, const std::string& s2) {
  if (rho.partition().dim_of(s1) != 2 || rho.partition().dim_of(s2) != 2)
    throw InvalidArgument("system factors must be qubits");
  const Matrix f = factors.multiplier_matrix();
  const IndexSplit split(rho.partition(), {s1, s2});
  Matrix out = rho.matrix();
  for (Eigen::Index a = 0; a < 4; ++a)
    for (Eigen::Index b = 0; b < 4; ++b) {
      if (a == b) continue;
      for (Eigen::Index r1 = 0; r1 < split.rest_dim(); ++r1)
        for (Eigen::Index r2 = 0; r2 < split.rest_dim(); ++r2)
          out(split.full_index(a, r1), split.full_index(b, r2)) *= f(a, b);
    }
  return DensityMatrix(std::move(out), rho.partition());
}

DensityMatrix system_state(const DephasingParams& params, const Eigen::Matrix2cd& amplitudes,
                           double t) {
  Vector psi(4);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) psi(2 * i + j) = amplitudes(i, j);
  if (std::abs(psi.squaredNorm() - 1.0) > 1e-12)
    throw InvalidArgument("system amplitudes are not normalized");
  const DensityMatrix initial = DensityMatrix::pure(psi, SystemPartition({{"S1", 2}, {"S2", 2}}));
  return evolve_system(phase_factors(params, t), initial);
}

// ---------------------------------------------------------------------------
// Finite-mode model

namespace {

double pair_u(const DephasingParams& params) {
  return params.env_kind == EnvKind::Entangled ? std::tanh(params.r) : params.classical_u();
}

double captured_per_pair(double u, int n_max) { return 1.0 - std::pow(u * u, n_max + 1); }

}  // namespace

DiscreteDephasingModel build_discrete_model(const DephasingParams& params, int n_modes, int n_max) {
  params.validate();
  if (n_modes < 1) throw InvalidArgument("need at least one mode pair");
  if (n_max < 1) throw InvalidArgument("Fock truncation must be at least 1");
  DiscreteDephasingModel model;
  model.params = params;
  model.env_kind = params.env_kind;
  model.n_max = n_max;
  model.r = params.env_kind == EnvKind::Entangled ? params.r : params.classical_r();

  // J_j(w) dw = alpha_j omega_c^2 x e^{-x} dx with x = w / omega_c.
  const GaussRule rule = gauss_laguerre(n_modes, 1.0);
  const double scale = params.omega_c * params.omega_c;
  for (int m = 0; m < n_modes; ++m) {
    if (rule.nodes[m] > params.quad.cutoff_multiplier)
      throw InvalidArgument("mode frequency beyond the spectral cutoff");
    model.mode_pairs.push_back({params.omega_c * rule.nodes[m],
                                std::sqrt(params.alpha1 * scale * rule.weights[m]),
                                std::sqrt(params.alpha2 * scale * rule.weights[m])});
  }

  const double u = pair_u(params);
  model.captured_trace_per_pair = captured_per_pair(u, n_max);
  model.captured_trace = std::pow(model.captured_trace_per_pair, n_modes);
  if (model.captured_trace < kMinCapturedTrace)
    throw BudgetError("Fock truncation n_max=" + std::to_string(n_max) + " keeps only " +
                      std::to_string(model.captured_trace) + " of the environment trace");
  for (int n = 0; n <= n_max; ++n) {
    const double p = (1.0 - u * u) * std::pow(u * u, n);
    model.schmidt.push_back(std::sqrt(p / model.captured_trace_per_pair));
  }
  return model;
}

int minimal_n_max(const DephasingParams& params, int n_modes, double threshold) {
  const double u = pair_u(params);
  for (int n = 1; n <= 10000; ++n)
    if (std::pow(captured_per_pair(u, n), n_modes) >= threshold) return n;
  throw BudgetError("no Fock truncation below 10000 reaches the requested trace");
}

ModeDisplacements mode_displacements(const DiscreteDephasingModel& model, double t) {
  ModeDisplacements out;
  for (const auto& mode : model.mode_pairs) {
    out.bath1.push_back(mode.g1 * beta(mode.omega, t, model.params.window1));
    out.bath2.push_back(mode.g2 * beta(mode.omega, t, model.params.window2));
  }
  return out;
}

PhaseFactors discrete_phase_factors(const DiscreteDephasingModel& model, double t) {
  const auto disp = mode_displacements(model, t);
  const int n_max = model.n_max;
  PhaseFactors out;
  for (Coherence c : kAllCoherences) {
    const auto idx = coherence_index(c);
    Complex value = std::exp(Complex(
        0.0, (model.params.eps1 * idx.mult1 + model.params.eps2 * idx.mult2) * t));
    for (std::size_t m = 0; m < model.mode_pairs.size(); ++m) {
      const Complex gamma1 = static_cast<double>(idx.mult1) * disp.bath1[m];
      const Complex gamma2 = static_cast<double>(idx.mult2) * disp.bath2[m];
      Complex pair = 0.0;
      if (model.env_kind == EnvKind::Entangled) {
        for (int n = 0; n <= n_max; ++n)
          for (int k = 0; k <= n_max; ++k)
            pair += model.schmidt[n] * model.schmidt[k] * displacement_element(n, k, gamma1) *
                    displacement_element(n, k, gamma2);
      } else {
        for (int n = 0; n <= n_max; ++n)
          pair += model.schmidt[n] * model.schmidt[n] * displacement_element(n, n, gamma1) *
                  displacement_element(n, n, gamma2);
      }
      value *= pair;
    }
    out.get(c) = value;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Branch Gram method

namespace {

constexpr double kAmplitudeCutoff = 1e-14;

constexpr double kZeroInformation = 1e-12;

double checked_information(double value) {
  if (value < -ExtendedReal::kClampTol)
    throw ValidityError("strong subadditivity violated by " + std::to_string(value));
  // round-off around an exact zero is reported as zero
  return value <= kZeroInformation ? 0.0 : value;
}
const std::string kPurifier = "#purifier";

Matrix mode_overlap_table(int n_max, Complex delta) {
  // Local states (z index, n) with z index = bit, displacement z*delta.
  const int levels = n_max + 1;
  Matrix table(2 * levels, 2 * levels);
  for (int za = 0; za < 2; ++za)
    for (int zb = 0; zb < 2; ++zb) {
      const double shift = (zb ? -1.0 : 1.0) - (za ? -1.0 : 1.0);
      for (int na = 0; na < levels; ++na)
        for (int nb = 0; nb < levels; ++nb)
          table(za * levels + na, zb * levels + nb) = displacement_element(na, nb, shift * delta);
    }
  return table;
}

}  // namespace

BranchState::BranchState(const DiscreteDephasingModel& model, const DensityMatrix& initial,
                         double t, std::size_t max_branches) {
  const auto& partition = initial.partition();
  if (partition.dim_of("S1") != 2 || partition.dim_of("S2") != 2)
    throw InvalidArgument("initial state needs qubit factors S1 and S2");
  for (const auto& l : partition.labels())
    if (l != "S1" && l != "S2") {
      if (l == "S" || l == "E1" || l == "E2") throw InvalidArgument("ancilla label '" + l + "' is reserved");
      ancillas_.push_back(l);
    }
  LabelSet order = ancillas_;
  order.push_back("S1");
  order.push_back("S2");
  const DensityMatrix ordered = reorder(initial, order);

  struct SystemBranch {
    int purifier;
    Eigen::Index anc;
    int s;
    Complex amp;
  };
  std::vector<SystemBranch> system_branches;
  const auto& p = ordered.eigenvalues();
  const auto& v = ordered.eigenvectors();
  int rank = 0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p(i) <= kAmplitudeCutoff) continue;
    for (Eigen::Index x = 0; x < v.rows(); ++x) {
      const Complex amp = std::sqrt(p(i)) * v(x, i);
      if (std::abs(amp) <= kAmplitudeCutoff) continue;
      system_branches.push_back({rank, x / 4, static_cast<int>(x % 4), amp});
    }
    ++rank;
  }

  const int levels = model.n_max + 1;
  const std::size_t pairs = model.mode_pairs.size();
  std::size_t env_count = 1;
  for (std::size_t m = 0; m < pairs; ++m) {
    env_count *= static_cast<std::size_t>(levels);
    if (env_count * system_branches.size() > max_branches) break;
  }
  const std::size_t total = env_count * system_branches.size();
  if (total > max_branches)
    throw BudgetError("branch count " + std::to_string(total) + "+ exceeds budget " +
                      std::to_string(max_branches));

  // Sites: ancilla labels, S, purifier of the initial state, then per mode
  // pair E1, E2 and (classical) the reference that purifies the pair state.
  std::vector<int> anc_dims;
  for (const auto& l : ancillas_) {
    anc_dims.push_back(partition.dim_of(l));
    sites_.push_back({l, true, {}, Matrix::Identity(anc_dims.back(), anc_dims.back())});
  }
  sites_.push_back({"S", true, {}, Matrix::Identity(4, 4)});
  sites_.push_back({kPurifier, true, {}, Matrix::Identity(std::max(rank, 1), std::max(rank, 1))});
  const auto disp = mode_displacements(model, t);
  const bool classical = model.env_kind == EnvKind::Classical;
  for (std::size_t m = 0; m < pairs; ++m) {
    sites_.push_back({"E1", false, {}, mode_overlap_table(model.n_max, disp.bath1[m])});
    sites_.push_back({"E2", false, {}, mode_overlap_table(model.n_max, disp.bath2[m])});
    if (classical) sites_.push_back({kPurifier, true, {}, Matrix::Identity(levels, levels)});
  }
  for (auto& site : sites_) site.local.reserve(total);
  amplitudes_.reserve(total);

  std::vector<int> n(pairs, 0);
  for (const auto& sb : system_branches) {
    const Complex phase = system_phase(model.params, sb.s, t);
    const int bit1 = sb.s >> 1;
    const int bit2 = sb.s & 1;
    std::fill(n.begin(), n.end(), 0);
    for (std::size_t e = 0; e < env_count; ++e) {
      std::size_t rem = e;
      Complex amp = sb.amp * phase;
      for (std::size_t m = pairs; m-- > 0;) {
        n[m] = static_cast<int>(rem % levels);
        rem /= levels;
        amp *= model.schmidt[n[m]];
      }
      std::size_t site = 0;
      Eigen::Index anc = sb.anc;
      std::vector<int> digits(ancillas_.size());
      for (std::size_t a = ancillas_.size(); a-- > 0;) {
        digits[a] = static_cast<int>(anc % anc_dims[a]);
        anc /= anc_dims[a];
      }
      for (std::size_t a = 0; a < ancillas_.size(); ++a) sites_[site++].local.push_back(digits[a]);
      sites_[site++].local.push_back(sb.s);
      sites_[site++].local.push_back(sb.purifier);
      for (std::size_t m = 0; m < pairs; ++m) {
        sites_[site++].local.push_back(bit1 * levels + n[m]);
        sites_[site++].local.push_back(bit2 * levels + n[m]);
        if (classical) sites_[site++].local.push_back(n[m]);
      }
      amplitudes_.push_back(amp);
    }
  }
}

Matrix BranchState::gram(const std::vector<std::size_t>& sites) const {
  const auto k = static_cast<Eigen::Index>(amplitudes_.size());
  Matrix g = Matrix::Ones(k, k);
  for (std::size_t idx : sites) {
    const auto& site = sites_[idx];
    for (Eigen::Index a = 0; a < k; ++a)
      for (Eigen::Index b = 0; b < k; ++b) {
        if (g(a, b) == Complex(0.0)) continue;
        if (site.discrete) {
          if (site.local[a] != site.local[b]) g(a, b) = 0.0;
        } else {
          g(a, b) *= site.overlap(site.local[a], site.local[b]);
        }
      }
  }
  return g;
}

double BranchState::discrete_entropy(const std::vector<std::size_t>& kept,
                                     const std::vector<std::size_t>& rest) const {
  const std::size_t k = amplitudes_.size();
  std::map<std::vector<int>, Eigen::Index> keys;
  std::vector<Eigen::Index> key_of(k);
  for (std::size_t b = 0; b < k; ++b) {
    std::vector<int> key;
    for (std::size_t idx : kept) key.push_back(sites_[idx].local[b]);
    key_of[b] = keys.emplace(std::move(key), static_cast<Eigen::Index>(keys.size())).first->second;
  }
  const Matrix g = gram(rest);
  const auto d = static_cast<Eigen::Index>(keys.size());
  Matrix rho = Matrix::Zero(d, d);
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b)
      rho(key_of[a], key_of[b]) += amplitudes_[a] * std::conj(amplitudes_[b]) *
                                   std::conj(g(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)));
  rho = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(rho, Eigen::EigenvaluesOnly);
  return shannon_entropy(solver.eigenvalues().cwiseMax(0.0));
}

double BranchState::entropy(const LabelSet& groups) const {
  std::vector<std::size_t> kept;
  std::vector<std::size_t> rest;
  for (std::size_t i = 0; i < sites_.size(); ++i) {
    const bool in = std::find(groups.begin(), groups.end(), sites_[i].group) != groups.end();
    (in ? kept : rest).push_back(i);
  }
  for (const auto& g : groups)
    if (std::none_of(sites_.begin(), sites_.end(), [&](const Site& s) { return s.group == g; }))
      throw InvalidArgument("unknown site group '" + g + "'");
  if (kept.empty()) return 0.0;
  auto all_discrete = [&](const std::vector<std::size_t>& idx) {
    return std::all_of(idx.begin(), idx.end(), [&](std::size_t i) { return sites_[i].discrete; });
  };
  if (all_discrete(kept)) return discrete_entropy(kept, rest);
  if (all_discrete(rest)) return discrete_entropy(rest, kept);

  // Nonzero spectrum of rho_X equals that of Gx^{1/2} Q Gx^{1/2}; working in
  // the eigenbasis of Gx drops its null directions and one product.
  const Matrix gx = gram(kept);
  const Matrix gy = gram(rest);
  const auto k = static_cast<Eigen::Index>(amplitudes_.size());
  Matrix q(k, k);
  for (Eigen::Index a = 0; a < k; ++a)
    for (Eigen::Index b = 0; b < k; ++b)
      q(a, b) = amplitudes_[a] * std::conj(amplitudes_[b]) * std::conj(gy(a, b));
  Eigen::SelfAdjointEigenSolver<Matrix> gsolver(0.5 * (gx + gx.adjoint()));
  const RealVector& lambda = gsolver.eigenvalues();
  const double floor = 1e-14 * std::max(lambda.maxCoeff(), 1.0);
  Eigen::Index first = 0;
  while (first < k && lambda(first) <= floor) ++first;
  const Eigen::Index kept_rank = k - first;
  if (kept_rank == 0) throw ValidityError("branch Gram matrix vanishes");
  Matrix w = gsolver.eigenvectors().rightCols(kept_rank);
  w = w * lambda.tail(kept_rank).cwiseSqrt().asDiagonal();
  Matrix m = w.adjoint() * q * w;
  m = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
  return shannon_entropy(solver.eigenvalues().cwiseMax(0.0));
}

double BranchState::cmi(const LabelSet& a, const LabelSet& b, const LabelSet& c) const {
  auto join = [](std::initializer_list<const LabelSet*> parts) {
    LabelSet out;
    for (const auto* p : parts) out.insert(out.end(), p->begin(), p->end());
    return out;
  };
  return checked_information(entropy(join({&a, &c})) + entropy(join({&c, &b})) - entropy(c) -
                             entropy(join({&a, &c, &b})));
}

double BranchState::mutual_information(const LabelSet& a, const LabelSet& b) const {
  return cmi(a, b, {});
}

Matrix BranchState::system_marginal() const {
  std::vector<std::size_t> rest;
  std::size_t s_site = 0;
  for (std::size_t i = 0; i < sites_.size(); ++i) {
    if (sites_[i].group == "S") s_site = i;
    else rest.push_back(i);
  }
  const Matrix g = gram(rest);
  Matrix rho = Matrix::Zero(4, 4);
  const auto& local = sites_[s_site].local;
  for (std::size_t a = 0; a < amplitudes_.size(); ++a)
    for (std::size_t b = 0; b < amplitudes_.size(); ++b)
      rho(local[a], local[b]) += amplitudes_[a] * std::conj(amplitudes_[b]) *
                                 std::conj(g(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)));
  return rho;
}

LeakedInformation leaked_information(const BranchState& state, LabelSet ancilla) {
  if (ancilla.empty()) ancilla = state.ancilla_labels();
  if (ancilla.empty()) throw InvalidArgument("initial state has no ancilla");
  auto with = [&](LabelSet groups, bool add_ancilla) {
    if (add_ancilla) groups.insert(groups.end(), ancilla.begin(), ancilla.end());
    return state.entropy(groups);
  };
  const double s_s = with({"S"}, false);
  const double s_as = with({"S"}, true);
  auto conditional = [&](const LabelSet& env) {
    LabelSet groups{"S"};
    groups.insert(groups.end(), env.begin(), env.end());
    return checked_information(s_as + with(groups, false) - s_s - with(groups, true));
  };
  LeakedInformation out;
  out.a_e1_s = conditional({"E1"});
  out.a_e2_s = conditional({"E2"});
  out.a_e1e2_s = conditional({"E1", "E2"});
  out.s_a = checked_information(s_s + with({}, true) - s_as);
  return out;
}

LeakedSeries leaked_information_trajectory(const DiscreteDephasingModel& model,
                                           const DensityMatrix& initial,
                                           const std::vector<double>& times) {
  const auto samples = parallel_map(times.size(), [&](std::size_t i) {
    return leaked_information(BranchState(model, initial, times[i]));
  });
  std::vector<double> e1, e2, e12, sa;
  for (const auto& s : samples) {
    e1.push_back(s.a_e1_s);
    e2.push_back(s.a_e2_s);
    e12.push_back(s.a_e1e2_s);
    sa.push_back(s.s_a);
  }
  return {ScalarSeries(times, e1), ScalarSeries(times, e2), ScalarSeries(times, e12),
          ScalarSeries(times, sa)};
}

ScalarSeries cmi_trajectory(const DiscreteDephasingModel& model, const DensityMatrix& initial,
                            const std::vector<double>& times, EnvPart env_part) {
  LabelSet env;
  if (env_part != EnvPart::E2) env.push_back("E1");
  if (env_part != EnvPart::E1) env.push_back("E2");
  const auto values = parallel_map(times.size(), [&](std::size_t i) {
    const BranchState state(model, initial, times[i]);
    return state.cmi(state.ancilla_labels(), env, {"S"});
  });
  return ScalarSeries(times, values);
}

std::vector<double> uniform_grid(double start, double end, double dt) {
  if (!(dt > 0.0) || end < start) throw InvalidArgument("invalid time grid");
  const auto steps = static_cast<long>(std::floor((end - start) / dt + 0.5));
  std::vector<double> out;
  for (long i = 0; i <= steps; ++i) out.push_back(start + static_cast<double>(i) * dt);
  return out;
}

}  // namespace nonmarkov
