#pragma once

// The qutrit-qutrit family ρ(0) (mixing parameter α) and its locally rotated
// partner ρ'(0), together with closed-form evolutions and thresholds under
// the qutrit dephasing channel.

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "dsd/channels.hpp"
#include "dsd/criteria.hpp"
#include "dsd/error.hpp"
#include "dsd/linalg.hpp"
#include "dsd/qstate.hpp"

namespace dsd::family {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

inline void check_alpha(double alpha) {
  if (!std::isfinite(alpha) || !(alpha > 3.0 && alpha <= 5.0)) {
    throw Error(Errc::AlphaOutOfRange, "alpha must lie in (3, 5], got " + std::to_string(alpha));
  }
}

struct FamilyParams {
  double alpha;
  NoiseParams noise;

  FamilyParams(double a, NoiseParams n) : alpha(a), noise(n) { check_alpha(a); }
};

namespace detail {
inline std::size_t q(std::size_t a, std::size_t b) { return 3 * a + b; }

// Populations shared by ρ(0) and its closed-form evolution.
inline ComplexMatrix rho0_populations(double alpha) {
  ComplexMatrix m(9, 9);
  const double hi = alpha / 21, lo = (5 - alpha) / 21, c = 2.0 / 21;
  for (auto [a, b] : {std::pair{0, 0}, {1, 2}, {2, 1}}) m(q(a, b), q(a, b)) = hi;
  for (auto [a, b] : {std::pair{1, 1}, {2, 0}, {0, 2}}) m(q(a, b), q(a, b)) = lo;
  for (auto [a, b] : {std::pair{0, 1}, {1, 0}, {2, 2}}) m(q(a, b), q(a, b)) = c;
  return m;
}
}  // namespace detail

/// (2/21)|v><v| + (α/21)(|00><00|+|12><12|+|21><21|)
///   + ((5-α)/21)(|11><11|+|20><20|+|02><02|),  v = |01>+|10>+|22>.
inline DensityMatrix rho0(double alpha) {
  check_alpha(alpha);
  const Dims d(3, 3);
  std::vector<cplx> v(9);
  for (auto [a, b] : {std::pair{0, 1}, {1, 0}, {2, 2}}) v[d.index(a, b)] = 1.0;
  ComplexMatrix m = ComplexMatrix::outer(v, v) * (2.0 / 21);
  for (auto [a, b] : {std::pair{0, 0}, {1, 2}, {2, 1}}) m(d.index(a, b), d.index(a, b)) += alpha / 21;
  for (auto [a, b] : {std::pair{1, 1}, {2, 0}, {0, 2}}) m(d.index(a, b), d.index(a, b)) += (5 - alpha) / 21;
  return make_state(d, std::move(m));
}

/// U = I₃ ⊗ (|0><1| + |1><0| + |2><2|)
inline ComplexMatrix local_swap01_on_b() {
  return tensor(ComplexMatrix::identity(3), ComplexMatrix{{0, 1, 0}, {1, 0, 0}, {0, 0, 1}});
}

/// U ρ(0) U†.
inline DensityMatrix rho_prime0(double alpha) {
  const ComplexMatrix u = local_swap01_on_b();
  return make_state(Dims(3, 3), u * rho0(alpha).matrix() * u.adjoint());
}

/// (2/7)P₊ + (α/7)ρ₊ + ((5-α)/7)ρ₋, built directly.
inline DensityMatrix rho_prime0_direct(double alpha) {
  check_alpha(alpha);
  const Dims d(3, 3);
  std::vector<cplx> psi(9);
  for (std::size_t i = 0; i < 3; ++i) psi[d.index(i, i)] = 1.0 / std::sqrt(3.0);
  ComplexMatrix m = ComplexMatrix::outer(psi, psi) * (2.0 / 7);
  for (auto [a, b] : {std::pair{0, 1}, {1, 2}, {2, 0}}) m(d.index(a, b), d.index(a, b)) += alpha / 21;
  for (auto [a, b] : {std::pair{1, 0}, {2, 1}, {0, 2}}) m(d.index(a, b), d.index(a, b)) += (5 - alpha) / 21;
  return make_state(d, std::move(m));
}

/// ρ(t) in closed form: populations of ρ(0) with coherences
/// (01,10) = (2/21)γ_Aγ_B, (01,22) = (2/21)γ_A, (10,22) = (2/21)γ_B.
inline DensityMatrix evolved_closed_form(const FamilyParams& fp) {
  using detail::q;
  ComplexMatrix m = detail::rho0_populations(fp.alpha);
  const double ga = fp.noise.gamma_factor_a(), gb = fp.noise.gamma_factor_b(), c = 2.0 / 21;
  auto set = [&](std::size_t r, std::size_t s, double v) {
    m(r, s) = v;
    m(s, r) = v;
  };
  set(q(0, 1), q(1, 0), c * ga * gb);
  set(q(0, 1), q(2, 2), c * ga);
  set(q(1, 0), q(2, 2), c * gb);
  return make_state(Dims(3, 3), std::move(m));
}

/// ρ'(t) through the Kraus channel (no separate closed form is needed).
inline DensityMatrix evolved_prime(const FamilyParams& fp) {
  return apply_channel(rho_prime0(fp.alpha), kraus_eq1(fp.noise));
}

/// f(λ) = e^{-λt}/882 · (105e^{λt} − √(11025e^{2λt} + 1764e^{λt}(4 − 5αe^{λt} + α²e^{λt}))).
/// The PT of ρ(t) has f(Γ_A), f(Γ_B), f(Γ_A+Γ_B) among its eigenvalues.
inline double f_lambda(double alpha, double rate_sum, double t) {
  const double e = std::exp(rate_sum * t);
  const double disc = 11025 * e * e + 1764 * e * (4 - 5 * alpha * e + alpha * alpha * e);
  return (105 * e - std::sqrt(disc)) / (882 * e);
}

/// Time at which ρ(t) turns PPT for Γ_A = Γ_B = Γ: (1/Γ) ln(4/(α(5−α))).
/// Infinite at α = 5.
inline double t_d(double alpha, double gamma_rate) {
  check_alpha(alpha);
  if (alpha <= 4.0) throw Error(Errc::AlreadyPpt, "rho(0) is already PPT for alpha <= 4");
  if (!(gamma_rate > 0) || !std::isfinite(gamma_rate)) throw Error(Errc::InvalidParameter, "dephasing rate must be > 0");
  const double prod = alpha * (5 - alpha);
  if (prod <= 0) return kInfinity;
  return std::log(4 / prod) / gamma_rate;
}

/// ||ρ(t)^R|| − 1 for Γ_A = Γ_B = Γ:
/// (2/21)e^{−Γt}(2 + 4e^{Γt/2} + (−7 + √(19 − 15α + 3α²))e^{Γt}).
inline double realignment_closed_form(double alpha, double gamma_rate, double t) {
  const double x = std::exp(gamma_rate * t / 2);
  const double k = -7 + std::sqrt(19 - 15 * alpha + 3 * alpha * alpha);
  return (2.0 / 21) * (2 + 4 * x + k * x * x) / (x * x);
}

/// Positive zero of realignment_closed_form in t: root of k x² + 4x + 2 = 0, x = e^{Γt/2}.
inline double realignment_zero_closed_form(double alpha, double gamma_rate) {
  const double k = -7 + std::sqrt(19 - 15 * alpha + 3 * alpha * alpha);
  if (k >= 0) return kInfinity;
  const double x = (-4 - std::sqrt(16 - 8 * k)) / (2 * k);
  return x <= 1 ? 0.0 : 2 * std::log(x) / gamma_rate;
}

// Printed fidelity expressions for ρ(t) and ρ'(t) against their initial states.
inline double fidelity_eq5(double gamma_rate, double t) {
  const double e = std::exp(gamma_rate * t);
  const double r = (15 + std::sqrt(6 / e * (1 + 2 * e + std::sqrt(1 + 8 * e)))) / 21;
  return r * r;
}

inline double fidelity_eq6(double gamma_rate, double t) {
  const double r = (15 + std::sqrt(18 + 6 * std::sqrt(1 + 8 * std::exp(-2 * gamma_rate * t)))) / 21;
  return r * r;
}

/// Three 2⊗2 slices covering every coherence of ρ(t):
/// {0,1}×{0,1}, {0,2}×{1,2}, {1,2}×{0,2}. Populations |01>, |10>, |22> sit in
/// two slices each and are split ½/½; the rest go whole to their slice.
inline std::vector<BlockSpec> equal_split_blocks() {
  using BI = BasisIndex;
  return {
      BlockSpec{{0, 1}, {0, 1}, {{BI{0, 0}, 1.0}, {BI{0, 1}, 0.5}, {BI{1, 0}, 0.5}, {BI{1, 1}, 1.0}}},
      BlockSpec{{0, 2}, {1, 2}, {{BI{0, 1}, 0.5}, {BI{0, 2}, 1.0}, {BI{2, 1}, 1.0}, {BI{2, 2}, 0.5}}},
      BlockSpec{{1, 2}, {0, 2}, {{BI{1, 0}, 0.5}, {BI{1, 2}, 1.0}, {BI{2, 0}, 1.0}, {BI{2, 2}, 0.5}}},
  };
}

/// Onset of the equal-split certificate for Γ_A = Γ_B = Γ:
/// max(2 ln 2, 2 ln(2/√(α(5−α)))) / Γ. A property of the block split, derived
/// from the 2×2 PSD and PPT conditions of the {0,2}×{1,2} slice.
inline double certificate_onset_closed_form(double alpha, double gamma_rate) {
  const double prod = alpha * (5 - alpha);
  if (prod <= 0) return kInfinity;
  return std::max(2 * std::log(2.0), 2 * std::log(2 / std::sqrt(prod))) / gamma_rate;
}

}  // namespace dsd::family
