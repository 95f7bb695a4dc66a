#pragma once

// Local dephasing channels on two qutrits (and general dephasing on qudits).

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "dsd/error.hpp"
#include "dsd/linalg.hpp"
#include "dsd/qstate.hpp"
#include "dsd/tolerances.hpp"

namespace dsd {

struct NoiseParams {
  double gamma_a = 0;  // Γ_A, inverse time
  double gamma_b = 0;  // Γ_B
  double t = 0;

  NoiseParams() = default;
  NoiseParams(double ga, double gb, double time) : gamma_a(ga), gamma_b(gb), t(time) {
    for (double x : {ga, gb, time}) {
      if (!std::isfinite(x) || x < 0) throw Error(Errc::InvalidParameter, "noise parameters must be finite and >= 0");
    }
  }

  double gamma_factor_a() const { return std::exp(-gamma_a * t / 2); }
  double gamma_factor_b() const { return std::exp(-gamma_b * t / 2); }
  // ω = sqrt(1 - γ²) = sqrt(-expm1(-Γt)), accurate for small Γt
  double omega_a() const { return std::sqrt(-std::expm1(-gamma_a * t)); }
  double omega_b() const { return std::sqrt(-std::expm1(-gamma_b * t)); }
};

/// Operator-sum representation; construction enforces Σ K†K = I.
class KrausSet {
 public:
  KrausSet(Dims dims, std::vector<ComplexMatrix> ops) : dims_(dims), ops_(std::move(ops)) {
    if (ops_.empty()) throw Error(Errc::NotComplete, "empty Kraus family");
    ComplexMatrix sum(dims_.total(), dims_.total());
    for (const auto& k : ops_) {
      if (!k.square() || k.rows() != dims_.total()) throw Error(Errc::DimensionMismatch, "Kraus operator size");
      sum += k.adjoint() * k;
    }
    const double defect = max_abs_diff(sum, ComplexMatrix::identity(dims_.total()));
    if (defect > tol::kraus_completeness) {
      throw Error(Errc::NotComplete, "sum K^dag K deviates from identity by " + std::to_string(defect));
    }
  }

  const Dims& dims() const noexcept { return dims_; }
  const std::vector<ComplexMatrix>& ops() const noexcept { return ops_; }

 private:
  Dims dims_;
  std::vector<ComplexMatrix> ops_;
};

/// Local factors of the qutrit dephasing model: E_i act on A, D_j on B.
struct DephasingFactors {
  ComplexMatrix e1, e2, d1, d2;
};

inline DephasingFactors eq1_factors(const NoiseParams& p) {
  const double ga = p.gamma_factor_a(), gb = p.gamma_factor_b();
  const double wa = p.omega_a(), wb = p.omega_b();
  const auto i3 = ComplexMatrix::identity(3);
  return {tensor(ComplexMatrix::diagonal({1, ga, ga}), i3), tensor(ComplexMatrix::diagonal({0, wa, wa}), i3),
          tensor(i3, ComplexMatrix::diagonal({1, gb, gb})), tensor(i3, ComplexMatrix::diagonal({0, wb, wb}))};
}

/// The four operators D_j·E_i, ordered (D1E1, D1E2, D2E1, D2E2).
inline KrausSet kraus_eq1(const NoiseParams& p) {
  const auto f = eq1_factors(p);
  return KrausSet(Dims(3, 3), {f.d1 * f.e1, f.d1 * f.e2, f.d2 * f.e1, f.d2 * f.e2});
}

/// Σ K ρ K† on a raw matrix. For the real diagonal operators of the dephasing
/// model this coincides with the K†ρK ordering.
inline ComplexMatrix apply_kraus(const ComplexMatrix& rho, std::span<const ComplexMatrix> ops) {
  ComplexMatrix out(rho.rows(), rho.cols());
  for (const auto& k : ops) out += k * rho * k.adjoint();
  return out;
}

inline DensityMatrix apply_channel(const DensityMatrix& rho, const KrausSet& ks) {
  if (!(rho.dims() == ks.dims())) throw Error(Errc::DimensionMismatch, "state and channel dimensions differ");
  return make_state(rho.dims(), apply_kraus(rho.matrix(), ks.ops()));
}

/// Dephasing between all local basis states: each subsystem undergoes
/// σ -> (1-p)σ + p·diag(σ), p = 1 - e^{-Γt}. Coherence ((i,k),(j,l)) picks up
/// e^{-Γ_A t [i≠j]} e^{-Γ_B t [k≠l]}.
inline ComplexMatrix general_dephase(const ComplexMatrix& m, const Dims& d, const NoiseParams& p) {
  const double fa = std::exp(-p.gamma_a * p.t), fb = std::exp(-p.gamma_b * p.t);
  ComplexMatrix out = m;
  for (std::size_t i = 0; i < d.da; ++i)
    for (std::size_t k = 0; k < d.db; ++k)
      for (std::size_t j = 0; j < d.da; ++j)
        for (std::size_t l = 0; l < d.db; ++l) {
          const double f = (i != j ? fa : 1.0) * (k != l ? fb : 1.0);
          if (f != 1.0) out(d.index(i, k), d.index(j, l)) *= f;
        }
  return out;
}

inline DensityMatrix general_dephase(const DensityMatrix& rho, const NoiseParams& p) {
  return make_state(rho.dims(), general_dephase(rho.matrix(), rho.dims(), p));
}

/// t -> ∞ image of a qutrit pair under kraus_eq1: the state is cut into the
/// four blocks {0}/{1,2} on each side and coherences between blocks vanish,
///   a|00><00| + |0><0|⊗X_B + X_A⊗|0><0| + (P12⊗P12) σ (P12⊗P12).
inline DensityMatrix infinite_limit(const DensityMatrix& sigma) {
  if (!(sigma.dims() == Dims(3, 3))) throw Error(Errc::DimensionMismatch, "infinite_limit is defined for qutrit pairs");
  static constexpr std::array<std::size_t, 1> ground{0};
  static constexpr std::array<std::size_t, 2> excited{1, 2};
  const std::array<std::span<const std::size_t>, 2> parts{ground, excited};
  ComplexMatrix out(9, 9);
  for (auto a : parts)
    for (auto b : parts) {
      const auto piece = project_local(sigma, a, b, Renormalize::No);
      out += embed_local(piece.mat, sigma.dims(), a, b);
    }
  return make_state(sigma.dims(), std::move(out));
}

}  // namespace dsd
