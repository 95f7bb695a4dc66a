#pragma once

// Executable checks behind the DSD-free constructions: partial Kraus sums
// of the qutrit dephasing channel, maximally correlated (MC) states under
// general dephasing, local projection onto MC form, and the infinite-time
// limit classification.

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "dsd/channels.hpp"
#include "dsd/criteria.hpp"
#include "dsd/error.hpp"
#include "dsd/linalg.hpp"
#include "dsd/qstate.hpp"
#include "dsd/tolerances.hpp"

namespace dsd::family {

enum class Branch {
  D2,  // Σ_i D2 E_i σ E_i D2: support 3⊗2 (B restricted to {1,2})
  E2,  // Σ_j D_j E2 σ E2 D_j: support 2⊗3 (A restricted to {1,2})
};

struct Substate {
  DensityMatrix state;   // normalized, on the reduced support
  double weight;         // trace before normalization (the dropped ω factors live here)
  double min_pt_eigenvalue;
  bool entangled;        // NPT; for 2⊗2 and 2⊗3 supports this is equivalent to entanglement
};

namespace detail {
inline Substate finish_substate(const ComplexMatrix& full, std::span<const std::size_t> keep_a,
                                std::span<const std::size_t> keep_b) {
  const auto proj = project_local(full, Dims(3, 3), keep_a, keep_b, Renormalize::Yes);
  auto st = make_state(proj.dims, proj.mat);
  const double lo = min_pt_eigenvalue(st);
  return {std::move(st), proj.weight, lo, lo < -tol::verdict};
}

inline void require_qutrits(const DensityMatrix& s) {
  if (!(s.dims() == Dims(3, 3))) throw Error(Errc::DimensionMismatch, "qutrit-qutrit state required");
}
}  // namespace detail

/// Partial Kraus sum of one branch at time p.t. A TRUE entangled flag
/// certifies that σ(t) is distillable: the substate is reached from σ(t) by
/// a local filter and is an NPT qubit-qutrit state.
inline Substate lemma1_substate(const DensityMatrix& sigma0, Branch which, const NoiseParams& p) {
  detail::require_qutrits(sigma0);
  const auto f = eq1_factors(p);
  std::vector<ComplexMatrix> ops;
  if (which == Branch::D2) {
    ops = {f.d2 * f.e1, f.d2 * f.e2};
  } else {
    ops = {f.d1 * f.e2, f.d2 * f.e2};
  }
  const ComplexMatrix sum = apply_kraus(sigma0.matrix(), ops);
  static constexpr std::array<std::size_t, 3> all{0, 1, 2};
  static constexpr std::array<std::size_t, 2> excited{1, 2};
  return which == Branch::D2 ? detail::finish_substate(sum, all, excited)
                             : detail::finish_substate(sum, excited, all);
}

/// D2 E2 σ E2 D2 divided by (ω_A ω_B)²: the {1,2}×{1,2} block, independent of t.
/// An entangled block certifies σ(0) is DSD-free under the qutrit dephasing channel.
inline Substate lemma2_substate(const DensityMatrix& sigma0) {
  detail::require_qutrits(sigma0);
  static constexpr std::array<std::size_t, 2> excited{1, 2};
  return detail::finish_substate(sigma0.matrix(), excited, excited);
}

// ---------------------------------------------------------------------------
// Maximally correlated states Σ a_ij |ii><jj|

class McSpec {
 public:
  /// `coefficients` must be d×d Hermitian PSD with unit trace.
  explicit McSpec(ComplexMatrix coefficients) : a_(std::move(coefficients)) {
    if (!a_.square() || a_.rows() < 2) throw Error(Errc::InvalidCoefficients, "coefficient matrix must be square, d >= 2");
    if (hermitian_defect(a_) > tol::state_hermitian) throw Error(Errc::InvalidCoefficients, "not Hermitian");
    if (std::abs(a_.trace().real() - 1.0) > tol::trace_one) throw Error(Errc::InvalidCoefficients, "trace != 1");
    if (min_eigenvalue(a_) < -tol::psd_floor) throw Error(Errc::InvalidCoefficients, "not PSD");
  }

  std::size_t d() const noexcept { return a_.rows(); }
  const ComplexMatrix& coefficients() const noexcept { return a_; }

 private:
  ComplexMatrix a_;
};

inline DensityMatrix mc_state(const McSpec& spec) {
  const std::size_t d = spec.d();
  const Dims dims(d, d);
  ComplexMatrix m(d * d, d * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) m(dims.index(i, i), dims.index(j, j)) = spec.coefficients()(i, j);
  return make_state(dims, std::move(m));
}

/// True when every entry outside the {|ii>} × {|jj>} pattern vanishes.
inline bool is_mc_form(const ComplexMatrix& m, const Dims& d, double zero = tol::coverage_zero) {
  if (d.da != d.db) return false;
  for (std::size_t i = 0; i < d.da; ++i)
    for (std::size_t k = 0; k < d.db; ++k)
      for (std::size_t j = 0; j < d.da; ++j)
        for (std::size_t l = 0; l < d.db; ++l) {
          if (i == k && j == l) continue;
          if (std::abs(m(d.index(i, k), d.index(j, l))) > zero) return false;
        }
  return true;
}

struct McReport {
  bool still_mc = false;          // evolved state keeps MC form
  bool has_offdiagonal = false;   // some evolved a_ij, i≠j, above the verdict tolerance
  bool entangled = false;         // NPT of the evolved state
  bool distillable = false;       // 2⊗2 witness on the largest coherence is negative
  double min_pt_eigenvalue = 0;
  double witness = 0;
  std::array<std::size_t, 2> witness_pair{};

  /// MC states are entangled iff some coherence survives, and then distillable.
  bool consistent() const { return still_mc && entangled == has_offdiagonal && distillable == has_offdiagonal; }
};

/// Evolves the MC state under general_dephase and checks the MC-state claims.
inline McReport mc_checks(const McSpec& spec, const NoiseParams& p) {
  const auto evolved = general_dephase(mc_state(spec), p);
  const Dims& d = evolved.dims();
  McReport r;
  r.still_mc = is_mc_form(evolved.matrix(), d);
  double best = 0;
  for (std::size_t i = 0; i < d.da; ++i)
    for (std::size_t j = i + 1; j < d.da; ++j) {
      const double mag = std::abs(evolved(d.index(i, i), d.index(j, j)));
      if (mag > best) {
        best = mag;
        r.witness_pair = {i, j};
      }
    }
  r.has_offdiagonal = best > tol::verdict;
  r.min_pt_eigenvalue = min_pt_eigenvalue(evolved);
  r.entangled = r.min_pt_eigenvalue < -tol::verdict;
  if (best > 0) {
    r.witness = qubit_block_witness(evolved, r.witness_pair, r.witness_pair);
    r.distillable = r.witness < -tol::verdict;
  }
  return r;
}

/// Projects σ0 with (|i><i|+|j><j|) ⊗ (|m><m|+|n><n|). Returns the 2×2 MC
/// coefficients (pairing i↔m, j↔n) when the normalized projection is exactly
/// MC-form with a nonzero coherence; σ0 is then DSD-free under general
/// dephasing. Otherwise nullopt.
inline std::optional<McSpec> lemma4_project(const DensityMatrix& sigma0, std::size_t i, std::size_t j, std::size_t m,
                                            std::size_t n) {
  const std::array<std::size_t, 2> ka{i, j}, kb{m, n};
  const auto proj = project_local(sigma0, ka, kb, Renormalize::Yes);
  const Dims two(2, 2);
  if (!is_mc_form(proj.mat, two)) return std::nullopt;
  ComplexMatrix a{{proj.mat(0, 0), proj.mat(0, 3)}, {proj.mat(3, 0), proj.mat(3, 3)}};
  if (std::abs(a(0, 1)) <= tol::verdict) return std::nullopt;
  return McSpec(std::move(a));
}

// ---------------------------------------------------------------------------

enum class LimitVerdict { SeparableLimit, DistillableLimit };

inline std::string_view to_string(LimitVerdict v) {
  return v == LimitVerdict::SeparableLimit ? "SeparableLimit" : "DistillableLimit";
}

struct LimitClassification {
  LimitVerdict verdict;
  DensityMatrix limit;
  double block_weight;        // trace of the {1,2}×{1,2} block of the limit
  double block_min_pt;        // PT minimum of that block, normalized (0 when the block is empty)
};

/// The t→∞ state is three product pieces plus the {1,2}×{1,2} block, and it
/// is entangled iff that two-qubit block is; a PPT-entangled limit cannot occur.
inline LimitClassification lemma6_classify(const DensityMatrix& sigma0) {
  detail::require_qutrits(sigma0);
  auto limit = infinite_limit(sigma0);
  static constexpr std::array<std::size_t, 2> excited{1, 2};
  const auto block = project_local(limit, excited, excited, Renormalize::No);
  double lo = 0;
  if (block.weight > tol::zero_trace) lo = min_pt_eigenvalue(block.mat * (1.0 / block.weight), Dims(2, 2));
  const auto v = lo < -tol::verdict ? LimitVerdict::DistillableLimit : LimitVerdict::SeparableLimit;
  return {v, std::move(limit), block.weight, lo};
}

}  // namespace dsd::family
