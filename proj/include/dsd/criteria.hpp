#pragma once

// Entanglement and distillability tests: partial-transpose spectrum,
// realignment (CCNR), 2⊗2 block witnesses, a constructive separability
// certificate, Bures fidelity and a bisection root finder for thresholds.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dsd/error.hpp"
#include "dsd/linalg.hpp"
#include "dsd/qstate.hpp"
#include "dsd/tolerances.hpp"

namespace dsd {

enum class Verdict { NptFreeEntangled, PptBoundEntangled, PptUndetermined, SeparableCertified };

inline std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::NptFreeEntangled: return "NptFreeEntangled";
    case Verdict::PptBoundEntangled: return "PptBoundEntangled";
    case Verdict::PptUndetermined: return "PptUndetermined";
    case Verdict::SeparableCertified: return "SeparableCertified";
  }
  return "Unknown";
}

inline double min_pt_eigenvalue(const ComplexMatrix& m, const Dims& d) {
  return min_eigenvalue(partial_transpose(m, d, Side::B));
}

inline double min_pt_eigenvalue(const DensityMatrix& rho) { return min_pt_eigenvalue(rho.matrix(), rho.dims()); }

/// ||ρ^R||_1 - 1; positive values witness entanglement.
inline double realignment_excess(const ComplexMatrix& m, const Dims& d) { return trace_norm(realign(m, d)) - 1.0; }

inline double realignment_excess(const DensityMatrix& rho) { return realignment_excess(rho.matrix(), rho.dims()); }

/// Minimum PT eigenvalue of the normalized projection onto
/// {a_labels}×{b_labels}. A negative value means the parent state can be
/// locally filtered to an NPT two-qubit state and is therefore distillable.
inline double qubit_block_witness(const DensityMatrix& rho, std::array<std::size_t, 2> a_labels,
                                  std::array<std::size_t, 2> b_labels) {
  const auto proj = project_local(rho, a_labels, b_labels, Renormalize::Yes);
  return min_pt_eigenvalue(proj.mat, proj.dims);
}

// ---------------------------------------------------------------------------
// Separability certificate

/// A 2⊗2 slice {a0,a1}×{b0,b1} of the state. Coherences inside the slice are
/// taken at full magnitude; each population contributes the listed fraction
/// (absent entries contribute nothing).
struct BlockSpec {
  std::array<std::size_t, 2> a_labels{};
  std::array<std::size_t, 2> b_labels{};
  std::map<BasisIndex, double> diag_weights;

  std::array<BasisIndex, 4> basis() const {
    return {BasisIndex{a_labels[0], b_labels[0]}, BasisIndex{a_labels[0], b_labels[1]},
            BasisIndex{a_labels[1], b_labels[0]}, BasisIndex{a_labels[1], b_labels[1]}};
  }

  void validate(const Dims& d) const {
    if (a_labels[0] == a_labels[1] || b_labels[0] == b_labels[1]) {
      throw Error(Errc::InvalidParameter, "block labels must be distinct");
    }
    for (auto x : a_labels)
      if (x >= d.da) throw Error(Errc::InvalidParameter, "block label out of range");
    for (auto x : b_labels)
      if (x >= d.db) throw Error(Errc::InvalidParameter, "block label out of range");
    const auto b = basis();
    for (const auto& [idx, w] : diag_weights) {
      if (!(w > 0.0 && w <= 1.0)) throw Error(Errc::InvalidParameter, "diagonal fraction outside (0,1]");
      if (std::find(b.begin(), b.end(), idx) == b.end()) {
        throw Error(Errc::InvalidParameter, "diagonal weight for a basis state outside the block");
      }
    }
  }
};

struct BlockDiagnostics {
  ComplexMatrix block;     // padded 4×4 piece in basis order of BlockSpec::basis()
  double min_eigenvalue;   // PSD margin
  double min_pt_eigenvalue;
  bool passed;
};

struct CertificateResult {
  bool passed = false;
  std::vector<BlockDiagnostics> blocks;
  double margin = 0;           // min over blocks of both eigenvalue margins; +inf with no blocks
  double residual_offdiag = 0;  // largest |off-diagonal| left after removing all blocks
  double residual_min_diag = 0;
};

/// Sound (not complete) separability proof: ρ = Σ blocks + diagonal
/// remainder, where every block is a PSD and PPT 2⊗2 operator (hence
/// separable) and the remainder is a nonnegative diagonal (a mixture of
/// product states). passed == false only means "not certified".
inline CertificateResult separability_certificate(const DensityMatrix& rho, const std::vector<BlockSpec>& blocks) {
  const Dims& d = rho.dims();
  const std::size_t n = d.total();
  std::vector<int> coverage(n * n, 0);
  std::vector<double> diag_used(n, 0.0);
  for (const auto& blk : blocks) {
    blk.validate(d);
    const auto b = blk.basis();
    for (std::size_t r = 0; r < 4; ++r)
      for (std::size_t c = 0; c < 4; ++c)
        if (r != c) ++coverage[d.index(b[r].a, b[r].b) * n + d.index(b[c].a, b[c].b)];
    for (const auto& [idx, w] : blk.diag_weights) diag_used[d.index(idx.a, idx.b)] += w;
  }
  for (std::size_t r = 0; r < n; ++r) {
    if (diag_used[r] > 1.0 + 1e-12) {
      throw Error(Errc::CoverageError, "diagonal fractions exceed 1 at index " + std::to_string(r));
    }
    for (std::size_t c = 0; c < n; ++c) {
      if (r == c || std::abs(rho(r, c)) <= tol::coverage_zero) continue;
      if (coverage[r * n + c] != 1) {
        throw Error(Errc::CoverageError, "coherence (" + std::to_string(r) + "," + std::to_string(c) + ") covered " +
                                             std::to_string(coverage[r * n + c]) + " times");
      }
    }
  }

  CertificateResult out;
  out.margin = std::numeric_limits<double>::infinity();
  out.passed = true;
  ComplexMatrix residual = rho.matrix();
  const Dims two(2, 2);
  for (const auto& blk : blocks) {
    const auto b = blk.basis();
    ComplexMatrix block(4, 4);
    for (std::size_t r = 0; r < 4; ++r)
      for (std::size_t c = 0; c < 4; ++c) {
        const std::size_t R = d.index(b[r].a, b[r].b), C = d.index(b[c].a, b[c].b);
        if (r == c) {
          const auto it = blk.diag_weights.find(b[r]);
          block(r, r) = it == blk.diag_weights.end() ? 0.0 : it->second * rho(R, R).real();
        } else {
          block(r, c) = rho(R, C);
        }
        residual(R, C) -= block(r, c);
      }
    const double lo = min_eigenvalue(block);
    const double lo_pt = min_pt_eigenvalue(block, two);
    const bool ok = lo >= -tol::block_psd && lo_pt >= -tol::block_psd;
    out.margin = std::min({out.margin, lo, lo_pt});
    out.passed = out.passed && ok;
    out.blocks.push_back({std::move(block), lo, lo_pt, ok});
  }
  out.residual_min_diag = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      if (r == c) {
        out.residual_min_diag = std::min(out.residual_min_diag, residual(r, r).real());
      } else {
        out.residual_offdiag = std::max(out.residual_offdiag, std::abs(residual(r, c)));
      }
    }
  out.passed = out.passed && out.residual_offdiag <= tol::coverage_zero && out.residual_min_diag >= -tol::block_psd;
  return out;
}

// ---------------------------------------------------------------------------

struct Classification {
  Verdict verdict;
  double min_pt_eigenvalue;
  double realignment_excess;
  bool certificate_passed;
  std::optional<CertificateResult> certificate;
};

/// NPT first; among PPT states, a CCNR violation witnesses bound
/// entanglement; otherwise the optional certificate decides between
/// SeparableCertified and PptUndetermined.
inline Classification classify(const DensityMatrix& rho, const std::optional<std::vector<BlockSpec>>& cert_blocks = {}) {
  Classification c{Verdict::PptUndetermined, min_pt_eigenvalue(rho), 0.0, false, std::nullopt};
  c.realignment_excess = realignment_excess(rho);
  if (c.min_pt_eigenvalue < -tol::verdict) {
    c.verdict = Verdict::NptFreeEntangled;
  } else if (c.realignment_excess > tol::verdict) {
    c.verdict = Verdict::PptBoundEntangled;
  } else if (cert_blocks) {
    c.certificate = separability_certificate(rho, *cert_blocks);
    c.certificate_passed = c.certificate->passed;
    if (c.certificate_passed) c.verdict = Verdict::SeparableCertified;
  }
  return c;
}

/// Bures fidelity [tr √(√ρ σ √ρ)]², evaluated as ||√ρ √σ||_1².
inline double bures_fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (!(rho.dims() == sigma.dims())) throw Error(Errc::DimensionMismatch, "fidelity of states with different dims");
  const double root = trace_norm(sqrt_psd(rho.matrix()) * sqrt_psd(sigma.matrix()));
  return std::clamp(root * root, 0.0, 1.0);
}

/// Bisection for a sign change of f on [lo, hi].
template <class F>
double find_sign_change(F&& f, double lo, double hi, double tolerance = tol::bisection,
                        int budget = tol::bisection_budget) {
  if (!(lo < hi)) throw Error(Errc::NoBracket, "empty interval");
  double flo = f(lo);
  const double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo < 0) == (fhi < 0)) {
    throw Error(Errc::NoBracket, "f has the same sign at both ends of [" + std::to_string(lo) + ", " +
                                     std::to_string(hi) + "]");
  }
  for (int it = 0; it < budget; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (0.5 * (hi - lo) < tolerance) return mid;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  throw Error(Errc::Budget, "bisection did not reach tolerance");
}

/// Scans [lo, hi] in `steps` equal pieces for the first sign change of f and
/// refines it by bisection. Returns nullopt when f keeps one sign on the grid.
template <class F>
std::optional<double> first_sign_change(F&& f, double lo, double hi, std::size_t steps,
                                        double tolerance = tol::bisection) {
  double prev_t = lo;
  double prev = f(lo);
  for (std::size_t k = 1; k <= steps; ++k) {
    const double t = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(steps);
    const double cur = f(t);
    if (prev == 0.0) return prev_t;
    if ((prev < 0) != (cur < 0)) return find_sign_change(f, prev_t, t, tolerance);
    prev_t = t;
    prev = cur;
  }
  return std::nullopt;
}

}  // namespace dsd
