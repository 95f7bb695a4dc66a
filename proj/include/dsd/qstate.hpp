#pragma once

// Validated bipartite states and the index maps the entanglement criteria
// are built on. Basis order is row-major: |a b> sits at index a*d_b + b.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "dsd/error.hpp"
#include "dsd/linalg.hpp"
#include "dsd/tolerances.hpp"

namespace dsd {

struct Dims {
  std::size_t da = 0;
  std::size_t db = 0;

  Dims() = default;
  Dims(std::size_t a, std::size_t b) : da(a), db(b) {
    if (da < 2 || db < 2) {
      throw Error(Errc::BadShape, "local dimensions must be >= 2, got " + std::to_string(da) + "x" +
                                      std::to_string(db));
    }
  }

  std::size_t total() const noexcept { return da * db; }
  std::size_t index(std::size_t a, std::size_t b) const noexcept { return a * db + b; }

  friend bool operator==(const Dims&, const Dims&) = default;
};

struct BasisIndex {
  std::size_t a = 0;
  std::size_t b = 0;
  friend auto operator<=>(const BasisIndex&, const BasisIndex&) = default;
};

enum class Side { A, B };

/// Hermitian, unit-trace, PSD operator on C^{d_a} ⊗ C^{d_b}. Only obtainable
/// through make_state, so holding one means the invariants were checked.
class DensityMatrix {
 public:
  const Dims& dims() const noexcept { return dims_; }
  const ComplexMatrix& matrix() const noexcept { return mat_; }
  const cplx& operator()(std::size_t r, std::size_t c) const { return mat_(r, c); }
  const cplx& at(BasisIndex row, BasisIndex col) const {
    return mat_(dims_.index(row.a, row.b), dims_.index(col.a, col.b));
  }

 private:
  DensityMatrix(Dims d, ComplexMatrix m) : dims_(d), mat_(std::move(m)) {}
  friend DensityMatrix make_state(Dims, ComplexMatrix);

  Dims dims_;
  ComplexMatrix mat_;
};

inline DensityMatrix make_state(Dims dims, ComplexMatrix mat) {
  if (!mat.square() || mat.rows() != dims.total()) {
    throw Error(Errc::BadShape, "state matrix must be " + std::to_string(dims.total()) + "x" +
                                    std::to_string(dims.total()));
  }
  if (!mat.all_finite()) throw Error(Errc::BadShape, "non-finite entries");
  if (hermitian_defect(mat) > tol::state_hermitian) {
    throw Error(Errc::NotHermitian, "asymmetry " + std::to_string(hermitian_defect(mat)));
  }
  const double tr = mat.trace().real();
  if (std::abs(tr - 1.0) > tol::trace_one) {
    throw Error(Errc::TraceNotOne, "trace " + std::to_string(tr));
  }
  const double lo = min_eigenvalue(mat);
  if (lo < -tol::psd_floor) throw Error(Errc::NotPSD, "minimum eigenvalue " + std::to_string(lo));
  return DensityMatrix(dims, std::move(mat));
}

/// Kronecker product, (a,b) -> a*d_b + b.
inline ComplexMatrix tensor(const ComplexMatrix& x, const ComplexMatrix& y) {
  ComplexMatrix out(x.rows() * y.rows(), x.cols() * y.cols());
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j) {
      const cplx xij = x(i, j);
      if (xij == cplx{}) continue;
      for (std::size_t k = 0; k < y.rows(); ++k)
        for (std::size_t l = 0; l < y.cols(); ++l) out(i * y.rows() + k, j * y.cols() + l) = xij * y(k, l);
    }
  return out;
}

/// Transpose of one tensor factor. For side B, entry ((i,k),(j,l)) of the
/// result is m((i,l),(j,k)).
inline ComplexMatrix partial_transpose(const ComplexMatrix& m, const Dims& d, Side side) {
  if (!m.square() || m.rows() != d.total()) throw Error(Errc::BadShape, "partial_transpose shape");
  ComplexMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < d.da; ++i)
    for (std::size_t k = 0; k < d.db; ++k)
      for (std::size_t j = 0; j < d.da; ++j)
        for (std::size_t l = 0; l < d.db; ++l) {
          const std::size_t r = d.index(i, k), c = d.index(j, l);
          out(r, c) = side == Side::B ? m(d.index(i, l), d.index(j, k)) : m(d.index(j, k), d.index(i, l));
        }
  return out;
}

inline ComplexMatrix partial_transpose(const DensityMatrix& rho, Side side = Side::B) {
  return partial_transpose(rho.matrix(), rho.dims(), side);
}

/// Realigned matrix of shape (d_a², d_b²): entry ((i,j),(k,l)) = m((i,k),(j,l)).
inline ComplexMatrix realign(const ComplexMatrix& m, const Dims& d) {
  if (!m.square() || m.rows() != d.total()) throw Error(Errc::BadShape, "realign shape");
  ComplexMatrix out(d.da * d.da, d.db * d.db);
  for (std::size_t i = 0; i < d.da; ++i)
    for (std::size_t j = 0; j < d.da; ++j)
      for (std::size_t k = 0; k < d.db; ++k)
        for (std::size_t l = 0; l < d.db; ++l) out(i * d.da + j, k * d.db + l) = m(d.index(i, k), d.index(j, l));
  return out;
}

inline ComplexMatrix realign(const DensityMatrix& rho) { return realign(rho.matrix(), rho.dims()); }

enum class Renormalize { No, Yes };

/// Restriction of a state to the span of {|a b> : a in keep_a, b in keep_b}.
struct LocalProjection {
  Dims dims;
  ComplexMatrix mat;  // unit trace when renormalized
  double weight = 0;  // trace of the unnormalized projection

  DensityMatrix state() const {
    if (weight <= tol::zero_trace) throw Error(Errc::ZeroTrace, "projected weight " + std::to_string(weight));
    const double tr = mat.trace().real();
    return make_state(dims, mat * (1.0 / tr));
  }
};

inline LocalProjection project_local(const ComplexMatrix& m, const Dims& d, std::span<const std::size_t> keep_a,
                                     std::span<const std::size_t> keep_b, Renormalize renorm) {
  auto check = [](std::span<const std::size_t> keep, std::size_t bound, const char* side) {
    if (keep.empty()) throw Error(Errc::BadShape, std::string("empty label set on ") + side);
    std::set<std::size_t> seen;
    for (auto x : keep) {
      if (x >= bound || !seen.insert(x).second) {
        throw Error(Errc::BadShape, std::string("bad or repeated label on ") + side);
      }
    }
  };
  check(keep_a, d.da, "A");
  check(keep_b, d.db, "B");
  std::vector<std::size_t> idx;
  for (auto a : keep_a)
    for (auto b : keep_b) idx.push_back(d.index(a, b));
  ComplexMatrix block(idx.size(), idx.size());
  for (std::size_t r = 0; r < idx.size(); ++r)
    for (std::size_t c = 0; c < idx.size(); ++c) block(r, c) = m(idx[r], idx[c]);
  const double weight = block.trace().real();
  if (renorm == Renormalize::Yes) {
    if (weight <= tol::zero_trace) throw Error(Errc::ZeroTrace, "projected weight " + std::to_string(weight));
    block *= 1.0 / weight;
  }
  // Single-label factors are allowed here, so Dims' constructor check is bypassed.
  LocalProjection out;
  out.dims.da = keep_a.size();
  out.dims.db = keep_b.size();
  out.mat = std::move(block);
  out.weight = weight;
  return out;
}

inline LocalProjection project_local(const DensityMatrix& rho, std::span<const std::size_t> keep_a,
                                     std::span<const std::size_t> keep_b, Renormalize renorm) {
  return project_local(rho.matrix(), rho.dims(), keep_a, keep_b, renorm);
}

/// Inverse of project_local's index map: places block back into a zero
/// matrix of the parent dimensions.
inline ComplexMatrix embed_local(const ComplexMatrix& block, const Dims& parent, std::span<const std::size_t> keep_a,
                                 std::span<const std::size_t> keep_b) {
  std::vector<std::size_t> idx;
  for (auto a : keep_a)
    for (auto b : keep_b) idx.push_back(parent.index(a, b));
  if (block.rows() != idx.size() || !block.square()) throw Error(Errc::BadShape, "embed_local block size");
  ComplexMatrix out(parent.total(), parent.total());
  for (std::size_t r = 0; r < idx.size(); ++r)
    for (std::size_t c = 0; c < idx.size(); ++c) out(idx[r], idx[c]) = block(r, c);
  return out;
}

/// Computational-basis ket |a b>.
inline std::vector<cplx> basis_ket(const Dims& d, std::size_t a, std::size_t b) {
  std::vector<cplx> v(d.total());
  v[d.index(a, b)] = 1.0;
  return v;
}

}  // namespace dsd
