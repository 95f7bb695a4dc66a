#pragma once

// Dense complex matrices and the Hermitian spectral kernel (cyclic Jacobi).
// Sized for the bipartite problems here: at most a few dozen rows.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "dsd/error.hpp"
#include "dsd/tolerances.hpp"

namespace dsd {

using cplx = std::complex<double>;

class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
      : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows_ * cols_) {
      throw Error(Errc::BadShape, "entry count " + std::to_string(data_.size()) + " != " +
                                      std::to_string(rows_) + "x" + std::to_string(cols_));
    }
    for (const auto& z : data_) {
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw Error(Errc::BadShape, "non-finite matrix entry");
      }
    }
  }
  /// Row-major nested initializer, real or complex entries.
  ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw Error(Errc::BadShape, "ragged initializer");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  static ComplexMatrix identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }
  static ComplexMatrix diagonal(std::span<const double> d) {
    ComplexMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }
  static ComplexMatrix diagonal(std::initializer_list<double> d) {
    return diagonal(std::span<const double>(d.begin(), d.size()));
  }
  /// u·v† for column vectors u, v.
  static ComplexMatrix outer(std::span<const cplx> u, std::span<const cplx> v) {
    ComplexMatrix m(u.size(), v.size());
    for (std::size_t i = 0; i < u.size(); ++i)
      for (std::size_t j = 0; j < v.size(); ++j) m(i, j) = u[i] * std::conj(v[j]);
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }
  std::span<const cplx> entries() const noexcept { return data_; }

  cplx& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  ComplexMatrix adjoint() const {
    ComplexMatrix m(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
    return m;
  }
  ComplexMatrix transpose() const {
    ComplexMatrix m(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
    return m;
  }

  cplx trace() const {
    cplx s = 0.0;
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) s += (*this)(i, i);
    return s;
  }
  double frobenius_norm() const {
    double s = 0.0;
    for (const auto& z : data_) s += std::norm(z);
    return std::sqrt(s);
  }
  bool all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](const cplx& z) {
      return std::isfinite(z.real()) && std::isfinite(z.imag());
    });
  }

  ComplexMatrix& operator+=(const ComplexMatrix& o) {
    require_same_shape(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  ComplexMatrix& operator-=(const ComplexMatrix& o) {
    require_same_shape(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  ComplexMatrix& operator*=(cplx s) {
    for (auto& z : data_) z *= s;
    return *this;
  }

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }
  friend ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }

  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols_ != b.rows_) throw Error(Errc::DimensionMismatch, "matrix product inner dimensions differ");
    ComplexMatrix m(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const cplx aik = a(i, k);
        if (aik == cplx{}) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) m(i, j) += aik * b(k, j);
      }
    return m;
  }

 private:
  void require_same_shape(const ComplexMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw Error(Errc::DimensionMismatch, "shape mismatch");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

/// Largest entrywise modulus of a - b.
inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw Error(Errc::DimensionMismatch, "shape mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.entries().size(); ++i) m = std::max(m, std::abs(a.entries()[i] - b.entries()[i]));
  return m;
}

/// Largest |a_ij - conj(a_ji)|.
inline double hermitian_defect(const ComplexMatrix& a) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j) - std::conj(a(j, i))));
  return m;
}

inline bool is_hermitian(const ComplexMatrix& a, double rel_tol = tol::hermitian_rel) {
  return a.square() && hermitian_defect(a) <= rel_tol * std::max(1.0, a.frobenius_norm());
}

struct EigenDecomposition {
  std::vector<double> values;  // ascending
  ComplexMatrix vectors;       // column k pairs with values[k]
};

/// Eigen-decomposition of a Hermitian matrix by cyclic Jacobi rotations.
///
/// Each rotation annihilates one off-diagonal pair (p,q) using the unitary
/// D·R·D† where D removes the phase of a_pq and R is the real symmetric
/// Jacobi rotation. Sweeps stop when the off-diagonal Frobenius norm falls
/// below jacobi_offdiag_rel times the input norm.
inline EigenDecomposition eig_hermitian(const ComplexMatrix& input) {
  if (!input.square()) throw Error(Errc::NotSquare, "eig_hermitian needs a square matrix");
  if (!is_hermitian(input)) {
    throw Error(Errc::NotHermitian, "asymmetry " + std::to_string(hermitian_defect(input)));
  }
  const std::size_t n = input.rows();
  ComplexMatrix a = input;
  // Start from the exactly Hermitian part.
  for (std::size_t i = 0; i < n; ++i) {
    a(i, i) = a(i, i).real();
    for (std::size_t j = i + 1; j < n; ++j) {
      const cplx h = 0.5 * (a(i, j) + std::conj(a(j, i)));
      a(i, j) = h;
      a(j, i) = std::conj(h);
    }
  }
  ComplexMatrix v = ComplexMatrix::identity(n);
  const double norm = a.frobenius_norm();

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
  };

  bool converged = norm == 0.0 || n < 2;
  for (int sweep = 0; !converged && sweep < tol::jacobi_max_sweeps; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag == 0.0) continue;
        const cplx phase = apq / mag;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double theta = (aqq - app) / (2.0 * mag);
        double t;
        if (std::abs(theta) > 1e150) {
          t = 0.5 / theta;
        } else {
          t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        }
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        // J restricted to (p,q): [[c, s·phase], [-s·conj(phase), c]]
        const cplx jpp = c, jpq = s * phase, jqp = -s * std::conj(phase), jqq = c;
        for (std::size_t k = 0; k < n; ++k) {
          const cplx akp = a(k, p), akq = a(k, q);
          a(k, p) = akp * jpp + akq * jqp;
          a(k, q) = akp * jpq + akq * jqq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const cplx apk = a(p, k), aqk = a(q, k);
          a(p, k) = std::conj(jpp) * apk + std::conj(jqp) * aqk;
          a(q, k) = std::conj(jpq) * apk + std::conj(jqq) * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        for (std::size_t k = 0; k < n; ++k) {
          const cplx vkp = v(k, p), vkq = v(k, q);
          v(k, p) = vkp * jpp + vkq * jqp;
          v(k, q) = vkp * jpq + vkq * jqq;
        }
      }
    }
    converged = off_norm() < tol::jacobi_offdiag_rel * norm;
  }
  if (!converged) throw Error(Errc::NoConvergence, "Jacobi sweep budget exhausted");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a(x, x).real() < a(y, y).real(); });
  EigenDecomposition out{std::vector<double>(n), ComplexMatrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]).real();
    for (std::size_t r = 0; r < n; ++r) out.vectors(r, k) = v(r, order[k]);
  }
  return out;
}

inline std::vector<double> eigvals_hermitian(const ComplexMatrix& a) { return eig_hermitian(a).values; }

inline double min_eigenvalue(const ComplexMatrix& a) { return eig_hermitian(a).values.front(); }

/// Singular values, descending.
///
/// Computed from the Hermitian dilation [[0, A], [A†, 0]], whose spectrum is
/// {±σ_i} plus |m-n| zeros; this keeps absolute accuracy near eps·||A|| for
/// zero singular values (the A†A route loses half the digits there).
inline std::vector<double> singular_values(const ComplexMatrix& a) {
  if (!a.all_finite()) throw Error(Errc::BadShape, "non-finite entries");
  const std::size_t m = a.rows(), n = a.cols();
  const std::size_t k = std::min(m, n);
  if (k == 0) return {};
  ComplexMatrix h(m + n, m + n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      h(i, m + j) = a(i, j);
      h(m + j, i) = std::conj(a(i, j));
    }
  const auto ev = eig_hermitian(h).values;
  std::vector<double> sv(k);
  for (std::size_t i = 0; i < k; ++i) sv[i] = std::max(0.0, ev[ev.size() - 1 - i]);
  return sv;
}

inline double trace_norm(const ComplexMatrix& a) {
  const auto sv = singular_values(a);
  return std::accumulate(sv.begin(), sv.end(), 0.0);
}

/// V·diag(w)·V†
inline ComplexMatrix reconstruct(const ComplexMatrix& vectors, std::span<const double> w) {
  const std::size_t n = vectors.rows();
  ComplexMatrix out(n, n);
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (w[k] == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const cplx vik = vectors(i, k) * w[k];
      for (std::size_t j = 0; j < n; ++j) out(i, j) += vik * std::conj(vectors(j, k));
    }
  }
  return out;
}

/// Principal square root of a Hermitian PSD matrix. Negative eigenvalues
/// down to -psd_floor and eigenvalues inside the solver noise floor are
/// treated as zero.
inline ComplexMatrix sqrt_psd(const ComplexMatrix& a) {
  auto eig = eig_hermitian(a);
  if (!eig.values.empty() && eig.values.front() < -tol::psd_floor) {
    throw Error(Errc::NotPSD, "eigenvalue " + std::to_string(eig.values.front()));
  }
  const double noise = 8.0 * static_cast<double>(a.rows()) * std::numeric_limits<double>::epsilon() *
                       a.frobenius_norm();
  for (auto& w : eig.values) w = w <= noise ? 0.0 : std::sqrt(w);
  return reconstruct(eig.vectors, eig.values);
}

}  // namespace dsd
