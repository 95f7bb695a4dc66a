#pragma once

// Seeded random states: G·G†/tr with standard-normal complex entries.

#include <cstdint>
#include <random>
#include <vector>

#include "dsd/linalg.hpp"
#include "dsd/qstate.hpp"

namespace dsd {

class StateSampler {
 public:
  explicit StateSampler(std::uint64_t seed) : rng_(seed) {}

  /// Ginibre matrix with independent N(0,1) real and imaginary parts.
  ComplexMatrix ginibre(std::size_t rows, std::size_t cols) {
    std::vector<cplx> e(rows * cols);
    for (auto& z : e) {
      const double re = normal_(rng_);
      z = cplx(re, normal_(rng_));
    }
    return ComplexMatrix(rows, cols, std::move(e));
  }

  /// Random PSD matrix with unit trace, as a raw matrix.
  ComplexMatrix density(std::size_t n) {
    const ComplexMatrix g = ginibre(n, n);
    ComplexMatrix m = g * g.adjoint();
    m *= 1.0 / m.trace().real();
    return hermitize(std::move(m));
  }

  DensityMatrix state(const Dims& dims) { return make_state(dims, density(dims.total())); }

  /// Random Hermitian matrix (not necessarily PSD).
  ComplexMatrix hermitian(std::size_t n) {
    const ComplexMatrix g = ginibre(n, n);
    return hermitize(g + g.adjoint());
  }

  /// Σ_k p_k σ_a^k ⊗ σ_b^k with Dirichlet-like random weights.
  DensityMatrix separable_mixture(const Dims& dims, std::size_t terms) {
    std::vector<double> w(terms);
    double total = 0;
    for (auto& x : w) total += (x = -std::log(1.0 - uniform_(rng_)));
    ComplexMatrix m(dims.total(), dims.total());
    for (std::size_t k = 0; k < terms; ++k) m += tensor(density(dims.da), density(dims.db)) * (w[k] / total);
    return make_state(dims, hermitize(std::move(m)));
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform_(rng_); }

  std::mt19937_64& engine() { return rng_; }

 private:
  static ComplexMatrix hermitize(ComplexMatrix m) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
      m(i, i) = m(i, i).real();
      for (std::size_t j = i + 1; j < m.cols(); ++j) m(j, i) = std::conj(m(i, j));
    }
    return m;
  }

  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace dsd
