#pragma once

// Every numerical threshold used by operations and tests lives here.

namespace dsd::tol {

// linalg
inline constexpr double hermitian_rel = 1e-12;   // scaled by max(1, ||a||_F)
inline constexpr double jacobi_offdiag_rel = 1e-13;
inline constexpr int jacobi_max_sweeps = 100;
inline constexpr double eig_residual = 1e-10;
inline constexpr double psd_floor = 1e-10;       // smallest admissible eigenvalue is -psd_floor

// states
inline constexpr double state_hermitian = 1e-12;
inline constexpr double trace_one = 1e-12;
inline constexpr double zero_trace = 1e-12;

// channels
inline constexpr double kraus_completeness = 1e-12;

// criteria
inline constexpr double verdict = 1e-10;         // NPT iff min PT eig < -verdict; CCNR iff excess > verdict
inline constexpr double block_psd = 1e-10;
inline constexpr double coverage_zero = 1e-14;   // coherences at or below this are treated as absent
inline constexpr double bisection = 1e-9;
inline constexpr int bisection_budget = 200;

}  // namespace dsd::tol
