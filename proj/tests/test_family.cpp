#include <catch2/catch_amalgamated.hpp>

#include "dsd/criteria.hpp"
#include "dsd/family.hpp"
#include "oracles.hpp"

using namespace dsd;
using namespace dsd::family;

namespace {
auto has_code(Errc c) {
  return Catch::Matchers::Predicate<Error>([c](const Error& e) { return e.code() == c; }, "error code");
}

double nearest_eigenvalue(const std::vector<double>& ev, double x) {
  double best = std::numeric_limits<double>::infinity();
  for (double e : ev) best = std::min(best, std::abs(e - x));
  return best;
}
}  // namespace

TEST_CASE("rho0", "[family]") {
  const auto r = rho0(4.5);
  CHECK(r.matrix().trace().real() == Catch::Approx(1.0).margin(1e-15));
  CHECK(r(0, 0).real() == Catch::Approx(4.5 / 21 ).margin(1e-16));
  CHECK(r(1, 3) == cplx(2.0 / 21));
  CHECK(r(1, 8) == cplx(2.0 / 21));
  CHECK(r(3, 8) == cplx(2.0 / 21));
  CHECK(std::abs(min_pt_eigenvalue(r) - (-0.0156394)) < 1e-7);
  CHECK(min_pt_eigenvalue(rho0(3.5)) >= -1e-10);
  CHECK(min_pt_eigenvalue(rho0(4.0)) >= -1e-10);
  CHECK(min_pt_eigenvalue(rho0(5.0)) < -1e-10);
  CHECK_THROWS_MATCHES(rho0(3.0), Error, has_code(Errc::AlphaOutOfRange));
  CHECK_THROWS_MATCHES(rho0(5.01), Error, has_code(Errc::AlphaOutOfRange));
}

TEST_CASE("rho_prime0 via the local unitary and directly", "[family]") {
  for (double alpha : {3.5, 4.5, 5.0}) {
    CHECK(max_abs_diff(rho_prime0(alpha).matrix(), rho_prime0_direct(alpha).matrix()) < 1e-15);
    // local unitaries preserve the PT spectrum
    CHECK(std::abs(min_pt_eigenvalue(rho_prime0(alpha)) - min_pt_eigenvalue(rho0(alpha))) < 1e-12);
  }
  CHECK(min_pt_eigenvalue(rho_prime0(4.5)) < 0);
  const auto u = local_swap01_on_b();
  CHECK(max_abs_diff(u * u.adjoint(), ComplexMatrix::identity(9)) == 0);
}

TEST_CASE("closed form agrees with the Kraus path", "[family]") {
  for (double alpha : {3.2, 4.0, 4.5, 5.0})
    for (double ga : {0.0, 0.4, 0.7, 1.0, 1.3})
      for (double gb : {0.4, 0.7, 1.0})
        for (double t : {0.0, 0.25, 1.0, 3.0, 10.0}) {
          const FamilyParams fp(alpha, NoiseParams(ga, gb, t));
          const auto kraus = apply_channel(rho0(alpha), kraus_eq1(fp.noise));
          CHECK(max_abs_diff(evolved_closed_form(fp).matrix(), kraus.matrix()) < 1e-12);
        }
  CHECK(max_abs_diff(evolved_closed_form(FamilyParams(4.5, NoiseParams(1, 1, 0))).matrix(), rho0(4.5).matrix()) == 0);
  const auto far = evolved_closed_form(FamilyParams(4.5, NoiseParams(1, 1, 1e3)));
  for (std::size_t r = 0; r < 9; ++r)
    for (std::size_t c = 0; c < 9; ++c) CHECK(std::abs(far(r, c) - (r == c ? rho0(4.5)(r, c) : cplx(0))) < 1e-200);
  const auto t1 = evolved_closed_form(FamilyParams(4.5, NoiseParams(1, 1, 1)));
  CHECK(std::abs(t1(1, 3).real() - 2.0 / 21 * std::exp(-1.0)) < 1e-16);
}

TEST_CASE("f_lambda values are PT eigenvalues", "[family]") {
  for (double lam : {0.3, 1.0, 2.6}) CHECK(std::abs(f_lambda(4.5, lam, 0) - (-0.015639386892675723)) < 1e-12);
  for (double alpha : {3.5, 4.5, 4.9})
    for (auto [ga, gb] : {std::pair{1.0, 1.0}, {0.4, 0.7}, {0.6, 1.3}})
      for (double t : {0.0, 0.3, 0.8, 2.0}) {
        const auto s = evolved_closed_form(FamilyParams(alpha, NoiseParams(ga, gb, t)));
        const auto ev = eigvals_hermitian(partial_transpose(s));
        for (double lam : {ga, gb, ga + gb}) CHECK(nearest_eigenvalue(ev, f_lambda(alpha, lam, t)) < 1e-10);
      }
}

TEST_CASE("t_d", "[family]") {
  CHECK(t_d(4.5, 1) == Catch::Approx(std::log(16.0 / 9)).margin(1e-15));
  CHECK(std::abs(t_d(4.5, 1) - 0.575364) < 1e-6);
  CHECK(std::abs(t_d(4.9, 1) - 2.099644) < 1e-6);
  CHECK(t_d(4.5, 2) == Catch::Approx(t_d(4.5, 1) / 2));
  CHECK(std::isinf(t_d(5.0, 1)));
  CHECK(t_d(4.0 + 1e-9, 1) < 1e-8);
  CHECK_THROWS_MATCHES(t_d(4.0, 1), Error, has_code(Errc::AlreadyPpt));
  CHECK_THROWS_MATCHES(t_d(3.5, 1), Error, has_code(Errc::AlreadyPpt));
  CHECK_THROWS_MATCHES(t_d(4.5, 0), Error, has_code(Errc::InvalidParameter));
  CHECK_THROWS_MATCHES(t_d(2.0, 1), Error, has_code(Errc::AlphaOutOfRange));

  for (double alpha : {4.2, 4.5, 4.9}) {
    const double num = find_sign_change(
        [&](double t) { return min_pt_eigenvalue(evolved_closed_form(FamilyParams(alpha, NoiseParams(1, 1, t)))); },
        0.0, 5.0);
    CHECK(std::abs(num - t_d(alpha, 1)) < 1e-6);
  }
}

TEST_CASE("realignment closed form", "[family]") {
  CHECK(realignment_closed_form(4.5, 1, 0) == Catch::Approx(5.0 / 21).margin(1e-15));
  CHECK(realignment_closed_form(4.5, 1, 0.7) > 0);
  for (double alpha : {3.5, 4.5, 5.0})
    for (double g : {0.4, 0.7, 1.0})
      for (double t : {0.0, 0.2, 0.6, 1.0, 2.0, 5.0}) {
        const auto s = evolved_closed_form(FamilyParams(alpha, NoiseParams(g, g, t)));
        CHECK(std::abs(realignment_excess(s) - realignment_closed_form(alpha, g, t)) < 1e-10);
      }
  const double z = realignment_zero_closed_form(4.5, 1);
  CHECK(z == Catch::Approx(2 * std::log((4 + std::sqrt(44.0)) / 7)).margin(1e-14));
  CHECK(std::abs(z - 0.8361514) < 1e-6);
  CHECK(std::abs(realignment_closed_form(4.5, 1, z)) < 1e-14);
  CHECK(realignment_zero_closed_form(4.5, 2) == Catch::Approx(z / 2));
}

TEST_CASE("printed fidelity expressions", "[family]") {
  CHECK(fidelity_eq5(1, 0) == Catch::Approx(1.0).margin(1e-15));
  CHECK(fidelity_eq6(1, 0) == Catch::Approx(1.0).margin(1e-15));
  const double lim5 = std::pow((15 + 2 * std::sqrt(3.0)) / 21, 2), lim6 = std::pow((15 + 2 * std::sqrt(6.0)) / 21, 2);
  CHECK(std::abs(lim5 - 0.773068) < 1e-6);
  CHECK(std::abs(lim6 - 0.897889) < 1e-6);
  CHECK(std::abs(fidelity_eq5(1, 60) - lim5) < 1e-9);
  CHECK(std::abs(fidelity_eq6(1, 60) - lim6) < 1e-9);
  for (int k = 0; k <= 100; ++k) CHECK(fidelity_eq6(1, 0.1 * k) >= fidelity_eq5(1, 0.1 * k));
}

TEST_CASE("numerical fidelity dominance", "[family]") {
  const auto r0 = rho0(4.5), p0 = rho_prime0(4.5);
  for (int k = 0; k <= 50; ++k) {
    const double t = 0.2 * k;
    const FamilyParams fp(4.5, NoiseParams(1, 1, t));
    CHECK(bures_fidelity(p0, evolved_prime(fp)) >= bures_fidelity(r0, evolved_closed_form(fp)) - 1e-12);
  }
}

TEST_CASE("phase ordering on the trajectory", "[family]") {
  const auto blocks = equal_split_blocks();
  auto verdict = [&](double t) { return classify(evolved_closed_form(FamilyParams(4.5, NoiseParams(1, 1, t))), blocks).verdict; };
  const double b1 = t_d(4.5, 1), b2 = realignment_zero_closed_form(4.5, 1), b3 = certificate_onset_closed_form(4.5, 1);
  CHECK(std::abs(b3 - 2 * std::log(2.0)) < 1e-15);
  CHECK(b1 < b2);
  CHECK(b2 < b3);
  const double eps = 1e-6;
  CHECK(verdict(b1 - eps) == Verdict::NptFreeEntangled);
  CHECK(verdict(b1 + eps) == Verdict::PptBoundEntangled);
  CHECK(verdict(b2 - eps) == Verdict::PptBoundEntangled);
  CHECK(verdict(b2 + eps) == Verdict::PptUndetermined);
  CHECK(verdict(b3 - eps) == Verdict::PptUndetermined);
  CHECK(verdict(b3 + eps) == Verdict::SeparableCertified);
}
