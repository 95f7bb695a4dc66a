#include <catch2/catch_amalgamated.hpp>

#include "dsd/criteria.hpp"
#include "dsd/family.hpp"
#include "dsd/random.hpp"
#include "oracles.hpp"

using namespace dsd;

namespace {
auto has_code(Errc c) {
  return Catch::Matchers::Predicate<Error>([c](const Error& e) { return e.code() == c; }, "error code");
}

DensityMatrix rho_t(double t, double alpha = 4.5, double g = 1.0) {
  return family::evolved_closed_form(family::FamilyParams(alpha, NoiseParams(g, g, t)));
}

DensityMatrix psi_plus3() {
  const Dims d(3, 3);
  std::vector<cplx> v(9);
  for (std::size_t i = 0; i < 3; ++i) v[d.index(i, i)] = 1.0 / std::sqrt(3.0);
  return make_state(d, ComplexMatrix::outer(v, v));
}

DensityMatrix diag_state() {
  return make_state(Dims(3, 3), ComplexMatrix::diagonal({0.1, 0.2, 0.05, 0.05, 0.1, 0.1, 0.2, 0.1, 0.1}));
}

int rank(Verdict v) { return static_cast<int>(v); }
}  // namespace

TEST_CASE("min_pt_eigenvalue", "[criteria]") {
  CHECK(min_pt_eigenvalue(diag_state()) >= 0);
  const auto r0 = family::rho0(4.5);
  const double lo = min_pt_eigenvalue(r0);
  CHECK(lo == Catch::Approx(-0.0156394).margin(1e-7));
  CHECK(std::abs(lo - oracle::min_eigenvalue(oracle::partial_transpose_b(r0.matrix(), 3, 3))) < 1e-12);
  CHECK(std::abs(lo - (-0.015639386892675723)) < 1e-12);
  CHECK(min_pt_eigenvalue(psi_plus3()) == Catch::Approx(-1.0 / 3).margin(1e-13));
}

TEST_CASE("realignment_excess", "[criteria]") {
  CHECK(realignment_excess(make_state(Dims(3, 3), ComplexMatrix::identity(9) * (1.0 / 9))) ==
        Catch::Approx(-2.0 / 3).margin(1e-13));
  CHECK(realignment_excess(family::rho0(4.5)) == Catch::Approx(5.0 / 21).margin(1e-12));
  ComplexMatrix p(9, 9);
  p(0, 0) = 1;
  CHECK(std::abs(realignment_excess(make_state(Dims(3, 3), p))) < 1e-13);

  // frozen from numpy SVD
  CHECK(std::abs(realignment_excess(rho_t(0.3)) - 0.1356636521013016) < 1e-12);
  CHECK(std::abs(realignment_excess(rho_t(0.7)) - 0.02970694918644499) < 1e-12);
  CHECK(std::abs(realignment_excess(rho_t(1.0)) - (-0.0322017598863411)) < 1e-12);
  CHECK(std::abs(realignment_excess(rho_t(2.0)) - (-0.16741063512771479)) < 1e-12);
  const auto uneq = family::evolved_closed_form(family::FamilyParams(4.5, NoiseParams(0.6, 1.3, 0.7)));
  CHECK(std::abs(realignment_excess(uneq) - 0.03986776030953254) < 1e-12);
}

TEST_CASE("CCNR holds on random separable mixtures", "[criteria][property]") {
  StateSampler rng(101);
  for (int rep = 0; rep < 100; ++rep) {
    const auto s = rng.separable_mixture(Dims(3, 3), 1 + rep % 6);
    CHECK(realignment_excess(s) <= 1e-10);
    CHECK(min_pt_eigenvalue(s) >= -1e-10);
  }
}

TEST_CASE("qubit_block_witness", "[criteria]") {
  CHECK(qubit_block_witness(family::rho0(4.5), {0, 1}, {0, 1}) < 0);
  CHECK(qubit_block_witness(diag_state(), {0, 2}, {1, 2}) >= 0);
  for (int k = 0; k <= 100; ++k) {
    const auto s = family::evolved_prime(family::FamilyParams(4.5, NoiseParams(1, 1, 0.1 * k)));
    CHECK(qubit_block_witness(s, {1, 2}, {1, 2}) < -1e-10);
  }
}

TEST_CASE("separability certificate on the family", "[criteria]") {
  const auto blocks = family::equal_split_blocks();
  const auto pass = separability_certificate(rho_t(1.5), blocks);
  CHECK(pass.passed);
  CHECK(pass.margin >= 0);
  CHECK(pass.residual_offdiag <= 1e-14);
  CHECK(pass.residual_min_diag >= -1e-10);

  const auto fail = separability_certificate(rho_t(1.0), blocks);
  CHECK_FALSE(fail.passed);
  REQUIRE(fail.blocks.size() == 3);
  // the {0,2}x{1,2} slice fails: 2e^{-t/2} > 1 at t = 1
  CHECK_FALSE(fail.blocks[1].passed);
  for (const auto& b : fail.blocks) {
    CHECK(std::abs(b.min_eigenvalue - oracle::min_eigenvalue(b.block)) < 1e-10);
    CHECK(std::abs(b.min_pt_eigenvalue - oracle::min_eigenvalue(oracle::partial_transpose_b(b.block, 2, 2))) < 1e-10);
  }

  const auto empty = separability_certificate(diag_state(), {});
  CHECK(empty.passed);
  CHECK(std::isinf(empty.margin));
}

TEST_CASE("certificate coverage errors", "[criteria]") {
  auto blocks = family::equal_split_blocks();
  blocks.pop_back();
  CHECK_THROWS_MATCHES(separability_certificate(rho_t(2.0), blocks), Error, has_code(Errc::CoverageError));

  auto twice = family::equal_split_blocks();
  twice.push_back(twice.front());
  CHECK_THROWS_MATCHES(separability_certificate(rho_t(2.0), twice), Error, has_code(Errc::CoverageError));

  CHECK_THROWS_MATCHES(separability_certificate(psi_plus3(), family::equal_split_blocks()), Error,
                       has_code(Errc::CoverageError));

  std::vector<BlockSpec> bad{BlockSpec{{0, 0}, {0, 1}, {}}};
  CHECK_THROWS_MATCHES(separability_certificate(diag_state(), bad), Error, has_code(Errc::InvalidParameter));
}

TEST_CASE("certificate onset follows the closed form", "[criteria]") {
  const auto blocks = family::equal_split_blocks();
  for (double alpha : {3.5, 4.1, 4.3, 4.5, 4.7, 4.9}) {
    for (double g : {0.4, 1.0}) {
      const auto onset = first_sign_change(
          [&](double t) { return separability_certificate(rho_t(t, alpha, g), blocks).margin; }, 0.0, 20.0 / g, 2000);
      REQUIRE(onset.has_value());
      CHECK(std::abs(*onset - family::certificate_onset_closed_form(alpha, g)) < 1e-6);
      if (alpha > 4) CHECK(*onset >= family::t_d(alpha, g) - 1e-6);
    }
  }
  // at alpha = 5 a population vanishes and the slice never turns PSD
  const auto never = first_sign_change(
      [&](double t) { return separability_certificate(rho_t(t, 5.0), blocks).margin; }, 0.0, 30.0, 300);
  CHECK_FALSE(never.has_value());
}

TEST_CASE("classify along the family trajectory", "[criteria]") {
  const auto blocks = family::equal_split_blocks();
  CHECK(classify(rho_t(0.3), blocks).verdict == Verdict::NptFreeEntangled);
  CHECK(classify(rho_t(0.7), blocks).verdict == Verdict::PptBoundEntangled);
  const auto mid = classify(rho_t(1.1), blocks);
  CHECK(mid.verdict == Verdict::PptUndetermined);
  REQUIRE(mid.certificate.has_value());
  CHECK_FALSE(mid.certificate_passed);
  CHECK(classify(rho_t(2.0), blocks).verdict == Verdict::SeparableCertified);
  CHECK(classify(rho_t(2.0)).verdict == Verdict::PptUndetermined);
  CHECK_FALSE(classify(rho_t(2.0)).certificate.has_value());
  CHECK(to_string(Verdict::PptBoundEntangled) == "PptBoundEntangled");
}

TEST_CASE("verdicts never move backwards in t", "[criteria][property]") {
  const auto blocks = family::equal_split_blocks();
  for (double alpha : {4.2, 4.5, 4.8}) {
    int prev = -1;
    for (int k = 0; k <= 120; ++k) {
      const int r = rank(classify(rho_t(0.025 * k, alpha), blocks).verdict);
      CHECK(r >= prev);
      prev = r;
    }
    CHECK(prev == rank(Verdict::SeparableCertified));
  }
}

TEST_CASE("bures_fidelity", "[criteria]") {
  StateSampler rng(55);
  for (int rep = 0; rep < 10; ++rep) {
    const auto a = rng.state(Dims(3, 3));
    const auto b = rng.state(Dims(3, 3));
    CHECK(bures_fidelity(a, a) == Catch::Approx(1.0).margin(1e-10));
    const double fab = bures_fidelity(a, b), fba = bures_fidelity(b, a);
    CHECK(std::abs(fab - fba) < 1e-10);
    CHECK(fab >= 0);
    CHECK(fab <= 1);
  }

  const std::vector<double> p{0.1, 0.2, 0.3, 0.4}, q{0.25, 0.25, 0.4, 0.1};
  double s = 0;
  for (std::size_t i = 0; i < 4; ++i) s += std::sqrt(p[i] * q[i]);
  CHECK(std::abs(bures_fidelity(make_state(Dims(2, 2), ComplexMatrix::diagonal(p)),
                                make_state(Dims(2, 2), ComplexMatrix::diagonal(q))) -
                 s * s) < 1e-13);

  // rank-deficient family states against the exact closed forms
  for (double t : {0.1, 0.5, 1.0, 2.0, 3.0, 5.0, 10.0}) {
    const double g = std::exp(-t / 2);
    const auto r0 = family::rho0(4.5);
    const auto p0 = family::rho_prime0(4.5);
    CHECK(std::abs(bures_fidelity(r0, rho_t(t)) - oracle::exact_fidelity_rho(g)) < 1e-9);
    const auto pt = family::evolved_prime(family::FamilyParams(4.5, NoiseParams(1, 1, t)));
    CHECK(std::abs(bures_fidelity(p0, pt) - oracle::exact_fidelity_rho_prime(g)) < 1e-9);
  }
  CHECK(std::abs(bures_fidelity(family::rho0(4.5), rho_t(1.0)) - 0.9038239244786) < 1e-9);

  CHECK_THROWS_MATCHES(bures_fidelity(family::rho0(4.5), make_state(Dims(2, 2), ComplexMatrix::diagonal(p))), Error,
                       has_code(Errc::DimensionMismatch));
}

TEST_CASE("root finding", "[criteria]") {
  CHECK(find_sign_change([](double t) { return t - 1; }, 0.0, 2.0) == Catch::Approx(1.0).margin(1e-9));
  CHECK(find_sign_change([](double t) { return 1 - t * t; }, 0.0, 3.0) == Catch::Approx(1.0).margin(1e-9));
  CHECK(find_sign_change([](double t) { return t; }, 0.0, 1.0) == 0.0);
  CHECK_THROWS_MATCHES(find_sign_change([](double t) { return t * t + 1; }, -1.0, 1.0), Error, has_code(Errc::NoBracket));
  CHECK_THROWS_MATCHES(find_sign_change([](double t) { return t; }, 1.0, 1.0), Error, has_code(Errc::NoBracket));
  CHECK_THROWS_MATCHES(find_sign_change([](double t) { return t - 0.3; }, 0.0, 1.0, 1e-30, 20), Error,
                       has_code(Errc::Budget));

  auto pt = [](double t) { return min_pt_eigenvalue(rho_t(t)); };
  CHECK(std::abs(find_sign_change(pt, 0.0, 2.0) - std::log(16.0 / 9)) < 1e-6);
  auto re = [](double t) { return realignment_excess(rho_t(t)); };
  CHECK(std::abs(find_sign_change(re, 0.0, 2.0) - 2 * std::log((4 + std::sqrt(44.0)) / 7)) < 1e-6);

  const auto first = first_sign_change([](double t) { return std::cos(t); }, 0.0, 10.0, 100);
  REQUIRE(first.has_value());
  CHECK(*first == Catch::Approx(M_PI / 2).margin(1e-9));
  CHECK_FALSE(first_sign_change([](double t) { return 1 + t; }, 0.0, 10.0, 100).has_value());
}
